#pragma once

#include <optional>

#include "convpart/piecewise_constant.hpp"
#include "convpart/quadrature.hpp"
#include "convpart/refinement.hpp"

namespace convpart {

/// One approximation task: L_p error target for a W^2_q function with a
/// cell budget N. p may be infinity (1/p = 0 throughout).
struct ApproximationProblem {
    FieldFunction f;
    int d = 2;
    double p = 2.0;
    double q = 2.0;
    long long budget = 1;

    /// Embedding admissibility 2/d + 1/p - 1/q >= 0, strict for p = inf.
    bool admissible() const;
    /// True when 2/(d+1) + 1/p - 1/q >= 0 (optimal-rate regime).
    bool optimal_regime() const;
    void validate() const;
};

/// The refinement exponent alpha = q*(2/d + (1/p)(1 + 1/d) - 1/q).
/// Throws for inadmissible (d, p, q).
double alpha_of(int d, double p, double q);

/// A built approximant plus the audit trace of its dyadic stage.
struct BuildResult {
    PiecewiseConstant approx;
    RefinementTrace trace;
    int empty_slab_fallbacks = 0;  // slabs whose mean came from the fallback point
};

/// The full anisotropic pipeline: dyadic refinement with gamma = 1/d and
/// alpha = alpha_of, then each cube sliced into N_gamma(cube) slabs
/// orthogonal to its average gradient (axis e1 when the gradient mean is
/// below 1e-10), constants from sampled slab means.
BuildResult build(const ApproximationProblem& problem, const QuadratureConfig& config = {});

enum class BaselineMode {
    Uniform,         // finest uniform dyadic grid with at most N cells
    AdaptiveDyadic,  // gamma = 0 refinement, one constant per cube, no slicing
};

BuildResult build_isotropic_baseline(const ApproximationProblem& problem,
                                     const QuadratureConfig& config = {},
                                     BaselineMode mode = BaselineMode::Uniform);

/// Affine surrogate mean + <h, x - center> used by the diagnostic tests of
/// the error chain.
struct LinearSurrogate {
    double constant = 0.0;  // cell mean of f
    Vec gradient;           // average gradient over the cell
    Vec center;

    double operator()(const Vec& x) const { return constant + dot(gradient, x - center); }
};

LinearSurrogate linear_surrogate(const FieldFunction& f, const Cube& cell,
                                 const QuadratureConfig& config = {});

}  // namespace convpart
