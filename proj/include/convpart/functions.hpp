#pragma once

#include <functional>
#include <string>
#include <vector>

#include "convpart/vec.hpp"

namespace convpart {

/// A scalar field with closed-form gradient and Hessian. Evaluation must be
/// pure and reentrant; instances are immutable shared data.
struct FieldFunction {
    std::string label;
    int dim = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
    /// Points where derivatives blow up; quadrature excludes a small ball
    /// around each (see QuadratureConfig::singular_exclusion_radius).
    std::vector<Vec> singular_points;
    std::string smoothness_note;
};

/// Reference bump: exp(-1/(1 - |2x - 1|^2)) inside the ball |2x - 1| < 1,
/// zero outside; infinitely differentiable on all of R^d.
double bump_phi(const Vec& x);
Vec bump_phi_gradient(const Vec& x);
Mat bump_phi_hessian(const Vec& x);

/// Sum of m^d scaled bump copies, one per sub-cube of the uniform m-grid on
/// (0,1)^d; the copies have disjoint supports.
double bump_fm(int m, const Vec& x);
Vec bump_fm_gradient(int m, const Vec& x);
Mat bump_fm_hessian(int m, const Vec& x);

/// Grid-of-bumps test family on (0,1)^d.
struct BumpFamily {
    int m = 1;
    int d = 2;

    FieldFunction field() const;
};

/// The test corpus on (0,1)^d: quad, expdir, ridge, singular_beta,
/// bump:m={1,2,4,8}, const.
std::vector<FieldFunction> corpus(int d);

/// Look up a corpus member by label; "bump:m=K" accepts any K >= 1.
/// Throws std::invalid_argument for unknown labels.
FieldFunction find_function(const std::string& label, int d);

}  // namespace convpart
