#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "convpart/functions.hpp"
#include "convpart/geometry.hpp"
#include "convpart/piecewise_constant.hpp"

namespace convpart {

/// Knobs for all numerical integration. Smooth integrands (seminorms,
/// average gradients) use tensor Gauss-Legendre; slab-wise quantities
/// (means, errors) use seeded low-discrepancy sampling, since fixed-node
/// rules are useless across slab discontinuities.
struct QuadratureConfig {
    int gl_points_per_axis = 8;
    int samples_per_cube = 1 << 14;
    std::uint64_t seed = 0xC0FFEE;
    double singular_exclusion_radius = 1e-6;
    int p_inf_sample_boost = 4;

    void validate() const;
};

/// 1-D Gauss-Legendre rule on [0,1]; results are memoized per point count.
struct GaussLegendre1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre1D& gauss_legendre_unit(int n);

/// Neumaier-compensated accumulator; keeps long reductions stable enough
/// that serial and per-cube-parallel runs agree to 1e-12 relative.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Integer-order Sobolev seminorm |f|_{W^k_q(cell)}: the sum over order-k
/// multi-indices of L_q norms of the partial derivatives, k in {0,1,2}.
/// Gauss-Legendre nodes inside the exclusion ball of a declared singular
/// point are dropped.
double seminorm_Wkq(const FieldFunction& f, const Cube& cell, int k, double q,
                    const QuadratureConfig& config = {});

/// The q-th-power Sobolev mass over the given derivative orders: sum over
/// multi-indices |k| in orders of the integrals int |D^k f|^q. Every term
/// is an integral of one non-negative integrand, so evaluation is additive
/// over dyadic subdivisions (hence subadditive, as the refinement bounds
/// require).
struct EnergyFunctional {
    double q = 2.0;
    std::vector<int> orders = {1, 2};

    double evaluate(const FieldFunction& f, const Cube& cell,
                    const QuadratureConfig& config = {}) const;
};

/// Refinement energy of the anisotropic pipeline: orders {1, 2}.
double energy_phi(const FieldFunction& f, const Cube& cell, double q,
                  const QuadratureConfig& config = {});

/// Componentwise Gauss-Legendre mean of the gradient over the cell.
Vec average_gradient(const FieldFunction& f, const Cube& cell,
                     const QuadratureConfig& config = {});

/// Gauss-Legendre mean of f itself over the cell.
double gl_mean(const FieldFunction& f, const Cube& cell,
               const QuadratureConfig& config = {});

/// Per-slab sampling statistics for one parent cube.
struct SlabStats {
    std::vector<double> volumes;      // sampled-count share of |parent|
    std::vector<double> means;        // sample mean of f per slab (f_delta)
    std::vector<long long> counts;
    int empty_slabs = 0;              // slabs that caught no sample
};

/// Bucket seeded low-discrepancy samples of the parent cube into its slabs
/// and return per-slab volume and mean estimates. All slabs must share one
/// parent and come from a single slab_split call. A slab with no samples
/// gets its mean from a deterministic in-cube fallback point near the
/// slab's projection midpoint.
SlabStats cell_stats(const FieldFunction& f, const std::vector<SlabCell>& slabs,
                     const QuadratureConfig& config = {});

/// L_p distance between f and a piecewise constant on its partition.
/// p = infinity uses a boosted sample set (p_inf_sample_boost x samples per
/// cube) and reports the sampled maximum. Deterministic given the seed.
double lp_error(const FieldFunction& f, const PiecewiseConstant& s, double p,
                const QuadratureConfig& config = {});

/// Deterministic low-discrepancy points in [0,1)^d for one cube: additive
/// recurrence with irrational strides and a per-cube offset derived from
/// (seed, corner bits, level). Point index n is stable across calls, so a
/// longer run extends a shorter one.
class CubeSampler {
public:
    CubeSampler(const Cube& cube, std::uint64_t seed);
    Vec point(long long n) const;  // in the half-open cube

private:
    Cube cube_;
    Vec offset_;
    Vec stride_;
};

}  // namespace convpart
