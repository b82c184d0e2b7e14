#include "convpart/approximant.hpp"

#include <cmath>
#include <stdexcept>

namespace convpart {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

void check_pq(double p, double q) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must lie in [1, inf]");
    if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("q must lie in [1, inf)");
}

bool admissible_pq(int d, double p, double q) {
    const double margin = 2.0 / d + inv(p) - 1.0 / q;
    return std::isinf(p) ? margin > 0.0 : margin >= 0.0;
}

}  // namespace

bool ApproximationProblem::admissible() const { return admissible_pq(d, p, q); }

bool ApproximationProblem::optimal_regime() const {
    return 2.0 / (d + 1) + inv(p) - 1.0 / q >= 0.0;
}

void ApproximationProblem::validate() const {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("ApproximationProblem: dimension out of range");
    check_pq(p, q);
    if (budget < 1) throw std::invalid_argument("ApproximationProblem: budget must be >= 1");
    if (f.dim != d) throw std::invalid_argument("ApproximationProblem: function dimension mismatch");
    if (!admissible())
        throw std::invalid_argument(
            "ApproximationProblem: (d,p,q) violates the embedding condition 2/d + 1/p - 1/q >= 0");
}

double alpha_of(int d, double p, double q) {
    if (d < 1) throw std::invalid_argument("alpha_of: dimension out of range");
    check_pq(p, q);
    if (!admissible_pq(d, p, q))
        throw std::invalid_argument("alpha_of: (d,p,q) violates the embedding condition");
    return q * (2.0 / d + inv(p) * (1.0 + 1.0 / d) - 1.0 / q);
}

namespace {

Vec axis_direction(int d, int axis) {
    Vec e(d);
    e[axis] = 1.0;
    return e;
}

RefinementParams algorithm_params(const ApproximationProblem& problem, double gamma) {
    const double alpha = alpha_of(problem.d, problem.p, problem.q);
    return gamma <= alpha ? RefinementParams::lemma1(alpha, gamma)
                          : RefinementParams::lemma2(alpha, gamma);
}

/// Slice every cube of a dyadic partition and average f per slab.
PiecewiseConstant slice_and_average(const FieldFunction& f, const DyadicPartition& dyadic,
                                    const Cube& domain, double gamma,
                                    const QuadratureConfig& config, int& fallbacks) {
    PiecewiseConstant out;
    out.partition.domain = domain;
    out.partition.source = dyadic;
    out.partition.group_begin.assign(1, 0);

    const int d = domain.dim();
    for (const Cube& cube : dyadic.cells) {
        const long long n_slabs = n_gamma(cube, domain, gamma);
        Vec dir = axis_direction(d, 0);
        if (n_slabs > 1 || gamma > 0.0) {
            const Vec h = average_gradient(f, cube, config);
            const double len = norm2(h);
            if (len >= 1e-10) dir = (1.0 / len) * h;
        }
        std::vector<SlabCell> slabs = slab_split(cube, dir, static_cast<int>(n_slabs));
        const SlabStats stats = cell_stats(f, slabs, config);
        fallbacks += stats.empty_slabs;
        for (std::size_t i = 0; i < slabs.size(); ++i) {
            out.partition.cells.push_back(slabs[i]);
            out.values.push_back(stats.means[i]);
        }
        out.partition.group_begin.push_back(out.partition.cells.size());
    }
    return out;
}

}  // namespace

BuildResult build(const ApproximationProblem& problem, const QuadratureConfig& config) {
    problem.validate();
    config.validate();
    Vec origin(problem.d);
    const Cube domain(origin, 1.0, 0);

    const double gamma = 1.0 / problem.d;
    RefineResult refined = refine_to_budget(problem.f, domain, algorithm_params(problem, gamma),
                                            problem.q, problem.budget, config);

    BuildResult res;
    res.trace = std::move(refined.trace);
    res.approx = slice_and_average(problem.f, refined.partition, domain, gamma, config,
                                   res.empty_slab_fallbacks);
    return res;
}

BuildResult build_isotropic_baseline(const ApproximationProblem& problem,
                                     const QuadratureConfig& config, BaselineMode mode) {
    problem.validate();
    config.validate();
    Vec origin(problem.d);
    const Cube domain(origin, 1.0, 0);

    DyadicPartition dyadic = DyadicPartition::singleton(domain);
    BuildResult res;
    if (mode == BaselineMode::Uniform) {
        // finest uniform level with 2^(d*L) <= budget
        long long cells_next = 1ll << problem.d;
        while (cells_next <= problem.budget) {
            std::vector<std::size_t> all(dyadic.cells.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            dyadic = elementary_extension(dyadic, all);
            cells_next = static_cast<long long>(dyadic.cells.size()) << problem.d;
        }
        res.trace.dim = problem.d;
    } else {
        RefineResult refined = refine_to_budget(problem.f, domain, algorithm_params(problem, 0.0),
                                                problem.q, problem.budget, config);
        dyadic = std::move(refined.partition);
        res.trace = std::move(refined.trace);
    }
    res.approx = slice_and_average(problem.f, dyadic, domain, 0.0, config,
                                   res.empty_slab_fallbacks);
    return res;
}

LinearSurrogate linear_surrogate(const FieldFunction& f, const Cube& cell,
                                 const QuadratureConfig& config) {
    LinearSurrogate s;
    s.center = cell.center();
    s.gradient = average_gradient(f, cell, config);
    s.constant = gl_mean(f, cell, config);
    return s;
}

}  // namespace convpart
