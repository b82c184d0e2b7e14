#include "convpart/analysis.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace convpart {

RateFit fit_rate(const std::vector<std::pair<long long, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
    std::set<long long> ns;
    for (const auto& [n, e] : points) {
        if (n < 1) throw std::invalid_argument("fit_rate: budgets must be positive");
        if (!(e > 0.0) || !std::isfinite(e))
            throw std::invalid_argument("fit_rate: errors must be positive and finite");
        ns.insert(n);
    }
    if (ns.size() != points.size()) throw std::invalid_argument("fit_rate: budgets must be distinct");

    const double m = double(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, e] : points) {
        sx += std::log(double(n));
        sy += std::log(e);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [n, e] : points) {
        const double dx = std::log(double(n)) - mx;
        const double dy = std::log(e) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = syy > 0.0 ? 1.0 - std::max(ss_res, 0.0) / syy : 1.0;
    return fit;
}

std::string to_string(RateRegime regime) {
    switch (regime) {
        case RateRegime::Theorem1: return "theorem1";
        case RateRegime::Theorem2: return "theorem2";
        case RateRegime::EmbeddingOnly: return "embedding_only";
    }
    return "?";
}

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

double theorem1_rate(int d) { return 2.0 / (d + 1); }

double theorem2_rate(int d, double p, double q) {
    return double(d) * (2.0 / d + inv(p) - 1.0 / q);
}

PredictedRate predicted_rate(int d, double p, double q) {
    alpha_of(d, p, q);  // validates admissibility
    PredictedRate out;
    const double margin = 2.0 / d + inv(p) - 1.0 / q;
    out.beats_isotropic = margin > 1.0 / (double(d) * d);
    if (2.0 / (d + 1) + inv(p) - 1.0 / q >= 0.0) {
        out.regime = RateRegime::Theorem1;
        out.rate = theorem1_rate(d);
        out.beats_isotropic = true;  // 2/(d+1) > 1/d for d >= 2
    } else {
        out.regime = RateRegime::Theorem2;
        out.rate = theorem2_rate(d, p, q);
    }
    return out;
}

double lemma_constant(int d, double gamma, double alpha, RefinementRegime regime) {
    if (d < 1) throw std::invalid_argument("lemma_constant: bad dimension");
    const long double dd = d, a = alpha, g = gamma;
    if (regime == RefinementRegime::Lemma1) {
        if (!(alpha > 0.0) || !(gamma >= 0.0) || !(gamma <= alpha))
            throw std::invalid_argument("lemma_constant: Lemma1 needs 0 <= gamma <= alpha, alpha > 0");
        const long double exponent = dd * (a + 1) * (g + 2) / (g + 1);
        const long double decay = std::exp2(-dd * a * (g + 1) / (a + 1));
        return double(std::exp2(exponent) * std::pow(1.0L - decay, -(a + 1) / (g + 1)));
    }
    if (!(0.0 < alpha && alpha < gamma))
        throw std::invalid_argument("lemma_constant: Lemma2 needs 0 < alpha < gamma");
    const long double exponent = dd * a * (g + 2) / g;
    return double(std::exp2(exponent) / (1.0L - std::exp2(-dd * g)));
}

TraceAudit audit_trace(const RefinementTrace& trace, RefinementRegime regime, double slack) {
    if (trace.rows.empty()) throw std::invalid_argument("audit_trace: empty trace");
    TraceAudit audit;
    audit.constant = lemma_constant(trace.dim, trace.gamma, trace.alpha, regime);
    audit.bound_ok = true;
    audit.decay_ok = true;

    // G_alpha(square_0) = |domain|^alpha * Phi(domain)
    const double base = trace.rows.front().g_alpha;
    const double exponent = regime == RefinementRegime::Lemma1
                                ? (trace.alpha + 1.0) / (trace.gamma + 1.0)
                                : trace.alpha / trace.gamma;
    const double decay_factor = std::exp2(-double(trace.dim) * trace.alpha);

    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const TraceRow& row = trace.rows[i];
        bool ok = true;
        if (base > 0.0) {
            const double bound = audit.constant * std::pow(double(row.n_k), -exponent) * base;
            const double ratio = row.g_alpha / bound;
            audit.worst_bound_ratio = std::max(audit.worst_bound_ratio, ratio);
            if (ratio > 1.0 + slack) {
                audit.bound_ok = false;
                ok = false;
            }
        }
        if (i > 0) {
            const double cap = decay_factor * trace.rows[i - 1].g_alpha;
            if (row.g_alpha > cap * (1.0 + 1e-9)) {
                audit.decay_ok = false;
                ok = false;
            }
        }
        if (!ok) audit.violations.push_back(row.k);
    }
    return audit;
}

LowerBoundCheck lower_bound_check(int m, int d, const QuadratureConfig& config) {
    if (m < 1) throw std::invalid_argument("lower_bound_check: m must be >= 1");
    LowerBoundCheck out;
    out.threshold = std::exp(-1.0) / 3.0;

    ApproximationProblem problem;
    problem.f = BumpFamily{m, d}.field();
    problem.d = d;
    problem.p = std::numeric_limits<double>::infinity();
    problem.q = 2.0;
    problem.budget = 1;
    for (int i = 0; i < d; ++i) problem.budget *= m;

    const BuildResult anisotropic = build(problem, config);
    out.error_inf_algorithm = lp_error(problem.f, anisotropic.approx, problem.p, config);

    const BuildResult uniform = build_isotropic_baseline(problem, config, BaselineMode::Uniform);
    out.error_inf_uniform = lp_error(problem.f, uniform.approx, problem.p, config);

    out.error_inf = std::min(out.error_inf_algorithm, out.error_inf_uniform);
    // 0.95 absorbs the downward bias of the sampled sup norm
    out.pass = out.error_inf >= 0.95 * out.threshold;
    return out;
}

}  // namespace convpart
