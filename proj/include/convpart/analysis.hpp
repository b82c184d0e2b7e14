#pragma once

#include <string>
#include <vector>

#include "convpart/approximant.hpp"
#include "convpart/refinement.hpp"

namespace convpart {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares on (ln N, ln error). Needs at least three points
/// with distinct N and positive errors.
RateFit fit_rate(const std::vector<std::pair<long long, double>>& points);

enum class RateRegime {
    Theorem1,       // 2/(d+1) + 1/p - 1/q >= 0: rate 2/(d+1)
    Theorem2,       // otherwise (admissible): rate d*(2/d + 1/p - 1/q)
    EmbeddingOnly,  // no improvement over the isotropic N^(-1/d) is claimed
};

std::string to_string(RateRegime regime);

struct PredictedRate {
    double rate = 0.0;  // the positive exponent rho in N^(-rho)
    RateRegime regime = RateRegime::Theorem1;
    bool beats_isotropic = false;  // 2/d + 1/p - 1/q > 1/d^2
};

double theorem1_rate(int d);
double theorem2_rate(int d, double p, double q);

/// Classify (d, p, q) and return the guaranteed error decay exponent.
/// Throws for inadmissible parameters.
PredictedRate predicted_rate(int d, double p, double q);

/// Closed-form constants of the two refinement bounds, evaluated in long
/// double. Lemma1 requires 0 < alpha and gamma <= alpha; Lemma2 requires
/// 0 < alpha < gamma.
double lemma_constant(int d, double gamma, double alpha, RefinementRegime regime);

/// Result of auditing one refinement trace against its lemma bound and the
/// per-generation decay of G_alpha.
struct TraceAudit {
    double constant = 0.0;         // C1 or C2 used by the bound
    double worst_bound_ratio = 0.0;  // max over k of G_k / (C N_k^-e |O|^a Phi)
    bool bound_ok = false;         // ratio <= 1 + slack at every generation
    bool decay_ok = false;         // G_k <= 2^(-d alpha) G_(k-1) (1e-9 rel)
    std::vector<int> violations;   // offending generations

    bool pass() const { return bound_ok && decay_ok; }
};

TraceAudit audit_trace(const RefinementTrace& trace, RefinementRegime regime,
                       double slack = 0.01);

/// Theorem-4 style witness check: for the m-grid bump sum at budget m^d,
/// both the anisotropic build and the uniform baseline must keep an
/// L_inf error of at least (almost) ||f_m||_inf / 3.
struct LowerBoundCheck {
    double error_inf = 0.0;        // smaller of the two witnesses
    double error_inf_algorithm = 0.0;
    double error_inf_uniform = 0.0;
    double threshold = 0.0;        // e^(-1) / 3
    bool pass = false;
};

LowerBoundCheck lower_bound_check(int m, int d, const QuadratureConfig& config = {});

}  // namespace convpart
