#include <doctest.h>

#include <cmath>
#include <limits>

#include "convpart/analysis.hpp"
#include "test_support.hpp"

using namespace convpart;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("fit_rate recovers planted power laws") {
    const RateFit exact = fit_rate({{10, 1.0}, {100, 0.1}, {1000, 0.01}});
    CHECK(exact.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    const RateFit flat = fit_rate({{1, 5.0}, {10, 5.0}, {100, 5.0}});
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<std::pair<long long, double>> pts;
    for (long long n : {64, 256, 1024})
        pts.emplace_back(n, 3.0 * std::pow(double(n), -2.0 / 3));
    const RateFit planted = fit_rate(pts);
    CHECK(planted.slope == doctest::Approx(-2.0 / 3).epsilon(1e-12));
    CHECK(planted.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("fit_rate rejects degenerate inputs") {
    CHECK_THROWS_AS(fit_rate({{10, 1.0}, {100, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({{10, 1.0}, {100, 0.0}, {1000, 0.01}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({{10, 1.0}, {10, 0.1}, {1000, 0.01}}), std::invalid_argument);
}

TEST_CASE("predicted_rate classifies the documented parameter points") {
    const PredictedRate smooth = predicted_rate(2, 2.0, 2.0);
    CHECK(smooth.regime == RateRegime::Theorem1);
    CHECK(smooth.rate == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(smooth.beats_isotropic);

    const PredictedRate sub = predicted_rate(3, kInf, 1.9);
    CHECK(sub.regime == RateRegime::Theorem2);
    CHECK(sub.rate == doctest::Approx(3.0 * (2.0 / 3 - 1.0 / 1.9)).epsilon(1e-12));
    CHECK(sub.rate == doctest::Approx(0.42105263157894735).epsilon(1e-12));
    CHECK(sub.beats_isotropic);  // 0.1404 > 1/9

    const PredictedRate weak = predicted_rate(2, kInf, 1.2);
    CHECK(weak.regime == RateRegime::Theorem2);
    CHECK(weak.rate == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(!weak.beats_isotropic);  // 1/6 < 1/4

    CHECK_THROWS_AS(predicted_rate(3, kInf, 1.4), std::invalid_argument);
}

TEST_CASE("theorem rates agree on the regime boundary") {
    // 10 points on the surface 1/q = 2/(d+1) + 1/p
    const std::pair<int, double> points[] = {
        {2, 4.0}, {2, 8.0}, {2, kInf}, {3, 2.0}, {3, 4.0},
        {3, kInf}, {4, 2.0}, {4, kInf}, {5, 3.0}, {6, 2.0},
    };
    int checked = 0;
    for (const auto& [d, p] : points) {
        const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
        const double q = 1.0 / (2.0 / (d + 1) + inv_p);
        REQUIRE(q >= 1.0);
        CHECK(std::abs(theorem2_rate(d, p, q) - theorem1_rate(d)) <= 1e-12);
        ++checked;
    }
    CHECK(checked == 10);
}

TEST_CASE("lemma constants match hand evaluations of the closed forms") {
    CHECK(lemma_constant(2, 1.0, 0.5, RefinementRegime::Lemma2) ==
          doctest::Approx(32.0 / 3).epsilon(1e-12));
    // 2^(20/3) * (1 - 2^(-3/2))^(-4/3)
    CHECK(lemma_constant(2, 0.5, 1.0, RefinementRegime::Lemma1) ==
          doctest::Approx(181.75641800331146).epsilon(1e-12));
    CHECK_THROWS_AS(lemma_constant(2, 1.0, 1.5, RefinementRegime::Lemma2),
                    std::invalid_argument);
    CHECK_THROWS_AS(lemma_constant(2, 1.0, 0.5, RefinementRegime::Lemma1),
                    std::invalid_argument);
}

TEST_CASE("refinement traces of corpus runs satisfy their lemma bounds") {
    const Cube omega = testing::unit_domain(2);
    const FieldFunction quad = find_function("quad", 2);
    const RefineResult l1 = refine_to_budget(
        quad, omega, RefinementParams::lemma1(2.5, 0.5), 2.0, 600);
    const TraceAudit a1 = audit_trace(l1.trace, RefinementRegime::Lemma1);
    CHECK(a1.pass());
    CHECK(a1.worst_bound_ratio <= 1.0);  // well inside the proven constant

    const Cube omega3 = testing::unit_domain(3);
    const FieldFunction quad3 = find_function("quad", 3);
    const double alpha = alpha_of(3, kInf, 1.9);
    const RefineResult l2 = refine_to_budget(
        quad3, omega3, RefinementParams::lemma2(alpha, 1.0 / 3), 1.9, 300);
    const TraceAudit a2 = audit_trace(l2.trace, RefinementRegime::Lemma2);
    CHECK(a2.pass());
}

TEST_CASE("lower bound witness check passes for the first bump") {
    const LowerBoundCheck lb = lower_bound_check(1, 2);
    CHECK(lb.threshold == doctest::Approx(std::exp(-1.0) / 3).epsilon(1e-15));
    CHECK(lb.pass);
    CHECK(lb.error_inf >= 0.95 * lb.threshold);
    // one cell cannot track the bump: the plain range bound from below
    CHECK(lb.error_inf_algorithm >= 0.15);
    CHECK_THROWS_AS(lower_bound_check(0, 2), std::invalid_argument);
}

TEST_CASE("anisotropic slicing beats the uniform grid on a smooth field") {
    // budgets sitting exactly on the adaptive N_m ladder (8^k for quad, d=2)
    for (long long budget : {64, 512, 4096}) {
        ApproximationProblem p{find_function("quad", 2), 2, 2.0, 2.0, budget};
        const double aniso = lp_error(p.f, build(p).approx, 2.0);
        const double uniform = lp_error(
            p.f, build_isotropic_baseline(p, {}, BaselineMode::Uniform).approx, 2.0);
        CHECK(aniso < uniform);
    }
}
