#include <doctest.h>

#include <cmath>

#include "convpart/approximant.hpp"
#include "convpart/quadrature.hpp"
#include "test_support.hpp"

using namespace convpart;
using convpart::testing::Rng;
using convpart::testing::unit_domain;

namespace {

FieldFunction linear_field(const Vec& a, double offset = 0.0) {
    FieldFunction f;
    f.label = "linear";
    f.dim = a.dim();
    f.value = [a, offset](const Vec& x) { return dot(a, x) + offset; };
    f.gradient = [a](const Vec&) { return a; };
    f.hessian = [a](const Vec&) { return Mat(a.dim()); };
    return f;
}

PiecewiseConstant single_cell(const Cube& domain, double value) {
    PiecewiseConstant s;
    s.partition.domain = domain;
    s.partition.source = DyadicPartition::singleton(domain);
    for (SlabCell& sl : slab_split(domain, Vec{1.0, 0.0}, 1)) s.partition.cells.push_back(sl);
    s.partition.group_begin = {0, 1};
    s.values = {value};
    return s;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials and the exponential") {
    const GaussLegendre1D& rule = gauss_legendre_unit(8);
    for (int k = 0; k <= 15; ++k) {
        double s = 0.0;
        for (int i = 0; i < 8; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
    double e = 0.0;
    for (int i = 0; i < 8; ++i) e += rule.weights[i] * std::exp(rule.nodes[i]);
    CHECK(e == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("seminorms at the documented values") {
    const Cube omega = unit_domain(2);
    const QuadratureConfig cfg;

    const FieldFunction cst = find_function("const", 2);
    CHECK(seminorm_Wkq(cst, omega, 1, 2.0, cfg) == 0.0);
    CHECK(seminorm_Wkq(cst, omega, 0, 2.0, cfg) == doctest::Approx(1.0).epsilon(1e-13));

    // quad: two unit diagonal second derivatives, zero mixed
    const FieldFunction quad = find_function("quad", 2);
    CHECK(seminorm_Wkq(quad, omega, 2, 2.0, cfg) == doctest::Approx(2.0).epsilon(1e-13));

    // |3/5| + |4/5| integrated over the unit square
    const FieldFunction lin = linear_field(Vec{3.0 / 5, 4.0 / 5});
    CHECK(seminorm_Wkq(lin, omega, 1, 1.0, cfg) == doctest::Approx(7.0 / 5).epsilon(1e-13));

    CHECK_THROWS_AS(seminorm_Wkq(quad, omega, 3, 2.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(seminorm_Wkq(quad, omega, 1, 0.5, cfg), std::invalid_argument);
}

TEST_CASE("energy at the documented values and monotone under restriction") {
    const Cube omega = unit_domain(2);
    const QuadratureConfig cfg;
    const FieldFunction quad = find_function("quad", 2);

    CHECK(energy_phi(find_function("const", 2), omega, 2.0, cfg) == 0.0);
    // gradient mass 1/3 + 1/3, Hessian mass 1 + 0 + 1
    CHECK(energy_phi(quad, omega, 2.0, cfg) == doctest::Approx(8.0 / 3).epsilon(1e-13));

    const Cube sub(Vec{0.0, 0.0}, 0.5, 1);
    CHECK(energy_phi(quad, sub, 2.0, cfg) < energy_phi(quad, omega, 2.0, cfg));
}

TEST_CASE("energy is additive over dyadic subdivisions") {
    Rng rng(2024);
    const QuadratureConfig cfg;
    for (const char* label : {"quad", "expdir"}) {
        const FieldFunction f = find_function(label, 2);
        const Cube omega = unit_domain(2);
        const double whole = energy_phi(f, omega, 2.0, cfg);
        DyadicPartition part = DyadicPartition::singleton(omega);
        for (int round = 0; round < 3; ++round) {
            std::vector<std::size_t> marked;
            for (std::size_t i = 0; i < part.cells.size(); ++i)
                if (rng.uniform() < 0.5) marked.push_back(i);
            if (marked.empty()) marked.push_back(0);
            part = elementary_extension(part, marked);
        }
        CompensatedSum total;
        for (const Cube& c : part.cells) total.add(energy_phi(f, c, 2.0, cfg));
        CHECK(std::abs(total.value() - whole) <= 1e-3 * whole);
    }
}

TEST_CASE("average gradient at the documented values") {
    const Cube omega = unit_domain(2);
    const QuadratureConfig cfg;
    const Vec a{3.0 / 5, 4.0 / 5};
    const Vec g = average_gradient(linear_field(a), omega, cfg);
    CHECK(g[0] == doctest::Approx(a[0]).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(a[1]).epsilon(1e-14));

    const Vec gq = average_gradient(find_function("quad", 2), omega, cfg);
    CHECK(gq[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(gq[1] == doctest::Approx(0.5).epsilon(1e-13));

    CHECK(norm2(average_gradient(find_function("const", 2), omega, cfg)) == 0.0);

    CHECK(gl_mean(find_function("quad", 2), omega, cfg) == doctest::Approx(1.0 / 3).epsilon(1e-13));
}

TEST_CASE("cell_stats buckets every sample and matches the clipping oracle") {
    const Cube omega = unit_domain(2);
    QuadratureConfig cfg;
    cfg.samples_per_cube = 1 << 16;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto slabs = slab_split(omega, Vec{inv_sqrt2, inv_sqrt2}, 4);

    const FieldFunction cst = find_function("const", 2);
    const SlabStats stats = cell_stats(cst, slabs, cfg);
    long long total = 0;
    for (long long c : stats.counts) total += c;
    CHECK(total == cfg.samples_per_cube);
    for (double m : stats.means) CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    const double expected[4] = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
    for (int i = 0; i < 4; ++i)
        CHECK(stats.volumes[i] == doctest::Approx(expected[i]).epsilon(0.01));

    // means increase along the projection direction for a linear field
    const Vec a{inv_sqrt2, inv_sqrt2};
    const SlabStats lin = cell_stats(linear_field(a), slabs, cfg);
    for (int i = 1; i < 4; ++i) CHECK(lin.means[i] > lin.means[i - 1]);
}

TEST_CASE("a starved slab falls back to a deterministic in-cube point") {
    const Cube omega = unit_domain(2);
    QuadratureConfig cfg;
    cfg.samples_per_cube = 256;  // end slabs of a fine diagonal split catch nothing
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto slabs = slab_split(omega, Vec{inv_sqrt2, inv_sqrt2}, 256);
    const FieldFunction quad = find_function("quad", 2);
    const SlabStats stats = cell_stats(quad, slabs, cfg);
    CHECK(stats.empty_slabs > 0);
    for (std::size_t i = 0; i < stats.means.size(); ++i) {
        CHECK(std::isfinite(stats.means[i]));
        CHECK(stats.means[i] >= 0.0);
        CHECK(stats.means[i] <= 1.0);  // max of quad on the unit square
    }
    const SlabStats again = cell_stats(quad, slabs, cfg);
    CHECK(again.means == stats.means);
}

TEST_CASE("lp_error at the documented values") {
    const Cube omega = unit_domain(2);
    const QuadratureConfig cfg;

    const FieldFunction cst = find_function("const", 2);
    CHECK(lp_error(cst, single_cell(omega, 1.0), 2.0, cfg) == 0.0);

    // f = x1, approximated by its mean 1/2
    const FieldFunction f = linear_field(Vec{1.0, 0.0});
    const PiecewiseConstant s = single_cell(omega, 0.5);
    CHECK(lp_error(f, s, 2.0, cfg) ==
          doctest::Approx(std::sqrt(1.0 / 12)).epsilon(2e-3));
    const double sup = lp_error(f, s, std::numeric_limits<double>::infinity(), cfg);
    CHECK(sup >= 0.49);
    CHECK(sup <= 0.5);

    CHECK_THROWS_AS(lp_error(f, s, 0.5, cfg), std::invalid_argument);
}

TEST_CASE("error estimates are deterministic") {
    const Cube omega = unit_domain(2);
    const QuadratureConfig cfg;
    const FieldFunction f = find_function("expdir", 2);
    const PiecewiseConstant s = single_cell(omega, 2.0);
    const double e1 = lp_error(f, s, 2.0, cfg);
    const double e2 = lp_error(f, s, 2.0, cfg);
    CHECK(e1 == e2);
    const double s1 = lp_error(f, s, std::numeric_limits<double>::infinity(), cfg);
    const double s2 = lp_error(f, s, std::numeric_limits<double>::infinity(), cfg);
    CHECK(s1 == s2);
}

TEST_CASE("sampled sup norm dominates the sampled L2 norm on the unit domain") {
    const Cube omega = unit_domain(2);
    const QuadratureConfig cfg;
    for (const char* label : {"quad", "expdir", "bump:m=2"}) {
        const FieldFunction f = find_function(label, 2);
        const PiecewiseConstant s = single_cell(omega, 0.25);
        CHECK(lp_error(f, s, std::numeric_limits<double>::infinity(), cfg) >=
              lp_error(f, s, 2.0, cfg));
    }
}

TEST_CASE("slab means are L2-optimal on their sample set and 2x-optimal in any Lp") {
    const Cube omega = unit_domain(2);
    QuadratureConfig cfg;
    const FieldFunction f = find_function("expdir", 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto slabs = slab_split(omega, Vec{inv_sqrt2, inv_sqrt2}, 3);
    const SlabStats stats = cell_stats(f, slabs, cfg);

    // sampled Lp error of the constant c on one slab
    auto slab_error = [&](int slab, double c, double p) {
        const CubeSampler sampler(omega, cfg.seed);
        double acc = 0.0, worst = 0.0;
        long long count = 0;
        for (int i = 0; i < cfg.samples_per_cube; ++i) {
            const Vec x = sampler.point(i);
            if (!slabs[slab].contains(x)) continue;
            ++count;
            const double diff = std::abs(f.value(x) - c);
            worst = std::max(worst, diff);
            acc += std::pow(diff, p);
        }
        return std::isinf(p) ? worst : std::pow(acc / count, 1.0 / p);
    };

    for (int slab = 0; slab < 3; ++slab) {
        const double mean = stats.means[slab];
        const double at_mean = slab_error(slab, mean, 2.0);
        double best[3] = {at_mean, slab_error(slab, mean, 1.0),
                          slab_error(slab, mean, std::numeric_limits<double>::infinity())};
        const double ps[3] = {2.0, 1.0, std::numeric_limits<double>::infinity()};
        for (int k = -10; k <= 10; ++k) {
            const double c = mean + 0.05 * k * std::max(1e-3, std::abs(mean));
            CHECK(at_mean <= slab_error(slab, c, 2.0) + 1e-12);
            for (int j = 0; j < 3; ++j) best[j] = std::min(best[j], slab_error(slab, c, ps[j]));
        }
        for (int j = 0; j < 3; ++j)
            CHECK(slab_error(slab, mean, ps[j]) <= 2.0 * best[j] + 1e-9);
    }
}

TEST_CASE("singular member: order-2 mass converges for q=1 and diverges for q=2") {
    const FieldFunction f = find_function("singular_beta", 2);
    // refine over the level-1 subdivision: the singular point sits at the
    // shared corner of the four children, where Gauss nodes cluster
    const DyadicPartition sub =
        elementary_extension(DyadicPartition::singleton(unit_domain(2)), {0});
    const int levels[] = {8, 16, 32, 64, 128};

    auto mass = [&](int k, double q, int n) {
        QuadratureConfig cfg;
        cfg.gl_points_per_axis = n;
        double total = 0.0;
        for (const Cube& c : sub.cells)
            total += EnergyFunctional{q, {k}}.evaluate(f, c, cfg);
        return total;
    };

    // q = 1: |f|_{W^2_1} is finite; refinement differences shrink
    double prev_val = 0.0, prev_diff = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double val = mass(2, 1.0, levels[i]);
        if (i > 0) {
            const double diff = std::abs(val - prev_val);
            if (i > 1) CHECK(diff < prev_diff);
            prev_diff = diff;
        }
        prev_val = val;
    }

    // q = 2: the squared Hessian is not integrable; the computed mass grows
    // monotonically past 1e3 as the rule refines toward the singularity
    double prev_mass = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double m = mass(2, 2.0, levels[i]);
        CHECK(m > prev_mass);
        prev_mass = m;
    }
    CHECK(prev_mass > 1e3);
}

TEST_CASE("energy functional orders are restricted and composable") {
    const Cube omega = unit_domain(2);
    const FieldFunction quad = find_function("quad", 2);
    const double first = EnergyFunctional{2.0, {1}}.evaluate(quad, omega);
    const double second = EnergyFunctional{2.0, {2}}.evaluate(quad, omega);
    CHECK(first == doctest::Approx(2.0 / 3).epsilon(1e-13));
    CHECK(second == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(first + second == doctest::Approx(energy_phi(quad, omega, 2.0)).epsilon(1e-14));
    const EnergyFunctional zeroth{2.0, {0}};
    CHECK_THROWS_AS(zeroth.evaluate(quad, omega), std::invalid_argument);
}

TEST_CASE("config validation") {
    QuadratureConfig cfg;
    cfg.gl_points_per_axis = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.samples_per_cube = 16;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
