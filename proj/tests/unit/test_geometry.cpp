#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "convpart/geometry.hpp"
#include "test_support.hpp"

using namespace convpart;
using convpart::testing::Rng;
using convpart::testing::unit_domain;

TEST_CASE("elementary extension splits marked cubes into 2^d children") {
    for (int d : {2, 3}) {
        DyadicPartition part = DyadicPartition::singleton(unit_domain(d));
        DyadicPartition once = elementary_extension(part, {0});
        CHECK(once.cells.size() == std::size_t(1) << d);
        CHECK(once.generation == 1);
        for (const Cube& c : once.cells) {
            CHECK(c.level == 1);
            CHECK(c.side == 0.5);
        }
    }
}

TEST_CASE("elementary extension carries unmarked cubes over") {
    DyadicPartition part = DyadicPartition::singleton(unit_domain(2));
    part = elementary_extension(part, {0});  // 4 children
    DyadicPartition out = elementary_extension(part, {1});
    CHECK(out.cells.size() == 7);  // 3 kept + 4 new
    int level1 = 0, level2 = 0;
    for (const Cube& c : out.cells) (c.level == 1 ? level1 : level2)++;
    CHECK(level1 == 3);
    CHECK(level2 == 4);
}

TEST_CASE("elementary extension rejects bad marked sets") {
    DyadicPartition part = DyadicPartition::singleton(unit_domain(2));
    CHECK_THROWS_AS(elementary_extension(part, {}), std::invalid_argument);
    CHECK_THROWS_AS(elementary_extension(part, {1}), std::invalid_argument);
    part = elementary_extension(part, {0});
    CHECK_THROWS_AS(elementary_extension(part, {2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(elementary_extension(part, {4}), std::invalid_argument);
}

TEST_CASE("volume is conserved across random extension sequences") {
    for (int d : {2, 3}) {
        Rng rng(17 + d);
        DyadicPartition part = DyadicPartition::singleton(unit_domain(d));
        for (int round = 0; round < 5; ++round) {
            std::vector<std::size_t> marked;
            for (std::size_t i = 0; i < part.cells.size(); ++i)
                if (rng.uniform() < 0.4) marked.push_back(i);
            if (marked.empty()) marked.push_back(rng.uniform_int(int(part.cells.size())));
            const std::size_t before = part.cells.size();
            part = elementary_extension(part, marked);
            CHECK(part.cells.size() ==
                  before + (((std::size_t(1) << d) - 1) * marked.size()));
            CHECK(part.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
        }
        // corners stay dyadic: corner * 2^level is an integer
        for (const Cube& c : part.cells)
            for (int i = 0; i < d; ++i) {
                const double scaled = c.corner[i] * std::exp2(c.level);
                CHECK(scaled == std::round(scaled));
            }
    }
}

TEST_CASE("slab_split along an axis gives equal rectangles") {
    const Cube square = unit_domain(2);
    const auto slabs = slab_split(square, Vec{1.0, 0.0}, 2);
    REQUIRE(slabs.size() == 2);
    CHECK(slabs[0].lo == doctest::Approx(0.0));
    CHECK(slabs[0].hi == doctest::Approx(0.5));
    CHECK(slabs[1].hi == doctest::Approx(1.0));
    CHECK(slabs[1].closed_hi);
    CHECK(slabs[0].contains(Vec{0.25, 0.7}));
    CHECK(!slabs[0].contains(Vec{0.75, 0.7}));
    CHECK(slabs[1].contains(Vec{0.75, 0.7}));
}

TEST_CASE("slab_split rejects bad arguments") {
    const Cube square = unit_domain(2);
    CHECK_THROWS_AS(slab_split(square, Vec{1.0, 0.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(slab_split(square, Vec{0.0, 0.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(slab_split(square, Vec{1.0, 1.0}, 2), std::invalid_argument);
}

TEST_CASE("single slab accepts every interior point") {
    Rng rng(99);
    const Cube square = unit_domain(2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const Vec& dir : {Vec{1.0, 0.0}, Vec{inv_sqrt2, inv_sqrt2}, Vec{-inv_sqrt2, inv_sqrt2}}) {
        const auto slabs = slab_split(square, dir, 1);
        REQUIRE(slabs.size() == 1);
        for (int i = 0; i < 200; ++i)
            CHECK(slabs[0].contains(testing::random_point(rng, square, 1e-9)));
    }
}

TEST_CASE("diagonal quarter split has the exact clipped areas") {
    const Cube square = unit_domain(2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto slabs = slab_split(square, Vec{inv_sqrt2, inv_sqrt2}, 4);
    REQUIRE(slabs.size() == 4);
    const double expected[4] = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
    for (int i = 0; i < 4; ++i) {
        const auto poly = clip_slab_2d(slabs[i]);
        CHECK(polygon_area(poly) == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    // halves by symmetry about the diagonal
    const auto halves = slab_split(square, Vec{inv_sqrt2, inv_sqrt2}, 2);
    CHECK(polygon_area(clip_slab_2d(halves[0])) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(polygon_area(clip_slab_2d(halves[1])) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("clip_slab_2d rectangle and identity cases") {
    const Cube square = unit_domain(2);
    SlabCell s;
    s.parent = square;
    s.direction = Vec{1.0, 0.0};
    s.lo = 0.0;
    s.hi = 0.5;
    const auto poly = clip_slab_2d(s);
    REQUIRE(poly.size() == 4);
    CHECK(polygon_area(poly) == doctest::Approx(0.5).epsilon(1e-12));
    double max_x = 0.0;
    for (const Point2& p : poly) max_x = std::max(max_x, p.x);
    CHECK(max_x == doctest::Approx(0.5).epsilon(1e-12));

    s.hi = 1.0;
    CHECK(polygon_area(clip_slab_2d(s)) == doctest::Approx(1.0).epsilon(1e-12));

    SlabCell cube3;
    cube3.parent = unit_domain(3);
    cube3.direction = Vec{1.0, 0.0, 0.0};
    cube3.lo = 0.0;
    cube3.hi = 1.0;
    CHECK_THROWS_AS(clip_slab_2d(cube3), std::invalid_argument);
}

TEST_CASE("every point lands in exactly one slab; sampled volumes match clipped areas") {
    Rng rng(4242);
    const Cube square = unit_domain(2);
    const Vec dir{3.0 / 5, 4.0 / 5};
    const auto slabs = slab_split(square, dir, 5);
    std::vector<long long> counts(slabs.size(), 0);
    const int samples = 1 << 16;
    for (int i = 0; i < samples; ++i) {
        const Vec x = testing::random_point(rng, square);
        int hits = 0, idx = -1;
        for (std::size_t j = 0; j < slabs.size(); ++j)
            if (slabs[j].contains(x)) {
                ++hits;
                idx = int(j);
            }
        REQUIRE(hits == 1);
        ++counts[idx];
    }
    double total = 0.0;
    for (std::size_t j = 0; j < slabs.size(); ++j) {
        const double sampled = double(counts[j]) / samples;
        const double exact = polygon_area(clip_slab_2d(slabs[j]));
        CHECK(sampled == doctest::Approx(exact).epsilon(0.02));
        total += exact;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partition dump carries round-trip coordinates") {
    const Cube square = unit_domain(2);
    ConvexPartition part;
    part.domain = square;
    part.source = DyadicPartition::singleton(square);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (SlabCell& s : slab_split(square, Vec{inv_sqrt2, inv_sqrt2}, 2))
        part.cells.push_back(s);
    part.group_begin = {0, 2};
    std::vector<double> values = {1.0 / 3.0, 2.0 / 3.0};
    const std::string dump = dump_partition_json(part, &values);
    CHECK(dump.find("\"domain\"") != std::string::npos);
    CHECK(dump.find("\"parent_corner\"") != std::string::npos);
    CHECK(dump.find("0.70710678118654746") != std::string::npos);
    CHECK(dump.find("0.33333333333333331") != std::string::npos);

    std::vector<double> wrong = {1.0};
    CHECK_THROWS_AS(dump_partition_json(part, &wrong), std::invalid_argument);
}
