#pragma once

#include <string>
#include <vector>

#include "convpart/vec.hpp"

namespace convpart {

/// Axis-aligned open cube: lower corner, edge length, and dyadic depth
/// relative to the root domain (level 0).
struct Cube {
    Vec corner;
    double side = 1.0;
    int level = 0;

    Cube() = default;
    Cube(Vec corner_, double side_, int level_ = 0);

    int dim() const { return corner.dim(); }
    double volume() const;
    Vec center() const;

    /// Half-open membership [corner, corner + side) per axis, so points on
    /// shared faces belong to exactly one cell.
    bool contains(const Vec& x) const;

    /// The 2^d corner points.
    std::vector<Vec> vertices() const;

    /// The 2^d children with halved side, binary-counter order.
    std::vector<Cube> children() const;
};

/// A dyadic subdivision of the domain: every cell descends from the root
/// cube by repeated halving.
struct DyadicPartition {
    Cube domain;
    std::vector<Cube> cells;
    int generation = 0;

    static DyadicPartition singleton(const Cube& domain);

    double total_volume() const;
};

/// Slice of a cube between two hyperplanes orthogonal to a unit direction:
/// x in parent and lo <= <u, x - corner> < hi (the last slab of a split
/// closes at hi so the stack tiles the cube exactly).
struct SlabCell {
    Cube parent;
    Vec direction;
    double lo = 0.0;
    double hi = 0.0;
    bool closed_hi = false;

    bool contains(const Vec& x) const;

    /// Projection <u, x - corner> used by the membership test.
    double project(const Vec& x) const;
};

/// Min/max of <u, x - corner> over the cube's vertices; a linear
/// functional on a cube attains its extrema at vertices.
struct ProjectionRange {
    double lo;
    double hi;
};
ProjectionRange projection_range(const Cube& cell, const Vec& direction);

/// The final convex partition: every dyadic cube replaced by its stack of
/// slabs. `group_begin[i]` indexes the first slab of source.cells[i];
/// slabs of one parent are contiguous.
struct ConvexPartition {
    Cube domain;
    std::vector<SlabCell> cells;
    DyadicPartition source;
    std::vector<std::size_t> group_begin;  // size = source.cells.size() + 1

    std::size_t group_count(std::size_t parent_index) const {
        return group_begin[parent_index + 1] - group_begin[parent_index];
    }
};

/// Split each marked cube (addressed by index into part.cells) into its
/// 2^d children; unmarked cubes carry over. Generation increments by one.
DyadicPartition elementary_extension(const DyadicPartition& part,
                                     const std::vector<std::size_t>& marked);

/// Cut a cube into n slabs of equal projection thickness along a unit
/// direction. n = 1 returns a single slab covering the cube.
std::vector<SlabCell> slab_split(const Cube& cell, const Vec& direction, int n);

/// 2-D point for the exact clipping oracle.
struct Point2 {
    double x;
    double y;
};

/// Exact polygon of a 2-D slab: square clipped against the two half-planes
/// lo <= <u, x - corner> <= hi. Vertices counter-clockwise; a degenerate
/// intersection returns an empty list.
std::vector<Point2> clip_slab_2d(const SlabCell& slab);

/// Signed shoelace area (positive for counter-clockwise polygons).
double polygon_area(const std::vector<Point2>& poly);

/// Serialize a convex partition (optionally with per-cell values) to the
/// JSON dump format; coordinates carry 17 significant digits.
std::string dump_partition_json(const ConvexPartition& part,
                                const std::vector<double>* values = nullptr);

}  // namespace convpart
