#pragma once

#include <vector>

#include "convpart/geometry.hpp"

namespace convpart {

/// Piecewise constant function over a convex partition: one value per slab
/// cell, index-aligned with partition.cells.
struct PiecewiseConstant {
    ConvexPartition partition;
    std::vector<double> values;

    /// Value of the unique cell containing x (half-open membership).
    /// Throws std::invalid_argument when x lies in no cell.
    double operator()(const Vec& x) const;

    std::size_t cell_count() const { return partition.cells.size(); }
};

}  // namespace convpart
