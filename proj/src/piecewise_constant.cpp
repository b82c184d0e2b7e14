#include "convpart/piecewise_constant.hpp"

#include <stdexcept>

namespace convpart {

double PiecewiseConstant::operator()(const Vec& x) const {
    if (values.size() != partition.cells.size())
        throw std::invalid_argument("PiecewiseConstant: values length mismatch");
    for (std::size_t gi = 0; gi + 1 < partition.group_begin.size(); ++gi) {
        const std::size_t begin = partition.group_begin[gi];
        const std::size_t end = partition.group_begin[gi + 1];
        if (begin == end) continue;
        if (!partition.cells[begin].parent.contains(x)) continue;
        for (std::size_t i = begin; i < end; ++i)
            if (partition.cells[i].contains(x)) return values[i];
        // x sits in the parent but in no slab: only possible for points at
        // the open upper end of the projection range; attribute to the
        // closest slab boundary.
        return values[end - 1];
    }
    throw std::invalid_argument("PiecewiseConstant: point lies in no cell");
}

}  // namespace convpart
