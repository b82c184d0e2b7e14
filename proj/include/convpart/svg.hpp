#pragma once

#include <string>
#include <vector>

#include "convpart/geometry.hpp"

namespace convpart {

/// SVG document with one polygon per slab cell (exact 2-D clipping),
/// stroked boundaries, fills on a linear grayscale ramp over the values
/// (no values: unfilled). viewBox equals the domain square. d = 2 only.
std::string render_partition_svg(const Cube& domain, const std::vector<SlabCell>& cells,
                                 const std::vector<double>* values);

/// Parse a partition dump (JSON) and write the SVG rendering.
/// Throws std::invalid_argument for malformed dumps or d != 2.
void render_svg_file(const std::string& dump_json_path, const std::string& out_svg_path);

}  // namespace convpart
