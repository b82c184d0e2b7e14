#include "convpart/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace convpart {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace

std::string render_partition_svg(const Cube& domain, const std::vector<SlabCell>& cells,
                                 const std::vector<double>* values) {
    if (domain.dim() != 2) throw std::invalid_argument("rendering supports d=2 only");
    if (values && values->size() != cells.size())
        throw std::invalid_argument("render_partition_svg: values length mismatch");

    double vmin = 0.0, vmax = 0.0;
    if (values && !values->empty()) {
        vmin = *std::min_element(values->begin(), values->end());
        vmax = *std::max_element(values->begin(), values->end());
    }

    const double x0 = domain.corner[0], y0 = domain.corner[1], h = domain.side;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\""
        << fmt(x0) << ' ' << fmt(y0) << ' ' << fmt(h) << ' ' << fmt(h) << "\">\n";

    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::vector<Point2> poly = clip_slab_2d(cells[i]);
        if (poly.empty()) continue;
        out << "  <polygon points=\"";
        for (std::size_t j = 0; j < poly.size(); ++j) {
            if (j) out << ' ';
            // SVG y grows downward; mirror inside the domain square
            out << fmt(poly[j].x) << ',' << fmt(2.0 * y0 + h - poly[j].y);
        }
        out << "\" stroke=\"#333333\" stroke-width=\"" << fmt(h / 400.0) << "\" fill=\"";
        if (values) {
            const double t = vmax > vmin ? ((*values)[i] - vmin) / (vmax - vmin) : 0.0;
            const int gray = 255 - static_cast<int>(std::lround(215.0 * t));
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", gray, gray, gray);
            out << color;
        } else {
            out << "none";
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void render_svg_file(const std::string& dump_json_path, const std::string& out_svg_path) {
    std::ifstream in(dump_json_path, std::ios::binary);
    if (!in) throw std::invalid_argument("render: cannot open " + dump_json_path);
    nlohmann::json j = nlohmann::json::parse(in);

    const auto corner_list = j.at("domain").at("corner").get<std::vector<double>>();
    if (corner_list.size() != 2) throw std::invalid_argument("rendering supports d=2 only");
    Vec corner(2);
    corner[0] = corner_list[0];
    corner[1] = corner_list[1];
    const Cube domain(corner, j.at("domain").at("side").get<double>(), 0);

    std::vector<SlabCell> cells;
    for (const auto& c : j.at("cells")) {
        const auto pc = c.at("parent_corner").get<std::vector<double>>();
        const auto dir = c.at("direction").get<std::vector<double>>();
        if (pc.size() != 2 || dir.size() != 2)
            throw std::invalid_argument("rendering supports d=2 only");
        SlabCell s;
        Vec pcv(2);
        pcv[0] = pc[0];
        pcv[1] = pc[1];
        s.parent = Cube(pcv, c.at("parent_side").get<double>(), 0);
        s.direction = Vec(2);
        s.direction[0] = dir[0];
        s.direction[1] = dir[1];
        s.lo = c.at("lo").get<double>();
        s.hi = c.at("hi").get<double>();
        s.closed_hi = true;
        cells.push_back(s);
    }

    std::vector<double> values;
    const bool has_values = j.contains("values");
    if (has_values) values = j["values"].get<std::vector<double>>();

    const std::string svg =
        render_partition_svg(domain, cells, has_values ? &values : nullptr);
    std::ofstream out(out_svg_path, std::ios::binary);
    out << svg;
    out.flush();
    if (!out) throw std::runtime_error("render: failed to write " + out_svg_path);
}

}  // namespace convpart
