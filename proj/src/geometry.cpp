#include "convpart/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace convpart {

Cube::Cube(Vec corner_, double side_, int level_)
    : corner(corner_), side(side_), level(level_) {
    if (corner.dim() < 1) throw std::invalid_argument("Cube: empty corner");
    if (!(side > 0.0) || !std::isfinite(side)) throw std::invalid_argument("Cube: side must be positive and finite");
    for (int i = 0; i < corner.dim(); ++i)
        if (!std::isfinite(corner[i])) throw std::invalid_argument("Cube: non-finite corner coordinate");
    if (level < 0) throw std::invalid_argument("Cube: negative level");
}

double Cube::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= side;
    return v;
}

Vec Cube::center() const {
    Vec c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = corner[i] + 0.5 * side;
    return c;
}

bool Cube::contains(const Vec& x) const {
    if (x.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (x[i] < corner[i] || x[i] >= corner[i] + side) return false;
    return true;
}

std::vector<Vec> Cube::vertices() const {
    const int d = dim();
    std::vector<Vec> out;
    out.reserve(std::size_t(1) << d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Vec p(d);
        for (int i = 0; i < d; ++i) p[i] = corner[i] + ((mask >> i) & 1u ? side : 0.0);
        out.push_back(p);
    }
    return out;
}

std::vector<Cube> Cube::children() const {
    const int d = dim();
    const double h = 0.5 * side;
    std::vector<Cube> out;
    out.reserve(std::size_t(1) << d);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Vec c(d);
        for (int i = 0; i < d; ++i) c[i] = corner[i] + ((mask >> i) & 1u ? h : 0.0);
        out.emplace_back(c, h, level + 1);
    }
    return out;
}

DyadicPartition DyadicPartition::singleton(const Cube& domain) {
    DyadicPartition p;
    p.domain = domain;
    p.cells = {domain};
    p.generation = 0;
    return p;
}

double DyadicPartition::total_volume() const {
    double s = 0.0;
    for (const Cube& c : cells) s += c.volume();
    return s;
}

double SlabCell::project(const Vec& x) const {
    return dot(direction, x - parent.corner);
}

bool SlabCell::contains(const Vec& x) const {
    if (!parent.contains(x)) return false;
    const double t = project(x);
    if (t < lo) return false;
    return closed_hi ? t <= hi : t < hi;
}

ProjectionRange projection_range(const Cube& cell, const Vec& direction) {
    // min/max of a linear functional over the cube splits per axis.
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < cell.dim(); ++i) {
        const double c = direction[i] * cell.side;
        if (c >= 0.0)
            hi += c;
        else
            lo += c;
    }
    return {lo, hi};
}

DyadicPartition elementary_extension(const DyadicPartition& part,
                                     const std::vector<std::size_t>& marked) {
    if (marked.empty()) throw std::invalid_argument("elementary_extension: marked set is empty");
    std::set<std::size_t> mark(marked.begin(), marked.end());
    if (mark.size() != marked.size())
        throw std::invalid_argument("elementary_extension: duplicate marked cube");
    if (*mark.rbegin() >= part.cells.size())
        throw std::invalid_argument("elementary_extension: marked cube not in partition");

    DyadicPartition out;
    out.domain = part.domain;
    out.generation = part.generation + 1;
    const std::size_t split_gain = (std::size_t(1) << part.domain.dim()) - 1;
    out.cells.reserve(part.cells.size() + split_gain * mark.size());
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
        if (mark.count(i)) {
            for (Cube& ch : part.cells[i].children()) out.cells.push_back(ch);
        } else {
            out.cells.push_back(part.cells[i]);
        }
    }
    return out;
}

std::vector<SlabCell> slab_split(const Cube& cell, const Vec& direction, int n) {
    if (n < 1) throw std::invalid_argument("slab_split: slab count must be >= 1");
    if (direction.dim() != cell.dim())
        throw std::invalid_argument("slab_split: direction dimension mismatch");
    const double len = norm2(direction);
    if (!(std::abs(len - 1.0) <= 1e-12))
        throw std::invalid_argument("slab_split: direction must be a unit vector");

    const auto [a, b] = projection_range(cell, direction);
    std::vector<SlabCell> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        SlabCell s;
        s.parent = cell;
        s.direction = direction;
        s.lo = a + (b - a) * (double(i) / n);
        s.hi = (i + 1 == n) ? b : a + (b - a) * (double(i + 1) / n);
        s.closed_hi = (i + 1 == n);
        out.push_back(s);
    }
    return out;
}

namespace {

// Clip a convex polygon against the half-plane {f(p) >= 0}, f affine.
std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly,
                                   double nx, double ny, double offset) {
    // f(p) = nx*p.x + ny*p.y + offset; tolerance keeps touching vertices.
    const double eps = 1e-12;
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    for (std::size_t j = 0, i = n - 1; j < n; i = j++) {
        const double fi = nx * poly[i].x + ny * poly[i].y + offset;
        const double fj = nx * poly[j].x + ny * poly[j].y + offset;
        const bool in_i = fi >= -eps;
        const bool in_j = fj >= -eps;
        if (in_i != in_j) {
            const double t = fi / (fi - fj);
            out.push_back({poly[i].x + t * (poly[j].x - poly[i].x),
                           poly[i].y + t * (poly[j].y - poly[i].y)});
        }
        if (in_j) out.push_back(poly[j]);
    }
    return out;
}

}  // namespace

std::vector<Point2> clip_slab_2d(const SlabCell& slab) {
    if (slab.parent.dim() != 2)
        throw std::invalid_argument("clip_slab_2d: supported for d = 2 only");
    const Cube& c = slab.parent;
    const double x0 = c.corner[0], y0 = c.corner[1], h = c.side;
    std::vector<Point2> poly = {{x0, y0}, {x0 + h, y0}, {x0 + h, y0 + h}, {x0, y0 + h}};

    const double ux = slab.direction[0], uy = slab.direction[1];
    // <u, p - corner> >= lo  and  <u, p - corner> <= hi
    poly = clip_halfplane(poly, ux, uy, -(ux * x0 + uy * y0) - slab.lo);
    poly = clip_halfplane(poly, -ux, -uy, (ux * x0 + uy * y0) + slab.hi);

    if (poly.size() < 3 || std::abs(polygon_area(poly)) <= 1e-15 * h * h) return {};
    return poly;
}

double polygon_area(const std::vector<Point2>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    for (std::size_t j = 0, i = n - 1; j < n; i = j++)
        s += poly[i].x * poly[j].y - poly[j].x * poly[i].y;
    return 0.5 * s;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void append_vec(std::string& out, const Vec& v) {
    out += '[';
    for (int i = 0; i < v.dim(); ++i) {
        if (i) out += ',';
        out += fmt17(v[i]);
    }
    out += ']';
}

}  // namespace

std::string dump_partition_json(const ConvexPartition& part,
                                const std::vector<double>* values) {
    if (values && values->size() != part.cells.size())
        throw std::invalid_argument("dump_partition_json: values length mismatch");
    std::string out;
    out.reserve(128 + 160 * part.cells.size());
    out += "{\n  \"domain\": {\"corner\": ";
    append_vec(out, part.domain.corner);
    out += ", \"side\": ";
    out += fmt17(part.domain.side);
    out += "},\n  \"cells\": [\n";
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
        const SlabCell& s = part.cells[i];
        out += "    {\"parent_corner\": ";
        append_vec(out, s.parent.corner);
        out += ", \"parent_side\": ";
        out += fmt17(s.parent.side);
        out += ", \"direction\": ";
        append_vec(out, s.direction);
        out += ", \"lo\": ";
        out += fmt17(s.lo);
        out += ", \"hi\": ";
        out += fmt17(s.hi);
        out += '}';
        if (i + 1 < part.cells.size()) out += ',';
        out += '\n';
    }
    out += "  ]";
    if (values) {
        out += ",\n  \"values\": [";
        for (std::size_t i = 0; i < values->size(); ++i) {
            if (i) out += ',';
            out += fmt17((*values)[i]);
        }
        out += ']';
    }
    out += "\n}\n";
    return out;
}

}  // namespace convpart
