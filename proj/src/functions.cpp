#include "convpart/functions.hpp"

#include <cmath>
#include <stdexcept>

namespace convpart {

namespace {

// u = 2x - 1 and s = 1 - |u|^2; the bump is exp(-1/s) for s > 0.
struct BumpFrame {
    Vec u;
    double s;
    double phi;
};

BumpFrame bump_frame(const Vec& x) {
    BumpFrame f;
    f.u = Vec(x.dim());
    double r2 = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
        f.u[i] = 2.0 * x[i] - 1.0;
        r2 += f.u[i] * f.u[i];
    }
    f.s = 1.0 - r2;
    f.phi = f.s > 0.0 ? std::exp(-1.0 / f.s) : 0.0;
    return f;
}

}  // namespace

double bump_phi(const Vec& x) { return bump_frame(x).phi; }

Vec bump_phi_gradient(const Vec& x) {
    const BumpFrame f = bump_frame(x);
    Vec g(x.dim());
    if (f.phi == 0.0) return g;
    const double inv_s2 = 1.0 / (f.s * f.s);
    for (int i = 0; i < x.dim(); ++i) g[i] = -4.0 * f.u[i] * inv_s2 * f.phi;
    return g;
}

Mat bump_phi_hessian(const Vec& x) {
    const BumpFrame f = bump_frame(x);
    Mat h(x.dim());
    if (f.phi == 0.0) return h;
    const double inv_s2 = 1.0 / (f.s * f.s);
    const double inv_s3 = inv_s2 / f.s;
    const double inv_s4 = inv_s2 * inv_s2;
    for (int i = 0; i < x.dim(); ++i) {
        for (int j = i; j < x.dim(); ++j) {
            double v = (16.0 * inv_s4 - 32.0 * inv_s3) * f.u[i] * f.u[j];
            if (i == j) v -= 8.0 * inv_s2;
            h(i, j) = h(j, i) = v * f.phi;
        }
    }
    return h;
}

namespace {

// Index of the m-grid sub-cube containing x, and the rescaled coordinate
// m*x - i + 1 that maps the sub-cube back onto (0,1)^d. With disjoint bump
// supports only the covering copy can be nonzero.
Vec bump_local(int m, const Vec& x) {
    Vec y(x.dim());
    for (int k = 0; k < x.dim(); ++k) {
        double i = std::floor(double(m) * x[k]) + 1.0;
        if (i < 1.0) i = 1.0;
        if (i > double(m)) i = double(m);
        y[k] = double(m) * x[k] - i + 1.0;
    }
    return y;
}

void check_m(int m) {
    if (m < 1) throw std::invalid_argument("bump_fm: m must be >= 1");
}

}  // namespace

double bump_fm(int m, const Vec& x) {
    check_m(m);
    return bump_phi(bump_local(m, x));
}

Vec bump_fm_gradient(int m, const Vec& x) {
    check_m(m);
    Vec g = bump_phi_gradient(bump_local(m, x));
    for (int i = 0; i < g.dim(); ++i) g[i] *= double(m);
    return g;
}

Mat bump_fm_hessian(int m, const Vec& x) {
    check_m(m);
    Mat h = bump_phi_hessian(bump_local(m, x));
    const double m2 = double(m) * double(m);
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j) h(i, j) *= m2;
    return h;
}

FieldFunction BumpFamily::field() const {
    if (m < 1) throw std::invalid_argument("BumpFamily: m must be >= 1");
    FieldFunction f;
    f.label = "bump:m=" + std::to_string(m);
    f.dim = d;
    const int mm = m;
    f.value = [mm](const Vec& x) { return bump_fm(mm, x); };
    f.gradient = [mm](const Vec& x) { return bump_fm_gradient(mm, x); };
    f.hessian = [mm](const Vec& x) { return bump_fm_hessian(mm, x); };
    f.smoothness_note = "C^inf with compact sub-cube supports; in W^2_q for all q";
    return f;
}

namespace {

Vec unit_diagonal(int d) {
    Vec a(d);
    const double c = 1.0 / std::sqrt(double(d));
    for (int i = 0; i < d; ++i) a[i] = c;
    return a;
}

FieldFunction make_quad(int d) {
    FieldFunction f;
    f.label = "quad";
    f.dim = d;
    f.value = [](const Vec& x) { return 0.5 * dot(x, x); };
    f.gradient = [](const Vec& x) { return x; };
    f.hessian = [d](const Vec&) { return Mat::identity(d); };
    f.smoothness_note = "polynomial; in W^2_q for all q";
    return f;
}

FieldFunction make_expdir(int d) {
    FieldFunction f;
    f.label = "expdir";
    f.dim = d;
    const Vec a = unit_diagonal(d);
    f.value = [a](const Vec& x) { return std::exp(dot(a, x)); };
    f.gradient = [a](const Vec& x) {
        const double v = std::exp(dot(a, x));
        return v * a;
    };
    f.hessian = [a, d](const Vec& x) {
        const double v = std::exp(dot(a, x));
        Mat h(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) h(i, j) = a[i] * a[j] * v;
        return h;
    };
    f.smoothness_note = "analytic; in W^2_q for all q";
    return f;
}

FieldFunction make_ridge(int d) {
    FieldFunction f;
    f.label = "ridge";
    f.dim = d;
    const Vec a = unit_diagonal(d);
    f.value = [a](const Vec& x) {
        const double t = dot(a, x);
        return t * t;
    };
    f.gradient = [a](const Vec& x) { return (2.0 * dot(a, x)) * a; };
    f.hessian = [a, d](const Vec&) {
        Mat h(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) h(i, j) = 2.0 * a[i] * a[j];
        return h;
    };
    f.smoothness_note = "polynomial ridge; gradient parallel to the diagonal everywhere";
    return f;
}

FieldFunction make_singular_beta(int d) {
    constexpr double beta = 0.5;
    FieldFunction f;
    f.label = "singular_beta";
    f.dim = d;
    Vec c(d);
    for (int i = 0; i < d; ++i) c[i] = 0.5;
    f.value = [c](const Vec& x) { return std::pow(std::sqrt(dist2_sq(x, c)), beta); };
    f.gradient = [c, d](const Vec& x) {
        const double r2 = dist2_sq(x, c);
        Vec g(d);
        if (r2 == 0.0) return g;  // undefined at the singular point; 0 by convention
        const double scale = beta * std::pow(r2, 0.5 * beta - 1.0);
        for (int i = 0; i < d; ++i) g[i] = scale * (x[i] - c[i]);
        return g;
    };
    f.hessian = [c, d](const Vec& x) {
        const double r2 = dist2_sq(x, c);
        Mat h(d);
        if (r2 == 0.0) return h;
        const double s = beta * std::pow(r2, 0.5 * beta - 1.0);
        const double t = beta * (beta - 2.0) * std::pow(r2, 0.5 * beta - 2.0);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double v = t * (x[i] - c[i]) * (x[j] - c[j]);
                if (i == j) v += s;
                h(i, j) = h(j, i) = v;
            }
        return h;
    };
    f.singular_points = {c};
    f.smoothness_note = "|x-c|^(1/2); in W^2_1 but not W^2_2 for d = 2";
    return f;
}

FieldFunction make_const(int d) {
    FieldFunction f;
    f.label = "const";
    f.dim = d;
    f.value = [](const Vec&) { return 1.0; };
    f.gradient = [d](const Vec&) { return Vec(d); };
    f.hessian = [d](const Vec&) { return Mat(d); };
    f.smoothness_note = "constant";
    return f;
}

}  // namespace

std::vector<FieldFunction> corpus(int d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("corpus: dimension out of range");
    std::vector<FieldFunction> out;
    out.push_back(make_quad(d));
    out.push_back(make_expdir(d));
    out.push_back(make_ridge(d));
    out.push_back(make_singular_beta(d));
    for (int m : {1, 2, 4, 8}) out.push_back(BumpFamily{m, d}.field());
    out.push_back(make_const(d));
    return out;
}

FieldFunction find_function(const std::string& label, int d) {
    if (label.rfind("bump:m=", 0) == 0) {
        const std::string arg = label.substr(7);
        std::size_t pos = 0;
        int m = 0;
        try {
            m = std::stoi(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("find_function: bad bump parameter '" + arg + "'");
        }
        if (pos != arg.size() || m < 1)
            throw std::invalid_argument("find_function: bad bump parameter '" + arg + "'");
        return BumpFamily{m, d}.field();
    }
    for (FieldFunction& f : corpus(d))
        if (f.label == label) return f;
    throw std::invalid_argument("find_function: unknown function '" + label + "'");
}

}  // namespace convpart
