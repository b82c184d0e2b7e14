#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace convpart {

// Hard cap on the spatial dimension. Keeps points and matrices on the
// stack; evaluation loops run tens of millions of times per study.
inline constexpr int kMaxDim = 6;

/// Fixed-capacity coordinate vector (a point or direction in R^d).
struct Vec {
    std::array<double, kMaxDim> v{};
    int n = 0;

    Vec() = default;
    explicit Vec(int dim) : n(dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
    }
    Vec(std::initializer_list<double> xs) {
        if (xs.size() < 1 || xs.size() > static_cast<std::size_t>(kMaxDim))
            throw std::invalid_argument("Vec: dimension out of range");
        n = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) v[i++] = x;
    }

    int dim() const { return n; }
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    bool operator==(const Vec& o) const {
        if (n != o.n) return false;
        for (int i = 0; i < n; ++i)
            if (v[i] != o.v[i]) return false;
        return true;
    }
};

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.n);
    for (int i = 0; i < a.n; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.n);
    for (int i = 0; i < a.n; ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double s, const Vec& a) {
    Vec r(a.n);
    for (int i = 0; i < a.n; ++i) r[i] = s * a[i];
    return r;
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Squared Euclidean distance between two points of equal dimension.
inline double dist2_sq(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Dense symmetric d x d matrix stored row-major (Hessians).
struct Mat {
    std::array<double, kMaxDim * kMaxDim> m{};
    int n = 0;

    Mat() = default;
    explicit Mat(int dim) : n(dim) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Mat: dimension out of range");
    }

    int dim() const { return n; }
    double& operator()(int i, int j) { return m[i * kMaxDim + j]; }
    double operator()(int i, int j) const { return m[i * kMaxDim + j]; }

    static Mat identity(int dim) {
        Mat r(dim);
        for (int i = 0; i < dim; ++i) r(i, i) = 1.0;
        return r;
    }
};

}  // namespace convpart
