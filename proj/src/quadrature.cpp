#include "convpart/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace convpart {

void QuadratureConfig::validate() const {
    if (gl_points_per_axis < 2) throw std::invalid_argument("QuadratureConfig: gl_points_per_axis must be >= 2");
    if (samples_per_cube < 256) throw std::invalid_argument("QuadratureConfig: samples_per_cube must be >= 256");
    if (singular_exclusion_radius < 0.0) throw std::invalid_argument("QuadratureConfig: negative exclusion radius");
    if (p_inf_sample_boost < 1) throw std::invalid_argument("QuadratureConfig: p_inf_sample_boost must be >= 1");
}

namespace {

GaussLegendre1D compute_gauss_legendre(int n) {
    // Newton iteration on the Legendre polynomial P_n over [-1,1],
    // then mapped to [0,1].
    GaussLegendre1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // refresh derivative at the converged node for the weight
        {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x);  // descending cos order -> ascending node
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

}  // namespace

const GaussLegendre1D& gauss_legendre_unit(int n) {
    if (n < 1 || n > 512) throw std::invalid_argument("gauss_legendre_unit: point count out of range");
    static std::mutex mu;
    static std::map<int, GaussLegendre1D> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

namespace {

bool near_singularity(const Vec& x, const std::vector<Vec>& singular, double radius) {
    if (radius <= 0.0 || singular.empty()) return false;
    const double r2 = radius * radius;
    for (const Vec& s : singular)
        if (dist2_sq(x, s) <= r2) return true;
    return false;
}

// Visit every tensor Gauss-Legendre node of the cell. cb(x, w) receives the
// physical point and the weight scaled by cell volume; nodes inside a
// singular exclusion ball are skipped. Returns the total retained weight.
template <class F>
double for_each_gl_node(const Cube& cell, int n, const std::vector<Vec>& singular,
                        double exclusion_radius, F&& cb) {
    const GaussLegendre1D& rule = gauss_legendre_unit(n);
    const int d = cell.dim();
    const double vol = cell.volume();
    int idx[kMaxDim] = {0};
    double kept = 0.0;
    for (;;) {
        Vec x(d);
        double w = vol;
        for (int i = 0; i < d; ++i) {
            x[i] = cell.corner[i] + cell.side * rule.nodes[idx[i]];
            w *= rule.weights[idx[i]];
        }
        if (!near_singularity(x, singular, exclusion_radius)) {
            kept += w;
            cb(x, w);
        }
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < n) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
    return kept;
}

int second_order_terms(int d) { return d + d * (d - 1) / 2; }

void check_kq(int k, double q) {
    if (k < 0 || k > 2) throw std::invalid_argument("seminorm_Wkq: unsupported derivative order");
    if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("seminorm_Wkq: q must lie in [1, inf)");
}

}  // namespace

double seminorm_Wkq(const FieldFunction& f, const Cube& cell, int k, double q,
                    const QuadratureConfig& config) {
    check_kq(k, q);
    config.validate();
    const int d = cell.dim();
    const int nterms = k == 0 ? 1 : (k == 1 ? d : second_order_terms(d));
    std::vector<CompensatedSum> acc(nterms);

    for_each_gl_node(cell, config.gl_points_per_axis, f.singular_points,
                     config.singular_exclusion_radius, [&](const Vec& x, double w) {
                         if (k == 0) {
                             acc[0].add(w * std::pow(std::abs(f.value(x)), q));
                         } else if (k == 1) {
                             const Vec g = f.gradient(x);
                             for (int i = 0; i < d; ++i)
                                 acc[i].add(w * std::pow(std::abs(g[i]), q));
                         } else {
                             const Mat h = f.hessian(x);
                             int t = 0;
                             for (int i = 0; i < d; ++i)
                                 for (int j = i; j < d; ++j)
                                     acc[t++].add(w * std::pow(std::abs(h(i, j)), q));
                         }
                     });

    double s = 0.0;
    for (const CompensatedSum& a : acc) s += std::pow(std::max(a.value(), 0.0), 1.0 / q);
    return s;
}

double EnergyFunctional::evaluate(const FieldFunction& f, const Cube& cell,
                                  const QuadratureConfig& config) const {
    check_kq(2, q);
    config.validate();
    bool first = false, second = false;
    for (int k : orders) {
        if (k == 1)
            first = true;
        else if (k == 2)
            second = true;
        else
            throw std::invalid_argument("EnergyFunctional: orders must lie in {1, 2}");
    }
    const int d = cell.dim();
    CompensatedSum acc;

    for_each_gl_node(cell, config.gl_points_per_axis, f.singular_points,
                     config.singular_exclusion_radius, [&](const Vec& x, double w) {
                         if (first) {
                             const Vec g = f.gradient(x);
                             for (int i = 0; i < d; ++i)
                                 acc.add(w * std::pow(std::abs(g[i]), q));
                         }
                         if (second) {
                             const Mat h = f.hessian(x);
                             for (int i = 0; i < d; ++i)
                                 for (int j = i; j < d; ++j)
                                     acc.add(w * std::pow(std::abs(h(i, j)), q));
                         }
                     });

    return std::max(acc.value(), 0.0);
}

double energy_phi(const FieldFunction& f, const Cube& cell, double q,
                  const QuadratureConfig& config) {
    return EnergyFunctional{q, {1, 2}}.evaluate(f, cell, config);
}

Vec average_gradient(const FieldFunction& f, const Cube& cell,
                     const QuadratureConfig& config) {
    config.validate();
    const int d = cell.dim();
    std::vector<CompensatedSum> acc(d);
    const double kept =
        for_each_gl_node(cell, config.gl_points_per_axis, f.singular_points,
                         config.singular_exclusion_radius, [&](const Vec& x, double w) {
                             const Vec g = f.gradient(x);
                             for (int i = 0; i < d; ++i) acc[i].add(w * g[i]);
                         });
    Vec mean(d);
    if (kept > 0.0)
        for (int i = 0; i < d; ++i) mean[i] = acc[i].value() / kept;
    return mean;
}

double gl_mean(const FieldFunction& f, const Cube& cell, const QuadratureConfig& config) {
    config.validate();
    CompensatedSum acc;
    const double kept =
        for_each_gl_node(cell, config.gl_points_per_axis, f.singular_points,
                         config.singular_exclusion_radius,
                         [&](const Vec& x, double w) { acc.add(w * f.value(x)); });
    return kept > 0.0 ? acc.value() / kept : 0.0;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t cube_hash(const Cube& cube, std::uint64_t seed) {
    std::uint64_t state = seed ^ 0xA24BAED4963EE407ull;
    auto mix = [&state](std::uint64_t bits) {
        state ^= bits + 0x9E3779B97F4A7C15ull + (state << 6) + (state >> 2);
        splitmix64(state);
    };
    for (int i = 0; i < cube.dim(); ++i) {
        std::uint64_t bits;
        const double c = cube.corner[i];
        std::memcpy(&bits, &c, sizeof bits);
        mix(bits);
    }
    std::uint64_t sbits;
    std::memcpy(&sbits, &cube.side, sizeof sbits);
    mix(sbits);
    mix(static_cast<std::uint64_t>(cube.level));
    mix(static_cast<std::uint64_t>(cube.dim()));
    return state;
}

double plastic_root(int d) {
    // positive root of x^(d+1) = x + 1
    double x = 1.5;
    for (int i = 0; i < 64; ++i) {
        const double f = std::pow(x, d + 1) - x - 1.0;
        const double df = (d + 1) * std::pow(x, d) - 1.0;
        const double nx = x - f / df;
        if (std::abs(nx - x) < 1e-16) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

}  // namespace

CubeSampler::CubeSampler(const Cube& cube, std::uint64_t seed)
    : cube_(cube), offset_(cube.dim()), stride_(cube.dim()) {
    const int d = cube.dim();
    const double phi = plastic_root(d);
    double p = 1.0;
    for (int i = 0; i < d; ++i) {
        p /= phi;
        stride_[i] = p - std::floor(p);
    }
    std::uint64_t state = cube_hash(cube, seed);
    for (int i = 0; i < d; ++i)
        offset_[i] = double(splitmix64(state) >> 11) * 0x1.0p-53;
}

Vec CubeSampler::point(long long n) const {
    const int d = cube_.dim();
    Vec x(d);
    for (int i = 0; i < d; ++i) {
        const double t = offset_[i] + double(n) * stride_[i];
        double u = t - std::floor(t);
        if (u >= 1.0) u = 0.0;  // guard against rounding at the seam
        x[i] = cube_.corner[i] + cube_.side * u;
    }
    return x;
}

namespace {

struct SlabLayout {
    Cube parent;
    Vec direction;
    double a;
    double b;
    int n;
};

SlabLayout slab_layout(const std::vector<SlabCell>& slabs) {
    if (slabs.empty()) throw std::invalid_argument("cell_stats: no slabs");
    SlabLayout lay;
    lay.parent = slabs.front().parent;
    lay.direction = slabs.front().direction;
    lay.n = static_cast<int>(slabs.size());
    lay.a = slabs.front().lo;
    lay.b = slabs.back().hi;
    for (std::size_t i = 1; i < slabs.size(); ++i) {
        if (!(slabs[i].parent.corner == lay.parent.corner) ||
            slabs[i].parent.side != lay.parent.side)
            throw std::invalid_argument("cell_stats: slabs must share one parent cube");
        if (slabs[i].lo != slabs[i - 1].hi)
            throw std::invalid_argument("cell_stats: slabs must stack contiguously");
    }
    return lay;
}

int bucket_index(const SlabLayout& lay, const std::vector<SlabCell>& slabs, double t) {
    int idx = int((t - lay.a) / (lay.b - lay.a) * lay.n);
    idx = std::clamp(idx, 0, lay.n - 1);
    while (idx > 0 && t < slabs[idx].lo) --idx;
    while (idx + 1 < lay.n && t >= slabs[idx].hi) ++idx;
    return idx;
}

// Deterministic in-cube point whose projection is near t along u: walk from
// the cube center along u, then clamp back into the closed cube.
Vec projection_midpoint_preimage(const Cube& cell, const Vec& u, double t) {
    Vec p = cell.center();
    const double shift = t - dot(u, p - cell.corner);
    for (int i = 0; i < cell.dim(); ++i) {
        p[i] += shift * u[i];
        p[i] = std::clamp(p[i], cell.corner[i],
                          cell.corner[i] + cell.side * (1.0 - 1e-12));
    }
    return p;
}

}  // namespace

SlabStats cell_stats(const FieldFunction& f, const std::vector<SlabCell>& slabs,
                     const QuadratureConfig& config) {
    config.validate();
    const SlabLayout lay = slab_layout(slabs);
    const int n = lay.n;

    SlabStats st;
    st.volumes.assign(n, 0.0);
    st.means.assign(n, 0.0);
    st.counts.assign(n, 0);

    std::vector<CompensatedSum> sums(n);
    const CubeSampler sampler(lay.parent, config.seed);
    const long long m = config.samples_per_cube;
    for (long long i = 0; i < m; ++i) {
        const Vec x = sampler.point(i);
        if (near_singularity(x, f.singular_points, config.singular_exclusion_radius)) continue;
        const int idx = bucket_index(lay, slabs, dot(lay.direction, x - lay.parent.corner));
        ++st.counts[idx];
        sums[idx].add(f.value(x));
    }

    const double vol = lay.parent.volume();
    for (int i = 0; i < n; ++i) {
        st.volumes[i] = double(st.counts[i]) / double(m) * vol;
        if (st.counts[i] > 0) {
            st.means[i] = sums[i].value() / double(st.counts[i]);
        } else {
            ++st.empty_slabs;
            const double t_mid = 0.5 * (slabs[i].lo + slabs[i].hi);
            st.means[i] = f.value(projection_midpoint_preimage(lay.parent, lay.direction, t_mid));
        }
    }
    return st;
}

double lp_error(const FieldFunction& f, const PiecewiseConstant& s, double p,
                const QuadratureConfig& config) {
    config.validate();
    if (!(p >= 1.0)) throw std::invalid_argument("lp_error: p must lie in [1, inf]");
    if (s.values.size() != s.partition.cells.size())
        throw std::invalid_argument("lp_error: values length mismatch");

    const ConvexPartition& part = s.partition;
    const bool sup_norm = std::isinf(p);
    const long long samples_per_cube =
        sup_norm ? (long long)config.samples_per_cube * config.p_inf_sample_boost
                 : config.samples_per_cube;

    CompensatedSum total;
    double worst = 0.0;
    for (std::size_t gi = 0; gi + 1 < part.group_begin.size(); ++gi) {
        const std::size_t begin = part.group_begin[gi];
        const std::size_t count = part.group_begin[gi + 1] - begin;
        if (count == 0) continue;
        const std::vector<SlabCell> group(part.cells.begin() + begin,
                                          part.cells.begin() + begin + count);
        const SlabLayout lay = slab_layout(group);
        const CubeSampler sampler(lay.parent, config.seed);
        const double cube_weight = lay.parent.volume() / double(samples_per_cube);
        for (long long i = 0; i < samples_per_cube; ++i) {
            const Vec x = sampler.point(i);
            if (near_singularity(x, f.singular_points, config.singular_exclusion_radius)) continue;
            const int idx = bucket_index(lay, group, dot(lay.direction, x - lay.parent.corner));
            const double diff = std::abs(f.value(x) - s.values[begin + idx]);
            if (sup_norm)
                worst = std::max(worst, diff);
            else
                total.add(cube_weight * std::pow(diff, p));
        }
    }
    return sup_norm ? worst : std::pow(std::max(total.value(), 0.0), 1.0 / p);
}

}  // namespace convpart
