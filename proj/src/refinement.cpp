#include "convpart/refinement.hpp"

#include <cmath>
#include <stdexcept>

#include "convpart/format.hpp"

namespace convpart {

RefinementParams RefinementParams::lemma1(double alpha, double gamma) {
    RefinementParams p{alpha, gamma, RefinementRegime::Lemma1};
    p.validate();
    return p;
}

RefinementParams RefinementParams::lemma2(double alpha, double gamma) {
    RefinementParams p{alpha, gamma, RefinementRegime::Lemma2};
    p.validate();
    return p;
}

void RefinementParams::validate() const {
    if (!(alpha >= 0.0) || !(gamma >= 0.0))
        throw std::invalid_argument("RefinementParams: alpha and gamma must be non-negative");
    if (regime == RefinementRegime::Lemma1) {
        if (!(gamma <= alpha))
            throw std::invalid_argument("RefinementParams: Lemma1 regime needs gamma <= alpha");
    } else {
        if (!(0.0 < alpha && alpha < gamma))
            throw std::invalid_argument("RefinementParams: Lemma2 regime needs 0 < alpha < gamma");
    }
}

long long n_gamma(const Cube& cell, const Cube& domain, double gamma) {
    if (cell.dim() != domain.dim()) throw std::invalid_argument("n_gamma: dimension mismatch");
    if (!(gamma >= 0.0)) throw std::invalid_argument("n_gamma: gamma must be non-negative");
    const double t = gamma * double(domain.dim()) * double(cell.level);
    const double r = std::round(t);
    if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) {
        // exact power of two (covers gamma = 1/d and gamma = 0)
        const long long e = static_cast<long long>(r);
        if (e < 0 || e >= 62) throw std::invalid_argument("n_gamma: exponent out of range");
        return 1ll << e;
    }
    const double x = std::exp2(t);
    if (!(x < 9.0e18)) throw std::invalid_argument("n_gamma: value out of range");
    return static_cast<long long>(std::floor(x * (1.0 + 1e-12) + 1e-12));
}

double g_alpha(const Cube& cell, double phi_value, double alpha) {
    if (phi_value < 0.0) throw std::invalid_argument("g_alpha: negative energy");
    return std::pow(cell.volume(), alpha) * phi_value;
}

std::string RefinementTrace::to_csv() const {
    std::string out = "k,G_alpha,N_k,marked,t_k,cells\n";
    for (const TraceRow& r : rows) {
        out += std::to_string(r.k);
        out += ',';
        out += format_number(r.g_alpha);
        out += ',';
        out += std::to_string(r.n_k);
        out += ',';
        out += std::to_string(r.marked);
        out += ',';
        out += std::to_string(r.t_k);
        out += ',';
        out += std::to_string(r.cells);
        out += '\n';
    }
    return out;
}

RefineResult refine_to_budget(const std::function<double(const Cube&)>& phi,
                              const Cube& domain, const RefinementParams& params,
                              long long budget) {
    params.validate();
    if (budget < 1) throw std::invalid_argument("refine_to_budget: budget must be >= 1");
    const int d = domain.dim();

    struct CellState {
        Cube cube;
        double phi;
        double g;
        long long n_gamma;
    };

    auto make_state = [&](const Cube& c) {
        CellState s;
        s.cube = c;
        s.phi = phi(c);
        if (!(s.phi >= 0.0) || !std::isfinite(s.phi))
            throw std::invalid_argument("refine_to_budget: energy must be finite and non-negative");
        s.g = g_alpha(c, s.phi, params.alpha);
        s.n_gamma = n_gamma(c, domain, params.gamma);
        return s;
    };

    RefineResult res;
    res.trace.dim = d;
    res.trace.alpha = params.alpha;
    res.trace.gamma = params.gamma;

    std::vector<CellState> cells = {make_state(domain)};
    double g_max = cells[0].g;
    res.trace.rows.push_back({0, g_max, cells[0].n_gamma, 0, 0, 1, 0.0});

    auto snapshot = [&](std::vector<CellState>& cs) {
        res.partition.domain = domain;
        res.partition.generation = 0;
        res.partition.cells.clear();
        res.cell_phi.clear();
        for (const CellState& s : cs) {
            res.partition.cells.push_back(s.cube);
            res.cell_phi.push_back(s.phi);
        }
    };
    snapshot(cells);
    int kept_generation = 0;

    // Zero total energy: nothing to refine, the singleton partition is exact.
    if (g_max <= 0.0) return res;

    const double shrink = std::exp2(-double(d) * params.alpha);
    constexpr int kMaxGenerations = 200;
    bool budget_reached = false;
    for (int k = 1; k <= kMaxGenerations; ++k) {
        const double threshold = shrink * g_max;
        std::vector<CellState> next;
        next.reserve(cells.size() * 2);
        long long marked = 0, t_k = 0;
        for (const CellState& s : cells) {
            if (s.g >= threshold) {
                ++marked;
                t_k += s.n_gamma;
                for (const Cube& ch : s.cube.children()) next.push_back(make_state(ch));
            } else {
                next.push_back(s);
            }
        }
        if (marked == 0)
            throw std::logic_error("refine_to_budget: no cube reached the marking threshold");

        long long n_k = 0;
        double g_next = 0.0;
        for (const CellState& s : next) {
            n_k += s.n_gamma;
            g_next = std::max(g_next, s.g);
        }
        res.trace.rows.push_back({k, g_next, n_k, marked, t_k,
                                  static_cast<long long>(next.size()), threshold});

        if (n_k > budget) {
            budget_reached = true;  // the trace keeps this rejected generation
            break;
        }

        cells.swap(next);
        g_max = g_next;
        kept_generation = k;
        snapshot(cells);
    }
    if (!budget_reached)
        throw std::runtime_error("refine_to_budget: generation cap hit before reaching the budget");
    res.partition.generation = kept_generation;
    res.kept_row = static_cast<std::size_t>(kept_generation);
    return res;
}

RefineResult refine_to_budget(const FieldFunction& f, const Cube& domain,
                              const RefinementParams& params, double q, long long budget,
                              const QuadratureConfig& config) {
    return refine_to_budget(
        [&](const Cube& c) { return energy_phi(f, c, q, config); }, domain, params, budget);
}

}  // namespace convpart
