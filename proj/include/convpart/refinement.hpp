#pragma once

#include <functional>
#include <string>
#include <vector>

#include "convpart/functions.hpp"
#include "convpart/geometry.hpp"
#include "convpart/quadrature.hpp"

namespace convpart {

enum class RefinementRegime {
    Lemma1,  // 0 <= gamma <= alpha, Phi subadditive
    Lemma2,  // 0 < alpha < gamma, Phi^(gamma/alpha) subadditive
};

struct RefinementParams {
    double alpha = 1.0;
    double gamma = 0.5;
    RefinementRegime regime = RefinementRegime::Lemma1;

    static RefinementParams lemma1(double alpha, double gamma);
    static RefinementParams lemma2(double alpha, double gamma);

    /// Checks the (alpha, gamma) ordering against the declared regime.
    void validate() const;
};

/// Per-generation audit record of the greedy refinement loop.
struct TraceRow {
    int k = 0;
    double g_alpha = 0.0;     // G_alpha of the generation's partition
    long long n_k = 0;        // sum of N_gamma over cells
    long long marked = 0;     // |S_k|, cubes split to produce this generation
    long long t_k = 0;        // sum of N_gamma over the split cubes
    long long cells = 0;
    double threshold = 0.0;   // marking threshold used to produce this row
};

struct RefinementTrace {
    int dim = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::vector<TraceRow> rows;

    std::string to_csv() const;
};

struct RefineResult {
    DyadicPartition partition;
    std::vector<double> cell_phi;   // cached energy per cell, index-aligned
    RefinementTrace trace;          // includes the first over-budget generation
    std::size_t kept_row = 0;       // trace row describing the returned partition
};

/// Degree-of-freedom counter floor((|domain|/|cell|)^gamma). The volume
/// ratio is 2^(d*level) exactly, so integer exponents are resolved without
/// floating-point floor hazards.
long long n_gamma(const Cube& cell, const Cube& domain, double gamma);

/// Size-weighted local energy |cell|^alpha * phi_value.
double g_alpha(const Cube& cell, double phi_value, double alpha);

/// Greedy refinement against an arbitrary energy callback: at each step
/// split every cube whose g_alpha reaches 2^(-d*alpha) times the current
/// maximum, until the N_gamma budget would be exceeded. Returns the last
/// partition within budget; its trace keeps the rejected generation too.
RefineResult refine_to_budget(const std::function<double(const Cube&)>& phi,
                              const Cube& domain, const RefinementParams& params,
                              long long budget);

/// Convenience wrapper with phi = energy_phi(f, ., q).
RefineResult refine_to_budget(const FieldFunction& f, const Cube& domain,
                              const RefinementParams& params, double q, long long budget,
                              const QuadratureConfig& config = {});

}  // namespace convpart
