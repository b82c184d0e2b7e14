#include "convpart/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "convpart/format.hpp"
#include "convpart/svg.hpp"

namespace convpart {

namespace {

bool known_method(const std::string& m) {
    return m == "algorithm1" || m == "uniform" || m == "adaptive_dyadic";
}

}  // namespace

void ExperimentConfig::validate() const {
    if (budgets.empty()) throw std::invalid_argument("config: budgets must be non-empty");
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        if (budgets[i] < 1) throw std::invalid_argument("config: budgets must be >= 1");
        if (i > 0 && budgets[i] <= budgets[i - 1])
            throw std::invalid_argument("config: budgets must be strictly increasing");
    }
    if (methods.empty()) throw std::invalid_argument("config: methods must be non-empty");
    for (const std::string& m : methods)
        if (!known_method(m)) throw std::invalid_argument("config: unknown method '" + m + "'");
    quadrature.validate();
    find_function(function_label, d);                  // throws for unknown labels
    alpha_of(d, p, q);                                  // throws when inadmissible
    if (run_lower_bound_check && function_label.rfind("bump:m=", 0) != 0)
        throw std::invalid_argument("config: --lower-bound-check needs a bump:m=K function");
}

ExperimentConfig parse_experiment_config_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    ExperimentConfig c;
    if (j.contains("function")) c.function_label = j["function"].get<std::string>();
    if (j.contains("d")) c.d = j["d"].get<int>();
    if (j.contains("p")) {
        if (j["p"].is_string()) {
            if (j["p"].get<std::string>() != "inf")
                throw std::invalid_argument("config: p must be a number or \"inf\"");
            c.p = std::numeric_limits<double>::infinity();
        } else {
            c.p = j["p"].get<double>();
        }
    }
    if (j.contains("q")) c.q = j["q"].get<double>();
    if (j.contains("budgets")) c.budgets = j["budgets"].get<std::vector<long long>>();
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("quadrature")) {
        const auto& cfg = j["quadrature"];
        if (cfg.contains("gl_points_per_axis")) c.quadrature.gl_points_per_axis = cfg["gl_points_per_axis"].get<int>();
        if (cfg.contains("samples_per_cube")) c.quadrature.samples_per_cube = cfg["samples_per_cube"].get<int>();
        if (cfg.contains("seed")) c.quadrature.seed = cfg["seed"].get<std::uint64_t>();
        if (cfg.contains("singular_exclusion_radius"))
            c.quadrature.singular_exclusion_radius = cfg["singular_exclusion_radius"].get<double>();
        if (cfg.contains("p_inf_sample_boost")) c.quadrature.p_inf_sample_boost = cfg["p_inf_sample_boost"].get<int>();
    }
    if (j.contains("outputs")) {
        const auto& o = j["outputs"];
        if (o.contains("results")) c.outputs.results_csv = o["results"].get<std::string>();
        if (o.contains("rates")) c.outputs.rates_csv = o["rates"].get<std::string>();
        if (o.contains("partition")) c.outputs.partition_json = o["partition"].get<std::string>();
        if (o.contains("svg")) c.outputs.svg = o["svg"].get<std::string>();
        if (o.contains("trace_prefix")) c.outputs.trace_prefix = o["trace_prefix"].get<std::string>();
    }
    if (j.contains("timing")) c.record_timing = j["timing"].get<bool>();
    if (j.contains("lower_bound_check")) c.run_lower_bound_check = j["lower_bound_check"].get<bool>();
    return c;
}

namespace {

unsigned thread_cap() {
    unsigned n = 0;
    if (const char* env = std::getenv("CONVPART_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0') n = static_cast<unsigned>(v);
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

struct Task {
    std::string method;
    long long budget;
};

struct TaskResult {
    RunRow row;
    RefinementTrace trace;
    bool has_trace = false;
    PiecewiseConstant approx;
    bool keep_approx = false;
    int empty_slabs = 0;
    std::string failure;
};

std::string format_p(double p) { return std::isinf(p) ? "inf" : format_number(p); }

std::string make_results_csv(const ExperimentConfig& config, const std::vector<RunRow>& rows) {
    std::string out = "label,d,p,q,method,N,cells,error,seconds\n";
    for (const RunRow& r : rows) {
        out += config.function_label;
        out += ',';
        out += std::to_string(config.d);
        out += ',';
        out += format_p(config.p);
        out += ',';
        out += format_number(config.q);
        out += ',';
        out += r.method;
        out += ',';
        out += std::to_string(r.budget);
        out += ',';
        out += std::to_string(r.cells);
        out += ',';
        out += format_number(r.error);
        out += ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
        out += buf;
        out += '\n';
    }
    return out;
}

struct MethodSeries {
    std::string label;
    int d = 2;
    double p = 2.0;
    double q = 2.0;
    std::string method;
    std::vector<RunRow> rows;
};

std::string make_rates_csv(const std::vector<MethodSeries>& series) {
    std::string out = "label,method,slope,r2,predicted,regime\n";
    for (const MethodSeries& s : series) {
        double predicted = -1.0 / s.d;
        std::string regime = "baseline";
        if (s.method == "algorithm1") {
            const PredictedRate pr = predicted_rate(s.d, s.p, s.q);
            predicted = -pr.rate;
            regime = to_string(pr.regime);
        }
        // single-cell partitions sit outside the asymptotic regime
        std::vector<std::pair<long long, double>> pts;
        for (const RunRow& r : s.rows)
            if (r.cells > 1 && r.error > 0.0 && std::isfinite(r.error))
                pts.emplace_back(r.budget, r.error);

        out += s.label;
        out += ',';
        out += s.method;
        out += ',';
        if (pts.size() >= 3) {
            const RateFit fit = fit_rate(pts);
            out += format_number(fit.slope);
            out += ',';
            out += format_number(fit.r_squared);
        } else {
            out += "NA,NA";
        }
        out += ',';
        out += format_number(predicted);
        out += ',';
        out += regime;
        out += '\n';
    }
    return out;
}

bool write_file(const std::string& path, const std::string& text, std::vector<std::string>& diagnostics) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.flush();
    if (!f) {
        diagnostics.push_back("failed to write " + path);
        return false;
    }
    return true;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;

    const FieldFunction f = find_function(config.function_label, config.d);
    const long long largest = config.budgets.back();
    const bool want_dump = !config.outputs.partition_json.empty() || !config.outputs.svg.empty();
    const std::string dump_method =
        std::count(config.methods.begin(), config.methods.end(), std::string("algorithm1"))
            ? "algorithm1"
            : config.methods.front();

    std::vector<Task> tasks;
    for (const std::string& method : config.methods)
        for (long long budget : config.budgets) tasks.push_back({method, budget});

    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            TaskResult& r = results[i];
            r.row.method = t.method;
            r.row.budget = t.budget;
            const auto start = std::chrono::steady_clock::now();
            try {
                ApproximationProblem problem{f, config.d, config.p, config.q, t.budget};
                BuildResult built;
                if (t.method == "algorithm1") {
                    built = build(problem, config.quadrature);
                    r.has_trace = true;
                } else if (t.method == "adaptive_dyadic") {
                    built = build_isotropic_baseline(problem, config.quadrature,
                                                     BaselineMode::AdaptiveDyadic);
                    r.has_trace = true;
                } else {
                    built = build_isotropic_baseline(problem, config.quadrature,
                                                     BaselineMode::Uniform);
                }
                r.row.cells = static_cast<long long>(built.approx.cell_count());
                r.row.error = lp_error(f, built.approx, config.p, config.quadrature);
                r.trace = std::move(built.trace);
                r.empty_slabs = built.empty_slab_fallbacks;
                if (want_dump && t.method == dump_method && t.budget == largest) {
                    r.approx = std::move(built.approx);
                    r.keep_approx = true;
                }
            } catch (const std::exception& e) {
                r.failure = e.what();
            }
            const auto stop = std::chrono::steady_clock::now();
            r.row.seconds = config.record_timing
                                ? std::chrono::duration<double>(stop - start).count()
                                : 0.0;
        }
    };
    const unsigned nthreads =
        std::min<std::size_t>(thread_cap(), std::max<std::size_t>(tasks.size(), 1));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    const PiecewiseConstant* dump_approx = nullptr;
    for (TaskResult& r : results) {
        if (!r.failure.empty()) {
            report.diagnostics.push_back(r.row.method + " N=" + std::to_string(r.row.budget) +
                                         ": " + r.failure);
            report.ok = false;
            continue;
        }
        report.rows.push_back(r.row);
        if (r.empty_slabs > 0)
            report.diagnostics.push_back(
                "warning: " + r.row.method + " N=" + std::to_string(r.row.budget) + ": " +
                std::to_string(r.empty_slabs) + " slab(s) caught no sample, fallback mean used");
        if (r.has_trace)
            report.traces.emplace_back(r.row.method + "_N" + std::to_string(r.row.budget),
                                       std::move(r.trace));
        if (r.keep_approx) dump_approx = &r.approx;
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const RunRow& a, const RunRow& b) {
        return a.budget != b.budget ? a.budget < b.budget : a.method < b.method;
    });

    report.results_csv = make_results_csv(config, report.rows);
    std::vector<MethodSeries> series;
    for (const std::string& method : config.methods) {
        MethodSeries s{config.function_label, config.d, config.p, config.q, method, {}};
        for (const RunRow& r : report.rows)
            if (r.method == method) s.rows.push_back(r);
        if (!s.rows.empty()) series.push_back(std::move(s));
    }
    std::sort(series.begin(), series.end(),
              [](const MethodSeries& a, const MethodSeries& b) { return a.method < b.method; });
    report.rates_csv = make_rates_csv(series);

    if (config.run_lower_bound_check) {
        int m = 0;
        std::sscanf(config.function_label.c_str(), "bump:m=%d", &m);
        report.lower_bound = lower_bound_check(m, config.d, config.quadrature);
        if (!report.lower_bound->pass) report.ok = false;
    }

    // artifacts
    if (!config.outputs.results_csv.empty())
        report.ok &= write_file(config.outputs.results_csv, report.results_csv, report.diagnostics);
    if (!config.outputs.rates_csv.empty())
        report.ok &= write_file(config.outputs.rates_csv, report.rates_csv, report.diagnostics);
    if (!config.outputs.trace_prefix.empty()) {
        for (const auto& [name, trace] : report.traces)
            report.ok &= write_file(config.outputs.trace_prefix + name + ".csv", trace.to_csv(),
                                    report.diagnostics);
    }
    if (want_dump) {
        if (dump_approx) {
            const std::string dump =
                dump_partition_json(dump_approx->partition, &dump_approx->values);
            if (!config.outputs.partition_json.empty())
                report.ok &= write_file(config.outputs.partition_json, dump, report.diagnostics);
            if (!config.outputs.svg.empty()) {
                if (config.d == 2) {
                    report.ok &= write_file(
                        config.outputs.svg,
                        render_partition_svg(dump_approx->partition.domain,
                                             dump_approx->partition.cells,
                                             &dump_approx->values),
                        report.diagnostics);
                } else {
                    report.diagnostics.push_back("rendering supports d=2 only");
                    report.ok = false;
                }
            }
        } else {
            report.diagnostics.push_back("partition dump requested but no build succeeded");
            report.ok = false;
        }
    }
    return report;
}

std::string rates_csv_from_results(const std::string& results_csv_text) {
    std::istringstream in(results_csv_text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("rates: empty results CSV");
    if (line.rfind("label,d,p,q,method,N,cells,error", 0) != 0)
        throw std::invalid_argument("rates: unexpected results CSV header");

    std::vector<MethodSeries> series;
    auto find_series = [&](const std::string& label, int d, double p, double q,
                           const std::string& method) -> MethodSeries& {
        for (MethodSeries& s : series)
            if (s.label == label && s.method == method) return s;
        series.push_back({label, d, p, q, method, {}});
        return series.back();
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t c = line.find(',', pos);
            if (c == std::string::npos) {
                parts.push_back(line.substr(pos));
                break;
            }
            parts.push_back(line.substr(pos, c - pos));
            pos = c + 1;
        }
        if (parts.size() < 9) throw std::invalid_argument("rates: malformed row '" + line + "'");
        RunRow row;
        row.method = parts[4];
        row.budget = std::stoll(parts[5]);
        row.cells = std::stoll(parts[6]);
        row.error = std::stod(parts[7]);
        row.seconds = std::stod(parts[8]);
        const double p = parts[2] == "inf" ? std::numeric_limits<double>::infinity()
                                           : std::stod(parts[2]);
        find_series(parts[0], std::stoi(parts[1]), p, std::stod(parts[3]), parts[4])
            .rows.push_back(row);
    }
    std::sort(series.begin(), series.end(), [](const MethodSeries& a, const MethodSeries& b) {
        return a.label != b.label ? a.label < b.label : a.method < b.method;
    });
    return make_rates_csv(series);
}

}  // namespace convpart
