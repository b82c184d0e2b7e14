#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "convpart/experiment.hpp"
#include "convpart/format.hpp"
#include "convpart/svg.hpp"

namespace convpart {

namespace {

double parse_p(const std::string& text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("p must be a number or 'inf', got '" + text + "'");
}

RefinementTrace parse_trace_csv(const std::string& path, int d, double gamma, double alpha) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("audit: cannot open " + path);
    RefinementTrace trace;
    trace.dim = d;
    trace.gamma = gamma;
    trace.alpha = alpha;
    std::string line;
    if (!std::getline(in, line) || line.rfind("k,G_alpha,N_k,marked,t_k,cells", 0) != 0)
        throw std::invalid_argument("audit: unexpected trace CSV header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TraceRow row;
        if (std::sscanf(line.c_str(), "%d,%lf,%lld,%lld,%lld,%lld", &row.k, &row.g_alpha,
                        &row.n_k, &row.marked, &row.t_k, &row.cells) != 6)
            throw std::invalid_argument("audit: malformed trace row '" + line + "'");
        trace.rows.push_back(row);
    }
    if (trace.rows.empty()) throw std::invalid_argument("audit: trace has no rows");
    return trace;
}

int run_command(const ExperimentConfig& config) {
    const ExperimentReport report = run_experiment(config);
    if (config.outputs.results_csv.empty())
        std::cout << report.results_csv;
    else
        std::cout << "results: " << config.outputs.results_csv << "\n";
    if (config.outputs.rates_csv.empty())
        std::cout << report.rates_csv;
    else
        std::cout << "rates:   " << config.outputs.rates_csv << "\n";
    if (report.lower_bound) {
        const LowerBoundCheck& lb = *report.lower_bound;
        std::cout << "lower-bound-check: " << (lb.pass ? "PASS" : "FAIL")
                  << " error_inf=" << format_number(lb.error_inf)
                  << " (algorithm1=" << format_number(lb.error_inf_algorithm)
                  << ", uniform=" << format_number(lb.error_inf_uniform)
                  << ") threshold=" << format_number(lb.threshold) << "\n";
    }
    for (const std::string& d : report.diagnostics)
        std::cerr << (d.rfind("warning:", 0) == 0 ? "" : "error: ") << d << "\n";
    return report.ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"adaptive anisotropic convex partitions: piecewise constant "
                 "approximation studies"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "run an approximation study");
    std::string config_path, function_label, p_text;
    int d = 0;
    double q = 0.0;
    std::vector<long long> budgets;
    std::vector<std::string> methods;
    int gl_points = 0, samples = 0, boost = 0;
    std::uint64_t seed = 0;
    double exclusion = -1.0;
    std::string out_results, out_rates, dump_partition, out_svg, trace_prefix;
    bool lb_check = false, no_timing = false;
    run->add_option("--config", config_path, "JSON config file (flags override)");
    run->add_option("--function", function_label, "corpus label, e.g. quad or bump:m=4");
    run->add_option("--d", d, "dimension");
    run->add_option("--p", p_text, "error norm exponent, number or 'inf'");
    run->add_option("--q", q, "smoothness-class exponent in [1,inf)");
    run->add_option("--budgets", budgets, "cell budgets, strictly increasing")->delimiter(',');
    run->add_option("--methods", methods, "subset of algorithm1,uniform,adaptive_dyadic")
        ->delimiter(',');
    run->add_option("--gl-points", gl_points, "Gauss-Legendre points per axis");
    run->add_option("--samples", samples, "low-discrepancy samples per cube");
    run->add_option("--seed", seed, "sampling seed");
    run->add_option("--singular-exclusion", exclusion, "exclusion radius around singular points");
    run->add_option("--p-inf-boost", boost, "sup-norm sample multiplier");
    run->add_option("-o,--out-results", out_results, "results CSV path");
    run->add_option("--out-rates", out_rates, "rate summary CSV path");
    run->add_option("--dump-partition", dump_partition,
                    "JSON dump of the algorithm1 partition at the largest budget");
    run->add_option("--render-svg", out_svg, "SVG rendering of the dumped partition (d=2)");
    run->add_option("--trace-prefix", trace_prefix, "write per-run refinement trace CSVs");
    run->add_flag("--lower-bound-check", lb_check, "run the bump-family separation test");
    run->add_flag("--no-timing", no_timing, "zero the seconds column (byte-reproducible CSV)");

    // --- rates ---
    auto* rates = app.add_subcommand("rates", "recompute the rate summary from a results CSV");
    std::string rates_in, rates_out;
    rates->add_option("results", rates_in, "results CSV path")->required();
    rates->add_option("-o,--out", rates_out, "output path (default stdout)");

    // --- render ---
    auto* render = app.add_subcommand("render", "render a partition dump as SVG (d=2)");
    std::string render_in, render_out;
    render->add_option("dump", render_in, "partition dump JSON")->required();
    render->add_option("svg", render_out, "output SVG path")->required();

    // --- audit ---
    auto* audit = app.add_subcommand("audit", "check a refinement trace against its bound");
    std::string audit_in;
    int audit_d = 2;
    double audit_gamma = 0.5, audit_alpha = 1.0, audit_slack = 0.01;
    audit->add_option("trace", audit_in, "trace CSV path")->required();
    audit->add_option("--d", audit_d, "dimension")->required();
    audit->add_option("--gamma", audit_gamma, "gamma used by the refinement")->required();
    audit->add_option("--alpha", audit_alpha, "alpha used by the refinement")->required();
    audit->add_option("--slack", audit_slack, "relative slack on the bound (default 0.01)");

    try {
        app.parse(argc, const_cast<char**>(argv));

        if (run->parsed()) {
            ExperimentConfig config;
            if (!config_path.empty()) {
                std::ifstream in(config_path, std::ios::binary);
                if (!in) throw std::invalid_argument("cannot open config " + config_path);
                std::stringstream buf;
                buf << in.rdbuf();
                config = parse_experiment_config_json(buf.str());
            }
            if (run->count("--function")) config.function_label = function_label;
            if (run->count("--d")) config.d = d;
            if (run->count("--p")) config.p = parse_p(p_text);
            if (run->count("--q")) config.q = q;
            if (run->count("--budgets")) config.budgets = budgets;
            if (run->count("--methods")) config.methods = methods;
            if (run->count("--gl-points")) config.quadrature.gl_points_per_axis = gl_points;
            if (run->count("--samples")) config.quadrature.samples_per_cube = samples;
            if (run->count("--seed")) config.quadrature.seed = seed;
            if (run->count("--singular-exclusion"))
                config.quadrature.singular_exclusion_radius = exclusion;
            if (run->count("--p-inf-boost")) config.quadrature.p_inf_sample_boost = boost;
            if (run->count("-o") || run->count("--out-results"))
                config.outputs.results_csv = out_results;
            if (run->count("--out-rates")) config.outputs.rates_csv = out_rates;
            if (run->count("--dump-partition")) config.outputs.partition_json = dump_partition;
            if (run->count("--render-svg")) config.outputs.svg = out_svg;
            if (run->count("--trace-prefix")) config.outputs.trace_prefix = trace_prefix;
            if (lb_check) config.run_lower_bound_check = true;
            if (no_timing) config.record_timing = false;
            return run_command(config);
        }

        if (rates->parsed()) {
            std::ifstream in(rates_in, std::ios::binary);
            if (!in) throw std::invalid_argument("cannot open " + rates_in);
            std::stringstream buf;
            buf << in.rdbuf();
            const std::string csv = rates_csv_from_results(buf.str());
            if (rates_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(rates_out, std::ios::binary);
                out << csv;
                out.flush();
                if (!out) throw std::runtime_error("failed to write " + rates_out);
            }
            return 0;
        }

        if (render->parsed()) {
            render_svg_file(render_in, render_out);
            return 0;
        }

        if (audit->parsed()) {
            const RefinementTrace trace = parse_trace_csv(audit_in, audit_d, audit_gamma, audit_alpha);
            const RefinementRegime regime = audit_gamma <= audit_alpha
                                                ? RefinementRegime::Lemma1
                                                : RefinementRegime::Lemma2;
            const TraceAudit result = audit_trace(trace, regime, audit_slack);
            std::cout << "generations: " << trace.rows.size()
                      << "  constant: " << format_number(result.constant)
                      << "  worst-bound-ratio: " << format_number(result.worst_bound_ratio) << "\n";
            for (int k : result.violations) std::cout << "violation at generation " << k << "\n";
            std::cout << (result.pass() ? "PASS" : "FAIL") << "\n";
            return result.pass() ? 0 : 1;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace convpart
