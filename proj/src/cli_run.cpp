#include "borndev/cli_run.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "borndev/cli_config.hpp"
#include "borndev/experiment.hpp"

namespace borndev::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_cell(const ordered_json& v) {
    if (v.is_number_float()) return fmt17(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void emit_record(const ordered_json& record, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << record.dump(2) << "\n";
        return;
    }
    std::string header, row;
    for (const auto& [key, value] : record.items()) {
        if (!header.empty()) {
            header += ',';
            row += ',';
        }
        header += key;
        row += csv_cell(value);
    }
    out << header << "\n" << row << "\n";
}

void emit_rows(const std::vector<ordered_json>& rows, const std::string& format,
               std::ostream& out) {
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) arr.push_back(r);
        out << arr.dump(2) << "\n";
        return;
    }
    bool first = true;
    for (const auto& r : rows) {
        if (first) {
            std::string header;
            for (const auto& [key, _] : r.items()) {
                if (!header.empty()) header += ',';
                header += key;
            }
            out << header << "\n";
            first = false;
        }
        std::string row;
        for (const auto& [_, value] : r.items()) {
            if (!row.empty()) row += ',';
            row += csv_cell(value);
        }
        out << row << "\n";
    }
}

const std::string& require(const std::optional<std::string>& field, const char* name) {
    if (!field) throw ConfigError(std::string(name) + ": required but not provided");
    return *field;
}

std::string output_format(const RunConfig& config, const char* fallback) {
    const std::string fmt = config.output.value_or(fallback);
    if (fmt != "csv" && fmt != "json")
        throw ConfigError("output: expected `csv` or `json`, got `" + fmt + "`");
    return fmt;
}

ordered_json report_json(double alpha, const deviation::DeviationReport& r) {
    return {{"alpha", alpha},
            {"c1", r.c1},
            {"c2", r.c2},
            {"c3", r.c3},
            {"delta", r.delta},
            {"p_first_order", r.p_first_order},
            {"p_exact", r.p_exact},
            {"validity_warning", r.validity_warning},
            {"clamped", r.clamped}};
}

void cmd_prob(const RunConfig& config, std::ostream& out) {
    const auto psi = parse_state(require(config.state, "state"));
    const auto interval = parse_interval(require(config.interval, "interval"));
    const double alpha = config.alpha.value_or(0.0);
    const auto report = deviation::analyze(psi, interval, {alpha}, tolerance_from(config));
    if (report.first_order_out_of_range)
        throw OutOfRange("first-order probability left [0,1]: alpha too large");
    emit_record(report_json(alpha, report), output_format(config, "json"), out);
}

void cmd_delta(const RunConfig& config, std::ostream& out) {
    const auto psi = parse_state(require(config.state, "state"));
    const auto interval = parse_interval(require(config.interval, "interval"));
    const double alpha = config.alpha.value_or(0.0);
    const auto report = deviation::analyze(psi, interval, {alpha}, tolerance_from(config));
    emit_record({{"alpha", alpha},
                 {"c1", report.c1},
                 {"c2", report.c2},
                 {"c3", report.c3},
                 {"delta", report.delta},
                 {"validity_warning", report.validity_warning}},
                output_format(config, "json"), out);
}

void cmd_optimize(const RunConfig& config, std::ostream& out) {
    const auto psi = parse_state(require(config.state, "state"));
    const double alpha = config.alpha.value_or(0.0);
    const std::string mode_name = config.mode.value_or("symmetric");
    deviation::OptimizeMode mode;
    if (mode_name == "symmetric")
        mode = deviation::OptimizeMode::kLengthSymmetric;
    else if (mode_name == "free")
        mode = deviation::OptimizeMode::kFreeEndpoints;
    else
        throw ConfigError("mode: expected `symmetric` or `free`, got `" + mode_name + "`");

    const auto result = deviation::optimize_interval(psi, {alpha}, mode, tolerance_from(config));
    ordered_json record{{"alpha", alpha},
                        {"mode", mode_name},
                        {"interval_lo", result.interval.lo},
                        {"interval_hi", result.interval.hi},
                        {"length", result.interval.hi - result.interval.lo},
                        {"delta", result.delta},
                        {"degenerate", result.degenerate}};
    if (const auto* g = std::get_if<states::GaussianState>(&psi.repr())) {
        const auto optimum = deviation::gaussian_max_delta(g->dispersion, alpha);
        record["analytic_length_max"] = optimum.length_max;
        record["analytic_delta_max"] = optimum.delta_max;
        record["gamma"] = optimum.gamma;
    }
    if (result.degenerate)
        record["note"] = alpha == 0.0 ? "alpha = 0: no deviation for any interval"
                                      : "no interval produces a nonzero deviation";
    emit_record(record, output_format(config, "json"), out);
}

void cmd_scan(const RunConfig& config, std::ostream& out) {
    const auto psi = parse_state(require(config.state, "state"));
    const auto lengths = parse_lengths(require(config.lengths, "lengths"));
    const double alpha = config.alpha.value_or(0.0);
    const auto rows = deviation::scan_delta(psi, {alpha}, lengths, tolerance_from(config));
    std::vector<ordered_json> records;
    records.reserve(rows.size());
    for (const auto& r : rows)
        records.push_back({{"L", r.length},
                           {"c1", r.c1},
                           {"delta", r.delta},
                           {"p_first_order", r.p_first_order},
                           {"p_exact", r.p_exact}});
    emit_rows(records, output_format(config, "csv"), out);
}

void cmd_simulate(const RunConfig& config, std::ostream& out) {
    experiment::ExperimentPlan plan{parse_state(require(config.state, "state")),
                                    parse_interval(require(config.interval, "interval")),
                                    config.alpha.value_or(0.0),
                                    config.n.value_or(0),
                                    config.seed.value_or(0)};
    if (!config.n) throw ConfigError("n: required but not provided");
    const auto tol = tolerance_from(config);
    const auto analytic = deviation::analyze(plan.psi, plan.interval, {plan.alpha}, tol);
    const auto outcome = experiment::run_experiment(plan, tol);
    emit_record({{"alpha", plan.alpha},
                 {"n", outcome.n},
                 {"seed", plan.seed},
                 {"hits", outcome.hits},
                 {"empirical_p", outcome.empirical_p},
                 {"p_born", analytic.c1},
                 {"p_exact", analytic.p_exact},
                 {"z_born", outcome.z_born},
                 {"p_value_born", outcome.p_value_born},
                 {"p_value_generalized", outcome.p_value_generalized}},
                output_format(config, "json"), out);
}

void cmd_power(const RunConfig& config, std::ostream& out) {
    const auto psi = parse_state(require(config.state, "state"));
    const auto interval = parse_interval(require(config.interval, "interval"));
    const double alpha = config.alpha.value_or(0.0);
    const double significance = config.significance.value_or(0.05);
    const double power = config.power.value_or(0.8);
    const auto report = deviation::analyze(psi, interval, {alpha}, tolerance_from(config));
    // The simulated data follow the exact generalized density, so the
    // detectable difference is p_exact - c1 rather than the first-order delta.
    const double delta = report.p_exact - report.c1;
    const auto n_required =
        experiment::required_sample_size({report.c1, delta, significance, power});
    emit_record({{"alpha", alpha},
                 {"p_born", report.c1},
                 {"p_exact", report.p_exact},
                 {"delta", delta},
                 {"delta_first_order", report.delta},
                 {"significance", significance},
                 {"power", power},
                 {"n_required", n_required}},
                output_format(config, "json"), out);
}

void cmd_design(const RunConfig& config, std::ostream& out) {
    if (!config.m) throw ConfigError("m: required but not provided");
    if (!config.s) throw ConfigError("s: required but not provided");
    const auto design = deviation::required_dispersion(*config.m, *config.s);
    emit_record({{"m", *config.m},
                 {"s", *config.s},
                 {"gamma", deviation::gamma_constant()},
                 {"b_exact", design.dispersion_exact},
                 {"b_magnitude", design.dispersion_magnitude},
                 {"exponent", design.exponent}},
                output_format(config, "json"), out);
}

void add_common_options(CLI::App* sub, RunConfig& flags, std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file (flags override file values)");
    sub->add_option_function<std::string>(
        "--state", [&](const std::string& v) { flags.state = v; },
        "uniform:H=..., step:H=...,k=..., gaussian:b=...[,k=...] or tabulated:<path>");
    sub->add_option_function<std::string>(
        "--interval", [&](const std::string& v) { flags.interval = v; },
        "detection interval `lo,hi` (-inf/inf allowed)");
    sub->add_option_function<double>(
        "--alpha", [&](double v) { flags.alpha = v; }, "detection-nonlinearity dispersion");
    sub->add_option_function<double>(
        "--abs-tol", [&](double v) { flags.abs_tol = v; }, "quadrature absolute tolerance");
    sub->add_option_function<double>(
        "--rel-tol", [&](double v) { flags.rel_tol = v; }, "quadrature relative tolerance");
    sub->add_option_function<std::string>(
        "--output", [&](const std::string& v) { flags.output = v; }, "csv or json");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t v) { flags.seed = v; }, "simulation seed");
    sub->add_option_function<std::int64_t>(
        "--n", [&](std::int64_t v) { flags.n = v; }, "number of trials");
    sub->add_option_function<std::string>(
        "--lengths", [&](const std::string& v) { flags.lengths = v; },
        "length grid `start:stop:count`");
    sub->add_option_function<double>(
        "--significance", [&](double v) { flags.significance = v; }, "test level");
    sub->add_option_function<double>(
        "--power", [&](double v) { flags.power = v; }, "target power");
    sub->add_option_function<int>("--m", [&](int v) { flags.m = v; },
                                  "alpha magnitude exponent (alpha ~ 10^-m)");
    sub->add_option_function<int>("--s", [&](int v) { flags.s = v; },
                                  "target deviation exponent (delta ~ 10^-s)");
    sub->add_option_function<std::string>(
        "--mode", [&](const std::string& v) { flags.mode = v; },
        "optimize mode: symmetric or free");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized Born rule probabilities, deviation curves and "
                 "detection-experiment simulation"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        void (*handler)(const RunConfig&, std::ostream&);
    };
    const Sub subs[] = {
        {"prob", "Born, first-order and exact generalized probabilities", cmd_prob},
        {"delta", "first-order deviation and its ingredients", cmd_delta},
        {"optimize", "interval maximizing the deviation", cmd_optimize},
        {"scan", "deviation curve over symmetric interval lengths", cmd_scan},
        {"simulate", "Monte Carlo detection run with hypothesis tests", cmd_simulate},
        {"power", "sample size needed to resolve the deviation", cmd_power},
        {"design", "Gaussian dispersion needed for a target deviation", cmd_design},
    };

    RunConfig flags;
    std::string config_path;
    std::vector<std::pair<CLI::App*, const Sub*>> bound;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_common_options(sub, flags, config_path);
        bound.emplace_back(sub, &s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig config = flags;
        if (!config_path.empty()) config = merged(flags, load_config_file(config_path));
        for (const auto& [sub, s] : bound)
            if (sub->parsed()) s->handler(config, out);
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "computation error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace borndev::cli
