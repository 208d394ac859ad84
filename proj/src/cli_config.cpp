#include "borndev/cli_config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace borndev::cli {

namespace {

double parse_real(const std::string& token, const std::string& field) {
    if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field + ": cannot parse number `" + token + "`");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

// key=value pairs after the variant tag, e.g. "H=1,k=2"
std::map<std::string, double> parse_params(const std::string& body, const std::string& field) {
    std::map<std::string, double> params;
    if (body.empty()) return params;
    for (const std::string& pair : split(body, ',')) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw ConfigError(field + ": expected key=value, got `" + pair + "`");
        const std::string key = pair.substr(0, eq);
        if (params.count(key)) throw ConfigError(field + ": duplicate key `" + key + "`");
        params[key] = parse_real(pair.substr(eq + 1), field + "." + key);
    }
    return params;
}

double take(std::map<std::string, double>& params, const std::string& key,
            const std::string& field) {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError(field + ": missing parameter `" + key + "`");
    const double v = it->second;
    params.erase(it);
    return v;
}

void expect_empty(const std::map<std::string, double>& params, const std::string& field) {
    if (!params.empty())
        throw ConfigError(field + ": unknown parameter `" + params.begin()->first + "`");
}

}  // namespace

states::WaveFunction parse_state(const std::string& spec) {
    const std::string field = "state";
    const auto colon = spec.find(':');
    const std::string tag = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (tag == "uniform") {
            auto p = parse_params(body, field);
            const double h = take(p, "H", field);
            expect_empty(p, field);
            return states::WaveFunction::symmetric_uniform(h);
        }
        if (tag == "step") {
            auto p = parse_params(body, field);
            const double h = take(p, "H", field);
            const double k = take(p, "k", field);
            expect_empty(p, field);
            return states::WaveFunction::asymmetric_step(h, k);
        }
        if (tag == "gaussian") {
            auto p = parse_params(body, field);
            const double b = take(p, "b", field);
            const double k = p.count("k") ? take(p, "k", field) : 0.0;
            expect_empty(p, field);
            return states::WaveFunction::gaussian(b, k);
        }
        if (tag == "tabulated") {
            if (body.empty()) throw ConfigError("state: tabulated requires a file path");
            return states::WaveFunction::tabulated_from_file(body);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("state: " + std::string(e.what()));
    }
    throw ConfigError("state: unknown variant `" + tag +
                      "` (expected uniform, step, gaussian or tabulated)");
}

states::Interval parse_interval(const std::string& spec) {
    const auto parts = split(spec, ',');
    if (parts.size() != 2) throw ConfigError("interval: expected `lo,hi`, got `" + spec + "`");
    states::Interval interval{parse_real(parts[0], "interval.lo"),
                              parse_real(parts[1], "interval.hi")};
    try {
        interval.validate();
    } catch (const Error& e) {
        throw ConfigError("interval: " + std::string(e.what()));
    }
    return interval;
}

std::vector<double> parse_lengths(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3)
        throw ConfigError("lengths: expected `start:stop:count`, got `" + spec + "`");
    const double start = parse_real(parts[0], "lengths.start");
    const double stop = parse_real(parts[1], "lengths.stop");
    long count;
    try {
        count = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw ConfigError("lengths.count: cannot parse integer `" + parts[2] + "`");
    }
    if (count < 1) throw ConfigError("lengths.count: must be >= 1");
    if (!(start > 0) || !(stop >= start) || !std::isfinite(stop))
        throw ConfigError("lengths: requires 0 < start <= stop, both finite");
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(start);
    } else {
        for (long i = 0; i < count; ++i)
            out.push_back(start + (stop - start) * static_cast<double>(i) /
                                      static_cast<double>(count - 1));
    }
    return out;
}

numerics::Tolerance tolerance_from(const RunConfig& config) {
    numerics::Tolerance tol;
    if (config.abs_tol) tol.abs_tol = *config.abs_tol;
    if (config.rel_tol) tol.rel_tol = *config.rel_tol;
    try {
        tol.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return tol;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

    static const std::set<std::string> known = {
        "state", "interval", "alpha", "abs_tol", "rel_tol",    "output", "seed",
        "n",     "lengths",  "m",     "s",       "significance", "power",  "mode"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("config: unknown field `" + key + "`");

    RunConfig c;
    try {
        if (j.contains("state")) c.state = j["state"].get<std::string>();
        if (j.contains("interval")) c.interval = j["interval"].get<std::string>();
        if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
        if (j.contains("abs_tol")) c.abs_tol = j["abs_tol"].get<double>();
        if (j.contains("rel_tol")) c.rel_tol = j["rel_tol"].get<double>();
        if (j.contains("output")) c.output = j["output"].get<std::string>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("n")) c.n = j["n"].get<std::int64_t>();
        if (j.contains("lengths")) c.lengths = j["lengths"].get<std::string>();
        if (j.contains("significance")) c.significance = j["significance"].get<double>();
        if (j.contains("power")) c.power = j["power"].get<double>();
        if (j.contains("m")) c.m = j["m"].get<int>();
        if (j.contains("s")) c.s = j["s"].get<int>();
        if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return c;
}

RunConfig merged(const RunConfig& flags, const RunConfig& file_values) {
    RunConfig out = flags;
    if (!out.state) out.state = file_values.state;
    if (!out.interval) out.interval = file_values.interval;
    if (!out.alpha) out.alpha = file_values.alpha;
    if (!out.abs_tol) out.abs_tol = file_values.abs_tol;
    if (!out.rel_tol) out.rel_tol = file_values.rel_tol;
    if (!out.output) out.output = file_values.output;
    if (!out.seed) out.seed = file_values.seed;
    if (!out.n) out.n = file_values.n;
    if (!out.lengths) out.lengths = file_values.lengths;
    if (!out.significance) out.significance = file_values.significance;
    if (!out.power) out.power = file_values.power;
    if (!out.m) out.m = file_values.m;
    if (!out.s) out.s = file_values.s;
    if (!out.mode) out.mode = file_values.mode;
    return out;
}

}  // namespace borndev::cli
