#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "borndev/deviation.hpp"
#include "borndev/states.hpp"

namespace borndev::cli {

// Flat configuration shared by every subcommand. Each field is optional so a
// config file and command-line flags can be merged with flag > file > default
// precedence.
struct RunConfig {
    std::optional<std::string> state;
    std::optional<std::string> interval;
    std::optional<double> alpha;
    std::optional<double> abs_tol;
    std::optional<double> rel_tol;
    std::optional<std::string> output;  // "csv" or "json"
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> n;
    std::optional<std::string> lengths;  // "start:stop:count"
    std::optional<double> significance;
    std::optional<double> power;
    std::optional<int> m;
    std::optional<int> s;
    std::optional<std::string> mode;  // "symmetric" or "free"
};

// Reads a JSON config file with the flat keys above; unknown keys are rejected.
RunConfig load_config_file(const std::string& path);

// Fills unset fields of `flags` from `file_values`.
RunConfig merged(const RunConfig& flags, const RunConfig& file_values);

// "uniform:H=1", "step:H=1,k=2", "gaussian:b=1,k=0" or "tabulated:<path>".
states::WaveFunction parse_state(const std::string& spec);

// "lo,hi" with "-inf"/"inf" sentinels.
states::Interval parse_interval(const std::string& spec);

// "start:stop:count" -> inclusive linear spacing.
std::vector<double> parse_lengths(const std::string& spec);

numerics::Tolerance tolerance_from(const RunConfig& config);

}  // namespace borndev::cli
