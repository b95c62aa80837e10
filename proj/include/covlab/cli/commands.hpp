#pragma once

// Command implementations behind the `covlab` executable. Each command
// validates its configuration, runs, and returns a flat JSON document (plus an
// optional "rows" array) that the renderers turn into JSON, CSV or text.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace covlab::cli {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv, Human };

struct RunConfig {
    std::string command;
    std::size_t n = 1;
    std::size_t d = 3;
    std::size_t k = 1;
    std::size_t trials = 100000;
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    OutputFormat format = OutputFormat::Json;
    std::optional<std::string> output_path;

    std::size_t d_max = 30;
    std::string matrix_path;
    std::size_t i = 1;  ///< 1-based
    std::size_t j = 2;  ///< 1-based
    std::string mode = "two-way";
    std::string detector;  ///< empty: lr (two-way, fixed-theta) or bayes3 (three-way)
    std::size_t thetas = 50;
    std::vector<double> theta;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
    Json doc;
    int exit_code = kExitOk;
    /// Extra lines shown only in human format.
    std::vector<std::string> notes;
};

CommandResult cmd_bound_table(const RunConfig& cfg);
CommandResult cmd_tv(const RunConfig& cfg);
CommandResult cmd_alpha(const RunConfig& cfg);
CommandResult cmd_moments(const RunConfig& cfg);
CommandResult cmd_game(const RunConfig& cfg);
CommandResult cmd_section(const RunConfig& cfg);

/// Dispatches on cfg.command. Throws covlab::Error subclasses on invalid input.
CommandResult run_command(const RunConfig& cfg);

std::string render(const CommandResult& result, OutputFormat format);

}  // namespace covlab::cli
