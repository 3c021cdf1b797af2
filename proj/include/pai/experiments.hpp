#pragma once

// Reproducible experiment runners behind the command-line tool. Each runner
// takes a fully resolved JSON config, validates it, and returns the output
// files as strings so callers (CLI, tests) decide where they go. Thread count
// is a runtime argument and never appears in the outputs.

#include <string>
#include <vector>

#include <json.hpp>

namespace pai::experiments {

using Json = nlohmann::json;

struct OutputFile {
    std::string path;
    std::string content;
};

struct RunOutput {
    std::vector<OutputFile> files;
    /// Text for stdout (may be empty).
    std::string console;
};

/// Known command names: decompose, overhead, trotter, vqe, fidelity-decay, rms.
const std::vector<std::string>& command_names();

/// Default config for a command.
Json default_config(const std::string& command);

/// Merges `overrides` onto the defaults, rejecting unknown fields and wrong
/// types with ConfigError.
Json resolve_config(const std::string& command, const Json& overrides);

/// Parses a "key=value" override; the value is read as JSON when possible,
/// otherwise as a string.
void apply_override(Json& config, const std::string& assignment);

RunOutput run(const std::string& command, const Json& resolved_config, unsigned threads);

RunOutput run_decompose(const Json& config);
RunOutput run_overhead(const Json& config);
RunOutput run_trotter(const Json& config, unsigned threads);
RunOutput run_vqe(const Json& config, unsigned threads);
RunOutput run_fidelity_decay(const Json& config, unsigned threads);
RunOutput run_rms(const Json& config, unsigned threads);

/// Version string embedded into every output.
std::string version();

}  // namespace pai::experiments
