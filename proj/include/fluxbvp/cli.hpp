#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fluxbvp/model.hpp"

namespace fluxbvp::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitStepUnderflow = 3;
inline constexpr int kExitBracketFailure = 4;
inline constexpr int kExitInconsistent = 5;

// All recognized configuration keys (config file, FLUXBVP_* environment
// variables and command-line flags share them).
const std::vector<std::string>& config_keys();

// Environment variable name for a key: FLUXBVP_ + upper-case key.
std::string env_name_for_key(const std::string& key);

// Built-in presets: "oracle", "paper-b1-empty", "default-shoot".
const std::map<std::string, std::map<std::string, std::string>>& presets();

// Layered key/value resolution, lowest to highest precedence:
// defaults < preset < config file < environment < command line.
std::map<std::string, std::string> resolve_config(
    const std::map<std::string, std::string>& preset_layer,
    const std::map<std::string, std::string>& file_layer,
    const std::map<std::string, std::string>& env_layer,
    const std::map<std::string, std::string>& flag_layer);

// Reads FLUXBVP_* variables from the process environment.
std::map<std::string, std::string> env_layer_from_process();

// Materialization of a resolved configuration. Throws std::invalid_argument
// naming the offending or missing key.
ProblemSpec problem_from_config(const std::map<std::string, std::string>& cfg);
SolverControls controls_from_config(const std::map<std::string, std::string>& cfg);
double require_double(const std::map<std::string, std::string>& cfg,
                      const std::string& key);

// Entry point used by the binary; parses argv and dispatches. Output goes to
// the provided streams so tests can run commands in-process.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fluxbvp::cli
