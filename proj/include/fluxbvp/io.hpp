#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fluxbvp/model.hpp"

namespace fluxbvp::io {

// 17 significant digits, '.' separator, locale independent.
std::string fmt17(double x);
// Shortest round-trip representation (std::to_chars).
std::string fmt_shortest(double x);

// Write-temp-then-rename; throws std::runtime_error on I/O failure.
void write_atomic(const std::string& path, const std::string& content);

// Header "t,f,fp,fpp" plus one row per state, 17 significant digits.
std::string samples_to_csv(const std::vector<ShootState>& samples);
// Uniform resampling of a trajectory: n points over [start, t_end].
std::vector<ShootState> resample_uniform(const Trajectory& traj, double t_end,
                                         int n);
// Strict parse of the CSV format above; throws std::invalid_argument.
std::vector<ShootState> parse_csv(const std::string& text);

// key=value report plus a JSON mirror of the same pairs.
std::string report_to_text(const std::vector<std::pair<std::string, std::string>>& kv);
std::string report_to_json(const std::vector<std::pair<std::string, std::string>>& kv);

// Flat key=value configuration text; '#' starts a comment. Unknown keys
// throw std::invalid_argument naming the key.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace fluxbvp::io
