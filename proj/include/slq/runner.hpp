#pragma once

#include "slq/config.hpp"

#include <filesystem>
#include <string>

namespace slq {

/// Execute the config's tasks in order, one CSV per task plus a JSON
/// manifest, everything written atomically (temp file + rename).
/// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.
int run_tasks(const ProblemConfig& config, const std::filesystem::path& out_dir);

/// 17-significant-digit formatting used for every CSV number.
std::string format_g17(double x);

} // namespace slq
