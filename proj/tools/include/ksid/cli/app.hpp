#pragma once

#include "ksid/cli/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ksid::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_fail = 1,      // acceptance failure or report differences
    exit_usage = 2,     // bad arguments or config
    exit_numeric = 3,   // numeric failure inside a module
};

/// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `text` next to `path` and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& text);

struct FieldDifference {
    std::string path;
    std::string left;
    std::string right;
};

/// Structural comparison of two reports. Numbers match when
/// |a - b| <= abs_tol + rel_tol * max(|a|, |b|); `timings` is skipped.
std::vector<FieldDifference> diff_reports(const Json& a, const Json& b, double rel_tol = 1e-9,
                                          double abs_tol = 1e-12);

}  // namespace ksid::cli
