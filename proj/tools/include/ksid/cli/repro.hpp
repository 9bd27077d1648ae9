#pragma once

#include "ksid/cli/experiment.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ksid::cli {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
    /// Printed for context; does not count towards the verdict.
    bool informational = false;
};

struct ExampleOutcome {
    std::string id;
    std::string title;
    std::vector<ExperimentReport> runs;
    std::vector<Check> checks;

    bool passed() const;
};

struct ReproOptions {
    std::optional<RegressionMode> mode;
    /// Replaces the tolerance of every scalar-tolerance check.
    std::optional<double> tolerance;
};

/// Ids in catalogue order: 1, 3, 4, 4b, 5, ..., 14.
std::vector<std::string> example_ids();
bool is_example_id(const std::string& id);

/// Bundled configurations for one example (after applying `opts.mode`).
std::vector<ExperimentConfig> example_configs(const std::string& id, const ReproOptions& opts = {});

ExampleOutcome run_example(const std::string& id, const ReproOptions& opts = {});

}  // namespace ksid::cli
