#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lab/config.hpp"
#include "lab/csv.hpp"

namespace lab {

enum class IssueKind { Stability, Numerical };

struct PointIssue {
  IssueKind kind;
  std::string point;
  std::string message;
};

struct RunOptions {
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  Table main;
  Table points;
  std::vector<PointIssue> issues;

  /// 0 clean, 3 only stability skips, 4 any numerical failure.
  int exit_code() const;
};

/// Stability screening of every sweep point, without running anything.
std::vector<PointIssue> screen_points(const ExperimentConfig& cfg);

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Writes <stem>.csv, <stem>_points.csv and, when points were skipped, <stem>_skipped.csv.
std::vector<std::string> write_result(const RunResult& r, const std::string& out_dir, const std::string& stem);

Table issues_table(const std::vector<PointIssue>& issues);

}  // namespace lab
