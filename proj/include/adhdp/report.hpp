#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adhdp/experiment.hpp"

namespace adhdp {

/// 9 significant digits, "nan"/"inf"/"-inf" for non-finite values.
std::string format_value(double v);

/// Writes run_summary.csv plus trial_<k>.csv for every trial and
/// evaluation.csv for the frozen rollout into `dir` (created if needed).
/// Returns the paths written, summary first.
std::vector<std::filesystem::path> emit_csv(const RunRecord& record, const std::filesystem::path& dir);

/// Per-step CSV text for one trial.
std::string trial_csv(const TrialRecord& trial, PlantKind plant);

/// Exact (hex-float) dump of all four weight matrices.
std::string serialize_weights(const LearnerState<double>& learner);
/// Only the two input-to-hidden matrices.
std::string serialize_hidden_weights(const LearnerState<double>& learner);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws ConfigError naming the column when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Self-contained SVG line chart of `columns` against the first CSV column.
void emit_plot(const std::filesystem::path& csv_path, const std::vector<std::string>& columns,
               const std::filesystem::path& out_path, const std::string& title = "");

std::string render_svg(const CsvTable& table, const std::vector<std::string>& columns, const std::string& title);

}  // namespace adhdp
