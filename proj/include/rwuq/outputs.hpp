#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rwuq/experiments.hpp"

namespace rwuq {

inline constexpr const char* kVersion = "0.1.0";

/// Header of metrics_<scheme>.csv: lambda_multiplier, the metrics, coverage pair.
std::vector<std::string> metrics_header();

/// Writes every artifact of a sweep into `dir` (created if missing):
/// metrics_<scheme>.csv, metrics_std_<scheme>.csv, comparison.csv,
/// realizations.csv, intervals_<scheme>.csv, lambda_sweep.svg,
/// intervals_<scheme>.svg and metadata.txt.
void emit_outputs(const SweepResult& result, const std::filesystem::path& dir);

/// A metrics CSV read back for plotting.
struct MetricsTable {
  std::string scheme;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  double value(std::size_t row, const std::string& column) const;
};

MetricsTable read_metrics_csv(const std::filesystem::path& file);

/// Line plot of xhat_err_l2, xu_err_l2 and R_l2 against the lambda multiplier,
/// three series per table.
std::string lambda_sweep_svg(const std::vector<MetricsTable>& tables);
/// Errorbar plot of debiased values (real part) with radii, truth overlaid.
std::string interval_svg(const std::vector<IntervalRecord>& records, const std::string& title);

/// Rebuilds the SVGs of `dir` from the CSVs found there; returns the files written.
std::vector<std::filesystem::path> plot_from_directory(const std::filesystem::path& dir);

}  // namespace rwuq
