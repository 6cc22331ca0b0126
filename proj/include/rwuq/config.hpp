#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "rwuq/sampling.hpp"
#include "rwuq/solver.hpp"
#include "rwuq/uq.hpp"

namespace rwuq {

/// Sample count used in lambda_0 = sigma / count * (2 + sqrt(12 log N)).
enum class CountBasis { distinct, virtual_total };  // m or n

const char* to_string(CountBasis b);
CountBasis parse_count_basis(const std::string& text);

struct ExperimentConfig {
  Shape shape{64, 64};
  double subsampling_fraction = 0.6;
  std::vector<Scheme> schemes{Scheme::without_replacement, Scheme::reweighted};
  std::vector<int> lambda_multipliers{5, 10, 15, 20, 25};
  std::size_t realizations = 25;
  double target_snr = 0.045;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  SolverOptions solver{};
  RadiiMode radii_mode = RadiiMode::exact_variance;
  CountBasis lambda0_count = CountBasis::distinct;
  /// Data-term normalization of the reweighted LASSO (n by default).
  CountBasis reweighted_normalization = CountBasis::virtual_total;
  std::size_t interval_row = 0;  // 0 means rows / 2
  int interval_lambda = 15;
  std::filesystem::path coherence_cache;  // empty: no cache
  std::filesystem::path phantom_table;    // empty: built-in table

  std::size_t measurement_count() const;
  std::size_t effective_interval_row() const { return interval_row ? interval_row : shape.rows / 2; }
  void validate() const;
};

/// Parses flat `key = value` text (TOML-compatible subset: integers, floats,
/// "strings", [arrays] and # comments) into raw values.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies one key (config-file name) to the config; throws on unknown keys.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig load_config(const std::filesystem::path& file);
ExperimentConfig config_from_text(const std::string& text);

/// Canonical key = value listing of every field.
std::string describe(const ExperimentConfig& cfg);

}  // namespace rwuq
