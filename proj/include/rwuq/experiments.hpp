#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "rwuq/coherence.hpp"
#include "rwuq/config.hpp"
#include "rwuq/operators.hpp"
#include "rwuq/uq.hpp"

namespace rwuq {

/// Metric columns, in CSV order. The first twelve are the estimator-error
/// table rows; the last three are the Haar-domain l2 errors and ||R||/||W||.
enum class Metric : std::size_t {
  zhat_err_inf,
  xhat_err_inf,
  xhat_err_l2,
  zu_err_inf,
  xu_err_inf,
  xu_err_l2,
  rz_inf,
  rx_inf,
  r_l2,
  wz_inf,
  wx_inf,
  w_l2,
  zhat_err_l2,
  zu_err_l2,
  r_over_w,
};

inline constexpr std::size_t kMetricCount = 15;
const char* metric_name(Metric m);
const std::array<Metric, kMetricCount>& all_metrics();

using MetricValues = std::array<double, kMetricCount>;

/// One (scheme, lambda, realization) outcome.
struct RealizationRecord {
  Scheme scheme{};
  int lambda_multiplier = 0;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::uint64_t n = 0;
  double sigma = 0.0;
  double lambda = 0.0;
  double realized_snr = 0.0;
  MetricValues metrics{};
  Coverage coverage{};
  double decomposition_residual = 0.0;  // max over Haar and image domains
  double domain_deviation = 0.0;        // max | ||.||_2 haar - ||.||_2 image | over R, W and errors
  std::size_t iterations = 0;
  bool converged = false;
  std::string status = "ok";            // "ok" or the failure message

  bool ok() const { return status == "ok"; }
};

/// Averages over realizations for one (scheme, lambda).
struct ExperimentRecord {
  Scheme scheme{};
  int lambda_multiplier = 0;
  std::size_t count = 0;  // realizations that completed
  MetricValues mean{};
  MetricValues stddev{};
  Coverage coverage_mean{};
  Coverage coverage_stddev{};
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<ExperimentRecord> table;     // sorted by (scheme order in config, lambda)
  std::vector<RealizationRecord> raw;      // sorted by (scheme, lambda, realization)
  /// Intervals on the configured image row for realization 0 at the
  /// configured lambda, one export per scheme (same order as config.schemes).
  std::vector<std::vector<IntervalRecord>> intervals;

  const ExperimentRecord& record(Scheme scheme, int lambda_multiplier) const;
};

/// sigma = snr * ||M z0||_2 / ||w||_2: matches E||diag(w) eps||^2 = sigma^2 sum w^2
/// to the weighted signal energy.
double calibrate_sigma(const MeasurementOperator& op, std::span<const Complex> ground_truth, double target_snr);

/// (sigma / count) (2 + sqrt(12 log N)).
double lambda0(double sigma, std::size_t count, std::size_t N);

/// Everything one realization of one scheme needs before the lambda loop.
struct RealizationSetup {
  Scheme scheme{};
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  SamplingPattern pattern;
  MeasurementOperator op;
  double sigma = 0.0;
  ComplexVector noise;
  ComplexVector y;
  RealVector radii;  // image domain
};

RealizationSetup prepare_realization(const ExperimentConfig& cfg, const CoherenceProfile& profile, Scheme scheme,
                                     std::size_t realization, std::span<const Complex> z0);

/// Solve, debias, decompose and measure one lambda on a prepared realization.
RealizationRecord run_single(const ExperimentConfig& cfg, const RealizationSetup& setup, int lambda_multiplier,
                             std::span<const Complex> x0, std::span<const Complex> z0,
                             std::vector<IntervalRecord>* intervals = nullptr);

/// Ground-truth image for the configuration (built-in or custom table).
ComplexImage experiment_phantom(const ExperimentConfig& cfg);
CoherenceProfile experiment_coherence(const ExperimentConfig& cfg);

/// The full protocol; deterministic given the config.
SweepResult run_sweep(const ExperimentConfig& cfg);

}  // namespace rwuq
