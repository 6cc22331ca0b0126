#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "rwuq/operators.hpp"
#include "rwuq/types.hpp"

namespace rwuq {

/// exact_variance: delta_i = sqrt(Var(W_i) log(1/alpha)), Var(W_i) = sigma^2 *
/// noise_gram_diagonal_i (circular complex Gaussian tail P(|Z| > t) = exp(-t^2/v)).
/// paper_literal: delta_i = sigma sqrt(gram_diagonal_i) / norm * sqrt(log(1/alpha)).
enum class RadiiMode { exact_variance, paper_literal };

const char* to_string(RadiiMode mode);
RadiiMode parse_radii_mode(const std::string& text);

struct Coverage {
  double overall = 0.0;
  double support = 0.0;  // restricted to |truth_i| > kSupportThreshold; 1 when the support is empty
};

inline constexpr double kSupportThreshold = 1e-12;

struct ConfidenceReport {
  RealVector radii;
  double alpha = 0.05;
  Coverage coverage;
  RadiiMode mode = RadiiMode::exact_variance;
};

RealVector confidence_radii(const MeasurementOperator& op, double sigma, double alpha,
                            RadiiMode mode = RadiiMode::exact_variance);
/// Radii from precomputed variances Var(W_i) (exact_variance only).
RealVector radii_from_variance(std::span<const double> variance, double alpha);

Coverage coverage(std::span<const Complex> ground_truth, std::span<const Complex> debiased,
                  std::span<const double> radii);

struct IntervalRecord {
  std::size_t index = 0;  // column within the exported row
  Complex center;
  double radius = 0.0;
  std::optional<Complex> truth;
};

/// Relative level below which a coordinate's noise variance is rounding error:
/// no sampled row reaches it, so W_i is zero in exact arithmetic.
inline constexpr double kDegenerateVariance = 1e-20;

/// Monte Carlo non-coverage with the remainder removed: the fraction of
/// coordinates where |W_i| exceeds delta_i, averaged over `draws` noise draws of
/// W = M* diag(w) eps / normalization, eps ~ CN(0, sigma^2 I). Coordinates
/// with degenerate variance are excluded.
double null_noncoverage(const MeasurementOperator& op, double sigma, double alpha, std::size_t draws,
                        std::uint64_t seed, RadiiMode mode = RadiiMode::exact_variance);

/// Per-pixel intervals along image row `line`.
std::vector<IntervalRecord> interval_export(const Shape& shape, std::span<const Complex> debiased,
                                            std::span<const double> radii, std::size_t line,
                                            std::span<const Complex> truth = {});

/// CSV with header index,center_re,center_im,radius,truth_re,truth_im.
void write_interval_csv(const std::filesystem::path& file, const std::vector<IntervalRecord>& records);
std::vector<IntervalRecord> read_interval_csv(const std::filesystem::path& file);

}  // namespace rwuq
