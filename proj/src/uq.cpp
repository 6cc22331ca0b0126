#include "rwuq/uq.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rwuq/format.hpp"
#include "rwuq/rng.hpp"

namespace rwuq {

const char* to_string(RadiiMode mode) {
  return mode == RadiiMode::exact_variance ? "exact_variance" : "paper_literal";
}

RadiiMode parse_radii_mode(const std::string& text) {
  if (text == "exact_variance") return RadiiMode::exact_variance;
  if (text == "paper_literal") return RadiiMode::paper_literal;
  throw Error("unknown radii mode '" + text + "'");
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("confidence radii: alpha must lie in (0, 1)");
}

}  // namespace

RealVector radii_from_variance(std::span<const double> variance, double alpha) {
  check_alpha(alpha);
  const double q = std::log(1.0 / alpha);
  RealVector r(variance.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sqrt(std::max(variance[i], 0.0) * q);
  return r;
}

RealVector confidence_radii(const MeasurementOperator& op, double sigma, double alpha, RadiiMode mode) {
  check_alpha(alpha);
  if (!(sigma > 0.0)) throw Error("confidence radii: sigma must be positive");
  if (mode == RadiiMode::exact_variance) {
    RealVector var = op.noise_gram_diagonal();
    for (auto& v : var) v *= sigma * sigma;
    return radii_from_variance(var, alpha);
  }
  const RealVector gram = op.gram_diagonal();
  const double q = std::sqrt(std::log(1.0 / alpha));
  const double norm = static_cast<double>(op.normalization());
  RealVector r(gram.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = sigma * std::sqrt(gram[i]) / norm * q;
  return r;
}

Coverage coverage(std::span<const Complex> ground_truth, std::span<const Complex> debiased,
                  std::span<const double> radii) {
  if (ground_truth.size() != debiased.size() || radii.size() != debiased.size())
    throw Error("coverage: length mismatch");
  std::size_t hit = 0, support = 0, support_hit = 0;
  for (std::size_t i = 0; i < debiased.size(); ++i) {
    const bool inside = std::abs(debiased[i] - ground_truth[i]) <= radii[i];
    hit += inside;
    if (std::abs(ground_truth[i]) > kSupportThreshold) {
      ++support;
      support_hit += inside;
    }
  }
  Coverage c;
  c.overall = debiased.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(debiased.size());
  c.support = support == 0 ? 1.0 : static_cast<double>(support_hit) / static_cast<double>(support);
  return c;
}

double null_noncoverage(const MeasurementOperator& op, double sigma, double alpha, std::size_t draws,
                        std::uint64_t seed, RadiiMode mode) {
  if (draws == 0) throw Error("null_noncoverage: no draws");
  const RealVector radii = confidence_radii(op, sigma, alpha, mode);
  const RealVector var = op.noise_gram_diagonal();
  const double vmax = *std::max_element(var.begin(), var.end());
  std::vector<std::size_t> seen;
  for (std::size_t i = 0; i < var.size(); ++i)
    if (var[i] > kDegenerateVariance * vmax) seen.push_back(i);
  if (seen.empty()) throw Error("null_noncoverage: no coordinate carries noise");

  const double norm = static_cast<double>(op.normalization());
  Rng rng(seed);
  ComplexVector eps(op.measurement_count());
  std::size_t misses = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    for (auto& e : eps) e = rng.complex_normal(sigma * sigma);
    const ComplexVector w = op.adjoint(op.weight(eps));
    for (std::size_t i : seen) misses += std::abs(w[i] / norm) > radii[i];
  }
  return static_cast<double>(misses) / (static_cast<double>(draws) * static_cast<double>(seen.size()));
}

std::vector<IntervalRecord> interval_export(const Shape& shape, std::span<const Complex> debiased,
                                            std::span<const double> radii, std::size_t line,
                                            std::span<const Complex> truth) {
  std::vector<IntervalRecord> out;
  if (debiased.empty()) return out;
  if (debiased.size() != shape.size() || radii.size() != shape.size() || (!truth.empty() && truth.size() != shape.size()))
    throw Error("interval_export: length mismatch");
  if (line >= shape.rows) throw Error("interval_export: row " + std::to_string(line) + " out of bounds");
  out.reserve(shape.cols);
  for (std::size_t c = 0; c < shape.cols; ++c) {
    const std::size_t i = line * shape.cols + c;
    IntervalRecord rec{c, debiased[i], radii[i], std::nullopt};
    if (!truth.empty()) rec.truth = truth[i];
    out.push_back(rec);
  }
  return out;
}

void write_interval_csv(const std::filesystem::path& file, const std::vector<IntervalRecord>& records) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << "index,center_re,center_im,radius,truth_re,truth_im\n";
  for (const auto& r : records) {
    out << r.index << ',' << fmt_number(r.center.real()) << ',' << fmt_number(r.center.imag()) << ','
        << fmt_number(r.radius) << ',';
    if (r.truth) out << fmt_number(r.truth->real()) << ',' << fmt_number(r.truth->imag());
    else out << ',';
    out << '\n';
  }
}

std::vector<IntervalRecord> read_interval_csv(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  std::string line;
  std::getline(in, line);
  std::vector<IntervalRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    while (f.size() < 6) f.emplace_back();
    IntervalRecord r;
    r.index = std::stoul(f[0]);
    r.center = {std::strtod(f[1].c_str(), nullptr), std::strtod(f[2].c_str(), nullptr)};
    r.radius = std::strtod(f[3].c_str(), nullptr);
    if (!f[4].empty()) r.truth = Complex{std::strtod(f[4].c_str(), nullptr), std::strtod(f[5].c_str(), nullptr)};
    out.push_back(r);
  }
  return out;
}

}  // namespace rwuq
