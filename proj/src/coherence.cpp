#include "rwuq/coherence.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rwuq/kernels/kernels.hpp"
#include "rwuq/transforms.hpp"

namespace rwuq {

namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void require_positive(std::span<const double> kappa) {
  if (kappa.empty()) throw Error("coherence: empty kappa");
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    if (!(kappa[j] > 0.0) || !std::isfinite(kappa[j]))
      throw Error("coherence: kappa_" + std::to_string(j) + " is not strictly positive");
  }
}

std::string header_line(const Shape& shape) {
  return "rwuq-coherence v1 rows=" + std::to_string(shape.rows) + " cols=" + std::to_string(shape.cols) +
         " tag=" + kTransformConventionTag;
}

}  // namespace

RealVector nu_measure(std::span<const double> kappa) {
  require_positive(kappa);
  const double n2 = l2(kappa);
  RealVector nu(kappa.size());
  for (std::size_t j = 0; j < kappa.size(); ++j) nu[j] = (kappa[j] / n2) * (kappa[j] / n2);
  return nu;
}

RealVector precondition_weights(std::span<const double> kappa) {
  require_positive(kappa);
  const double n2 = l2(kappa);
  RealVector d(kappa.size());
  for (std::size_t j = 0; j < kappa.size(); ++j) d[j] = n2 / kappa[j];
  return d;
}

CoherenceProfile profile_from_kappa(const Shape& shape, RealVector kappa) {
  if (kappa.size() != shape.size()) throw Error("coherence: kappa length does not match shape");
  CoherenceProfile p;
  p.shape = shape;
  p.nu = nu_measure(kappa);
  p.d = precondition_weights(kappa);
  p.kappa_norm = l2(kappa);
  p.kappa = std::move(kappa);
  return p;
}

CoherenceProfile local_coherence(const Shape& shape) {
  require_power_of_two(shape, "local_coherence");
  return profile_from_kappa(shape, kernels::parallel::local_coherence(shape));
}

std::filesystem::path coherence_cache_path(const std::filesystem::path& dir, const Shape& shape) {
  return dir / ("coherence_" + to_string(shape) + ".txt");
}

void write_coherence_cache(const std::filesystem::path& file, const CoherenceProfile& profile) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write coherence cache " + file.string());
  out << header_line(profile.shape) << '\n';
  char buf[64];
  for (double k : profile.kappa) {
    std::snprintf(buf, sizeof buf, "%.17g\n", k);
    out << buf;
  }
}

std::optional<CoherenceProfile> read_coherence_cache(const std::filesystem::path& file, const Shape& shape) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header) || header != header_line(shape)) return std::nullopt;
  RealVector kappa;
  kappa.reserve(shape.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    kappa.push_back(std::strtod(line.c_str(), nullptr));
  }
  if (kappa.size() != shape.size()) return std::nullopt;
  return profile_from_kappa(shape, std::move(kappa));
}

CoherenceProfile cached_local_coherence(const std::filesystem::path& dir, const Shape& shape) {
  const auto file = coherence_cache_path(dir, shape);
  if (auto cached = read_coherence_cache(file, shape)) return *std::move(cached);
  auto profile = local_coherence(shape);
  write_coherence_cache(file, profile);
  return profile;
}

}  // namespace rwuq
