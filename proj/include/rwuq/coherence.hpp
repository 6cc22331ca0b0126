#pragma once

#include <filesystem>
#include <optional>
#include <span>

#include "rwuq/types.hpp"

namespace rwuq {

/// Local coherence of the Fourier basis with respect to the Haar basis,
/// together with the variable-density measure and the preconditioner it
/// induces.
struct CoherenceProfile {
  Shape shape;
  RealVector kappa;  // kappa_j = max_k |(F H*)_{jk}|
  RealVector nu;     // kappa_j^2 / ||kappa||_2^2
  RealVector d;      // ||kappa||_2 / kappa_j
  double kappa_norm = 0.0;
};

/// Exact local coherence for a (rows x cols) Fourier-Haar pair. O(N^2 log N),
/// parallel over Fourier rows.
CoherenceProfile local_coherence(const Shape& shape);

/// Completes a profile from a kappa vector (validates positivity).
CoherenceProfile profile_from_kappa(const Shape& shape, RealVector kappa);

RealVector nu_measure(std::span<const double> kappa);
RealVector precondition_weights(std::span<const double> kappa);

// Cache file: one header line
//   rwuq-coherence v1 rows=<R> cols=<C> tag=<convention tag>
// followed by N lines holding kappa_j with round-trip precision.
void write_coherence_cache(const std::filesystem::path& file, const CoherenceProfile& profile);
/// Returns nothing when the file is absent or its header does not match.
std::optional<CoherenceProfile> read_coherence_cache(const std::filesystem::path& file, const Shape& shape);

std::filesystem::path coherence_cache_path(const std::filesystem::path& dir, const Shape& shape);

/// Loads from `dir` when a matching cache exists, else computes and writes it.
CoherenceProfile cached_local_coherence(const std::filesystem::path& dir, const Shape& shape);

}  // namespace rwuq
