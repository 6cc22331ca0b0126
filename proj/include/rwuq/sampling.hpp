#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "rwuq/rng.hpp"
#include "rwuq/types.hpp"

namespace rwuq {

enum class Scheme { uniform, with_replacement, without_replacement, reweighted };

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& text);

/// Index multiset of sampled Fourier rows.
///
/// For `reweighted`, omega holds the m distinct atoms in first-appearance
/// order and gamma their counts in the virtual with-replacement run of
/// length n. Every other scheme has gamma == 1 and n == m; `with_replacement`
/// expresses multiplicity through repeated omega entries.
struct SamplingPattern {
  std::vector<std::size_t> omega;
  std::vector<std::uint64_t> gamma;
  std::uint64_t n = 0;
  Scheme scheme = Scheme::uniform;
  std::uint64_t seed = 0;

  std::size_t m() const { return omega.size(); }
  bool operator==(const SamplingPattern&) const = default;
};

/// Walker/Vose alias table: O(N) build, O(1) draw.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

/// Throws unless nu is a finite, nonnegative vector summing to 1 (1e-9).
void validate_probability(std::span<const double> nu);
std::size_t support_size(std::span<const double> nu);

SamplingPattern sample_with_replacement(std::span<const double> nu, std::size_t m, std::uint64_t seed);
/// Successive weighted sampling: draw from nu, remove the atom, renormalize.
SamplingPattern sample_without_replacement(std::span<const double> nu, std::size_t m, std::uint64_t seed);
/// I.i.d. draws from nu until the m-th distinct atom appears.
SamplingPattern sample_reweighted(std::span<const double> nu, std::size_t m, std::uint64_t seed);
/// Uniform sampling of m distinct rows out of N.
SamplingPattern sample_uniform(std::size_t N, std::size_t m, std::uint64_t seed);

SamplingPattern sample(Scheme scheme, std::span<const double> nu, std::size_t m, std::uint64_t seed);

// Text record, one "key=value" per line:
//   scheme, seed, m, n, omega (space separated), gamma (space separated).
std::string serialize(const SamplingPattern& p);
SamplingPattern deserialize_pattern(const std::string& text);

}  // namespace rwuq
