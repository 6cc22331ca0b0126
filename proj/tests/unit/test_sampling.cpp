#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rwuq/rng.hpp"
#include "rwuq/sampling.hpp"

using namespace rwuq;

namespace {

// Upper 0.1% quantiles of chi-square with 1 and 2 degrees of freedom.
constexpr double kChi2_1 = 10.828;
constexpr double kChi2_2 = 13.816;

double chi_square(const std::vector<std::size_t>& counts, const RealVector& p, double total) {
  double s = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = p[i] * total;
    s += (static_cast<double>(counts[i]) - e) * (static_cast<double>(counts[i]) - e) / e;
  }
  return s;
}

}  // namespace

TEST_CASE("rng primitives") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(7);
  double s = 0.0, ss = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK_UNARY(u >= 0.0);
    CHECK_UNARY(u < 1.0);
    const double z = r.normal();
    s += z;
    ss += z * z;
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(ss / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  for (int i = 0; i < 1000; ++i) CHECK(r.below(3) < 3);
  CHECK(mix_seed(1, 1) != mix_seed(1, 2));
  CHECK(mix_seed(1, 1) != mix_seed(2, 1));
}

TEST_CASE("complex normal has the requested variance split evenly") {
  Rng r(11);
  double re2 = 0.0, im2 = 0.0, cross = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Complex z = r.complex_normal(4.0);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  CHECK(re2 / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::abs(cross / n) < 0.03);
}

TEST_CASE("alias table frequencies") {
  const RealVector p{0.5, 0.3, 0.2, 0.0};
  AliasTable t(p);
  Rng rng(3);
  std::vector<std::size_t> counts(4);
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) ++counts[t.draw(rng)];
  CHECK(counts[3] == 0);
  counts.pop_back();
  CHECK(chi_square(counts, RealVector{0.5, 0.3, 0.2}, n) < kChi2_2);
}

TEST_CASE("with replacement") {
  const auto forced = sample_with_replacement(RealVector{1.0}, 3, 1);
  CHECK(forced.omega == std::vector<std::size_t>{0, 0, 0});
  CHECK(forced.n == 3);

  const auto p = sample_with_replacement(RealVector{0.5, 0.5}, 100000, 9);
  std::vector<std::size_t> counts(2);
  for (auto j : p.omega) ++counts[j];
  CHECK(chi_square(counts, RealVector{0.5, 0.5}, 100000) < kChi2_1);
  for (auto g : p.gamma) CHECK(g == 1);
  CHECK(p == sample_with_replacement(RealVector{0.5, 0.5}, 100000, 9));
  CHECK_THROWS_AS(sample_with_replacement(RealVector{0.5, 0.5}, 0, 1), Error);
  CHECK_THROWS_AS(sample_with_replacement(RealVector{0.5, 0.6}, 1, 1), Error);
}

TEST_CASE("without replacement") {
  const auto full = sample_without_replacement(RealVector{0.5, 0.5}, 2, 5);
  CHECK(std::set<std::size_t>(full.omega.begin(), full.omega.end()) == std::set<std::size_t>{0, 1});
  CHECK(sample_without_replacement(RealVector{1.0}, 1, 5).omega == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(sample_without_replacement(RealVector{0.5, 0.5, 0.0}, 3, 1), Error);

  // Exact P(0 in Omega) by enumerating ordered pairs of successive draws.
  const RealVector nu{0.9, 0.05, 0.05};
  double exact = 0.0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      if (a == b) continue;
      const double pr = nu[a] * nu[b] / (1.0 - nu[a]);
      if (a == 0 || b == 0) exact += pr;
    }
  CHECK(exact == doctest::Approx(0.9 + 2 * 0.05 * 0.9 / 0.95));
  const std::size_t trials = 1000000;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto p = sample_without_replacement(nu, 2, 1000 + t);
    CHECK(p.omega[0] != p.omega[1]);
    hits += std::find(p.omega.begin(), p.omega.end(), 0) != p.omega.end();
  }
  const double se = std::sqrt(exact * (1 - exact) / trials);
  CHECK(std::abs(static_cast<double>(hits) / trials - exact) < 4 * se);
}

TEST_CASE("reweighted counts and stopping rule") {
  const auto single = sample_reweighted(RealVector{1.0}, 1, 1);
  CHECK(single.omega == std::vector<std::size_t>{0});
  CHECK(single.gamma == std::vector<std::uint64_t>{1});
  CHECK(single.n == 1);
  CHECK_THROWS_AS(sample_reweighted(RealVector{1.0, 0.0}, 2, 1), Error);

  // Coupon collector with two coupons: E[n] = 3, Var[n] = 2.
  const std::size_t runs = 100000;
  double sum = 0.0;
  for (std::size_t t = 0; t < runs; ++t) sum += static_cast<double>(sample_reweighted(RealVector{0.5, 0.5}, 2, t).n);
  CHECK(std::abs(sum / runs - 3.0) < 3.0 * std::sqrt(2.0 / runs));

  RealVector nu(32);
  for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = 1.0 / static_cast<double>(i + 1);
  const double z = std::accumulate(nu.begin(), nu.end(), 0.0);
  for (auto& v : nu) v /= z;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = sample_reweighted(nu, 12, seed);
    CHECK(p.m() == 12);
    CHECK(p.gamma.back() == 1);
    CHECK(std::accumulate(p.gamma.begin(), p.gamma.end(), std::uint64_t{0}) == p.n);
    CHECK(std::set<std::size_t>(p.omega.begin(), p.omega.end()).size() == 12);
    for (auto g : p.gamma) CHECK(g >= 1);
    for (auto j : p.omega) CHECK(j < 32);
  }
}

TEST_CASE("reweighted count ratio against the exact two-atom law") {
  // nu = (0.9, 0.1), m = 2. The run is a^k b with probability nu_a^k nu_b; then
  // gamma_0 / n is k/(k+1) when a = 0 and 1/(k+1) when a = 1.
  const double p0 = 0.9, p1 = 0.1;
  double exact = 0.0;
  for (int k = 1; k < 2000; ++k) {
    exact += std::pow(p0, k) * p1 * k / (k + 1.0);
    exact += std::pow(p1, k) * p0 / (k + 1.0);
  }
  CHECK(exact == doctest::Approx(0.7924).epsilon(1e-4));
  const std::size_t runs = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t t = 0; t < runs; ++t) {
    const auto p = sample_reweighted(RealVector{p0, p1}, 2, 77 + t);
    const std::size_t i0 = p.omega[0] == 0 ? 0 : 1;
    const double r = static_cast<double>(p.gamma[i0]) / static_cast<double>(p.n);
    sum += r;
    sum2 += r * r;
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sum2 / runs - mean * mean) / runs);
  CHECK(std::abs(mean - exact) < 4 * se);
}

TEST_CASE("uniform sampling") {
  auto perm = sample_uniform(16, 16, 3).omega;
  std::sort(perm.begin(), perm.end());
  for (std::size_t i = 0; i < 16; ++i) CHECK(perm[i] == i);
  std::size_t zeros = 0;
  const std::size_t runs = 100000;
  for (std::size_t t = 0; t < runs; ++t) zeros += sample_uniform(2, 1, t).omega[0] == 0;
  CHECK(chi_square({zeros, runs - zeros}, RealVector{0.5, 0.5}, runs) < kChi2_1);
  CHECK(sample_uniform(64, 20, 8) == sample_uniform(64, 20, 8));
  CHECK_THROWS_AS(sample_uniform(4, 5, 1), Error);
}

TEST_CASE("pattern text record round trip") {
  RealVector nu(16, 1.0 / 16);
  for (Scheme s : {Scheme::uniform, Scheme::with_replacement, Scheme::without_replacement, Scheme::reweighted}) {
    const auto p = sample(s, nu, 7, 99);
    CHECK(p.scheme == s);
    const auto q = deserialize_pattern(serialize(p));
    CHECK(q == p);
    CHECK(parse_scheme(to_string(s)) == s);
  }
  CHECK_THROWS_AS(deserialize_pattern("scheme=reweighted\nseed=1\nm=1\nn=3\nomega=0\ngamma=2\n"), Error);
  CHECK_THROWS_AS(parse_scheme("lottery"), Error);
}
