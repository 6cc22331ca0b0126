#include "rwuq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rwuq {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::uniform: return "uniform";
    case Scheme::with_replacement: return "with_replacement";
    case Scheme::without_replacement: return "without_replacement";
    case Scheme::reweighted: return "reweighted";
  }
  return "?";
}

Scheme parse_scheme(const std::string& text) {
  for (auto s : {Scheme::uniform, Scheme::with_replacement, Scheme::without_replacement, Scheme::reweighted})
    if (text == to_string(s)) return s;
  throw Error("unknown sampling scheme '" + text + "'");
}

AliasTable::AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
  const std::size_t n = weights.size();
  if (n == 0) throw Error("AliasTable: empty weights");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error("AliasTable: weights must have positive mass");

  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
  for (auto i : small) prob_[i] = 1.0, alias_[i] = i;

  // Rounding can leave a zero-weight atom as a full column; route it away.
  const auto heaviest = static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] <= 0.0) prob_[i] = 0.0;
    if (prob_[i] < 1.0 && weights[alias_[i]] <= 0.0) alias_[i] = heaviest;
  }
}

std::size_t AliasTable::draw(Rng& rng) const {
  const auto column = static_cast<std::size_t>(rng.below(prob_.size()));
  return rng.uniform() < prob_[column] ? column : alias_[column];
}

void validate_probability(std::span<const double> nu) {
  if (nu.empty()) throw Error("sampling: empty probability vector");
  double total = 0.0;
  for (double p : nu) {
    if (!std::isfinite(p) || p < 0.0) throw Error("sampling: probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("sampling: probabilities do not sum to one");
}

std::size_t support_size(std::span<const double> nu) {
  return static_cast<std::size_t>(std::count_if(nu.begin(), nu.end(), [](double p) { return p > 0.0; }));
}

namespace {

void check_request(std::span<const double> nu, std::size_t m, bool distinct) {
  if (m < 1) throw Error("sampling: m must be at least 1");
  validate_probability(nu);
  if (distinct && m > support_size(nu))
    throw Error("sampling: m = " + std::to_string(m) + " exceeds the support size " +
                std::to_string(support_size(nu)));
}

SamplingPattern unit_pattern(Scheme scheme, std::uint64_t seed, std::vector<std::size_t> omega) {
  SamplingPattern p;
  p.scheme = scheme;
  p.seed = seed;
  p.gamma.assign(omega.size(), 1);
  p.n = omega.size();
  p.omega = std::move(omega);
  return p;
}

// Fenwick tree of nonnegative weights supporting removal and prefix search.
class WeightTree {
 public:
  explicit WeightTree(std::span<const double> w) : tree_(w.size() + 1, 0.0), weight_(w.begin(), w.end()) {
    for (std::size_t i = 0; i < w.size(); ++i) add(i, w[i]);
    top_ = 1;
    while (top_ * 2 <= w.size()) top_ *= 2;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t i = weight_.size(); i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

  void remove(std::size_t i) {
    add(i, -weight_[i]);
    weight_[i] = 0.0;
  }

  double weight(std::size_t i) const { return weight_[i]; }

  /// Smallest index whose inclusive prefix sum exceeds `target`.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step /= 2) {
      const std::size_t next = pos + step;
      if (next <= weight_.size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    return std::min(pos, weight_.size() - 1);
  }

 private:
  void add(std::size_t i, double v) {
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += v;
  }

  std::vector<double> tree_;
  std::vector<double> weight_;
  std::size_t top_ = 1;
};

}  // namespace

SamplingPattern sample_with_replacement(std::span<const double> nu, std::size_t m, std::uint64_t seed) {
  check_request(nu, m, false);
  const AliasTable table(nu);
  Rng rng(seed);
  std::vector<std::size_t> omega(m);
  for (auto& j : omega) j = table.draw(rng);
  return unit_pattern(Scheme::with_replacement, seed, std::move(omega));
}

SamplingPattern sample_without_replacement(std::span<const double> nu, std::size_t m, std::uint64_t seed) {
  check_request(nu, m, true);
  WeightTree tree(nu);
  Rng rng(seed);
  std::vector<std::size_t> omega;
  omega.reserve(m);
  while (omega.size() < m) {
    const std::size_t j = tree.find(rng.uniform() * tree.total());
    // Rounding at a block boundary can land on a removed atom; redraw.
    if (tree.weight(j) <= 0.0) continue;
    omega.push_back(j);
    tree.remove(j);
  }
  return unit_pattern(Scheme::without_replacement, seed, std::move(omega));
}

SamplingPattern sample_reweighted(std::span<const double> nu, std::size_t m, std::uint64_t seed) {
  check_request(nu, m, true);
  const AliasTable table(nu);
  Rng rng(seed);
  std::vector<std::uint64_t> counts(nu.size(), 0);
  SamplingPattern p;
  p.scheme = Scheme::reweighted;
  p.seed = seed;
  p.omega.reserve(m);
  while (p.omega.size() < m) {
    const std::size_t j = table.draw(rng);
    if (counts[j]++ == 0) p.omega.push_back(j);
    ++p.n;
  }
  p.gamma.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.gamma[i] = counts[p.omega[i]];
  return p;
}

SamplingPattern sample_uniform(std::size_t N, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw Error("sampling: m must be at least 1");
  if (m > N) throw Error("sampling: m exceeds N");
  Rng rng(seed);
  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = i + static_cast<std::size_t>(rng.below(N - i));
    std::swap(perm[i], perm[k]);
  }
  perm.resize(m);
  return unit_pattern(Scheme::uniform, seed, std::move(perm));
}

SamplingPattern sample(Scheme scheme, std::span<const double> nu, std::size_t m, std::uint64_t seed) {
  switch (scheme) {
    case Scheme::uniform: return sample_uniform(nu.size(), m, seed);
    case Scheme::with_replacement: return sample_with_replacement(nu, m, seed);
    case Scheme::without_replacement: return sample_without_replacement(nu, m, seed);
    case Scheme::reweighted: return sample_reweighted(nu, m, seed);
  }
  throw Error("sample: bad scheme");
}

std::string serialize(const SamplingPattern& p) {
  std::ostringstream out;
  out << "scheme=" << to_string(p.scheme) << '\n'
      << "seed=" << p.seed << '\n'
      << "m=" << p.m() << '\n'
      << "n=" << p.n << '\n'
      << "omega=";
  for (std::size_t i = 0; i < p.omega.size(); ++i) out << (i ? " " : "") << p.omega[i];
  out << "\ngamma=";
  for (std::size_t i = 0; i < p.gamma.size(); ++i) out << (i ? " " : "") << p.gamma[i];
  out << '\n';
  return out.str();
}

SamplingPattern deserialize_pattern(const std::string& text) {
  SamplingPattern p;
  std::istringstream in(text);
  std::string line;
  std::size_t m = 0;
  bool have_scheme = false;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    std::istringstream value(line.substr(eq + 1));
    if (key == "scheme") {
      std::string s;
      value >> s;
      p.scheme = parse_scheme(s);
      have_scheme = true;
    } else if (key == "seed") {
      value >> p.seed;
    } else if (key == "m") {
      value >> m;
    } else if (key == "n") {
      value >> p.n;
    } else if (key == "omega") {
      for (std::size_t j; value >> j;) p.omega.push_back(j);
    } else if (key == "gamma") {
      for (std::uint64_t g; value >> g;) p.gamma.push_back(g);
    }
  }
  if (!have_scheme || p.omega.size() != m || p.gamma.size() != m)
    throw Error("deserialize_pattern: malformed sampling record");
  if (std::accumulate(p.gamma.begin(), p.gamma.end(), std::uint64_t{0}) != p.n)
    throw Error("deserialize_pattern: n does not equal the sum of gamma");
  return p;
}

}  // namespace rwuq
