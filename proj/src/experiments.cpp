#include "rwuq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rwuq/debias.hpp"
#include "rwuq/phantom.hpp"
#include "rwuq/rng.hpp"
#include "rwuq/solver.hpp"

namespace rwuq {

namespace {

constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::zhat_err_inf, Metric::xhat_err_inf, Metric::xhat_err_l2, Metric::zu_err_inf, Metric::xu_err_inf,
    Metric::xu_err_l2,    Metric::rz_inf,       Metric::rx_inf,      Metric::r_l2,       Metric::wz_inf,
    Metric::wx_inf,       Metric::w_l2,         Metric::zhat_err_l2, Metric::zu_err_l2,  Metric::r_over_w,
};

constexpr std::uint64_t kNoiseStream = 1;

double& at(MetricValues& v, Metric m) { return v[static_cast<std::size_t>(m)]; }

ComplexVector to_image(const Shape& shape, const ComplexVector& z) { return haar2d_adjoint(ComplexImage(shape, z)).data; }

}  // namespace

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::zhat_err_inf: return "zhat_err_inf";
    case Metric::xhat_err_inf: return "xhat_err_inf";
    case Metric::xhat_err_l2: return "xhat_err_l2";
    case Metric::zu_err_inf: return "zu_err_inf";
    case Metric::xu_err_inf: return "xu_err_inf";
    case Metric::xu_err_l2: return "xu_err_l2";
    case Metric::rz_inf: return "Rz_inf";
    case Metric::rx_inf: return "Rx_inf";
    case Metric::r_l2: return "R_l2";
    case Metric::wz_inf: return "Wz_inf";
    case Metric::wx_inf: return "Wx_inf";
    case Metric::w_l2: return "W_l2";
    case Metric::zhat_err_l2: return "zhat_err_l2";
    case Metric::zu_err_l2: return "zu_err_l2";
    case Metric::r_over_w: return "R_over_W";
  }
  return "?";
}

const std::array<Metric, kMetricCount>& all_metrics() { return kAllMetrics; }

const ExperimentRecord& SweepResult::record(Scheme scheme, int lambda_multiplier) const {
  for (const auto& r : table)
    if (r.scheme == scheme && r.lambda_multiplier == lambda_multiplier) return r;
  throw Error(std::string("no record for scheme ") + to_string(scheme) + " at lambda multiplier " +
              std::to_string(lambda_multiplier));
}

double calibrate_sigma(const MeasurementOperator& op, std::span<const Complex> ground_truth, double target_snr) {
  if (!(target_snr > 0.0)) throw Error("calibrate_sigma: target SNR must be positive");
  const double signal = norm2(op.forward(ground_truth));
  if (!(signal > 0.0)) throw Error("calibrate_sigma: zero signal");
  double w2 = 0.0;
  for (double w : op.row_weights()) w2 += w * w;
  if (!(w2 > 0.0)) throw Error("calibrate_sigma: all row weights are zero");
  return target_snr * signal / std::sqrt(w2);
}

double lambda0(double sigma, std::size_t count, std::size_t N) {
  return sigma / static_cast<double>(count) * (2.0 + std::sqrt(12.0 * std::log(static_cast<double>(N))));
}

ComplexImage experiment_phantom(const ExperimentConfig& cfg) {
  if (cfg.phantom_table.empty()) return shepp_logan(cfg.shape);
  const auto table = read_ellipse_table(cfg.phantom_table);
  return rasterize(cfg.shape, table);
}

CoherenceProfile experiment_coherence(const ExperimentConfig& cfg) {
  if (cfg.coherence_cache.empty()) return local_coherence(cfg.shape);
  return cached_local_coherence(cfg.coherence_cache, cfg.shape);
}

RealizationSetup prepare_realization(const ExperimentConfig& cfg, const CoherenceProfile& profile, Scheme scheme,
                                     std::size_t realization, std::span<const Complex> z0) {
  const std::uint64_t seed = cfg.seed + realization;
  auto pattern = sample(scheme, profile.nu, cfg.measurement_count(), seed);
  auto op = MeasurementOperator::for_scheme(cfg.shape, pattern, profile, Domain::haar);
  if (scheme == Scheme::reweighted && cfg.reweighted_normalization == CountBasis::distinct)
    op = op.with_normalization(pattern.m());

  const double sigma = calibrate_sigma(op, z0, cfg.target_snr);
  Rng noise_rng(mix_seed(seed, kNoiseStream));
  ComplexVector noise(op.measurement_count());
  for (auto& e : noise) e = noise_rng.complex_normal(sigma * sigma);
  ComplexVector y = op.measure(z0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += noise[i];

  const auto image_op = op.with_domain(Domain::image);
  RealVector radii = confidence_radii(image_op, sigma, cfg.alpha, cfg.radii_mode);
  return RealizationSetup{scheme, realization, seed, std::move(pattern), std::move(op), sigma,
                          std::move(noise), std::move(y), std::move(radii)};
}

RealizationRecord run_single(const ExperimentConfig& cfg, const RealizationSetup& setup, int lambda_multiplier,
                             std::span<const Complex> x0, std::span<const Complex> z0,
                             std::vector<IntervalRecord>* intervals) {
  const Shape& shape = cfg.shape;
  const auto& op = setup.op;
  RealizationRecord rec;
  rec.scheme = setup.scheme;
  rec.lambda_multiplier = lambda_multiplier;
  rec.realization = setup.realization;
  rec.seed = setup.seed;
  rec.m = setup.pattern.m();
  rec.n = setup.pattern.n;
  rec.sigma = setup.sigma;
  rec.realized_snr = norm2(op.weight(setup.noise)) / norm2(op.forward(z0));
  const std::size_t count = cfg.lambda0_count == CountBasis::distinct ? setup.pattern.m() : setup.pattern.n;
  rec.lambda = lambda_multiplier * lambda0(setup.sigma, count, shape.size());

  SolverOptions opts = cfg.solver;
  if (!opts.lipschitz) opts.lipschitz = op.lipschitz();
  SolverResult sol;
  try {
    sol = lasso_solve(op, setup.y, rec.lambda, opts);
  } catch (const SolverDivergence& e) {
    rec.status = e.what();
    rec.metrics.fill(std::nan(""));
    rec.coverage = {std::nan(""), std::nan("")};
    std::fprintf(stderr, "realization %zu (%s, lambda %d): %s\n", setup.realization, to_string(setup.scheme),
                 lambda_multiplier, e.what());
    return rec;
  }
  rec.iterations = sol.iterations_used;
  rec.converged = sol.converged;

  const ComplexVector& z_hat = sol.solution;
  const ComplexVector z_u = debias_estimate(op, z_hat, setup.y);
  const Decomposition dec_z = decompose(op, z_hat, z0, setup.noise);
  const Decomposition dec_x = to_image_domain(dec_z, shape);
  const ComplexVector x_hat = to_image(shape, z_hat);
  const ComplexVector x_u = to_image(shape, z_u);

  const auto ez_hat = subtract(z_hat, z0), ex_hat = subtract(x_hat, x0);
  const auto ez_u = subtract(z_u, z0), ex_u = subtract(x_u, x0);

  auto& mv = rec.metrics;
  at(mv, Metric::zhat_err_inf) = norm_inf(ez_hat);
  at(mv, Metric::xhat_err_inf) = norm_inf(ex_hat);
  at(mv, Metric::xhat_err_l2) = norm2(ex_hat);
  at(mv, Metric::zu_err_inf) = norm_inf(ez_u);
  at(mv, Metric::xu_err_inf) = norm_inf(ex_u);
  at(mv, Metric::xu_err_l2) = norm2(ex_u);
  at(mv, Metric::rz_inf) = norm_inf(dec_z.r_term);
  at(mv, Metric::rx_inf) = norm_inf(dec_x.r_term);
  at(mv, Metric::r_l2) = norm2(dec_x.r_term);
  at(mv, Metric::wz_inf) = norm_inf(dec_z.w_term);
  at(mv, Metric::wx_inf) = norm_inf(dec_x.w_term);
  at(mv, Metric::w_l2) = norm2(dec_x.w_term);
  at(mv, Metric::zhat_err_l2) = norm2(ez_hat);
  at(mv, Metric::zu_err_l2) = norm2(ez_u);
  at(mv, Metric::r_over_w) = at(mv, Metric::w_l2) > 0 ? at(mv, Metric::r_l2) / at(mv, Metric::w_l2) : 0.0;

  rec.decomposition_residual =
      std::max(decomposition_residual(z_u, z0, dec_z), decomposition_residual(x_u, x0, dec_x));
  rec.domain_deviation = std::max({std::abs(norm2(dec_z.r_term) - norm2(dec_x.r_term)),
                                   std::abs(norm2(dec_z.w_term) - norm2(dec_x.w_term)),
                                   std::abs(norm2(ez_hat) - norm2(ex_hat)), std::abs(norm2(ez_u) - norm2(ex_u))});
  rec.coverage = coverage(x0, x_u, setup.radii);
  if (intervals) *intervals = interval_export(shape, x_u, setup.radii, cfg.effective_interval_row(), x0);
  return rec;
}

namespace {

ExperimentRecord aggregate(Scheme scheme, int lambda_multiplier, const std::vector<const RealizationRecord*>& rows) {
  ExperimentRecord out;
  out.scheme = scheme;
  out.lambda_multiplier = lambda_multiplier;
  std::vector<const RealizationRecord*> ok;
  for (const auto* r : rows)
    if (r->ok()) ok.push_back(r);
  out.count = ok.size();
  if (ok.empty()) {
    out.mean.fill(std::nan(""));
    out.stddev.fill(std::nan(""));
    out.coverage_mean = out.coverage_stddev = {std::nan(""), std::nan("")};
    return out;
  }
  const double k = static_cast<double>(ok.size());
  auto mean_sd = [&](auto&& get) {
    double s = 0.0;
    for (const auto* r : ok) s += get(*r);
    const double mean = s / k;
    double ss = 0.0;
    for (const auto* r : ok) ss += (get(*r) - mean) * (get(*r) - mean);
    return std::pair{mean, ok.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0};
  };
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    auto [m, sd] = mean_sd([i](const RealizationRecord& r) { return r.metrics[i]; });
    out.mean[i] = m;
    out.stddev[i] = sd;
  }
  auto [co, cos] = mean_sd([](const RealizationRecord& r) { return r.coverage.overall; });
  auto [cs, css] = mean_sd([](const RealizationRecord& r) { return r.coverage.support; });
  out.coverage_mean = {co, cs};
  out.coverage_stddev = {cos, css};
  return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const ComplexImage img = experiment_phantom(cfg);
  const auto [x0, z0] = ground_truth_pair(img);
  const CoherenceProfile profile = experiment_coherence(cfg);

  const std::size_t S = cfg.schemes.size();
  const std::size_t R = cfg.realizations;
  const std::size_t K = cfg.lambda_multipliers.size();

  std::vector<std::optional<RealizationSetup>> setups(S * R);
  std::vector<std::string> setup_errors(S * R);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(S * R); ++t) {
    const auto u = static_cast<std::size_t>(t);
    try {
      setups[u].emplace(prepare_realization(cfg, profile, cfg.schemes[u / R], u % R, z0));
    } catch (const std::exception& e) {
      setup_errors[u] = e.what();
    }
  }
  for (const auto& e : setup_errors)
    if (!e.empty()) throw Error("experiment setup failed: " + e);

  SweepResult result;
  result.config = cfg;
  result.raw.resize(S * R * K);
  result.intervals.resize(S);
  const auto interval_it = std::find(cfg.lambda_multipliers.begin(), cfg.lambda_multipliers.end(), cfg.interval_lambda);
  const std::size_t interval_k = static_cast<std::size_t>(interval_it - cfg.lambda_multipliers.begin());

  // Task index order is (scheme, lambda, realization), the sorted output order.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(S * R * K); ++t) {
    const auto u = static_cast<std::size_t>(t);
    const std::size_t s = u / (K * R);
    const std::size_t k = (u / R) % K;
    const std::size_t r = u % R;
    std::vector<IntervalRecord>* iv = (r == 0 && k == interval_k) ? &result.intervals[s] : nullptr;
    result.raw[u] = run_single(cfg, *setups[s * R + r], cfg.lambda_multipliers[k], x0, z0, iv);
  }

  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<const RealizationRecord*> rows;
      for (std::size_t r = 0; r < R; ++r) rows.push_back(&result.raw[(s * K + k) * R + r]);
      result.table.push_back(aggregate(cfg.schemes[s], cfg.lambda_multipliers[k], rows));
    }
  }
  return result;
}

}  // namespace rwuq
