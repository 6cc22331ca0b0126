#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rwuq/coherence.hpp"
#include "rwuq/config.hpp"
#include "rwuq/experiments.hpp"
#include "rwuq/format.hpp"
#include "rwuq/operators.hpp"
#include "rwuq/outputs.hpp"
#include "rwuq/phantom.hpp"
#include "rwuq/sampling.hpp"
#include "rwuq/uq.hpp"

namespace fs = std::filesystem;
using namespace rwuq;

namespace {

int cmd_coherence(const std::string& size, const std::string& cache_dir, const std::string& out_file) {
  const Shape shape = parse_shape(size);
  CoherenceProfile profile;
  std::vector<fs::path> written;
  if (!cache_dir.empty()) {
    profile = cached_local_coherence(cache_dir, shape);
    written.push_back(coherence_cache_path(cache_dir, shape));
  } else {
    profile = local_coherence(shape);
  }
  if (!out_file.empty()) {
    write_coherence_cache(out_file, profile);
    written.push_back(out_file);
  }
  double kmin = profile.kappa[0], kmax = profile.kappa[0];
  for (double k : profile.kappa) kmin = std::min(kmin, k), kmax = std::max(kmax, k);
  std::cout << "shape " << to_string(shape) << "  ||kappa||_2 = " << fmt_number(profile.kappa_norm)
            << "  kappa in [" << fmt_number(kmin) << ", " << fmt_number(kmax) << "]\n";
  for (const auto& p : written) std::cout << "wrote " << p.string() << '\n';
  return 0;
}

int cmd_phantom(const std::string& size, const std::string& table, const std::string& out_prefix, bool print_table) {
  if (print_table) {
    const auto t = table.empty() ? modified_shepp_logan_table() : read_ellipse_table(table);
    std::cout << format_ellipse_table(t);
    if (out_prefix.empty()) return 0;
  }
  const Shape shape = parse_shape(size);
  const ComplexImage img = table.empty() ? shepp_logan(shape) : rasterize(shape, read_ellipse_table(table));
  const std::string prefix = out_prefix.empty() ? "phantom_" + to_string(shape) : out_prefix;
  write_pgm(prefix + ".pgm", img);
  write_raw_image(prefix + ".raw", img);
  std::cout << "wrote " << prefix << ".pgm and " << prefix << ".raw\n";
  return 0;
}

struct RunFlags {
  std::string config, scheme, size, fraction, lambdas, realizations, snr, alpha, seed, radii_mode;
  std::string out = "results";
};

int cmd_run(const RunFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  const std::pair<const char*, const std::string*> overrides[] = {
      {"schemes", &f.scheme},   {"size", &f.size},   {"fraction", &f.fraction}, {"lambdas", &f.lambdas},
      {"realizations", &f.realizations}, {"snr", &f.snr}, {"alpha", &f.alpha}, {"seed", &f.seed},
      {"radii_mode", &f.radii_mode},
  };
  for (const auto& [key, value] : overrides)
    if (!value->empty()) apply_setting(cfg, key, *value);
  cfg.validate();

  std::cerr << "running " << cfg.schemes.size() << " scheme(s) x " << cfg.realizations << " realization(s) x "
            << cfg.lambda_multipliers.size() << " lambda(s) at " << to_string(cfg.shape) << ", m = "
            << cfg.measurement_count() << '\n';
  const SweepResult result = run_sweep(cfg);
  emit_outputs(result, f.out);

  for (int k : cfg.lambda_multipliers) {
    std::cout << "lambda = " << k << " lambda_0\n";
    for (Scheme s : cfg.schemes) {
      const auto& r = result.record(s, k);
      auto mv = [&](Metric m) { return fmt_number(r.mean[static_cast<std::size_t>(m)], 4); };
      std::cout << "  " << to_string(s) << ": |xhat-x0|_2 = " << mv(Metric::xhat_err_l2)
                << "  |xu-x0|_2 = " << mv(Metric::xu_err_l2) << "  |R|_2 = " << mv(Metric::r_l2)
                << "  |W|_2 = " << mv(Metric::w_l2) << "  coverage = " << fmt_number(r.coverage_mean.overall, 4)
                << "  (" << r.count << " runs)\n";
    }
  }
  std::size_t failed = 0;
  for (const auto& r : result.raw) failed += !r.ok();
  if (failed) std::cerr << failed << " record(s) failed; see realizations.csv\n";
  std::cout << "outputs in " << f.out << '\n';
  return 0;
}

int cmd_plot(const std::string& dir) {
  for (const auto& p : plot_from_directory(dir)) std::cout << "wrote " << p.string() << '\n';
  return 0;
}

int cmd_verify(const std::string& size, std::size_t patterns, std::size_t m, std::size_t draws, double alpha,
               std::uint64_t seed) {
  bool ok = true;
  const Shape shape = parse_shape(size);
  const CoherenceProfile profile = local_coherence(shape);
  double worst = 0.0;
  for (std::size_t p = 0; p < patterns; ++p) {
    const auto pattern = sample_reweighted(profile.nu, m, seed + p);
    worst = std::max(worst, gram_identity_deviation(shape, pattern, profile));
  }
  const bool gram_ok = worst <= 1e-10;
  ok &= gram_ok;
  std::cout << (gram_ok ? "PASS" : "FAIL") << " reweighted gram equals expanded gram: max deviation "
            << fmt_number(worst, 3) << " over " << patterns << " patterns at N = " << shape.size() << ", m = " << m
            << '\n';

  const auto pattern = sample_reweighted(profile.nu, m, seed);
  const auto op = MeasurementOperator::reweighted(shape, pattern, profile, Domain::image);
  const double rate = null_noncoverage(op, 1.0, alpha, draws, mix_seed(seed, 7));
  const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(draws));
  const bool cal_ok = std::abs(rate - alpha) <= 3.0 * se;
  ok &= cal_ok;
  std::cout << (cal_ok ? "PASS" : "FAIL") << " calibration without remainder: non-coverage " << fmt_number(rate, 4)
            << " vs alpha " << fmt_number(alpha) << " (3 SE = " << fmt_number(3.0 * se, 3) << ", " << draws
            << " draws)\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Debiased LASSO confidence intervals for subsampled Fourier imaging with Haar sparsity"};
  app.require_subcommand(1);

  auto* coh = app.add_subcommand("coherence", "Compute local coherences and optionally cache them");
  std::string coh_size = "64x64", coh_cache, coh_out;
  coh->add_option("--size", coh_size, "Image size RxC");
  coh->add_option("--cache-dir", coh_cache, "Cache directory (reads or creates coherence_RxC.txt)");
  coh->add_option("--out", coh_out, "Write the coherence file here");

  auto* ph = app.add_subcommand("phantom", "Rasterize the phantom to PGM and raw complex binary");
  std::string ph_size = "64x64", ph_table, ph_out;
  bool ph_print = false;
  ph->add_option("--size", ph_size, "Image size RxC");
  ph->add_option("--table", ph_table, "Ellipse table: intensity cx cy a b angle per line");
  ph->add_option("--out", ph_out, "Output prefix (writes PREFIX.pgm and PREFIX.raw)");
  ph->add_flag("--print-table", ph_print, "Print the ellipse table");

  auto* run = app.add_subcommand("run", "Run the full lambda sweep");
  RunFlags rf;
  run->add_option("--config", rf.config, "key = value config file");
  run->add_option("--scheme", rf.scheme, "uniform, with_replacement, without_replacement, reweighted, both or a list");
  run->add_option("--size", rf.size, "Image size RxC");
  run->add_option("--fraction", rf.fraction, "Subsampling fraction m/N");
  run->add_option("--lambdas", rf.lambdas, "Comma-separated lambda multipliers");
  run->add_option("--realizations", rf.realizations, "Number of realizations");
  run->add_option("--snr", rf.snr, "Target noise-to-signal ratio");
  run->add_option("--alpha", rf.alpha, "Confidence level alpha");
  run->add_option("--seed", rf.seed, "Root seed");
  run->add_option("--out", rf.out, "Output directory");
  run->add_option("--radii-mode", rf.radii_mode, "exact_variance or paper_literal");

  auto* plot = app.add_subcommand("plot", "Regenerate SVG plots from the CSVs in a directory");
  std::string plot_dir = "results";
  plot->add_option("--dir,dir", plot_dir, "Output directory of a run");

  auto* ver = app.add_subcommand("verify", "Check the reweighted gram identity and interval calibration");
  std::string ver_size = "8x8";
  std::size_t ver_patterns = 100, ver_m = 20, ver_draws = 10000;
  double ver_alpha = 0.05;
  std::uint64_t ver_seed = 1;
  ver->add_option("--size", ver_size, "Image size RxC");
  ver->add_option("--patterns", ver_patterns, "Patterns for the gram identity");
  ver->add_option("--m", ver_m, "Distinct samples per pattern");
  ver->add_option("--draws", ver_draws, "Noise draws for the calibration check");
  ver->add_option("--alpha", ver_alpha, "Confidence level alpha");
  ver->add_option("--seed", ver_seed, "Seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*coh) return cmd_coherence(coh_size, coh_cache, coh_out);
    if (*ph) return cmd_phantom(ph_size, ph_table, ph_out, ph_print);
    if (*run) return cmd_run(rf);
    if (*plot) return cmd_plot(plot_dir);
    if (*ver) return cmd_verify(ver_size, ver_patterns, ver_m, ver_draws, ver_alpha, ver_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
