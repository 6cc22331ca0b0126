#include "rwuq/outputs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "rwuq/format.hpp"
#include "rwuq/kernels/kernels.hpp"
#include "rwuq/rng.hpp"
#include "rwuq/transforms.hpp"

namespace rwuq {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
  if (!out) throw Error("write failed for " + file.string());
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + '\n';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  std::istringstream ss(cell);
  ss.imbue(std::locale::classic());
  double v = 0.0;
  if (!(ss >> v)) throw Error("metrics CSV: bad number '" + cell + "'");
  return v;
}

std::string table_csv(const SweepResult& result, Scheme scheme, bool stddev) {
  std::string s = join(metrics_header());
  for (const auto& rec : result.table) {
    if (rec.scheme != scheme) continue;
    std::vector<std::string> row{std::to_string(rec.lambda_multiplier)};
    const auto& values = stddev ? rec.stddev : rec.mean;
    for (double v : values) row.push_back(fmt_number(v));
    const auto& cov = stddev ? rec.coverage_stddev : rec.coverage_mean;
    row.push_back(fmt_number(cov.overall));
    row.push_back(fmt_number(cov.support));
    s += join(row);
  }
  return s;
}

std::string comparison_csv(const SweepResult& result) {
  const auto& schemes = result.config.schemes;
  std::vector<std::string> header{"metric", "lambda_multiplier"};
  for (Scheme s : schemes) header.emplace_back(to_string(s));
  if (schemes.size() == 2) header.emplace_back("ratio");
  std::string out = join(header);
  auto add = [&](const std::string& name, int k, auto&& get) {
    std::vector<std::string> row{name, std::to_string(k)};
    std::vector<double> vals;
    for (Scheme s : schemes) vals.push_back(get(result.record(s, k)));
    for (double v : vals) row.push_back(fmt_number(v));
    if (schemes.size() == 2) row.push_back(fmt_number(vals[0] != 0.0 ? vals[1] / vals[0] : std::nan("")));
    out += join(row);
  };
  for (Metric m : all_metrics()) {
    for (int k : result.config.lambda_multipliers)
      add(metric_name(m), k, [m](const ExperimentRecord& r) { return r.mean[static_cast<std::size_t>(m)]; });
  }
  for (int k : result.config.lambda_multipliers) {
    add("coverage_overall", k, [](const ExperimentRecord& r) { return r.coverage_mean.overall; });
  }
  for (int k : result.config.lambda_multipliers) {
    add("coverage_support", k, [](const ExperimentRecord& r) { return r.coverage_mean.support; });
  }
  return out;
}

std::string realizations_csv(const SweepResult& result) {
  std::vector<std::string> header{"scheme", "lambda_multiplier", "realization", "seed", "m", "n", "sigma", "lambda",
                                  "realized_snr"};
  for (Metric m : all_metrics()) header.emplace_back(metric_name(m));
  for (const char* c : {"coverage_overall", "coverage_support", "decomposition_residual", "domain_deviation",
                        "iterations", "converged", "status"})
    header.emplace_back(c);
  std::string out = join(header);
  for (const auto& r : result.raw) {
    std::vector<std::string> row{to_string(r.scheme),        std::to_string(r.lambda_multiplier),
                                 std::to_string(r.realization), std::to_string(r.seed),
                                 std::to_string(r.m),           std::to_string(r.n),
                                 fmt_number(r.sigma),           fmt_number(r.lambda),
                                 fmt_number(r.realized_snr)};
    for (double v : r.metrics) row.push_back(fmt_number(v));
    row.push_back(fmt_number(r.coverage.overall));
    row.push_back(fmt_number(r.coverage.support));
    row.push_back(fmt_number(r.decomposition_residual));
    row.push_back(fmt_number(r.domain_deviation));
    row.push_back(std::to_string(r.iterations));
    row.push_back(r.converged ? "1" : "0");
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    row.push_back(status);
    out += join(row);
  }
  return out;
}

std::string metadata_text(const SweepResult& result) {
  const auto& cfg = result.config;
  std::ostringstream o;
  o << "# rwuq experiment metadata\n"
    << "version = \"" << kVersion << "\"\n"
    << "rng = \"" << Rng::kIdentity << "\"\n"
    << "transform_convention = \"" << kTransformConventionTag << "\"\n"
    << "solver = \"fista\"\n"
    << "solver_step = \"1/L, L exact from row weights\"\n"
    << "threads = " << kernels::max_threads() << '\n'
    << "measurement_count = " << cfg.measurement_count() << '\n'
    << "\n# config\n"
    << describe(cfg);
  std::size_t failed = 0;
  for (const auto& r : result.raw) failed += r.ok() ? 0 : 1;
  o << "\n# run\nrecords = " << result.raw.size() << "\nfailed_records = " << failed << '\n';
  return o.str();
}

// Minimal SVG helpers.
struct Frame {
  double x0, x1, y0, y1;  // data range
  double left = 70, right = 20, top = 40, bottom = 50, width = 720, height = 420;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

std::string num(double v) { return fmt_number(v, 6); }

void axes(std::ostringstream& o, const Frame& f, const std::string& title, const std::string& xlabel) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
    << "<line x1=\"" << f.left << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.width - f.right << "\" y2=\""
    << f.py(f.y0) << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << f.left << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.left << "\" y2=\"" << f.top
    << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
    << xlabel << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = f.y0 + (f.y1 - f.y0) * t / 4.0;
    o << "<text x=\"" << f.left - 6 << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
      << num(y) << "</text>\n";
  }
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::vector<std::string> metrics_header() {
  std::vector<std::string> h{"lambda_multiplier"};
  for (Metric m : all_metrics()) h.emplace_back(metric_name(m));
  h.emplace_back("coverage_overall");
  h.emplace_back("coverage_support");
  return h;
}

double MetricsTable::value(std::size_t row, const std::string& column) const {
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw Error("metrics table has no column '" + column + "'");
  return rows.at(row).at(static_cast<std::size_t>(it - header.begin()));
}

MetricsTable read_metrics_csv(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  MetricsTable t;
  std::string stem = file.stem().string();
  t.scheme = stem.rfind("metrics_", 0) == 0 ? stem.substr(8) : stem;
  std::string line;
  if (!std::getline(in, line)) throw Error(file.string() + ": empty metrics CSV");
  t.header = split_csv(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != t.header.size()) throw Error(file.string() + ": row width does not match header");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_cell(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string lambda_sweep_svg(const std::vector<MetricsTable>& tables) {
  static const std::array<const char*, 3> series = {"xhat_err_l2", "xu_err_l2", "R_l2"};
  static const std::array<const char*, 3> dashes = {"", "6,3", "2,3"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
  for (const auto& t : tables)
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double x = t.value(r, "lambda_multiplier");
      xmin = std::min(xmin, x), xmax = std::max(xmax, x);
      for (const char* s : series)
        if (std::isfinite(t.value(r, s))) ymax = std::max(ymax, t.value(r, s));
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (xmax == xmin) xmin -= 1, xmax += 1;
  if (ymax <= 0.0) ymax = 1.0;
  Frame f{xmin, xmax, 0.0, ymax * 1.1};
  std::ostringstream o;
  axes(o, f, "Error norms against lambda multiplier", "lambda / lambda_0");
  int legend = 0;
  for (std::size_t ti = 0; ti < tables.size(); ++ti) {
    const auto& t = tables[ti];
    for (std::size_t si = 0; si < series.size(); ++si) {
      o << "<polyline class=\"series\" data-scheme=\"" << t.scheme << "\" data-metric=\"" << series[si]
        << "\" fill=\"none\" stroke=\"" << kColors[ti % 6] << "\" stroke-width=\"2\"";
      if (*dashes[si]) o << " stroke-dasharray=\"" << dashes[si] << "\"";
      o << " points=\"";
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double y = t.value(r, series[si]);
        if (!std::isfinite(y)) continue;
        o << num(f.px(t.value(r, "lambda_multiplier"))) << ',' << num(f.py(y)) << ' ';
      }
      o << "\"/>\n";
      o << "<text x=\"" << f.width - f.right - 200 << "\" y=\"" << f.top + 14 * legend++ << "\" font-size=\"11\" fill=\""
        << kColors[ti % 6] << "\">" << t.scheme << ": " << series[si] << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string interval_svg(const std::vector<IntervalRecord>& records, const std::string& title) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : records) {
    lo = std::min(lo, r.center.real() - r.radius);
    hi = std::max(hi, r.center.real() + r.radius);
    if (r.truth) lo = std::min(lo, r.truth->real()), hi = std::max(hi, r.truth->real());
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi == lo) lo -= 1, hi += 1;
  const double pad = 0.05 * (hi - lo);
  Frame f{-1.0, static_cast<double>(std::max<std::size_t>(records.size(), 1)), lo - pad, hi + pad};
  std::ostringstream o;
  axes(o, f, title, "pixel index");
  for (const auto& r : records) {
    const double x = f.px(static_cast<double>(r.index));
    const bool covered = !r.truth || std::abs(*r.truth - r.center) <= r.radius;
    const char* color = covered ? "#1f77b4" : "#d62728";
    o << "<line class=\"errorbar\" x1=\"" << num(x) << "\" y1=\"" << num(f.py(r.center.real() - r.radius))
      << "\" x2=\"" << num(x) << "\" y2=\"" << num(f.py(r.center.real() + r.radius)) << "\" stroke=\"" << color
      << "\"/>\n"
      << "<circle cx=\"" << num(x) << "\" cy=\"" << num(f.py(r.center.real())) << "\" r=\"1.8\" fill=\"" << color
      << "\"/>\n";
    if (r.truth)
      o << "<rect class=\"truth\" x=\"" << num(x - 2) << "\" y=\"" << num(f.py(r.truth->real()) - 0.75)
        << "\" width=\"4\" height=\"1.5\" fill=\"black\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void emit_outputs(const SweepResult& result, const fs::path& dir) {
  if (result.table.empty()) throw Error("emit_outputs: no records");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());

  std::vector<MetricsTable> tables;
  for (std::size_t s = 0; s < result.config.schemes.size(); ++s) {
    const Scheme scheme = result.config.schemes[s];
    const std::string name = to_string(scheme);
    write_file(dir / ("metrics_" + name + ".csv"), table_csv(result, scheme, false));
    write_file(dir / ("metrics_std_" + name + ".csv"), table_csv(result, scheme, true));
    tables.push_back(read_metrics_csv(dir / ("metrics_" + name + ".csv")));
    if (s < result.intervals.size() && !result.intervals[s].empty()) {
      write_interval_csv(dir / ("intervals_" + name + ".csv"), result.intervals[s]);
      write_file(dir / ("intervals_" + name + ".svg"), interval_svg(result.intervals[s], "Confidence intervals, " + name));
    }
  }
  // Same order plot_from_directory sees, so regenerated plots are identical.
  std::sort(tables.begin(), tables.end(), [](const auto& a, const auto& b) { return a.scheme < b.scheme; });
  write_file(dir / "comparison.csv", comparison_csv(result));
  write_file(dir / "realizations.csv", realizations_csv(result));
  write_file(dir / "lambda_sweep.svg", lambda_sweep_svg(tables));
  write_file(dir / "metadata.txt", metadata_text(result));
}

std::vector<fs::path> plot_from_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> metric_files, interval_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".csv") continue;
    if (name.rfind("metrics_std_", 0) == 0) continue;
    if (name.rfind("metrics_", 0) == 0) metric_files.push_back(entry.path());
    if (name.rfind("intervals_", 0) == 0) interval_files.push_back(entry.path());
  }
  if (metric_files.empty()) throw Error("no metrics_<scheme>.csv files in " + dir.string());
  std::sort(metric_files.begin(), metric_files.end());
  std::sort(interval_files.begin(), interval_files.end());

  std::vector<fs::path> written;
  std::vector<MetricsTable> tables;
  for (const auto& f : metric_files) tables.push_back(read_metrics_csv(f));
  write_file(dir / "lambda_sweep.svg", lambda_sweep_svg(tables));
  written.push_back(dir / "lambda_sweep.svg");
  for (const auto& f : interval_files) {
    const std::string scheme = f.stem().string().substr(std::string("intervals_").size());
    auto out = fs::path(f).replace_extension(".svg");
    write_file(out, interval_svg(read_interval_csv(f), "Confidence intervals, " + scheme));
    written.push_back(out);
  }
  return written;
}

}  // namespace rwuq
