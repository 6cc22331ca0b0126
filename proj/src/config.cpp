#include "rwuq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rwuq/format.hpp"

namespace rwuq {

const char* to_string(CountBasis b) { return b == CountBasis::distinct ? "m" : "n"; }

CountBasis parse_count_basis(const std::string& text) {
  if (text == "m" || text == "distinct") return CountBasis::distinct;
  if (text == "n" || text == "virtual") return CountBasis::virtual_total;
  throw Error("unknown sample-count basis '" + text + "' (expected m or n)");
}

std::size_t ExperimentConfig::measurement_count() const {
  return static_cast<std::size_t>(std::floor(subsampling_fraction * static_cast<double>(shape.size()) + 0.5));
}

void ExperimentConfig::validate() const {
  require_power_of_two(shape, "experiment");
  if (!(subsampling_fraction > 0.0 && subsampling_fraction <= 1.0))
    throw Error("config: subsampling fraction must lie in (0, 1]");
  if (measurement_count() < 1) throw Error("config: subsampling fraction yields no measurements");
  if (realizations < 1) throw Error("config: realizations must be at least 1");
  if (!(target_snr > 0.0)) throw Error("config: target SNR must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("config: alpha must lie in (0, 1)");
  if (schemes.empty()) throw Error("config: no sampling scheme selected");
  if (lambda_multipliers.empty()) throw Error("config: empty lambda list");
  for (int k : lambda_multipliers)
    if (k <= 0) throw Error("config: lambda multipliers must be positive");
  if (solver.max_iterations < 1 || !(solver.tolerance > 0.0)) throw Error("config: invalid solver options");
  if (effective_interval_row() >= shape.rows) throw Error("config: interval row outside the image");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  const auto t = trim(s);
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) return t.substr(1, t.size() - 2);
  return t;
}

std::vector<std::string> split_list(const std::string& value) {
  std::string v = trim(value);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw Error("config: unterminated array '" + value + "'");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    item = unquote(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(unquote(v), &pos);
    if (pos != unquote(v).size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d < 0 || d != std::floor(d)) throw Error("config: '" + key + "' expects a nonnegative integer");
  return std::stoull(unquote(v));
}

bool to_bool(const std::string& key, const std::string& v) {
  const auto t = unquote(v);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw Error("config: '" + key + "' expects true/false");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank or table header
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "size") {
    cfg.shape = parse_shape(unquote(value));
  } else if (key == "rows") {
    cfg.shape.rows = to_uint(key, value);
  } else if (key == "cols") {
    cfg.shape.cols = to_uint(key, value);
  } else if (key == "fraction" || key == "subsampling_fraction") {
    cfg.subsampling_fraction = to_double(key, value);
  } else if (key == "scheme" || key == "schemes") {
    cfg.schemes.clear();
    for (const auto& s : split_list(value)) {
      if (s == "both") {
        cfg.schemes = {Scheme::without_replacement, Scheme::reweighted};
      } else {
        cfg.schemes.push_back(parse_scheme(s));
      }
    }
  } else if (key == "lambdas" || key == "lambda_multipliers") {
    cfg.lambda_multipliers.clear();
    for (const auto& s : split_list(value)) cfg.lambda_multipliers.push_back(static_cast<int>(to_uint(key, s)));
  } else if (key == "realizations") {
    cfg.realizations = to_uint(key, value);
  } else if (key == "snr" || key == "target_snr") {
    cfg.target_snr = to_double(key, value);
  } else if (key == "alpha") {
    cfg.alpha = to_double(key, value);
  } else if (key == "seed") {
    cfg.seed = to_uint(key, value);
  } else if (key == "max_iterations") {
    cfg.solver.max_iterations = to_uint(key, value);
  } else if (key == "tolerance") {
    cfg.solver.tolerance = to_double(key, value);
  } else if (key == "restart") {
    cfg.solver.restart = to_bool(key, value);
  } else if (key == "radii_mode") {
    cfg.radii_mode = parse_radii_mode(unquote(value));
  } else if (key == "lambda0_count") {
    cfg.lambda0_count = parse_count_basis(unquote(value));
  } else if (key == "reweighted_normalization") {
    cfg.reweighted_normalization = parse_count_basis(unquote(value));
  } else if (key == "interval_row") {
    cfg.interval_row = to_uint(key, value);
  } else if (key == "interval_lambda") {
    cfg.interval_lambda = static_cast<int>(to_uint(key, value));
  } else if (key == "coherence_cache") {
    cfg.coherence_cache = unquote(value);
  } else if (key == "phantom") {
    cfg.phantom_table = unquote(value);
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

ExperimentConfig config_from_text(const std::string& text) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : parse_key_values(text)) apply_setting(cfg, k, v);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_text(ss.str());
}

std::string describe(const ExperimentConfig& cfg) {
  std::ostringstream o;
  o << "size = \"" << to_string(cfg.shape) << "\"\n"
    << "fraction = " << fmt_number(cfg.subsampling_fraction) << '\n'
    << "# m = " << cfg.measurement_count() << '\n'
    << "schemes = [";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) o << (i ? ", " : "") << '"' << to_string(cfg.schemes[i]) << '"';
  o << "]\nlambdas = [";
  for (std::size_t i = 0; i < cfg.lambda_multipliers.size(); ++i) o << (i ? ", " : "") << cfg.lambda_multipliers[i];
  o << "]\n"
    << "realizations = " << cfg.realizations << '\n'
    << "snr = " << fmt_number(cfg.target_snr) << '\n'
    << "alpha = " << fmt_number(cfg.alpha) << '\n'
    << "seed = " << cfg.seed << '\n'
    << "max_iterations = " << cfg.solver.max_iterations << '\n'
    << "tolerance = " << fmt_number(cfg.solver.tolerance) << '\n'
    << "restart = " << (cfg.solver.restart ? "true" : "false") << '\n'
    << "radii_mode = \"" << to_string(cfg.radii_mode) << "\"\n"
    << "lambda0_count = \"" << to_string(cfg.lambda0_count) << "\"\n"
    << "reweighted_normalization = \"" << to_string(cfg.reweighted_normalization) << "\"\n"
    << "interval_row = " << cfg.effective_interval_row() << '\n'
    << "interval_lambda = " << cfg.interval_lambda << '\n'
    << "coherence_cache = \"" << cfg.coherence_cache.string() << "\"\n"
    << "phantom = \"" << cfg.phantom_table.string() << "\"\n";
  return o.str();
}

}  // namespace rwuq
