#include "cylab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "cylab/errors.hpp"
#include "experiments.hpp"

#ifndef CYLAB_VERSION
#define CYLAB_VERSION "0.0.0"
#endif

namespace cylab {

std::string version() { return CYLAB_VERSION; }

namespace {

using Runner = ExperimentOutput (*)(const ExperimentConfig&);

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"normalization", detail::run_normalization}, {"rhombus", detail::run_rhombus},
      {"divergence", detail::run_divergence},       {"ball-pair", detail::run_ball_pair},
      {"ball-cyl", detail::run_ball_cyl},           {"covariance", detail::run_covariance},
      {"chain-decay", detail::run_chain_decay},     {"diameter3d", detail::run_diameter3d},
      {"diameter4d", detail::run_diameter4d},       {"scaffold-audit", detail::run_scaffold_audit},
      {"angle-claim", detail::run_angle_claim},     {"x-positive", detail::run_x_positive},
      {"lattice-sum", detail::run_lattice_sum},
  };
  return r;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("invalid integer for '" + key + "': '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const long long v = parse_int(key, text);
  if (v < 0) throw ConfigError("'" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

int parse_small(const std::string& key, const std::string& text) {
  const long long v = parse_int(key, text);
  if (v < -1000000 || v > 1000000) throw ConfigError("'" + key + "' out of range");
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt(v[i]);
  }
  return s;
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = c.experiment;
  j["d"] = c.d;
  j["u"] = c.u;
  j["seed"] = c.seed;
  j["replicas"] = c.replicas;
  j["samples"] = c.samples;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["r-list"] = c.r_list;
  j["rho-list"] = c.rho_list;
  j["R"] = c.R;
  j["m"] = c.m;
  j["n"] = c.n;
  return j;
}

std::string json_scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return fmt(v.get<double>());
  throw ConfigError("unsupported value in manifest config: " + v.dump());
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_list(const std::vector<double>& v, const std::string& name, double min_value) {
  require(!v.empty(), name + " must not be empty");
  for (double x : v) require(x >= min_value, name + " values must be at least " + fmt(min_value));
}

}  // namespace

const std::vector<std::string>& list_experiments() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

int default_threads() {
  const char* env = std::getenv("CYLAB_THREADS");
  if (!env || !*env) return 1;
  const int t = parse_small("CYLAB_THREADS", env);
  if (t < 1) throw ConfigError("CYLAB_THREADS must be a positive integer");
  return t;
}

void apply_setting(ExperimentConfig& c, const std::string& key_in, const std::string& value) {
  const std::string key = trim(key_in);
  if (key == "experiment") c.experiment = trim(value);
  else if (key == "d") c.d = parse_small(key, value);
  else if (key == "u") c.u = parse_double(key, value);
  else if (key == "seed") c.seed = parse_count(key, value);
  else if (key == "replicas") c.replicas = parse_count(key, value);
  else if (key == "samples") c.samples = parse_count(key, value);
  else if (key == "threads") c.threads = parse_small(key, value);
  else if (key == "out") c.out = trim(value);
  else if (key == "r-list") c.r_list = parse_list(key, value);
  else if (key == "rho-list") c.rho_list = parse_list(key, value);
  else if (key == "R") c.R = parse_double(key, value);
  else if (key == "m") c.m = parse_small(key, value);
  else if (key == "n") c.n = parse_small(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  c.threads = default_threads();
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed manifest '" + path + "': " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) throw ConfigError("manifest has no config object");
    ExperimentConfig c;
    c.threads = default_threads();
    for (const auto& [key, v] : j["config"].items()) {
      if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + json_scalar_text(v[i]);
        apply_setting(c, key, s);
      } else {
        apply_setting(c, key, json_scalar_text(v));
      }
    }
    return c;
  }
  return parse_config(text);
}

std::string config_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "experiment = " << c.experiment << "\n"
     << "d = " << c.d << "\n"
     << "u = " << fmt(c.u) << "\n"
     << "seed = " << c.seed << "\n"
     << "replicas = " << c.replicas << "\n"
     << "samples = " << c.samples << "\n"
     << "threads = " << c.threads << "\n"
     << "out = " << c.out << "\n"
     << "r-list = " << join(c.r_list) << "\n"
     << "rho-list = " << join(c.rho_list) << "\n"
     << "R = " << fmt(c.R) << "\n"
     << "m = " << c.m << "\n"
     << "n = " << c.n << "\n";
  return os.str();
}

void validate(const ExperimentConfig& c) {
  const auto& names = list_experiments();
  require(std::find(names.begin(), names.end(), c.experiment) != names.end(),
          "unknown experiment '" + c.experiment + "'");
  require(c.d >= 2 && c.d <= 16, "d must be in [2, 16]");
  require(std::isfinite(c.u) && c.u > 0.0, "u must be positive");
  require(c.threads >= 1, "threads must be positive");
  require(c.replicas >= 1, "replicas must be positive");
  require(c.samples >= 1, "samples must be positive");
  require(!c.out.empty(), "out must not be empty");
  const std::string& e = c.experiment;
  if (e == "normalization") {
    require_list(c.rho_list, "rho-list", 1e-9);
  } else if (e == "rhombus") {
    require(c.d == 3, "rhombus needs d = 3");
    require(c.samples >= 1000, "rhombus needs samples >= 1000");
  } else if (e == "divergence") {
    require(c.d == 3, "divergence needs d = 3");
    require(c.n >= 1 && c.n <= 8, "divergence needs 1 <= n <= 8");
  } else if (e == "ball-pair") {
    require(c.d >= 3, "ball-pair needs d >= 3");
    require_list(c.r_list, "r-list", 4.0);
  } else if (e == "ball-cyl") {
    require(c.d >= 3, "ball-cyl needs d >= 3");
    require_list(c.r_list, "r-list", 4.0);
  } else if (e == "covariance") {
    require_list(c.r_list, "r-list", 0.0);
  } else if (e == "chain-decay") {
    require(c.d >= 2, "chain-decay needs d >= 2");
    require(c.n >= 1, "chain-decay needs n >= 1");
    require_list(c.r_list, "r-list", 2.0);
  } else if (e == "diameter3d") {
    require(c.d == 3, "diameter3d needs d = 3");
    require_list(c.rho_list, "rho-list", 4.0);
  } else if (e == "diameter4d") {
    require(c.d == 4, "diameter4d needs d = 4");
    require_list(c.rho_list, "rho-list", 4.0);
  } else if (e == "scaffold-audit") {
    require(c.d >= 4, "scaffold-audit needs d >= 4");
    require(c.m >= 1 && c.n >= 1, "levels must be at least 1");
  } else if (e == "angle-claim") {
    require(c.d >= 4, "angle-claim needs d >= 4");
    require(c.m >= 1, "level must be at least 1");
  } else if (e == "x-positive") {
    require(c.d == 4 || c.d == 5, "x-positive needs d in {4, 5}");
    require(c.m >= 1, "level must be at least 1");
  } else if (e == "lattice-sum") {
    require(c.n >= 1 && c.n < c.d, "lattice-sum needs 1 <= n < d");
    require_list(c.r_list, "r-list", 1.0);
    for (double r : c.r_list) require(r == std::floor(r), "lattice-sum distances must be integers");
  }
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw InvalidInput("power-law fit needs at least two points");
  const double n = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw InvalidInput("power-law fit needs positive finite values");
    }
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (!(sxx > 0.0)) throw InvalidInput("power-law fit needs at least two distinct x values");
  FitResult f;
  f.points = pts.size();
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  if (pts.size() > 2) {
    double rss = 0.0;
    for (const auto& [x, y] : pts) {
      const double e = std::log(y) - (f.intercept + f.exponent * std::log(x));
      rss += e * e;
    }
    f.std_error = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

double ExperimentOutput::get(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  throw InvalidInput("no summary entry '" + key + "'");
}

std::vector<double> ExperimentOutput::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidInput("no column '" + name + "'");
  const std::size_t j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

std::string format_csv(const ExperimentOutput& out) {
  std::string s;
  for (std::size_t j = 0; j < out.columns.size(); ++j) s += (j ? "," : "") + out.columns[j];
  s += "\n";
  for (const auto& row : out.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) s += (j ? "," : "") + fmt(row[j]);
    s += "\n";
  }
  return s;
}

ExperimentOutput compute_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  for (const auto& [name, fn] : registry()) {
    if (name == cfg.experiment) return fn(cfg);
  }
  throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  const fs::path csv = dir / "results.csv";
  const fs::path manifest = dir / "manifest.json";
  auto cleanup = [&] {
    std::error_code ec;
    fs::remove(csv, ec);
    fs::remove(manifest, ec);
  };
  try {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentOutput out = compute_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& [k, v] : out.summary) {
      if (!std::isfinite(v) && !std::isnan(v)) throw NumericFailure("non-finite summary value '" + k + "'");
    }
    fs::create_directories(dir);
    {
      std::ofstream f(csv, std::ios::binary | std::ios::trunc);
      f << format_csv(out);
      if (!f) throw NumericFailure("failed to write " + csv.string());
    }
    nlohmann::ordered_json j;
    j["experiment"] = cfg.experiment;
    j["version"] = version();
    j["seed"] = cfg.seed;
    j["wall_time_seconds"] = wall;
    j["config"] = config_json(cfg);
    j["columns"] = out.columns;
    j["rows"] = out.rows.size();
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [k, v] : out.summary) {
      if (std::isnan(v)) summary[k] = nullptr;
      else summary[k] = v;
    }
    j["summary"] = summary;
    {
      std::ofstream f(manifest, std::ios::binary | std::ios::trunc);
      f << j.dump(2) << "\n";
      if (!f) throw NumericFailure("failed to write " + manifest.string());
    }
    return out;
  } catch (...) {
    cleanup();
    throw;
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidInput*>(&e) ||
      dynamic_cast<const OutOfDomain*>(&e)) {
    return 2;
  }
  return 3;
}

}  // namespace cylab
