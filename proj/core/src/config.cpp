#include "flatcusp/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flatcusp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

}  // namespace

Config::Config() {
  // Table geometry.
  set("table.beta", "3.0");
  set("table.eps0", "0.5");
  set("table.join_radius", "1.0");
  set("table.wall_radius", "2.0");
  set("table.wall_center_x", "3.0");
  // Corner-series engine.
  set("series.gamma_bar", "0.1");
  set("series.entry_flight", "1.0");
  set("series.entry_curvature", "0");  // 0 = derive from the wall radius
  set("series.fixed_point_tol", "1e-14");
  set("series.fixed_point_max_iter", "100");
  set("series.max_collisions", "2000000");
  // Corner-series ensemble.
  set("corner.count", "2000");
  set("corner.target_min", "100");
  set("corner.target_max", "10000");
  set("corner.u_min", "1.0");
  set("corner.u_max", "3.0");
  set("corner.min_length", "30");
  set("corner.engine", "exact");  // exact | reduced | extended
  set("corner.compare", "0");     // 1 = emit the exact-vs-reduced deviation table
  // Induced system.
  set("induced.K0", "10");
  set("induced.k0", "5");
  // Ergodic tails.
  set("tail.returns", "1000000");
  set("tail.min_bin_count", "50");
  // Transition pairs.
  set("transitions.returns", "1000000");
  // One-step expansion sum.
  set("expansion.n0", "200");
  set("expansion.fan_samples", "4000");
  set("expansion.fan_t_min", "2e-5");
  set("expansion.fan_t_max", "1e-2");
  set("expansion.cone_slope", "0.8");
  set("expansion.series_count", "50");
  set("expansion.series_target", "1000");
  // Correlations.
  set("correlations.orbit", "10000000");
  set("correlations.max_lag", "120");
  set("correlations.batches", "20");
  set("correlations.env_lo", "10");
  set("correlations.env_hi", "100");
  // Run control.
  set("run.seed", "12345");
  set("run.workers", "0");
  set("run.burn_in", "10000");
  set("run.out", "out");
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_string(os.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;  // defaults, overridden below
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (value.empty()) fail(origin, lineno, "empty value for key '" + key + "'");
    if (!cfg.has(key)) fail(origin, lineno, "unknown key '" + key + "'");
    cfg.set(key, value);
  }
  return cfg;
}

double Config::get_double(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "' is not a number: " + v);
  }
}

int Config::get_int(const std::string& key) const {
  const std::int64_t v = get_int64(key);
  if (v < INT32_MIN || v > INT32_MAX)
    throw std::runtime_error("config key '" + key + "' out of int range");
  return static_cast<int>(v);
}

std::int64_t Config::get_int64(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t pos = 0;
    const std::int64_t d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "' is not an integer: " + v);
  }
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string& v = get_string(key);
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "' is not an unsigned integer: " + v);
  }
}

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::runtime_error("unknown config key: " + key);
  return it->second;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void Config::set(const std::string& key, double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  values_[key] = buf;
}

void Config::set(const std::string& key, std::int64_t value) {
  values_[key] = std::to_string(value);
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

std::string Config::hash() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize())));
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace flatcusp
