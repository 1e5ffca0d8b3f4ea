// config.hpp — flat `section.key = value` run configuration with bracketed
// row-major matrix literals, e.g.  model.W = [1 -1; -1 1].

#pragma once

#include "collex/groundstate.hpp"
#include "collex/model.hpp"
#include "collex/serialize.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace collex {

struct ConfigParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigParseError("line " + std::to_string(lineno) +
                               ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw ConfigParseError("line " + std::to_string(lineno) + ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }
  void erase(const std::string& key) { values_.erase(key); }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback = "") const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double(it->second, key);
  }
  int get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      int v = std::stoi(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigParseError("key " + key + ": not an integer: " + it->second);
    }
  }
  std::vector<double> get_vector(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    auto rows = parse_bracketed(it->second, key);
    if (rows.empty()) return {};
    if (rows.size() != 1)
      throw ConfigParseError("key " + key + ": expected a single-row vector");
    return rows.front();
  }
  Matrix get_matrix(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
      throw ConfigParseError("key " + key + ": missing matrix");
    auto rows = parse_bracketed(it->second, key);
    if (rows.empty()) throw ConfigParseError("key " + key + ": empty matrix");
    const std::size_t cols = rows.front().size();
    Matrix m(Eigen::Index(rows.size()), Eigen::Index(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw ConfigParseError("key " + key + ": ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j)
        m(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
    }
    return m;
  }

  // Canonical resolved form: keys sorted, one per line.
  std::string canonical_text() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }
  static double parse_double(const std::string& text, const std::string& key) {
    try {
      std::size_t pos = 0;
      double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigParseError("key " + key + ": not a number: " + text);
    }
  }
  // [a b c; d e f] with entries separated by spaces or commas
  static std::vector<std::vector<double>> parse_bracketed(
      const std::string& text, const std::string& key) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
      throw ConfigParseError("key " + key + ": expected bracketed literal");
    t = t.substr(1, t.size() - 2);
    std::vector<std::vector<double>> rows;
    std::size_t start = 0;
    while (start <= t.size()) {
      auto semi = t.find(';', start);
      const std::string row =
          semi == std::string::npos ? t.substr(start) : t.substr(start, semi - start);
      std::vector<double> entries;
      std::istringstream rs(row);
      std::string tok;
      while (rs >> tok) {
        while (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (!tok.empty()) entries.push_back(parse_double(tok, key));
      }
      if (!entries.empty()) rows.push_back(std::move(entries));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    return rows;
  }

  std::map<std::string, std::string> values_;
};

struct GridConfig {
  double omega_min = 0.05;
  double omega_max = 6.0;
  int omega_count = 2000;
  double t_max = 50.0;
  double dt = 0.01;
};

struct RunConfig {
  ChainModel model;
  GridConfig grids;
  double epsilon = 0.0;  // 0 means use the default policy
  AlphaMethod alpha_method = AlphaMethod::exact;
  CRegime regime = CRegime::full;
  std::string output_dir = ".";
  std::string format = "csv";
  std::string config_hash;
};

inline ChainModel model_from_config(const KeyValueConfig& cfg) {
  const std::string kind = cfg.get_string("model.kind", "custom");
  const double mass = cfg.get_double("model.mass", 1.0);
  const double hbar = cfg.get_double("model.hbar", 1.0);
  const double lambda = cfg.get_double("model.lambda", 0.0);
  std::vector<double> coeffs = cfg.get_vector("model.f");

  ChainModel model;
  if (kind == "open-chain" || kind == "ring") {
    const int n = cfg.get_int("model.n", 0);
    const double w = cfg.get_double("model.w", 1.0);
    const double kappa = cfg.get_double("model.kappa", 1.0);
    const std::string shape = cfg.get_string("model.k_shape", "uniform");
    if (shape != "uniform" && shape != "diagonal")
      throw ConfigParseError("model.k_shape: expected uniform or diagonal");
    model = build_standard_model(
        kind == "ring" ? ChainKind::ring : ChainKind::open_chain, n, w, kappa,
        shape == "uniform" ? CouplingShape::uniform : CouplingShape::diagonal,
        mass, hbar, lambda, coeffs);
  } else if (kind == "custom") {
    model.intra_coupling = cfg.get_matrix("model.W");
    model.inter_coupling = cfg.get_matrix("model.K");
    model.n_particles = int(model.intra_coupling.rows());
    model.mass = mass;
    model.hbar = hbar;
    model.lambda = lambda;
    model.anharmonic_coeffs = std::move(coeffs);
    const int n = cfg.get_int("model.n", model.n_particles);
    if (n != model.n_particles)
      throw ConfigParseError("model.n disagrees with matrix dimensions");
  } else {
    throw ConfigParseError("model.kind: expected open-chain, ring or custom");
  }
  return model;
}

inline RunConfig run_config_from(const KeyValueConfig& cfg) {
  RunConfig rc;
  rc.model = model_from_config(cfg);
  rc.grids.omega_min = cfg.get_double("grid.omega_min", rc.grids.omega_min);
  rc.grids.omega_max = cfg.get_double("grid.omega_max", rc.grids.omega_max);
  rc.grids.omega_count = cfg.get_int("grid.omega_count", rc.grids.omega_count);
  rc.grids.t_max = cfg.get_double("grid.t_max", rc.grids.t_max);
  rc.grids.dt = cfg.get_double("grid.dt", rc.grids.dt);
  rc.epsilon = cfg.get_double("epsilon", 0.0);
  const std::string am = cfg.get_string("alpha_method", "exact");
  if (am == "exact")
    rc.alpha_method = AlphaMethod::exact;
  else if (am == "paper")
    rc.alpha_method = AlphaMethod::paper;
  else
    throw ConfigParseError("alpha_method: expected exact or paper");
  const std::string reg = cfg.get_string("regime", "full");
  if (reg == "full")
    rc.regime = CRegime::full;
  else if (reg == "semiclassical")
    rc.regime = CRegime::semiclassical;
  else
    throw ConfigParseError("regime: expected full or semiclassical");
  rc.output_dir = cfg.get_string("output_dir", ".");
  rc.format = cfg.get_string("format", "csv");
  if (rc.format != "csv" && rc.format != "json")
    throw ConfigParseError("format: expected csv or json");
  if (rc.grids.omega_min <= 0 || rc.grids.omega_max <= rc.grids.omega_min ||
      rc.grids.omega_count < 2)
    throw ConfigParseError("grid: need 0 < omega_min < omega_max and count >= 2");
  if (rc.grids.dt <= 0 || rc.grids.t_max < rc.grids.dt)
    throw ConfigParseError("grid: need dt > 0 and t_max >= dt");
  // the hash identifies the physics content; where the files land does not
  KeyValueConfig hashed = cfg;
  hashed.erase("output_dir");
  rc.config_hash = hash_hex(fnv1a_hash(hashed.canonical_text()));
  return rc;
}

}  // namespace collex
