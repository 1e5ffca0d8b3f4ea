// serialize.hpp — deterministic text output: shortest round-trip floats,
// CSV series/trajectory writers and JSON conversions.

#pragma once

#include "collex/dynamics.hpp"
#include "collex/groundstate.hpp"
#include "collex/model.hpp"
#include "collex/oracle.hpp"
#include "collex/renormalize.hpp"
#include "collex/spectral.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>

namespace collex {

inline constexpr const char* kToolVersion = "collex 0.1.0";

// Shortest representation that round-trips, locale independent.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// FNV-1a 64-bit, used to stamp outputs with the resolved config.
inline std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  return std::string(buf, 16);
}

inline const char* series_kind_name(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::sigma: return "sigma";
    case SeriesKind::gamma_t: return "gamma_t";
    case SeriesKind::gamma_tilde_re: return "gamma_tilde_re";
    case SeriesKind::gamma_tilde_im: return "gamma_tilde_im";
    case SeriesKind::s_tilde: return "s_tilde";
  }
  return "unknown";
}

inline void write_series_csv(std::ostream& os, const SpectrumSeries& s,
                             const std::string& config_hash) {
  os << "# " << kToolVersion << " config-hash=" << config_hash << "\n";
  os << "# kind=" << series_kind_name(s.kind)
     << " epsilon=" << format_double(s.epsilon) << "\n";
  os << "grid,value\n";
  for (Eigen::Index i = 0; i < s.grid.size(); ++i)
    os << format_double(s.grid[i]) << "," << format_double(s.values[i]) << "\n";
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const std::string& config_hash) {
  os << "# " << kToolVersion << " config-hash=" << config_hash << "\n";
  os << "t,x,v\n";
  for (Eigen::Index i = 0; i < traj.times.size(); ++i)
    os << format_double(traj.times[i]) << "," << format_double(traj.x[i]) << ","
       << format_double(traj.v[i]) << "\n";
}

// Matrices serialize row-major as nested arrays.
inline nlohmann::json to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline nlohmann::json to_json(const ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"margin", c.margin}});
  return {{"checks", checks}, {"overall", report.overall}};
}

inline nlohmann::json to_json(const GroundStateStats& stats) {
  return {{"gamma_diag", to_json(stats.gamma_diag)},
          {"alpha", to_json(stats.alpha)},
          {"c_matrix", to_json(stats.c)},
          {"h1_expectation", stats.h1},
          {"alpha_method",
           stats.alpha_method == AlphaMethod::exact ? "exact" : "paper"}};
}

inline nlohmann::json to_json(const RenormalizedSystem& sys) {
  return {{"k_renorm", to_json(sys.k_renorm)},
          {"m_renorm_diag", to_json(sys.m_renorm_diag)},
          {"ktilde", to_json(sys.ktilde)},
          {"k_r", to_json(sys.k_r)},
          {"k_vec", to_json(sys.k_vec)},
          {"omega0_renorm", sys.omega0_renorm},
          {"full_potential", to_json(sys.full_potential)}};
}

inline nlohmann::json to_json(const ModalCorrelator& corr) {
  return {{"mode_freqs", to_json(corr.mode_freqs)},
          {"collective_overlaps", to_json(corr.collective_overlaps)},
          {"weights", to_json(corr.weights)}};
}

inline nlohmann::json to_json(const FockResult& res) {
  return {{"energies", to_json(res.energies)},
          {"transition_strengths", to_json(res.transition_strengths)},
          {"basis_cutoff", res.basis_cutoff},
          {"converged", res.converged}};
}

// Canonical text form of a model: config-file syntax, row-major matrices.
inline std::string canonical_model_text(const ChainModel& model) {
  std::string out;
  auto mat = [](const Matrix& m) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i) s += "; ";
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) s += " ";
        s += format_double(m(i, j));
      }
    }
    return s + "]";
  };
  out += "model.n = " + std::to_string(model.n_particles) + "\n";
  out += "model.mass = " + format_double(model.mass) + "\n";
  out += "model.hbar = " + format_double(model.hbar) + "\n";
  out += "model.lambda = " + format_double(model.lambda) + "\n";
  out += "model.W = " + mat(model.intra_coupling) + "\n";
  out += "model.K = " + mat(model.inter_coupling) + "\n";
  out += "model.f = [";
  for (std::size_t i = 0; i < model.anharmonic_coeffs.size(); ++i) {
    if (i) out += " ";
    out += format_double(model.anharmonic_coeffs[i]);
  }
  out += "]\n";
  return out;
}

}  // namespace collex
