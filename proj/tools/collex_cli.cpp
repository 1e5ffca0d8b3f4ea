// collex — spectral densities of collective excitations for two coupled
// anharmonic particle chains.
//
// Usage: collex <command> <config-file> [--set key=value ...] [--output-dir DIR]
// Commands: validate, groundstate, spectrum, kernel, dynamics, oracle-compare.

#include "collex/config.hpp"
#include "collex/dynamics.hpp"
#include "collex/groundstate.hpp"
#include "collex/model.hpp"
#include "collex/oracle.hpp"
#include "collex/renormalize.hpp"
#include "collex/serialize.hpp"
#include "collex/spectral.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitResource = 4;
constexpr int kExitInstability = 5;

struct RunContext {
  collex::RunConfig cfg;
  std::filesystem::path out_dir;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + path.string());
  os << text;
}

void write_json(const RunContext& ctx, const std::string& name, json payload) {
  payload["tool"] = collex::kToolVersion;
  payload["config_hash"] = ctx.cfg.config_hash;
  write_text(ctx.out_dir / name, payload.dump(2) + "\n");
}

void write_series(const RunContext& ctx, const std::string& name,
                  const collex::SpectrumSeries& s) {
  std::ostringstream os;
  collex::write_series_csv(os, s, ctx.cfg.config_hash);
  write_text(ctx.out_dir / name, os.str());
}

void write_traj(const RunContext& ctx, const std::string& name,
                const collex::Trajectory& t) {
  std::ostringstream os;
  collex::write_trajectory_csv(os, t, ctx.cfg.config_hash);
  write_text(ctx.out_dir / name, os.str());
}

collex::Vector omega_grid(const RunContext& ctx) {
  return collex::linspace(ctx.cfg.grids.omega_min, ctx.cfg.grids.omega_max,
                          ctx.cfg.grids.omega_count);
}

double resolve_epsilon(const RunContext& ctx, double omega0,
                       const collex::Vector& grid) {
  return ctx.cfg.epsilon > 0 ? ctx.cfg.epsilon
                             : collex::default_epsilon(omega0, grid);
}

int cmd_validate(const RunContext& ctx) {
  const auto report = collex::validate(ctx.cfg.model);
  write_json(ctx, "validate.json", collex::to_json(report));
  if (!report.overall) {
    json err{{"error", "model validation failed"}};
    for (const auto& c : report.checks)
      if (!c.passed) err["failed_checks"].push_back(c.name);
    std::cerr << err.dump() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_groundstate(const RunContext& ctx) {
  const auto stats = collex::ground_state_stats(ctx.cfg.model,
                                                ctx.cfg.alpha_method,
                                                ctx.cfg.regime);
  json out = collex::to_json(stats);
  out["validity"] = collex::to_json(collex::validity_report(ctx.cfg.model, stats));
  write_json(ctx, "groundstate.json", std::move(out));
  return kExitOk;
}

int cmd_spectrum(const RunContext& ctx) {
  const auto stats = collex::ground_state_stats(ctx.cfg.model,
                                                ctx.cfg.alpha_method,
                                                ctx.cfg.regime);
  const auto sys = collex::renormalize(ctx.cfg.model, stats);
  const auto modes = collex::bath_modes(sys, ctx.cfg.model.mass);
  const auto grid = omega_grid(ctx);
  const double eps = resolve_epsilon(ctx, sys.omega0_renorm, grid);

  collex::SpectrumSeries sigma;
  sigma.kind = collex::SeriesKind::sigma;
  sigma.epsilon = eps;
  sigma.grid = grid;
  sigma.values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    sigma.values[i] = collex::sigma_R(modes, grid[i], eps);
  write_series(ctx, "sigma_R.csv", sigma);

  const auto stilde =
      collex::collective_spectrum(sys.omega0_renorm, modes, grid, eps,
                                  ctx.cfg.model.mass, ctx.cfg.model.hbar);
  write_series(ctx, "s_tilde.csv", stilde);

  write_json(ctx, "spectrum_summary.json",
             json{{"omega0_renorm", sys.omega0_renorm},
                  {"epsilon", eps},
                  {"gamma_at_zero", collex::gamma_kernel(modes, 0.0)},
                  {"bath_mode_count", modes.frequencies.size()}});
  return kExitOk;
}

int cmd_kernel(const RunContext& ctx) {
  const auto stats = collex::ground_state_stats(ctx.cfg.model,
                                                ctx.cfg.alpha_method,
                                                ctx.cfg.regime);
  const auto sys = collex::renormalize(ctx.cfg.model, stats);
  const auto modes = collex::bath_modes(sys, ctx.cfg.model.mass);
  const auto grid = omega_grid(ctx);
  const double eps = resolve_epsilon(ctx, sys.omega0_renorm, grid);

  const auto tcount =
      Eigen::Index(std::floor(ctx.cfg.grids.t_max / ctx.cfg.grids.dt)) + 1;
  collex::SpectrumSeries gamma_t;
  gamma_t.kind = collex::SeriesKind::gamma_t;
  gamma_t.epsilon = 0.0;
  gamma_t.grid = collex::linspace(0.0, ctx.cfg.grids.dt * double(tcount - 1), tcount);
  gamma_t.values.resize(tcount);
  for (Eigen::Index i = 0; i < tcount; ++i)
    gamma_t.values[i] = collex::gamma_kernel(modes, gamma_t.grid[i]);
  write_series(ctx, "gamma_t.csv", gamma_t);

  collex::SpectrumSeries gt_re, gt_im;
  gt_re.kind = collex::SeriesKind::gamma_tilde_re;
  gt_im.kind = collex::SeriesKind::gamma_tilde_im;
  gt_re.epsilon = gt_im.epsilon = eps;
  gt_re.grid = gt_im.grid = grid;
  gt_re.values.resize(grid.size());
  gt_im.values.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto v = collex::gamma_tilde(modes, grid[i], eps);
    gt_re.values[i] = v.real();
    gt_im.values[i] = v.imag();
  }
  write_series(ctx, "gamma_tilde_re.csv", gt_re);
  write_series(ctx, "gamma_tilde_im.csv", gt_im);
  return kExitOk;
}

int cmd_dynamics(const RunContext& ctx) {
  const auto stats = collex::ground_state_stats(ctx.cfg.model,
                                                ctx.cfg.alpha_method,
                                                ctx.cfg.regime);
  const auto sys = collex::renormalize(ctx.cfg.model, stats);
  const auto modes = collex::bath_modes(sys, ctx.cfg.model.mass);

  collex::GLEProblem prob;
  prob.omega0 = sys.omega0_renorm;
  prob.modes = modes;
  prob.x0 = 1.0;
  prob.v0 = 0.0;
  prob.t_max = ctx.cfg.grids.t_max;
  prob.dt = ctx.cfg.grids.dt;
  const auto gle = collex::solve_gle(prob);
  write_traj(ctx, "gle_trajectory.csv", gle);

  const auto init = collex::equilibrium_bath_init(sys, prob.x0);
  const auto full = collex::solve_full_classical(sys, init, gle.times);
  write_traj(ctx, "full_trajectory.csv", full);

  const double dev = (gle.x - full.x).norm() / std::max(full.x.norm(), 1e-300);
  write_json(ctx, "dynamics_summary.json",
             json{{"relative_l2_deviation", dev},
                  {"omega0_renorm", sys.omega0_renorm},
                  {"steps", gle.times.size()}});
  return kExitOk;
}

int cmd_oracle_compare(const RunContext& ctx) {
  const auto stats = collex::ground_state_stats(ctx.cfg.model,
                                                ctx.cfg.alpha_method,
                                                ctx.cfg.regime);
  const auto sys = collex::renormalize(ctx.cfg.model, stats);
  const auto modes = collex::bath_modes(sys, ctx.cfg.model.mass);
  const auto grid = omega_grid(ctx);
  const double eps = resolve_epsilon(ctx, sys.omega0_renorm, grid);

  const auto corr = collex::harmonic_correlator(sys.full_potential,
                                                ctx.cfg.model.mass,
                                                ctx.cfg.model.hbar);
  const auto sticks = collex::broadened_sticks(corr, grid, eps,
                                               ctx.cfg.model.mass,
                                               ctx.cfg.model.hbar);
  const auto stilde =
      collex::collective_spectrum(sys.omega0_renorm, modes, grid, eps,
                                  ctx.cfg.model.mass, ctx.cfg.model.hbar);
  double max_rel = 0.0;
  const double scale = sticks.values.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    max_rel = std::max(max_rel, std::abs(stilde.values[i] - sticks.values[i]) /
                                    std::max(std::abs(sticks.values[i]),
                                             1e-12 * scale));
  const double weight_sum = corr.weights.sum();

  json out{{"max_pointwise_relative_deviation", max_rel},
           {"stick_weight_sum", weight_sum},
           {"omega0_renorm", sys.omega0_renorm},
           {"epsilon", eps},
           {"sticks", collex::to_json(corr)}};

  // Fock comparison only when the truncated basis stays small
  const int n_modes = 2 * ctx.cfg.model.n_particles - 1;
  if (n_modes <= 3 && ctx.cfg.model.lambda > 0) {
    const int n_max = n_modes == 1 ? 40 : 8;
    const auto fock = collex::fock_diagonalize(ctx.cfg.model, n_max);
    const double gap = fock.energies[1] - fock.energies[0];
    const double pred = ctx.cfg.model.hbar * sys.omega0_renorm;
    out["fock"] = {{"gap", gap},
                   {"hbar_omega0_renorm", pred},
                   {"relative_deviation", std::abs(gap - pred) / pred},
                   {"converged", fock.converged},
                   {"basis_cutoff", fock.basis_cutoff}};
  }
  write_json(ctx, "oracle_compare.json", std::move(out));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collective excitation spectra of two coupled particle chains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir_flag;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file")->required();
    sub->add_option("--set", overrides, "override a config key, key=value");
    sub->add_option("--output-dir", output_dir_flag, "output directory");
  };
  for (const char* name : {"validate", "groundstate", "spectrum", "kernel",
                           "dynamics", "oracle-compare"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << nlohmann::json{{"error", "cannot read config file"},
                                  {"path", config_path}}
                       .dump()
                << "\n";
      return kExitParse;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto kv = collex::KeyValueConfig::parse(buf.str());
    for (const auto& ov : overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos)
        throw collex::ConfigParseError("--set expects key=value, got " + ov);
      kv.set(ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (const char* env = std::getenv("COLLEX_OUTPUT_DIR");
        env && !kv.has("output_dir"))
      kv.set("output_dir", env);
    if (!output_dir_flag.empty()) kv.set("output_dir", output_dir_flag);

    RunContext ctx;
    ctx.cfg = collex::run_config_from(kv);
    ctx.out_dir = ctx.cfg.output_dir;
    std::filesystem::create_directories(ctx.out_dir);

    if (command == "validate") return cmd_validate(ctx);
    const auto report = collex::validate(ctx.cfg.model);
    if (!report.overall) {
      json err{{"error", "model validation failed"}};
      for (const auto& c : report.checks)
        if (!c.passed) err["failed_checks"].push_back(c.name);
      std::cerr << err.dump() << "\n";
      return kExitValidation;
    }
    if (command == "groundstate") return cmd_groundstate(ctx);
    if (command == "spectrum") return cmd_spectrum(ctx);
    if (command == "kernel") return cmd_kernel(ctx);
    if (command == "dynamics") return cmd_dynamics(ctx);
    if (command == "oracle-compare") return cmd_oracle_compare(ctx);
    return kExitError;
  } catch (const collex::ConfigParseError& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"kind", "parse"}}.dump()
              << "\n";
    return kExitParse;
  } catch (const collex::ResourceError& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"kind", "resource"}}.dump()
              << "\n";
    return kExitResource;
  } catch (const collex::InstabilityError& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"kind", "instability"}}.dump()
              << "\n";
    return kExitInstability;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return kExitError;
  }
}
