// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: solve, converge, oracle roots|map, indicator, assemble-check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resonance/assembly.hpp"
#include "resonance/config.hpp"
#include "resonance/errors.hpp"
#include "resonance/linalg.hpp"
#include "resonance/oracle.hpp"
#include "resonance/pipeline.hpp"
#include "resonance/sim.hpp"

namespace fs = std::filesystem;
using namespace resonance;

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common
{
  std::string config_path;
  std::optional<int> level;
  std::optional<int> workers;
  std::optional<long long> seed;
  std::optional<std::string> out;
  bool allow_large = false;
};

void add_common(CLI::App *app, Common &c)
{
  app->add_option("--config", c.config_path, "Run configuration file")->required();
  app->add_option("--level", c.level, "Mesh refinement level (1-5)");
  app->add_option("--workers", c.workers, "Worker threads for the region pool");
  app->add_option("--seed", c.seed, "Probe-vector seed");
  app->add_option("--out", c.out, "Output directory");
  app->add_flag("--allow-large", c.allow_large, "Permit level 5");
}

RunConfig load(const Common &c)
{
  RunConfig cfg = load_run_config(c.config_path);
  if (c.level)
  {
    cfg.level = *c.level;
  }
  if (c.workers)
  {
    cfg.sim.workers = *c.workers;
  }
  if (c.seed)
  {
    if (*c.seed < 0)
    {
      throw ConfigError("--seed must be non-negative");
    }
    cfg.sim.seed = static_cast<std::uint64_t>(*c.seed);
  }
  if (c.out)
  {
    cfg.output_dir = *c.out;
  }
  validate(cfg);
  return cfg;
}

void require_size(int level, bool allow_large)
{
  if (level >= 5 && !allow_large)
  {
    throw ConfigError("level 5 needs --allow-large (about 370k unknowns)");
  }
}

std::string fmt_complex(Complex z)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", z.real(), z.imag());
  return buf;
}

int run_solve(const Common &c)
{
  const RunConfig cfg = load(c);
  require_size(cfg.level, c.allow_large);
  const SolveReport report = solve(cfg, cfg.level);
  write_solve_artifacts(cfg.output_dir, cfg, report);
  std::printf("level %d: %zu unknowns, %zu resonances, %zu regions, %.1f s\n", cfg.level,
              report.mesh.n_vertices, report.search.resonances.size(),
              report.search.regions_evaluated, report.seconds_search);
  for (const auto &r : report.search.resonances)
  {
    std::printf("  %s  residual %.2e\n", fmt_complex(r.k).c_str(), r.residual);
  }
  if (!report.search.flagged.empty())
  {
    std::printf("  %zu regions flagged as eigenvalue on contour (see trace.txt)\n",
                report.search.flagged.size());
  }
  return 0;
}

int run_converge(const Common &c, int first_level)
{
  const RunConfig cfg = load(c);
  require_size(cfg.levels, c.allow_large);
  const ConvergenceReport report =
      converge(cfg, first_level, [](const std::string &msg) { std::printf("%s\n", msg.c_str()); });
  fs::create_directories(cfg.output_dir);
  std::ofstream os(fs::path(cfg.output_dir) / "convergence.csv");
  write_convergence_csv(os, report);
  for (std::size_t t = 0; t < report.tracked.size(); t++)
  {
    const auto &tr = report.tracked[t];
    std::printf("k%zu:", t + 1);
    for (double o : tr.orders)
    {
      std::printf(" order %.2f", o);
    }
    std::printf("  richardson %s%s\n", fmt_complex(tr.richardson).c_str(),
                tr.exact ? " (exact convergence)" : "");
  }
  return 0;
}

int run_oracle(const Common &c, const std::string &what)
{
  const RunConfig cfg = load(c);
  const oracle::DiskProblem problem = disk_problem(cfg);
  fs::create_directories(cfg.output_dir);
  if (what == "roots")
  {
    const auto roots = oracle::oracle_roots(problem, cfg.theta, cfg.oracle_step);
    std::ofstream os(fs::path(cfg.output_dir) / "oracle_roots.csv");
    oracle::write_roots_csv(os, roots);
    std::printf("%zu roots (%d Newton runs dropped)\n", roots.roots.size(), roots.dropped);
    for (const auto &r : roots.roots)
    {
      std::printf("  n=%d  %s\n", r.n, fmt_complex(r.k).c_str());
    }
  }
  else
  {
    const auto map = oracle::contour_map(problem, cfg.theta, cfg.map_resolution);
    std::ofstream os(fs::path(cfg.output_dir) / "oracle_map.csv");
    oracle::write_map_csv(os, map);
    std::printf("%d x %d map written\n", map.resolution, map.resolution);
  }
  return 0;
}

int run_indicator(const Common &c, const std::vector<double> &center, double radius,
                  bool self_test)
{
  const RunConfig cfg = load(c);
  require_size(cfg.level, c.allow_large);
  const ProbeReport p =
      indicator_probe(cfg, cfg.level, Complex(center[0], center[1]), radius, self_test);
  std::printf("indicator %.6e%s\n", p.value.value, p.value.degenerate ? " (degenerate)" : "");
  std::printf("norm_full %.6e norm_half %.6e\n", p.value.norm_full, p.value.norm_half);
  for (std::size_t j = 0; j < p.value.nodes.size(); j++)
  {
    std::printf("node %2zu  %s  residual %.2e\n", j, fmt_complex(p.value.nodes[j]).c_str(),
                p.value.node_residuals[j]);
  }
  return 0;
}

int run_assemble_check(const Common &c, const std::vector<double> &kv)
{
  const RunConfig cfg = load(c);
  require_size(cfg.level, c.allow_large);
  const Complex k(kv[0], kv[1]);
  const LevelSetup s = setup_level(cfg, cfg.level);
  const OperatorBundle &b = *s.bundle;
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream os(fs::path(cfg.output_dir) / "mesh.txt");
    write_mesh(os, *s.mesh);
  }
  const SparseComplexMatrix F = assemble_F(b, k);
  {
    std::ofstream os(fs::path(cfg.output_dir) / "F.coo");
    F.write_coo(os);
  }
  const FemFunction fun(s.bundle);
  const ComplexVector f = probe_vector(b.dim(), cfg.sim.seed);
  const ComplexVector x = fun.factor(k)->solve(f);
  const ComplexVector Fx = F.multiply(x);
  double num = 0.0;
  for (std::size_t i = 0; i < f.size(); i++)
  {
    num += std::norm(Fx[i] - f[i]);
  }
  std::printf("level %d: h %.4f, min angle %.1f deg, %zu vertices, %zu triangles, %zu boundary\n",
              cfg.level, s.stats.h, s.stats.min_angle * 180.0 / std::numbers::pi,
              s.stats.n_vertices, s.stats.n_triangles, s.stats.n_boundary);
  std::printf("mesh area %.10f\n", mesh_area(*s.mesh));
  std::printf("S symmetric %d, M symmetric %d, M_V symmetric %d, F(k) symmetric %d\n",
              b.S.is_symmetric(1e-14), b.M.is_symmetric(1e-14), b.MV.is_symmetric(1e-14),
              F.is_symmetric(1e-12));
  std::printf("nnz(F) %zu, ||F(k)||_inf %.6e\n", F.nnz(), F.norm_inf());
  std::printf("bordered solve residual %.3e\n", std::sqrt(num));
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Scattering resonances of -Laplace + V on the plane"};
  app.require_subcommand(1);

  Common solve_opts, converge_opts, roots_opts, map_opts, ind_opts, check_opts;
  auto *solve_cmd = app.add_subcommand("solve", "Search theta for resonances at one level");
  add_common(solve_cmd, solve_opts);

  auto *conv_cmd = app.add_subcommand("converge", "Convergence study across levels");
  add_common(conv_cmd, converge_opts);
  int first_level = 1;
  conv_cmd->add_option("--first-level", first_level, "First level of the study");

  auto *oracle_cmd = app.add_subcommand("oracle", "Analytic constant-disk oracle");
  oracle_cmd->require_subcommand(1);
  auto *roots_cmd = oracle_cmd->add_subcommand("roots", "Zeros of d_n in theta");
  add_common(roots_cmd, roots_opts);
  auto *map_cmd = oracle_cmd->add_subcommand("map", "min_n log10|d_n| on a grid");
  add_common(map_cmd, map_opts);

  auto *ind_cmd = app.add_subcommand("indicator", "Indicator of one region");
  add_common(ind_cmd, ind_opts);
  std::vector<double> center;
  double radius = 0.2;
  bool self_test = false;
  ind_cmd->add_option("--center", center, "Region center: re im")->expected(2)->required();
  ind_cmd->add_option("--radius", radius, "Contour radius");
  ind_cmd->add_flag("--self-test", self_test, "Use F(z) = z - center instead of the bundle");

  auto *check_cmd = app.add_subcommand("assemble-check", "Assemble F(k) and report checks");
  add_common(check_cmd, check_opts);
  std::vector<double> kv{1.0, -1.0};
  check_cmd->add_option("--k", kv, "Evaluation point: re im")->expected(2);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try
  {
    if (*solve_cmd)
    {
      return run_solve(solve_opts);
    }
    if (*conv_cmd)
    {
      return run_converge(converge_opts, first_level);
    }
    if (*roots_cmd)
    {
      return run_oracle(roots_opts, "roots");
    }
    if (*map_cmd)
    {
      return run_oracle(map_opts, "map");
    }
    if (*ind_cmd)
    {
      return run_indicator(ind_opts, center, radius, self_test);
    }
    if (*check_cmd)
    {
      return run_assemble_check(check_opts, kv);
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  catch (const SyntaxError &e)
  {
    std::cerr << "potential syntax error: " << e.what() << "\n";
    return kExitConfig;
  }
  catch (const SemanticError &e)
  {
    std::cerr << "potential error: " << e.what() << "\n";
    return kExitConfig;
  }
  catch (const ParamError &e)
  {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  }
  catch (const NearPoleError &e)
  {
    std::cerr << "numerical failure: " << e.what() << " at z = " << fmt_complex(e.node())
              << " (residual " << e.residual() << ")\n";
    return kExitNumerical;
  }
  catch (const Error &e)
  {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  catch (const std::exception &e)
  {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
