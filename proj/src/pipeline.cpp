// SPDX-License-Identifier: Apache-2.0

#include "resonance/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "resonance/errors.hpp"

namespace resonance
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

IndicatorValue indicator_with_retry(const MatrixFunction &F, const SearchRegion &region,
                                    const SimConfig &sim)
{
  const ComplexVector f = probe_vector(F.dim(), sim.seed);
  try
  {
    return indicator(F, region, sim, f);
  }
  catch (const NearPoleError &)
  {
    return indicator(F, region, sim, f, std::numbers::pi / sim.n_omega);
  }
}

std::string format_complex(Complex z)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", z.real(), z.imag());
  return buf;
}

}  // namespace

LevelSetup setup_level(const RunConfig &config, int level)
{
  LevelSetup s;
  s.level = level;
  auto t0 = std::chrono::steady_clock::now();
  s.mesh = std::make_shared<const Mesh>(disk_mesh_at_level(config.R, config.base_h, level));
  s.stats = mesh_stats(*s.mesh);
  s.seconds_mesh = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  s.bundle = std::make_shared<const OperatorBundle>(
      build_bundle(s.mesh, config.potential, config.N, config.quadrature));
  s.seconds_assembly = seconds_since(t0);
  return s;
}

SolveReport solve(const RunConfig &config, int level)
{
  const LevelSetup setup = setup_level(config, level);
  SolveReport r;
  r.level = level;
  r.mesh = setup.stats;
  r.seconds_mesh = setup.seconds_mesh;
  r.seconds_assembly = setup.seconds_assembly;
  const auto t0 = std::chrono::steady_clock::now();
  const FemFunction F(setup.bundle);
  r.search = search(F, config.theta, config.sim);
  r.seconds_search = seconds_since(t0);
  return r;
}

void write_resonances_csv(std::ostream &os, const SolveReport &report)
{
  os << "re,im,residual,level,final_level,final_radius,polished\n";
  char buf[256];
  for (const auto &r : report.search.resonances)
  {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.3e,%d,%d,%.3e,%d\n", r.k.real(), r.k.imag(),
                  r.residual, report.level, r.final_level, r.final_radius, r.polished ? 1 : 0);
    os << buf;
  }
}

std::string fnv1a_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError("cannot read '" + path + "' for hashing");
  }
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (in)
  {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); i++)
    {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::vector<std::string> write_solve_artifacts(const std::string &dir, const RunConfig &config,
                                               const SolveReport &report)
{
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string csv = (fs::path(dir) / "resonances.csv").string();
  const std::string trace = (fs::path(dir) / "trace.txt").string();
  const std::string manifest = (fs::path(dir) / "manifest.json").string();
  {
    std::ofstream os(csv);
    write_resonances_csv(os, report);
  }
  {
    std::ofstream os(trace);
    write_trace(os, report.search.trace);
  }

  nlohmann::json j;
  j["command"] = "solve";
  j["config"] = echo_config(config);
  j["level"] = report.level;
  j["mesh"] = {{"h", report.mesh.h},
               {"min_angle_deg", report.mesh.min_angle * 180.0 / std::numbers::pi},
               {"vertices", report.mesh.n_vertices},
               {"triangles", report.mesh.n_triangles},
               {"boundary_vertices", report.mesh.n_boundary}};
  j["timings"] = {{"mesh", report.seconds_mesh},
                  {"assembly", report.seconds_assembly},
                  {"search", report.seconds_search}};
  j["search"] = {{"levels", report.search.levels},
                 {"regions", report.search.regions_evaluated},
                 {"solves", report.search.solves},
                 {"flagged", report.search.flagged.size()}};
  nlohmann::json res = nlohmann::json::array();
  for (const auto &r : report.search.resonances)
  {
    res.push_back({{"re", r.k.real()},
                   {"im", r.k.imag()},
                   {"residual", r.residual},
                   {"relative_residual", r.relative_residual},
                   {"polished", r.polished},
                   {"center", {r.center.real(), r.center.imag()}},
                   {"final_level", r.final_level},
                   {"final_radius", r.final_radius}});
  }
  j["resonances"] = res;
  j["files"] = nlohmann::json::array(
      {{{"path", "resonances.csv"}, {"fnv1a", fnv1a_file(csv)}},
       {{"path", "trace.txt"}, {"fnv1a", fnv1a_file(trace)}}});
  {
    std::ofstream os(manifest);
    os << j.dump(2) << "\n";
  }
  return {csv, trace, manifest};
}

ConvergenceReport convergence_from_values(const std::vector<std::vector<Complex>> &values,
                                          int first_level)
{
  ConvergenceReport report;
  report.first_level = first_level;
  for (const auto &ks : values)
  {
    TrackedResonance t;
    t.k = ks;
    for (std::size_t j = 0; j + 1 < ks.size(); j++)
    {
      const double E = std::abs(ks[j] - ks[j + 1]) / std::abs(ks[j + 1]);
      t.E.push_back(E);
      t.exact = t.exact || E == 0.0;
    }
    if (!t.exact)
    {
      for (std::size_t j = 0; j + 1 < t.E.size(); j++)
      {
        t.orders.push_back(std::log2(t.E[j] / t.E[j + 1]));
      }
    }
    if (ks.size() >= 2)
    {
      t.richardson = (4.0 * ks.back() - ks[ks.size() - 2]) / 3.0;
    }
    else if (!ks.empty())
    {
      t.richardson = ks.back();
    }
    report.tracked.push_back(std::move(t));
  }
  return report;
}

std::vector<std::pair<std::size_t, std::size_t>> match_levels(const std::vector<Complex> &from,
                                                              const std::vector<Complex> &to)
{
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (from.empty() || to.empty())
  {
    return pairs;
  }
  auto nearest = [](Complex z, const std::vector<Complex> &list)
  {
    std::size_t best = 0;
    for (std::size_t i = 1; i < list.size(); i++)
    {
      if (std::abs(list[i] - z) < std::abs(list[best] - z))
      {
        best = i;
      }
    }
    return best;
  };
  std::vector<double> drift;
  for (const auto &z : from)
  {
    drift.push_back(std::abs(to[nearest(z, to)] - z));
  }
  std::vector<double> sorted = drift;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  for (std::size_t a = 0; a < from.size(); a++)
  {
    const std::size_t b = nearest(from[a], to);
    if (nearest(to[b], from) == a && drift[a] <= 10.0 * median)
    {
      pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

ConvergenceReport converge(const RunConfig &config, int first_level, const Progress &progress)
{
  auto say = [&](const std::string &msg)
  {
    if (progress)
    {
      progress(msg);
    }
  };
  if (first_level < 1 || first_level > config.levels)
  {
    throw ConfigError("first level must lie in [1, levels]");
  }
  std::vector<SolveReport> solves;
  solves.push_back(solve(config, first_level));
  say("level " + std::to_string(first_level) + ": " +
      std::to_string(solves.back().search.resonances.size()) + " resonances");

  std::vector<Complex> current;
  for (const auto &r : solves.back().search.resonances)
  {
    current.push_back(r.k);
  }
  if (current.empty())
  {
    throw MatchError("no resonance found at level " + std::to_string(first_level) + " to track");
  }
  std::vector<std::size_t> order(current.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                   { return std::abs(current[a]) < std::abs(current[b]); });
  order.resize(std::min<std::size_t>(order.size(), config.track));

  std::vector<std::vector<Complex>> values;
  std::vector<std::size_t> index;  // position of each tracked resonance in `current`
  for (auto i : order)
  {
    values.push_back({current[i]});
    index.push_back(i);
  }

  for (int level = first_level + 1; level <= config.levels; level++)
  {
    if (config.strategy == TrackStrategy::Full)
    {
      solves.push_back(solve(config, level));
      std::vector<Complex> next;
      for (const auto &r : solves.back().search.resonances)
      {
        next.push_back(r.k);
      }
      const auto pairs = match_levels(current, next);
      for (std::size_t t = 0; t < values.size(); t++)
      {
        const auto it = std::find_if(pairs.begin(), pairs.end(),
                                     [&](const auto &p) { return p.first == index[t]; });
        if (it == pairs.end())
        {
          throw MatchError("tracked resonance " + format_complex(values[t].back()) +
                           " has no match at level " + std::to_string(level));
        }
        index[t] = it->second;
        values[t].push_back(next[it->second]);
      }
      current = std::move(next);
    }
    else
    {
      const LevelSetup setup = setup_level(config, level);
      const FemFunction F(setup.bundle);
      for (std::size_t t = 0; t < values.size(); t++)
      {
        const auto &ks = values[t];
        // Second-order convergence: the next correction is about a quarter of the last.
        const Complex predicted =
            ks.size() >= 2 ? ks.back() + 0.25 * (ks.back() - ks[ks.size() - 2]) : ks.back();
        SearchRegion region;
        region.center = predicted;
        region.radius = config.window;
        region.level = 1;
        const IndicatorValue iv = indicator_with_retry(F, region, config.sim);
        if (!(iv.value > config.sim.tol_ind))
        {
          throw MatchError("no resonance within " + std::to_string(config.window) + " of " +
                           format_complex(predicted) + " at level " + std::to_string(level));
        }
        const ResonanceResult r = extract_eigenpair(F, predicted, config.sim, config.window);
        if (!r.polished)
        {
          throw MatchError("refinement from " + format_complex(predicted) + " left the window at level " +
                           std::to_string(level));
        }
        values[t].push_back(r.k);
      }
    }
    std::string msg = "level " + std::to_string(level) + ":";
    for (const auto &ks : values)
    {
      msg += " " + format_complex(ks.back());
    }
    say(msg);
  }
  ConvergenceReport report = convergence_from_values(values, first_level);
  report.solves = std::move(solves);
  return report;
}

void write_convergence_csv(std::ostream &os, const ConvergenceReport &report)
{
  os << "track,level,re,im,E,order\n";
  char buf[256];
  for (std::size_t t = 0; t < report.tracked.size(); t++)
  {
    const auto &tr = report.tracked[t];
    for (std::size_t j = 0; j < tr.k.size(); j++)
    {
      char e[32] = "", o[32] = "";
      if (j < tr.E.size())
      {
        std::snprintf(e, sizeof e, "%.3e", tr.E[j]);
      }
      if (j < tr.orders.size())
      {
        std::snprintf(o, sizeof o, "%.2f", tr.orders[j]);
      }
      std::snprintf(buf, sizeof buf, "%zu,%d,%.6f,%.6f,%s,%s\n", t + 1,
                    report.first_level + static_cast<int>(j), tr.k[j].real(), tr.k[j].imag(), e, o);
      os << buf;
    }
  }
  for (std::size_t t = 0; t < report.tracked.size(); t++)
  {
    const auto &tr = report.tracked[t];
    std::snprintf(buf, sizeof buf, "%zu,richardson,%.6f,%.6f,,\n", t + 1, tr.richardson.real(),
                  tr.richardson.imag());
    os << buf;
  }
}

oracle::DiskProblem disk_problem(const RunConfig &config)
{
  oracle::DiskProblem p;
  p.n_max = config.oracle_n_max;
  if (config.potential.pieces.empty())
  {
    p.r0 = config.R;
    p.V0 = 0.0;
    return p;
  }
  const auto disk = as_constant_disk(config.potential);
  if (!disk)
  {
    throw ConfigError("the oracle needs a single constant piece on a disk centred at the origin");
  }
  p.r0 = disk->r0;
  p.V0 = disk->V0;
  return p;
}

ProbeReport indicator_probe(const RunConfig &config, int level, Complex center, double radius,
                            bool self_test)
{
  ProbeReport report;
  report.region.center = center;
  report.region.radius = radius;
  report.region.level = 1;
  if (!(radius > 0.0))
  {
    throw ConfigError("probe radius must be positive");
  }
  if (self_test)
  {
    const DiagonalFunction F({center});
    report.value = indicator(F, report.region, config.sim);
    return report;
  }
  const LevelSetup setup = setup_level(config, level);
  const FemFunction F(setup.bundle);
  report.value = indicator(F, report.region, config.sim);
  return report;
}

}  // namespace resonance
