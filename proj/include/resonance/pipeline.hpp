// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_PIPELINE_HPP
#define RESONANCE_PIPELINE_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "resonance/assembly.hpp"
#include "resonance/config.hpp"
#include "resonance/mesh.hpp"
#include "resonance/oracle.hpp"
#include "resonance/sim.hpp"

namespace resonance
{

// Mesh and operators of one refinement level.
struct LevelSetup
{
  int level = 0;
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const OperatorBundle> bundle;
  MeshStats stats;
  double seconds_mesh = 0.0;
  double seconds_assembly = 0.0;
};

LevelSetup setup_level(const RunConfig &config, int level);

struct SolveReport
{
  int level = 0;
  MeshStats mesh;
  SearchResult search;
  double seconds_mesh = 0.0;
  double seconds_assembly = 0.0;
  double seconds_search = 0.0;
};

// Mesh, assemble and search theta at `level`.
SolveReport solve(const RunConfig &config, int level);

// "re,im,residual,level,final_level,final_radius,polished", 6 decimals for k.
void write_resonances_csv(std::ostream &os, const SolveReport &report);

// 64-bit FNV-1a of a file's bytes as 16 hex digits.
std::string fnv1a_file(const std::string &path);

// Writes resonances.csv, trace.txt and manifest.json into `dir` (created if needed) and
// returns the paths written.
std::vector<std::string> write_solve_artifacts(const std::string &dir, const RunConfig &config,
                                               const SolveReport &report);

struct TrackedResonance
{
  std::vector<Complex> k;       // one value per level, first level first
  std::vector<double> E;        // E_j = |k^j - k^{j+1}| / |k^{j+1}|
  std::vector<double> orders;   // log2(E_j / E_{j+1}); needs three consecutive levels
  Complex richardson{};         // (4 k^L - k^{L-1}) / 3
  bool exact = false;           // some E_j vanished; orders are not defined
};

struct ConvergenceReport
{
  int first_level = 1;
  std::vector<TrackedResonance> tracked;
  std::vector<SolveReport> solves;  // the full searches that were run
};

// Errors and orders from per-level values (values[t][j] = resonance t at level first + j).
ConvergenceReport convergence_from_values(const std::vector<std::vector<Complex>> &values,
                                          int first_level = 1);

// Index pairs (a in `from`, b in `to`) that are mutual nearest neighbors and lie within
// 10x the median nearest-neighbor distance.
std::vector<std::pair<std::size_t, std::size_t>> match_levels(const std::vector<Complex> &from,
                                                              const std::vector<Complex> &to);

using Progress = std::function<void(const std::string &)>;

// Levels first_level..config.levels. The `track` smallest-|k| resonances of the first level
// are followed through the others, by full searches and matching (TrackStrategy::Full) or by
// one indicator region of radius config.window around a predicted value plus refinement
// (TrackStrategy::Window). Throws MatchError when a tracked resonance is lost.
ConvergenceReport converge(const RunConfig &config, int first_level = 1,
                           const Progress &progress = {});

// "track,level,re,im,E,order" rows, then "track,richardson,re,im,," rows.
void write_convergence_csv(std::ostream &os, const ConvergenceReport &report);

// Oracle for a constant-disk potential; throws ConfigError otherwise.
oracle::DiskProblem disk_problem(const RunConfig &config);

struct ProbeReport
{
  IndicatorValue value;
  SearchRegion region;
};

// Indicator of one region for the configured bundle at `level`, or for F(z) = z - center
// when self_test is set.
ProbeReport indicator_probe(const RunConfig &config, int level, Complex center, double radius,
                            bool self_test = false);

}  // namespace resonance

#endif  // RESONANCE_PIPELINE_HPP
