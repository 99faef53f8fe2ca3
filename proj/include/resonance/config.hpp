// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_CONFIG_HPP
#define RESONANCE_CONFIG_HPP

#include <string>

#include "resonance/assembly.hpp"
#include "resonance/potential.hpp"
#include "resonance/sim.hpp"
#include "resonance/types.hpp"

namespace resonance
{

enum class TrackStrategy
{
  Full,    // a full search of theta at every level
  Window   // full search at the first level, then a one-region check plus refinement per level
};

// One run, read from an INI-style file:
//
//   [domain]     R, base_h, level, levels, theta = re_min re_max im_min im_max, N, quadrature
//   [potential]  potential text, passed through verbatim
//   [search]     n_omega, tol_ind, tol_eps, r0, seed, max_levels, max_live, subdivision,
//                cover_margin, workers, polish, track, strategy, window
//   [output]     dir, map_resolution, oracle_step, oracle_n_max
//
// Every key is optional; missing ones keep the defaults below.
struct RunConfig
{
  double R = 1.0;
  double base_h = 0.05;
  int level = 1;
  int levels = 4;
  ComplexRect theta{-4.0, 4.0, -4.0, -0.5};
  int N = 20;
  PotentialQuadrature quadrature;

  std::string potential_text;
  int potential_first_line = 1;
  PotentialSpec potential;

  SimConfig sim;
  int track = 2;
  TrackStrategy strategy = TrackStrategy::Full;
  double window = 0.05;

  std::string output_dir = "out";
  int map_resolution = 256;
  double oracle_step = 0.05;
  int oracle_n_max = 10;
};

// Throws ConfigError (with the offending line) for unknown sections or keys, malformed
// values and violated invariants; potential errors surface as SyntaxError / SemanticError
// with file line numbers.
RunConfig parse_run_config(const std::string &text);
RunConfig load_run_config(const std::string &path);

// Checks level/levels in [1, 5], theta.im_max < 0, R, base_h, N and the search settings.
void validate(const RunConfig &config);

// INI text that parses back to an equivalent configuration.
std::string echo_config(const RunConfig &config);

}  // namespace resonance

#endif  // RESONANCE_CONFIG_HPP
