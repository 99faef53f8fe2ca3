// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "resonance/config.hpp"
#include "resonance/errors.hpp"
#include "resonance/pipeline.hpp"

using namespace resonance;

namespace
{

const char *kBase =
    "# unit disk\n"
    "[domain]\n"
    "level = 2\n"
    "levels = 3\n"
    "theta = -2 2 -3 -0.5\n"
    "quadrature = 3\n"
    "\n"
    "[search]\n"
    "r0 = 0.5\n"
    "tol_eps = 0.01  # absolute\n"
    "seed = 17\n"
    "subdivision = disk\n"
    "strategy = window\n"
    "\n"
    "[output]\n"
    "dir = out/test\n"
    "\n"
    "[potential]\n"
    "piece disk(0,0;1): 2\n";

int config_error_line(const std::string &text)
{
  try
  {
    parse_run_config(text);
  }
  catch (const ConfigError &e)
  {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config parsing")
{
  const RunConfig c = parse_run_config(kBase);
  CHECK(c.level == 2);
  CHECK(c.levels == 3);
  CHECK(c.theta.re_min == -2.0);
  CHECK(c.theta.im_max == -0.5);
  CHECK(c.quadrature.rule == QuadratureRule::ThreePoint);
  CHECK(c.sim.r0 == 0.5);
  CHECK(c.sim.tol_eps == 0.01);
  CHECK(c.sim.seed == 17);
  CHECK(c.sim.subdivision == Subdivision::Disk);
  CHECK(c.strategy == TrackStrategy::Window);
  CHECK(c.output_dir == "out/test");
  CHECK(c.potential.pieces.size() == 1);
  CHECK(c.potential_first_line == 19);
  // Defaults survive.
  CHECK(c.N == 20);
  CHECK(c.sim.n_omega == 32);
  CHECK(c.sim.tol_ind == 0.1);
}

TEST_CASE("config echo round trip")
{
  const RunConfig c = parse_run_config(kBase);
  const std::string echo = echo_config(c);
  const RunConfig d = parse_run_config(echo);
  CHECK(echo_config(d) == echo);
  CHECK(d.sim.seed == c.sim.seed);
  CHECK(d.theta.im_min == c.theta.im_min);
  CHECK(d.potential == c.potential);
}

TEST_CASE("config errors report lines")
{
  const std::string base(kBase);
  CHECK(config_error_line("[domain]\nlevel = 2\nfoo = 1\n[potential]\n") == 3);
  CHECK(config_error_line("[domain]\nlevel = two\n[potential]\n") == 2);
  CHECK(config_error_line("[search]\nsubdivision = hex\n[potential]\n") == 2);
  CHECK(config_error_line("[mesh]\n[potential]\n") == 1);
  CHECK(config_error_line("level = 1\n[potential]\n") == 1);
  CHECK(config_error_line("[domain]\ntheta = 1 2 3\n[potential]\n") == 2);
  CHECK_THROWS_AS(parse_run_config("[domain]\nlevel = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[domain]\nlevel = 7\n[potential]\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[domain]\ntheta = -1 1 -2 0.5\n[potential]\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[search]\nn_omega = 31\n[potential]\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("[domain]\nR = 0.5\n[potential]\npiece disk(0,0;1): 2\n"),
                  ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("potential errors use file lines")
{
  try
  {
    parse_run_config("[domain]\nlevel = 1\n\n[potential]\npiece disk(0,0;1): 2\npiece disk(0,0;1) 2\n");
    FAIL("no exception");
  }
  catch (const SyntaxError &e)
  {
    CHECK(e.line() == 6);
  }
}

TEST_CASE("disk problem from a config")
{
  const oracle::DiskProblem p = disk_problem(parse_run_config(kBase));
  CHECK(p.r0 == 1.0);
  CHECK(p.V0 == Complex(2.0));
  const oracle::DiskProblem free = disk_problem(parse_run_config("[potential]\n"));
  CHECK(free.V0 == Complex(0.0));
  CHECK_THROWS_AS(disk_problem(parse_run_config("[potential]\npiece annulus(0.5;1): 2\n")),
                  ConfigError);
}

TEST_CASE("convergence from synthetic values")
{
  // k_j = k* + C 4^{-j}: second-order convergence and exact Richardson extrapolation.
  const Complex star(-0.8, -1.3), C(0.05, 0.02);
  std::vector<Complex> seq;
  for (int j = 1; j <= 4; j++)
  {
    seq.push_back(star + C * std::pow(0.25, j));
  }
  const ConvergenceReport r = convergence_from_values({seq, {seq[0], seq[0], seq[0], seq[0]}});
  REQUIRE(r.tracked.size() == 2);
  const TrackedResonance &t = r.tracked[0];
  REQUIRE(t.E.size() == 3);
  REQUIRE(t.orders.size() == 2);
  for (double o : t.orders)
  {
    CHECK(o == doctest::Approx(2.0).epsilon(1e-3));
  }
  CHECK(std::abs(t.richardson - star) < 1e-14);
  CHECK_FALSE(t.exact);
  const TrackedResonance &e = r.tracked[1];
  CHECK(e.exact);
  for (double v : e.E)
  {
    CHECK(v == 0.0);
  }
  std::ostringstream os;
  write_convergence_csv(os, r);
  CHECK(os.str().rfind("track,level,re,im,E,order\n", 0) == 0);
}

TEST_CASE("level matching is symmetric")
{
  const std::vector<Complex> a{{-0.85, -1.34}, {0.70, -2.34}, {1.9, -3.1}, {-2.5, -2.9}};
  const std::vector<Complex> b{{-0.846, -1.338}, {0.699, -2.337}, {-2.49, -2.91}, {3.5, -1.0}};
  const auto ab = match_levels(a, b);
  const auto ba = match_levels(b, a);
  REQUIRE(ab.size() == ba.size());
  for (const auto &[i, j] : ab)
  {
    CHECK(std::find(ba.begin(), ba.end(), std::make_pair(j, i)) != ba.end());
  }
  // The two far-away points are left unmatched by the drift guard.
  CHECK(ab.size() == 3);
}

TEST_CASE("FNV-1a of a file")
{
  const auto path = std::filesystem::temp_directory_path() / "resonance_fnv_test.txt";
  {
    std::ofstream os(path, std::ios::binary);
    os << "a";
  }
  CHECK(fnv1a_file(path.string()) == "af63dc4c8601ec8c");
  std::filesystem::remove(path);
}

TEST_CASE("indicator probe self test")
{
  const ProbeReport p = indicator_probe(parse_run_config(kBase), 1, Complex(1.0, -1.0), 0.2, true);
  CHECK(p.value.value == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-6));
  CHECK(p.value.nodes.size() == 32);
}
