// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <doctest.h>

#include "resonance/config.hpp"
#include "resonance/pipeline.hpp"

using namespace resonance;

namespace
{

// A small window around the smallest resonance of the constant unit disk.
const char *kWindow =
    "[domain]\n"
    "level = 1\n"
    "theta = -1.1 -0.6 -1.6 -1.1\n"
    "\n"
    "[search]\n"
    "r0 = 0.25\n"
    "tol_eps = 0.01\n"
    "\n"
    "[potential]\n"
    "piece disk(0,0;1): 2\n";

}  // namespace

TEST_CASE("level-1 solve near the first resonance")
{
  const RunConfig cfg = parse_run_config(kWindow);
  const SolveReport report = solve(cfg, 1);
  REQUIRE(report.search.resonances.size() == 1);
  const ResonanceResult &r = report.search.resonances[0];
  const Complex oracle(-0.846542113, -1.337693683);
  CHECK(std::abs(r.k - oracle) / std::abs(oracle) < 1e-2);
  CHECK(r.polished);
  CHECK(r.relative_residual <= 1e-6);

  // The residual of the smallest eigenpair grows when k moves off the eigenvalue.
  const LevelSetup setup = setup_level(cfg, 1);
  const FemFunction F(setup.bundle);
  const EigenPair at = smallest_eigenpair(F, r.k, cfg.sim.seed);
  const EigenPair off = smallest_eigenpair(F, r.k + 10.0 * cfg.sim.tol_eps, cfg.sim.seed);
  CHECK(off.residual > at.residual);

  const auto dir = std::filesystem::temp_directory_path() / "resonance_pipeline_test";
  std::filesystem::remove_all(dir);
  const auto files = write_solve_artifacts(dir.string(), cfg, report);
  CHECK(files.size() == 3);
  std::ifstream in(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(in);
  CHECK(manifest["level"] == 1);
  CHECK(manifest["resonances"].size() == 1);
  std::ifstream csv(dir / "resonances.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "re,im,residual,level,final_level,final_radius,polished");
  std::filesystem::remove_all(dir);
}
