// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
// The full run takes about two hours on a single core; --only selects criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resonance/config.hpp"
#include "resonance/oracle.hpp"
#include "resonance/pipeline.hpp"
#include "resonance/sim.hpp"
#include "resonance/specfun.hpp"

namespace fs = std::filesystem;
using namespace resonance;

namespace
{

using Clock = std::chrono::steady_clock;

const ComplexRect kTheta{-4.0, 4.0, -4.0, -0.5};

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args)
{
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string fmt_k(Complex k)
{
  return fmt("%.6f%+.6fi", k.real(), k.imag());
}

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void log(const std::string &msg)
{
  std::fprintf(stderr, "  .. %s\n", msg.c_str());
  std::fflush(stderr);
}

double rel(Complex a, Complex b)
{
  return std::abs(a - b) / std::abs(b);
}

std::size_t nearest(const std::vector<Complex> &set, Complex z)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < set.size(); i++)
  {
    if (std::abs(set[i] - z) < std::abs(set[best] - z))
    {
      best = i;
    }
  }
  return best;
}

std::vector<Complex> values_of(const SearchResult &r)
{
  std::vector<Complex> out;
  for (const auto &x : r.resonances)
  {
    out.push_back(x.k);
  }
  return out;
}

class Acceptance
{
public:
  Acceptance(fs::path configs, fs::path work) : configs_(std::move(configs)), work_(std::move(work))
  {
  }

  RunConfig config(const std::string &name) const
  {
    return load_run_config((configs_ / (name + ".ini")).string());
  }

  Outcome oracle_roots_criterion() const
  {
    const auto t0 = Clock::now();
    const oracle::RootSearch roots = oracle::oracle_roots({1.0, 2.0}, kTheta, 0.05);
    const double secs = seconds_since(t0);
    const auto distinct = oracle::distinct_roots(roots);
    Outcome o;
    o.pass = secs < 30.0 && !distinct.empty();
    std::string detail = fmt("%zu roots in %.2f s;", distinct.size(), secs);
    for (Complex ref : {Complex(-0.846466, -1.337685), Complex(0.698717, -2.337097)})
    {
      const double e = distinct.empty() ? 1.0 : rel(distinct[nearest(distinct, ref)], ref);
      o.pass = o.pass && e <= 5e-3;
      detail += fmt(" %s rel %.1e;", fmt_k(ref).c_str(), e);
    }
    o.detail = detail;
    return o;
  }

  Outcome example1_level3() const
  {
    RunConfig cfg = config("example1");
    log("example 1 full search at level 3");
    const SolveReport report = solve(cfg, 3);
    write_solve_artifacts((work_ / "example1_level3").string(), cfg, report);
    const std::vector<Complex> fem = values_of(report.search);
    const std::vector<Complex> exact =
        oracle::distinct_roots(oracle::oracle_roots(disk_problem(cfg), cfg.theta, cfg.oracle_step));
    Outcome o;
    o.pass = fem.size() == exact.size() && !fem.empty();
    double worst = 0.0;
    std::size_t unmatched = 0;
    for (std::size_t i = 0; i < fem.size(); i++)
    {
      if (exact.empty())
      {
        break;
      }
      const std::size_t j = nearest(exact, fem[i]);
      const bool mutual = nearest(fem, exact[j]) == i;
      const double e = rel(fem[i], exact[j]);
      worst = std::max(worst, e);
      if (!mutual || e > 1e-2)
      {
        unmatched++;
      }
    }
    o.pass = o.pass && unmatched == 0;
    o.detail = fmt("%zu FEM vs %zu oracle, %zu unmatched, worst rel %.2e, search %.0f s",
                   fem.size(), exact.size(), unmatched, worst, report.seconds_search);
    return o;
  }

  const ConvergenceReport &study(const std::string &name)
  {
    for (const auto &[n, r] : studies_)
    {
      if (n == name)
      {
        return r;
      }
    }
    RunConfig cfg = config(name);
    cfg.levels = 4;
    cfg.strategy = TrackStrategy::Window;
    cfg.track = 2;
    log(name + ": convergence study over levels 1-4");
    ConvergenceReport r = converge(cfg, 1, [](const std::string &m) { log(m); });
    fs::create_directories(work_ / name);
    std::ofstream os(work_ / name / "convergence.csv");
    write_convergence_csv(os, r);
    studies_.emplace_back(name, std::move(r));
    return studies_.back().second;
  }

  Outcome orders()
  {
    Outcome o{true, ""};
    for (const std::string name : {"example1", "example3", "example4"})
    {
      try
      {
        const ConvergenceReport &r = study(name);
        const TrackedResonance &t = r.tracked.at(smallest(r));
        o.detail += name + " " + fmt_k(t.k.back()) + " orders";
        for (double v : t.orders)
        {
          o.detail += fmt(" %.2f", v);
          o.pass = o.pass && v >= 1.6 && v <= 2.4;
        }
        o.pass = o.pass && t.orders.size() == 2 && !t.exact;
        o.detail += "; ";
      }
      catch (const std::exception &e)
      {
        o.pass = false;
        o.detail += name + " failed: " + e.what() + "; ";
      }
    }
    return o;
  }

  Outcome richardson()
  {
    Outcome o{true, ""};
    const std::pair<std::string, Complex> refs[] = {{"example4", Complex(1.179824, -0.961238)},
                                                    {"example2", Complex(-0.847433, -1.361288)}};
    for (const auto &[name, ref] : refs)
    {
      try
      {
        const ConvergenceReport &r = study(name);
        std::vector<Complex> extrapolated;
        for (const auto &t : r.tracked)
        {
          extrapolated.push_back(t.richardson);
        }
        const Complex k = extrapolated.at(nearest(extrapolated, ref));
        const double e = rel(k, ref);
        o.pass = o.pass && e <= 5e-3;
        o.detail += fmt("%s %s vs %s rel %.2e; ", name.c_str(), fmt_k(k).c_str(),
                        fmt_k(ref).c_str(), e);
      }
      catch (const std::exception &e)
      {
        o.pass = false;
        o.detail += name + " failed: " + e.what() + "; ";
      }
    }
    return o;
  }

  Outcome free_problem() const
  {
    const RunConfig cfg = config("free");
    Outcome o{true, ""};
    for (int level = 1; level <= 3; level++)
    {
      log(fmt("free problem at level %d", level));
      const SolveReport r = solve(cfg, level);
      o.pass = o.pass && r.search.resonances.empty();
      o.detail += fmt("level %d: %zu resonances, %zu regions; ", level,
                      r.search.resonances.size(), r.search.regions_evaluated);
    }
    return o;
  }

  Outcome indicator_calibration() const
  {
    SimConfig cfg;
    Outcome o{true, ""};

    // Residues of diag(z - lambda_i): P f keeps f_i for enclosed poles and drops the rest.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double residue_err = 0.0;
    for (int trial = 0; trial < 50; trial++)
    {
      SearchRegion region;
      region.center = Complex(2.0 * u(rng), -2.0 + u(rng));
      region.radius = 0.1 + 0.4 * std::abs(u(rng));
      std::vector<Complex> poles;
      ComplexVector f;
      for (int i = 0; i < 6; i++)
      {
        // The trapezoidal error is about (d/r)^32 inside and (r/d)^32 outside; poles within
        // 0.45 r or beyond 2.2 r keep it under 1e-11.
        const double d = (i % 2 == 0 ? 0.45 * std::abs(u(rng)) : 2.2 + 2.0 * std::abs(u(rng)));
        poles.push_back(region.center + d * region.radius * std::exp(Complex(0.0, 3.2 * u(rng))));
        f.push_back(Complex(u(rng), u(rng)));
      }
      const ComplexVector p = projection_apply(DiagonalFunction(poles), region, f, cfg.n_omega);
      for (int i = 0; i < 6; i++)
      {
        const Complex expected = i % 2 == 0 ? f[i] : Complex(0.0);
        residue_err = std::max(residue_err, std::abs(p[i] - expected));
      }
    }
    o.pass = o.pass && residue_err <= 1e-10;
    o.detail += fmt("residue error %.1e; ", residue_err);

    SearchRegion region;
    region.center = Complex(-0.85, -1.34);
    region.radius = 0.2;
    const double target = 1.0 / std::sqrt(static_cast<double>(cfg.n_omega));
    double worst_in = 0.0;
    double worst_out = 0.0;
    for (int trial = 0; trial < 50; trial++)
    {
      const Complex dir = std::exp(Complex(0.0, 3.2 * u(rng)));
      const Complex in = region.center + 0.5 * std::abs(u(rng)) * region.radius * dir;
      const double v_in = indicator(ScalarFunction::planted({in}), region, cfg).value;
      worst_in = std::max(worst_in, std::abs(v_in - target) / target);
      const Complex out = region.center + (3.0 + 2.0 * std::abs(u(rng))) * region.radius * dir;
      worst_out = std::max(worst_out, indicator(ScalarFunction::planted({out}), region, cfg).value);
    }
    o.pass = o.pass && worst_in <= 1e-3 && worst_out < 1e-3;
    o.detail += fmt("enclosed |I - 1/sqrt(32)|/(1/sqrt(32)) <= %.1e; 3r away I <= %.1e; ",
                    worst_in, worst_out);

    std::size_t missed = 0;
    for (Subdivision sub : {Subdivision::Quadtree, Subdivision::Disk})
    {
      SimConfig c = cfg;
      c.subdivision = sub;
      c.r0 = 0.5;
      c.tol_eps = 0.01;
      const auto regions = initial_regions(kTheta, c);
      const SearchRegion parent = regions[regions.size() / 3];
      const auto kids = children(parent, c);
      for (int i = 0; i < 10000; i++)
      {
        Complex z;
        if (sub == Subdivision::Quadtree)
        {
          z = parent.center + Complex(u(rng) * parent.half_width, u(rng) * parent.half_height);
        }
        else
        {
          do
          {
            z = Complex(u(rng), u(rng));
          } while (std::abs(z) >= 1.0);
          z = parent.center + parent.radius * z;
        }
        bool covered = false;
        for (const auto &k : kids)
        {
          covered = covered || std::abs(z - k.center) <= k.radius;
        }
        missed += covered ? 0 : 1;
      }
      o.pass = o.pass && kids.size() == 4;
    }
    o.pass = o.pass && missed == 0;
    o.detail += fmt("child cover missed %zu of 20000 points", missed);
    return o;
  }

  Outcome special_functions() const
  {
    using specfun::ExtComplex;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mod(0.1, 50.0), im(-10.0, 10.0), unit(0.0, 1.0);
    std::uniform_int_distribution<int> order(0, 40);
    const long double pi = std::numbers::pi_v<long double>;
    const ExtComplex i(0.0L, 1.0L);
    double worst = 0.0;
    int done = 0;
    while (done < 1000)
    {
      const double r = mod(rng);
      const double y = im(rng);
      if (std::abs(y) > r)
      {
        continue;
      }
      const double x = std::sqrt(r * r - y * y) * (unit(rng) < 0.5 ? -1.0 : 1.0);
      const ExtComplex z(x, y);
      // n + 1 <= 40 keeps the pair (J_n, J_{n+1}) within the sampled order range.
      const int n = std::min(order(rng), 39);
      const auto j = specfun::bessel_j_seq(n + 1, z);
      const auto h = specfun::hankel1_seq(n + 1, z);
      const ExtComplex yn = (h[n] - j[n]) / i;
      const ExtComplex yn1 = (h[n + 1] - j[n + 1]) / i;
      const ExtComplex expected = 2.0L / (pi * z);
      const double e =
          static_cast<double>(std::abs(j[n + 1] * yn - j[n] * yn1 - expected) / std::abs(expected));
      worst = std::max(worst, e);
      done++;
    }

    const oracle::DiskProblem free{1.0, 0.0};
    const Complex two_i_pi(0.0, 2.0 / std::numbers::pi);
    std::uniform_real_distribution<double> kre(-4.0, 4.0), kim(-4.0, -0.1);
    std::uniform_int_distribution<int> dn(0, 10);
    double worst_d = 0.0;
    for (int t = 0; t < 100; t++)
    {
      const Complex k(kre(rng), kim(rng));
      worst_d = std::max(worst_d, std::abs(oracle::d_n(free, dn(rng), k) - two_i_pi));
    }
    return {worst <= 1e-9 && worst_d <= 1e-10,
            fmt("Wronskian worst rel %.1e over 1000 z; |d_n - 2i/pi| worst %.1e over 100 (n,k)",
                worst, worst_d)};
  }

  Outcome determinism() const
  {
    RunConfig cfg = config("example1");
    const auto run = [&](std::uint64_t seed, const std::string &tag) {
      RunConfig c = cfg;
      c.sim.seed = seed;
      log("example 1 level-1 search, " + tag);
      const SolveReport r = solve(c, 1);
      const fs::path dir = work_ / ("determinism_" + tag);
      write_solve_artifacts(dir.string(), c, r);
      std::ifstream in(dir / "resonances.csv");
      std::stringstream ss;
      ss << in.rdbuf();
      return std::make_pair(ss.str(), values_of(r.search));
    };
    const auto a = run(cfg.sim.seed, "a");
    const auto b = run(cfg.sim.seed, "b");
    const auto c = run(cfg.sim.seed + 1000, "seed");
    const bool identical = a.first == b.first;
    double worst = 0.0;
    bool same_count = a.second.size() == c.second.size() && !a.second.empty();
    for (Complex k : a.second)
    {
      worst = std::max(worst, c.second.empty() ? 1e300 : std::abs(c.second[nearest(c.second, k)] - k));
    }
    for (Complex k : c.second)
    {
      worst = std::max(worst, a.second.empty() ? 1e300 : std::abs(a.second[nearest(a.second, k)] - k));
    }
    return {identical && same_count && worst <= cfg.sim.tol_eps,
            fmt("identical CSVs %s; %zu vs %zu resonances across seeds, largest move %.1e "
                "(tol_eps %.2g)",
                identical ? "yes" : "no", a.second.size(), c.second.size(), worst,
                cfg.sim.tol_eps)};
  }

private:
  static std::size_t smallest(const ConvergenceReport &r)
  {
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.tracked.size(); i++)
    {
      if (std::abs(r.tracked[i].k.front()) < std::abs(r.tracked[best].k.front()))
      {
        best = i;
      }
    }
    return best;
  }

  fs::path configs_;
  fs::path work_;
  std::vector<std::pair<std::string, ConvergenceReport>> studies_;
};

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Acceptance criteria"};
  std::string configs = "configs";
  std::string work = "acceptance_work";
  std::vector<int> only;
  app.add_option("--configs", configs, "Directory holding example1..4.ini and free.ini");
  app.add_option("--work", work, "Scratch directory for artifacts");
  app.add_option("--only", only, "Run only these criteria (1-8)");
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(work);
  Acceptance acc(configs, work);
  const std::set<int> selected(only.begin(), only.end());

  struct Criterion
  {
    int id;
    const char *name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {7, "special functions", [&] { return acc.special_functions(); }},
      {6, "indicator calibration", [&] { return acc.indicator_calibration(); }},
      {1, "oracle roots for r0=1, V0=2", [&] { return acc.oracle_roots_criterion(); }},
      {5, "V=0 search empty at levels 1-3", [&] { return acc.free_problem(); }},
      {8, "determinism", [&] { return acc.determinism(); }},
      {3, "convergence orders of the smallest resonance", [&] { return acc.orders(); }},
      {4, "Richardson extrapolation from levels 3-4", [&] { return acc.richardson(); }},
      {2, "example 1 at level 3 against the oracle", [&] { return acc.example1_level3(); }},
  };

  std::ofstream summary(fs::path(work) / "summary.txt");
  int failed = 0;
  for (const auto &c : criteria)
  {
    if (!selected.empty() && !selected.count(c.id))
    {
      continue;
    }
    const auto t0 = Clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception &e)
    {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    const std::string line = fmt("%s criterion %d (%s): %s [%.0f s]", o.pass ? "PASS" : "FAIL",
                                 c.id, c.name, o.detail.c_str(), seconds_since(t0));
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    summary << line << "\n" << std::flush;
  }
  return failed == 0 ? 0 : 1;
}
