// SPDX-License-Identifier: Apache-2.0

#include "resonance/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "resonance/errors.hpp"

namespace resonance
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string &s)
{
  const auto p = s.find_first_of("#;");
  return p == std::string::npos ? s : s.substr(0, p);
}

double to_double(const std::string &v, int line)
{
  const std::string t = trim(v);
  char *end = nullptr;
  errno = 0;
  const double d = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE)
  {
    throw ConfigError("expected a number, got '" + t + "'", line);
  }
  return d;
}

long long to_integer(const std::string &v, int line)
{
  const std::string t = trim(v);
  char *end = nullptr;
  errno = 0;
  const long long i = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE)
  {
    throw ConfigError("expected an integer, got '" + t + "'", line);
  }
  return i;
}

bool to_bool(const std::string &v, int line)
{
  const std::string t = trim(v);
  if (t == "true" || t == "yes" || t == "1")
  {
    return true;
  }
  if (t == "false" || t == "no" || t == "0")
  {
    return false;
  }
  throw ConfigError("expected true or false, got '" + t + "'", line);
}

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void set_domain(RunConfig &c, const std::string &key, const std::string &value, int line)
{
  if (key == "R")
  {
    c.R = to_double(value, line);
  }
  else if (key == "base_h")
  {
    c.base_h = to_double(value, line);
  }
  else if (key == "level")
  {
    c.level = static_cast<int>(to_integer(value, line));
  }
  else if (key == "levels")
  {
    c.levels = static_cast<int>(to_integer(value, line));
  }
  else if (key == "theta")
  {
    std::istringstream is(value);
    std::vector<double> v;
    std::string tok;
    while (is >> tok)
    {
      v.push_back(to_double(tok, line));
    }
    if (v.size() != 4)
    {
      throw ConfigError("theta needs four numbers: re_min re_max im_min im_max", line);
    }
    c.theta = {v[0], v[1], v[2], v[3]};
  }
  else if (key == "N")
  {
    c.N = static_cast<int>(to_integer(value, line));
  }
  else if (key == "quadrature")
  {
    const std::string t = trim(value);
    if (t == "3")
    {
      c.quadrature.rule = QuadratureRule::ThreePoint;
    }
    else if (t == "7")
    {
      c.quadrature.rule = QuadratureRule::SevenPoint;
    }
    else
    {
      throw ConfigError("quadrature must be 3 or 7", line);
    }
  }
  else if (key == "cut_depth")
  {
    c.quadrature.max_cut_depth = static_cast<int>(to_integer(value, line));
  }
  else
  {
    throw ConfigError("unknown key '" + key + "' in [domain]", line);
  }
}

void set_search(RunConfig &c, const std::string &key, const std::string &value, int line)
{
  SimConfig &s = c.sim;
  if (key == "n_omega")
  {
    s.n_omega = static_cast<int>(to_integer(value, line));
  }
  else if (key == "tol_ind")
  {
    s.tol_ind = to_double(value, line);
  }
  else if (key == "tol_eps")
  {
    s.tol_eps = to_double(value, line);
  }
  else if (key == "r0")
  {
    s.r0 = to_double(value, line);
  }
  else if (key == "seed")
  {
    const long long v = to_integer(value, line);
    if (v < 0)
    {
      throw ConfigError("seed must be non-negative", line);
    }
    s.seed = static_cast<std::uint64_t>(v);
  }
  else if (key == "max_levels")
  {
    s.max_levels = static_cast<int>(to_integer(value, line));
  }
  else if (key == "max_live")
  {
    const long long v = to_integer(value, line);
    if (v < 1)
    {
      throw ConfigError("max_live must be positive", line);
    }
    s.max_live = static_cast<std::size_t>(v);
  }
  else if (key == "subdivision")
  {
    const std::string t = trim(value);
    if (t == "quadtree")
    {
      s.subdivision = Subdivision::Quadtree;
    }
    else if (t == "disk")
    {
      s.subdivision = Subdivision::Disk;
    }
    else
    {
      throw ConfigError("subdivision must be quadtree or disk", line);
    }
  }
  else if (key == "cover_margin")
  {
    s.cover_margin = to_double(value, line);
  }
  else if (key == "workers")
  {
    s.workers = static_cast<int>(to_integer(value, line));
  }
  else if (key == "polish")
  {
    s.polish = to_bool(value, line);
  }
  else if (key == "track")
  {
    c.track = static_cast<int>(to_integer(value, line));
  }
  else if (key == "strategy")
  {
    const std::string t = trim(value);
    if (t == "full")
    {
      c.strategy = TrackStrategy::Full;
    }
    else if (t == "window")
    {
      c.strategy = TrackStrategy::Window;
    }
    else
    {
      throw ConfigError("strategy must be full or window", line);
    }
  }
  else if (key == "window")
  {
    c.window = to_double(value, line);
  }
  else
  {
    throw ConfigError("unknown key '" + key + "' in [search]", line);
  }
}

void set_output(RunConfig &c, const std::string &key, const std::string &value, int line)
{
  if (key == "dir")
  {
    c.output_dir = trim(value);
    if (c.output_dir.empty())
    {
      throw ConfigError("output dir must not be empty", line);
    }
  }
  else if (key == "map_resolution")
  {
    c.map_resolution = static_cast<int>(to_integer(value, line));
  }
  else if (key == "oracle_step")
  {
    c.oracle_step = to_double(value, line);
  }
  else if (key == "oracle_n_max")
  {
    c.oracle_n_max = static_cast<int>(to_integer(value, line));
  }
  else
  {
    throw ConfigError("unknown key '" + key + "' in [output]", line);
  }
}

}  // namespace

RunConfig parse_run_config(const std::string &text)
{
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  bool have_potential = false;
  std::string potential;
  int potential_line = 0;
  while (std::getline(in, raw))
  {
    line++;
    const std::string t = trim(raw);
    if (!t.empty() && t.front() == '[')
    {
      if (t.back() != ']')
      {
        throw ConfigError("malformed section header", line);
      }
      section = trim(t.substr(1, t.size() - 2));
      if (section != "domain" && section != "potential" && section != "search" &&
          section != "output")
      {
        throw ConfigError("unknown section [" + section + "]", line);
      }
      if (section == "potential")
      {
        if (have_potential)
        {
          throw ConfigError("duplicate [potential] section", line);
        }
        have_potential = true;
        potential_line = line + 1;
      }
      continue;
    }
    if (section == "potential")
    {
      potential += raw;
      potential += '\n';
      continue;
    }
    const std::string body = trim(strip_comment(raw));
    if (body.empty())
    {
      continue;
    }
    if (section.empty())
    {
      throw ConfigError("key outside of any section", line);
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("expected 'key = value'", line);
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (section == "domain")
    {
      set_domain(c, key, value, line);
    }
    else if (section == "search")
    {
      set_search(c, key, value, line);
    }
    else
    {
      set_output(c, key, value, line);
    }
  }
  if (!have_potential)
  {
    throw ConfigError("missing [potential] section");
  }
  // Trailing blank lines do not change the potential; drop them so the echo is stable.
  while (potential.size() >= 2 && potential.ends_with("\n\n"))
  {
    potential.pop_back();
  }
  c.potential_text = potential;
  c.potential_first_line = potential_line;
  c.potential = parse_potential(potential, potential_line);
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

void validate(const RunConfig &c)
{
  if (c.level < 1 || c.level > 5 || c.levels < 1 || c.levels > 5)
  {
    throw ConfigError("level and levels must lie in [1, 5]");
  }
  if (!(c.theta.im_max < 0.0) || !(c.theta.re_min < c.theta.re_max) ||
      !(c.theta.im_min < c.theta.im_max))
  {
    throw ConfigError("theta must be a non-empty rectangle with im_max < 0");
  }
  if (!(c.R > 0.0) || !(c.base_h > 0.0) || c.N < 0 || c.N > 60)
  {
    throw ConfigError("need R > 0, base_h > 0 and 0 <= N <= 60");
  }
  if (c.potential.support > c.R * (1.0 + 1e-12))
  {
    throw ConfigError("potential support exceeds the truncation radius R");
  }
  if (c.track < 1 || !(c.window > 0.0))
  {
    throw ConfigError("track must be positive and window > 0");
  }
  if (c.map_resolution < 16 || !(c.oracle_step > 0.0) || c.oracle_n_max < 0 ||
      c.oracle_n_max > 50)
  {
    throw ConfigError("need map_resolution >= 16, oracle_step > 0, 0 <= oracle_n_max <= 50");
  }
  try
  {
    validate(c.sim);
  }
  catch (const ParamError &e)
  {
    throw ConfigError(e.what());
  }
}

std::string echo_config(const RunConfig &c)
{
  std::ostringstream os;
  const SimConfig &s = c.sim;
  os << "[domain]\n"
     << "R = " << fmt(c.R) << "\n"
     << "base_h = " << fmt(c.base_h) << "\n"
     << "level = " << c.level << "\n"
     << "levels = " << c.levels << "\n"
     << "theta = " << fmt(c.theta.re_min) << " " << fmt(c.theta.re_max) << " "
     << fmt(c.theta.im_min) << " " << fmt(c.theta.im_max) << "\n"
     << "N = " << c.N << "\n"
     << "quadrature = " << (c.quadrature.rule == QuadratureRule::ThreePoint ? 3 : 7) << "\n"
     << "cut_depth = " << c.quadrature.max_cut_depth << "\n"
     << "\n[search]\n"
     << "n_omega = " << s.n_omega << "\n"
     << "tol_ind = " << fmt(s.tol_ind) << "\n"
     << "tol_eps = " << fmt(s.tol_eps) << "\n"
     << "r0 = " << fmt(s.r0) << "\n"
     << "seed = " << s.seed << "\n"
     << "max_levels = " << s.max_levels << "\n"
     << "max_live = " << s.max_live << "\n"
     << "subdivision = " << (s.subdivision == Subdivision::Quadtree ? "quadtree" : "disk") << "\n"
     << "cover_margin = " << fmt(s.cover_margin) << "\n"
     << "workers = " << s.workers << "\n"
     << "polish = " << (s.polish ? "true" : "false") << "\n"
     << "track = " << c.track << "\n"
     << "strategy = " << (c.strategy == TrackStrategy::Full ? "full" : "window") << "\n"
     << "window = " << fmt(c.window) << "\n"
     << "\n[output]\n"
     << "dir = " << c.output_dir << "\n"
     << "map_resolution = " << c.map_resolution << "\n"
     << "oracle_step = " << fmt(c.oracle_step) << "\n"
     << "oracle_n_max = " << c.oracle_n_max << "\n"
     << "\n[potential]\n"
     << c.potential_text;
  return os.str();
}

}  // namespace resonance
