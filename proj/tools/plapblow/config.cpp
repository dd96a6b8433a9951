#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "plap/error.hpp"
#include "plap/format.hpp"
#include "plap/sources.hpp"

namespace plapcli {

using plap::ConfigError;
using plap::format_double;

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(std::string(what) + ": bad number '" + t + "'");
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(std::string(what) + ": bad integer '" + t + "'");
  return v;
}

namespace {

// "kind: k1=v1, k2=v2" -> kind and the raw remainder.
std::pair<std::string, std::string> split_kind(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {trim(spec), ""};
  return {trim(spec.substr(0, colon)), trim(spec.substr(colon + 1))};
}

InitSpec parse_init(std::string_view spec) {
  const auto [kind, body] = split_kind(spec);
  InitSpec init;
  if (kind == "file") {
    if (body.empty()) throw ConfigError("init: file path missing");
    init.kind = InitSpec::Kind::File;
    init.path = body;
    return init;
  }
  if (kind == "sine")
    init.kind = InitSpec::Kind::Sine;
  else if (kind == "eigen")
    init.kind = InitSpec::Kind::Eigen;
  else
    throw ConfigError("init: unknown kind '" + kind + "' (expected sine, eigen or file)");
  bool have_c = false;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("init: expected key=value in '" + item + "'");
    const std::string k = trim(item.substr(0, eq)), v = trim(item.substr(eq + 1));
    if (k == "c") {
      init.c = parse_double(v, "init.c");
      have_c = true;
    } else if (k == "norm" && init.kind == InitSpec::Kind::Eigen) {
      if (v == "mass")
        init.mass_norm = true;
      else if (v != "sup")
        throw ConfigError("init: norm must be sup or mass");
    } else {
      throw ConfigError("init: unknown parameter '" + k + "'");
    }
  }
  if (!have_c) throw ConfigError("init: amplitude c missing");
  if (!(init.c >= 0.0)) throw ConfigError("init: amplitude must be nonnegative");
  return init;
}

std::string emit_init(const InitSpec& init) {
  switch (init.kind) {
    case InitSpec::Kind::File:
      return "file: " + init.path;
    case InitSpec::Kind::Sine:
      return "sine: c=" + format_double(init.c);
    case InitSpec::Kind::Eigen:
      return "eigen: c=" + format_double(init.c) + (init.mass_norm ? ", norm=mass" : "");
  }
  return "";
}

std::string emit_lengths(const GridSpec& g) {
  return g.dim == 1 ? format_double(g.lx) : format_double(g.lx) + "x" + format_double(g.ly);
}

void parse_lengths(GridSpec& g, std::string_view text) {
  const std::string t = trim(text);
  const auto x = t.find('x');
  if (x == std::string::npos) {
    g.lx = g.ly = parse_double(t, "grid.L");
  } else {
    g.lx = parse_double(t.substr(0, x), "grid.L");
    g.ly = parse_double(t.substr(x + 1), "grid.L");
  }
  if (!(g.lx > 0.0) || !(g.ly > 0.0)) throw ConfigError("grid.L must be positive");
}

std::string tag_key(plap::ConditionTag tag) {
  switch (tag) {
    case plap::ConditionTag::A: return "A";
    case plap::ConditionTag::B: return "B";
    case plap::ConditionTag::C: return "C";
    case plap::ConditionTag::CPrime: return "Cprime";
  }
  return "C";
}

const std::set<std::string> kRequired = {"grid.n", "p", "f", "init"};

}  // namespace

std::string normalize_source_spec(std::string_view spec) {
  try {
    if (plap::source_needs_lambda(spec)) return plap::parse_source(spec, 2.0, 1.0).describe();
    const auto [kind, body] = split_kind(spec);
    if (kind == "table") {
      if (body.empty()) throw ConfigError("table: missing path");
      return "table: " + body;
    }
    return plap::parse_source(spec).describe();
  } catch (const plap::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

void set_key(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in), v = trim(value_in);
  if (key == "grid.dim") {
    c.grid.dim = parse_int(v, key);
    if (c.grid.dim != 1 && c.grid.dim != 2) throw ConfigError("grid.dim must be 1 or 2");
  } else if (key == "grid.L") {
    parse_lengths(c.grid, v);
  } else if (key == "grid.n") {
    c.grid.n = parse_int(v, key);
    if (c.grid.n < 1) throw ConfigError("grid.n must be positive");
  } else if (key == "p") {
    c.p = parse_double(v, key);
    if (!(c.p >= 2.0)) throw ConfigError("p must be >= 2");
  } else if (key == "f") {
    c.f = normalize_source_spec(v);
  } else if (key == "f.c") {
    if (!plap::source_needs_lambda(c.f)) throw ConfigError("f.c needs an eigscaled source");
    c.f = "eigscaled: c=" + format_double(parse_double(v, key));
  } else if (key == "cond.tag") {
    c.cond.tag = plap::parse_condition_tag(v);
  } else if (key == "cond.mode") {
    if (v == "auto")
      c.cond.automatic = true;
    else if (v == "manual")
      c.cond.automatic = false;
    else
      throw ConfigError("cond.mode must be manual or auto");
  } else if (key == "cond.alpha") {
    c.cond.alpha = parse_double(v, key);
  } else if (key == "cond.beta") {
    c.cond.beta_max = v == "max";
    c.cond.beta = c.cond.beta_max ? 0.0 : parse_double(v, key);
  } else if (key == "cond.gamma") {
    c.cond.gamma = parse_double(v, key);
  } else if (key == "init") {
    c.init = parse_init(v);
  } else if (key == "init.c") {
    if (c.init.kind == InitSpec::Kind::File) throw ConfigError("init.c needs a sine or eigen init");
    c.init.c = parse_double(v, key);
  } else if (key == "solver.scheme") {
    c.solver.scheme = plap::parse_scheme(v);
  } else if (key == "solver.dt_init") {
    c.solver.dt_init = parse_double(v, key);
  } else if (key == "solver.dt_min") {
    c.solver.dt_min = parse_double(v, key);
  } else if (key == "solver.dt_max") {
    c.solver.dt_max = parse_double(v, key);
  } else if (key == "solver.safety") {
    c.solver.safety = parse_double(v, key);
  } else if (key == "solver.U_blow") {
    c.solver.U_blow = parse_double(v, key);
  } else if (key == "solver.T_max") {
    c.solver.T_max = parse_double(v, key);
  } else if (key == "solver.sample_interval") {
    c.solver.sample_interval = parse_double(v, key);
  } else if (key == "output") {
    c.output = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::stringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    if (!seen.insert(key).second)
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      set_key(c, key, t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& k : kRequired)
    if (!seen.count(k)) throw ConfigError("config: missing required key '" + k + "'");
  if (!c.cond.automatic && !seen.count("cond.alpha"))
    throw ConfigError("config: cond.alpha is required unless cond.mode = auto");
  try {
    plap::validate(c.solver);
  } catch (const plap::InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& c) {
  std::string s;
  auto line = [&s](std::string_view k, const std::string& v) {
    s += k;
    s += " = ";
    s += v;
    s += '\n';
  };
  line("grid.dim", std::to_string(c.grid.dim));
  line("grid.L", emit_lengths(c.grid));
  line("grid.n", std::to_string(c.grid.n));
  line("p", format_double(c.p));
  line("f", c.f);
  line("cond.tag", tag_key(c.cond.tag));
  line("cond.mode", c.cond.automatic ? "auto" : "manual");
  if (!c.cond.automatic) {
    line("cond.alpha", format_double(c.cond.alpha));
    line("cond.beta", c.cond.beta_max ? "max" : format_double(c.cond.beta));
    line("cond.gamma", format_double(c.cond.gamma));
  }
  line("init", emit_init(c.init));
  line("solver.scheme", std::string(plap::to_string(c.solver.scheme)));
  line("solver.dt_init", format_double(c.solver.dt_init));
  line("solver.dt_min", format_double(c.solver.dt_min));
  line("solver.dt_max", format_double(c.solver.dt_max));
  line("solver.safety", format_double(c.solver.safety));
  line("solver.U_blow", format_double(c.solver.U_blow));
  line("solver.T_max", format_double(c.solver.T_max));
  line("solver.sample_interval", format_double(c.solver.sample_interval));
  if (!c.output.empty()) line("output", c.output);
  return s;
}

std::string config_hash(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.output.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : emit_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GridSpec parse_domain(std::string_view text) {
  const std::string t = trim(text);
  const auto a = t.find(':');
  const auto b = a == std::string::npos ? a : t.find(':', a + 1);
  if (b == std::string::npos) throw ConfigError("domain must be dim:L:n, got '" + t + "'");
  GridSpec g;
  g.dim = parse_int(t.substr(0, a), "domain dim");
  if (g.dim != 1 && g.dim != 2) throw ConfigError("domain dim must be 1 or 2");
  parse_lengths(g, t.substr(a + 1, b - a - 1));
  g.n = parse_int(t.substr(b + 1), "domain n");
  if (g.n < 1) throw ConfigError("domain n must be positive");
  return g;
}

}  // namespace plapcli
