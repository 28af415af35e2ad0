#include "actx/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace actx {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Entries = std::map<std::string, Entry>;

Entries read_entries(std::string_view text, const std::vector<std::string>& known, const char* what) {
  Entries out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    if (trim(raw).empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(std::string(what) + " line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(raw).substr(0, eq));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(std::string(what) + " line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    if (out.count(key)) {
      throw ConfigError(std::string(what) + " line " + std::to_string(line) + ": duplicate key '" + key + "'");
    }
    out[key] = {trim(std::string_view(raw).substr(eq + 1)), line};
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const Entry& e, const std::string& why) {
  throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "': " + why);
}

std::vector<double> numbers(const std::string& key, const Entry& e) {
  std::vector<double> v;
  std::string s = e.value;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    double x = 0.0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) bad(key, e, "'" + tok + "' is not a number");
    v.push_back(x);
  }
  if (v.empty()) bad(key, e, "expected a number");
  return v;
}

double number(const std::string& key, const Entry& e) {
  const auto v = numbers(key, e);
  if (v.size() != 1) bad(key, e, "expected a single number");
  return v.front();
}

bool boolean(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  bad(key, e, "expected true or false");
}

// One value per axis; a single value is broadcast.
std::vector<double> per_axis(const std::string& key, const Entry& e, int dim) {
  auto v = numbers(key, e);
  if (v.size() == 1) v.assign(dim, v.front());
  if (static_cast<int>(v.size()) != dim) bad(key, e, "expected 1 or " + std::to_string(dim) + " values");
  return v;
}

Box parse_box(const std::string& key, const Entry& e, int dim) {
  const auto v = numbers(key, e);
  Box b;
  if (static_cast<int>(v.size()) == 2) {
    for (int k = 0; k < dim; ++k) {
      b.lo[k] = v[0];
      b.hi[k] = v[1];
    }
  } else if (static_cast<int>(v.size()) == 2 * dim) {
    for (int k = 0; k < dim; ++k) {
      b.lo[k] = v[k];
      b.hi[k] = v[dim + k];
    }
  } else {
    bad(key, e, "expected lo hi or " + std::to_string(2 * dim) + " corner values");
  }
  return b;
}

const std::vector<std::string> kRunKeys{
    "dim",    "cells",   "lo",         "hi",       "epsilon",  "beta",           "tau",
    "T",      "p",       "q",          "lambda0",  "energy_cap", "shape",        "transport",
    "potential", "alpha", "kappa",     "inner",    "outer",    "cutoff",         "boundary",
    "boundary_value", "scheme", "cfl", "diag_every", "snapshot_every", "track_steps", "density_rows",
    "probe",  "seed"};

}  // namespace

HuiskenProbe parse_probe(std::string_view text, int dim, double default_radius) {
  std::map<std::string, std::vector<double>> fields;
  std::string current;
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      current = tok.substr(0, eq);
      tok = tok.substr(eq + 1);
      if (current != "y" && current != "s" && current != "r") {
        throw ConfigError("probe: unknown field '" + current + "'");
      }
      if (tok.empty()) continue;
    }
    if (current.empty()) throw ConfigError("probe: expected y=..., s=...");
    double x = 0.0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
      throw ConfigError("probe: '" + tok + "' is not a number");
    }
    fields[current].push_back(x);
  }
  if (fields["y"].size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("probe: y needs " + std::to_string(dim) + " coordinates");
  }
  if (fields["s"].size() != 1) throw ConfigError("probe: s needs one value");
  Point y = Point::Zero();
  for (int k = 0; k < dim; ++k) y[k] = fields["y"][k];
  const double d = fields.count("r") && !fields["r"].empty() ? fields["r"].front() : default_radius;
  if (!(d > 0.0)) throw ConfigError("probe: radius must be positive");
  return HuiskenProbe::at(y, fields["s"].front(), d);
}

RunConfig parse_run_config(std::string_view text) {
  const Entries e = read_entries(text, kRunKeys, "config");
  for (const char* required : {"epsilon", "shape", "T", "cells"}) {
    if (!e.count(required)) throw ConfigError(std::string("missing required key '") + required + "'");
  }
  const auto has = [&](const char* k) { return e.count(k) > 0; };
  const auto get = [&](const char* k) -> const Entry& { return e.at(k); };

  RunConfig rc;
  rc.text = std::string(text);
  ScenarioConfig& c = rc.scenario;
  int dim = 2;
  if (has("dim")) {
    const double d = number("dim", get("dim"));
    if (d != 2.0 && d != 3.0) bad("dim", get("dim"), "must be 2 or 3");
    dim = static_cast<int>(d);
  }
  const auto cells = per_axis("cells", get("cells"), dim);
  const auto lo = has("lo") ? per_axis("lo", get("lo"), dim) : std::vector<double>(dim, -0.5);
  const auto hi = has("hi") ? per_axis("hi", get("hi"), dim) : std::vector<double>(dim, 0.5);
  std::array<int, 3> n{0, 0, 0};
  Point plo = Point::Zero();
  Point phi = Point::Zero();
  for (int k = 0; k < dim; ++k) {
    if (cells[k] < 1 || cells[k] != std::floor(cells[k])) bad("cells", get("cells"), "must be positive integers");
    n[k] = static_cast<int>(cells[k]);
    plo[k] = lo[k];
    phi[k] = hi[k];
  }
  try {
    c.grid = GridSpec(dim, plo, phi, n);
  } catch (const std::invalid_argument& err) {
    bad("cells", get("cells"), err.what());
  }

  c.epsilon = number("epsilon", get("epsilon"));
  c.T = number("T", get("T"));
  if (has("beta")) c.beta = number("beta", get("beta"));
  if (has("tau")) c.tau = number("tau", get("tau"));
  if (has("p")) c.p = number("p", get("p"));
  if (has("q")) c.q = number("q", get("q"));
  if (has("lambda0")) c.lambda0 = number("lambda0", get("lambda0"));
  if (has("energy_cap")) c.energy_cap = number("energy_cap", get("energy_cap"));
  if (has("boundary_value")) c.boundary_value = number("boundary_value", get("boundary_value"));
  try {
    c.shape = Shape::parse(get("shape").value, dim);
  } catch (const std::invalid_argument& err) {
    bad("shape", get("shape"), err.what());
  }
  if (has("transport")) {
    try {
      c.transport = TransportSpec::parse(get("transport").value, dim);
    } catch (const std::invalid_argument& err) {
      bad("transport", get("transport"), err.what());
    }
  }
  if (has("potential")) {
    const Entry& p = get("potential");
    if (p.value == "quartic") {
      if (has("alpha") || has("kappa")) bad("alpha", has("alpha") ? get("alpha") : get("kappa"),
                                            "alpha/kappa apply to polynomial potentials only");
    } else {
      const double alpha = has("alpha") ? number("alpha", get("alpha")) : 0.8;
      const double kappa = has("kappa") ? number("kappa", get("kappa")) : 1.0;
      try {
        c.well = DoubleWell::polynomial(numbers("potential", p), alpha, kappa);
      } catch (const std::invalid_argument& err) {
        bad("potential", p, err.what());
      }
    }
  }
  if (has("inner")) c.inner = parse_box("inner", get("inner"), dim);
  if (has("outer")) c.outer = parse_box("outer", get("outer"), dim);
  if (has("cutoff")) {
    const Entry& v = get("cutoff");
    if (v.value == "quintic") {
      c.cutoff = CutoffKind::kQuintic;
    } else if (v.value == "none") {
      c.cutoff = CutoffKind::kNone;
    } else {
      bad("cutoff", v, "expected quintic or none");
    }
  }
  if (has("boundary")) {
    const Entry& v = get("boundary");
    if (v.value == "dirichlet") {
      c.boundary = BoundaryMode::kDirichlet;
    } else if (v.value == "initial") {
      c.boundary = BoundaryMode::kInitial;
    } else {
      bad("boundary", v, "expected dirichlet or initial");
    }
  }

  SolverConfig& s = rc.solver;
  if (has("scheme")) {
    const Entry& v = get("scheme");
    if (v.value == "euler") {
      s.scheme = Scheme::kEuler;
    } else if (v.value == "rk2") {
      s.scheme = Scheme::kRK2;
    } else {
      bad("scheme", v, "expected euler or rk2");
    }
  }
  if (has("cfl")) s.cfl = number("cfl", get("cfl"));
  const auto count = [&](const char* k) {
    const double v = number(k, get(k));
    if (v < 0 || v != std::floor(v)) bad(k, get(k), "expected a nonnegative integer");
    return static_cast<Index>(v);
  };
  if (has("diag_every")) s.diag_every = count("diag_every");
  if (has("snapshot_every")) s.snapshot_every = count("snapshot_every");
  if (has("track_steps")) s.track_steps = boolean("track_steps", get("track_steps"));
  if (has("density_rows")) s.density_rows = boolean("density_rows", get("density_rows"));
  if (has("seed")) rc.seed = static_cast<std::uint64_t>(count("seed"));
  if (has("probe")) {
    const double d = probe_scale(c.grid.box(), c.inner_box(), dim);
    try {
      s.probe = parse_probe(get("probe").value, dim, d);
    } catch (const ConfigError& err) {
      bad("probe", get("probe"), err.what());
    }
  }
  return rc;
}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(slurp(path)); }

SweepPlan parse_sweep_plan(std::string_view text, const std::filesystem::path& dir) {
  const Entries e = read_entries(text, {"base", "ladder", "ratio", "h0_cells"}, "plan");
  for (const char* required : {"base", "ladder"}) {
    if (!e.count(required)) throw ConfigError(std::string("plan: missing required key '") + required + "'");
  }
  SweepPlan plan;
  plan.text = std::string(text);
  plan.base = e.at("base").value;
  if (plan.base.is_relative() && !dir.empty()) plan.base = dir / plan.base;
  plan.ladder = numbers("ladder", e.at("ladder"));
  if (e.count("ratio")) plan.ratio = number("ratio", e.at("ratio"));
  if (e.count("h0_cells")) {
    const double v = number("h0_cells", e.at("h0_cells"));
    if (v < 1 || v != std::floor(v)) bad("h0_cells", e.at("h0_cells"), "expected a positive integer");
    plan.h0_cells = static_cast<int>(v);
  }
  if (plan.ladder.size() < 2) bad("ladder", e.at("ladder"), "needs at least two rungs");
  if (plan.ratio < 4.0) bad("ratio", e.at("ratio"), "epsilon/h must be at least 4");
  for (double m : plan.ladder) {
    if (!(m > 0.0)) bad("ladder", e.at("ladder"), "rungs must be positive");
  }
  return plan;
}

SweepPlan load_sweep_plan(const std::filesystem::path& path) {
  return parse_sweep_plan(slurp(path), path.parent_path());
}

}  // namespace actx
