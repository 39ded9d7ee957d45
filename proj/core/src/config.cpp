#include "nsv/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "nsv/error.hpp"
#include "nsv/expression.hpp"

namespace nsv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

/// Consumes keys from one document and reports leftovers.
class Reader {
 public:
  explicit Reader(const IniDocument& doc) : doc_(doc) {}

  const IniDocument::Entry* find(const std::string& section, const std::string& key) {
    const auto s = doc_.sections.find(section);
    if (s == doc_.sections.end()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    used_.insert(section + "." + key);
    return &k->second;
  }
  bool has_section(const std::string& section) const { return doc_.sections.count(section) != 0; }

  bool get(const std::string& section, const std::string& key, double& out) {
    const auto* e = find(section, key);
    if (!e) return false;
    out = number(*e, section, key);
    return true;
  }
  bool get(const std::string& section, const std::string& key, int& out) {
    const auto* e = find(section, key);
    if (!e) return false;
    const double v = number(*e, section, key);
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw ParseError(section + "." + key + ": expected an integer, got '" + e->value + "'", e->line);
    out = static_cast<int>(v);
    return true;
  }
  bool get(const std::string& section, const std::string& key, std::string& out) {
    const auto* e = find(section, key);
    if (!e) return false;
    out = e->value;
    return true;
  }
  bool get(const std::string& section, const std::string& key, bool& out) {
    const auto* e = find(section, key);
    if (!e) return false;
    if (e->value == "true" || e->value == "yes" || e->value == "1") out = true;
    else if (e->value == "false" || e->value == "no" || e->value == "0") out = false;
    else throw ParseError(section + "." + key + ": expected true or false, got '" + e->value + "'", e->line);
    return true;
  }
  std::vector<double> list(const std::string& section, const std::string& key) {
    std::vector<double> out;
    const auto* e = find(section, key);
    if (!e) return out;
    for (const auto& part : split(e->value, ',')) out.push_back(number({part, e->line}, section, key));
    return out;
  }

  void reject_unused() const {
    for (const auto& [section, entries] : doc_.sections)
      for (const auto& [key, entry] : entries)
        if (!used_.count(section + "." + key))
          throw ParseError("unknown key '" + section + "." + key + "'", entry.line);
  }

 private:
  static double number(const IniDocument::Entry& e, const std::string& section, const std::string& key) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (e.value.empty() || end != begin + e.value.size() || !std::isfinite(v))
      throw ParseError(section + "." + key + ": expected a number, got '" + e.value + "'", e.line);
    return v;
  }

  const IniDocument& doc_;
  std::set<std::string> used_;
};

const std::set<std::string> known_sections = {"problem", "discretization", "solver", "study", "output"};

std::vector<Expression> expressions(const std::string& text, int dim, const std::string& key, int line) {
  std::vector<Expression> out;
  for (const auto& part : split(text, ',')) {
    try {
      out.emplace_back(part);
    } catch (const ParseError& e) {
      throw ParseError("problem." + key + ": " + e.what(), line);
    }
  }
  if (static_cast<int>(out.size()) != dim)
    throw ValidationError("problem." + key + ": expected " + std::to_string(dim) + " components, got " +
                          std::to_string(out.size()));
  return out;
}

ControlBounds bounds(const std::vector<double>& lower, const std::vector<double>& upper, int dim) {
  ControlBounds box = ControlBounds::unbounded(dim);
  auto fill = [dim](const std::vector<double>& v, std::vector<double>& out, const char* key) {
    if (v.empty()) return;
    if (v.size() == 1) out.assign(dim, v[0]);
    else if (static_cast<int>(v.size()) == dim) out = v;
    else throw ValidationError(std::string("problem.") + key + ": expected 1 or " + std::to_string(dim) + " values");
  };
  fill(lower, box.lower, "lower");
  fill(upper, box.upper, "upper");
  return box;
}

}  // namespace

IniDocument IniDocument::parse(std::istream& in) {
  IniDocument doc;
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("unterminated section header", line);
      section = trim(text.substr(1, text.size() - 2));
      if (!known_sections.count(section)) throw ParseError("unknown section '" + section + "'", line);
      doc.sections[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    const std::string key = trim(text.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line);
    if (section.empty()) throw ParseError("key '" + key + "' outside of a section", line);
    auto& entries = doc.sections[section];
    if (entries.count(key)) throw ParseError("duplicate key '" + section + "." + key + "'", line);
    entries[key] = {trim(text.substr(eq + 1)), line};
  }
  return doc;
}

RunConfig parse_config(std::istream& in) {
  const IniDocument doc = IniDocument::parse(in);
  Reader r(doc);
  RunConfig cfg;

  // discretization
  r.get("discretization", "mesh", cfg.mesh_file);
  r.get("discretization", "dim", cfg.dim);
  r.get("discretization", "n", cfg.n);
  r.get("discretization", "refine", cfg.refine);
  r.get("discretization", "rho0", cfg.rho0);
  const bool has_steps = r.get("discretization", "steps", cfg.steps);
  double tau = 0.0;
  const bool has_tau = r.get("discretization", "tau", tau);
  if (has_steps && has_tau) throw ValidationError("discretization: give either steps or tau, not both");
  if (!cfg.mesh_file.empty()) {
    // The file decides the dimension; load it now so errors surface at load time.
    cfg.dim = load_mesh(cfg.mesh_file).dim();
  }
  if (cfg.dim != 2 && cfg.dim != 3) throw ValidationError("discretization.dim must be 2 or 3");
  if (cfg.n < 1) throw ValidationError("discretization.n must be positive");
  if (cfg.refine < 0) throw ValidationError("discretization.refine must be non-negative");

  // problem
  ProblemData& p = cfg.problem;
  const bool has_nu = r.get("problem", "nu", p.nu);
  const bool has_alpha = r.get("problem", "alpha", p.alpha);
  const bool has_gamma = r.get("problem", "gamma", p.gamma);
  const bool has_aT = r.get("problem", "alpha_T", p.alpha_T);
  const bool has_aQ = r.get("problem", "alpha_Q", p.alpha_Q);
  const bool has_T = r.get("problem", "T", p.T);
  const auto lower = r.list("problem", "lower");
  const auto upper = r.list("problem", "upper");
  p.box = bounds(lower, upper, cfg.dim);
  r.get("problem", "u0", cfg.initial_control);

  if (r.get("problem", "case", cfg.case_name)) {
    if (r.find("problem", "y0") || r.find("problem", "forcing"))
      throw ValidationError("problem.case cannot be combined with y0 or forcing");
    const ManufacturedCase c = build_case(cfg.case_name, p.nu, p.alpha);
    if (c.dim != cfg.dim)
      throw ValidationError("case '" + cfg.case_name + "' is " + std::to_string(c.dim) + "D but the mesh is " +
                            std::to_string(cfg.dim) + "D");
    p.y0 = c.velocity.at(0.0);
    cfg.forcing = c.forcing;
  }
  for (const char* key : {"y0", "yT", "yQ", "forcing"}) {
    const auto* e = r.find("problem", key);
    if (!e) continue;
    const TimeVelocityField f = make_vector_field(expressions(e->value, cfg.dim, key, e->line));
    const std::string k = key;
    if (k == "y0") p.y0 = f.at(0.0);
    else if (k == "yT") p.yT = f.at(p.T);
    else if (k == "yQ") p.yQ = f;
    else cfg.forcing = f;
  }
  p.validate(cfg.dim);
  if (has_tau) {
    if (!(tau > 0.0)) throw ValidationError("discretization.tau must be positive");
    cfg.steps = std::max(1, static_cast<int>(std::ceil(p.T / tau - 1e-12)));
  }
  if (cfg.steps < 1) throw ValidationError("discretization.steps must be positive");
  if (!(cfg.rho0 > 1.0)) throw ValidationError("discretization.rho0 must exceed 1");

  // solver
  NewtonOptions newton;
  bool newton_set = false;
  newton_set |= r.get("solver", "newton_abs_tol", newton.abs_tol);
  newton_set |= r.get("solver", "newton_rel_tol", newton.rel_tol);
  newton_set |= r.get("solver", "newton_max_iterations", newton.max_iterations);
  newton_set |= r.get("solver", "picard_after", newton.picard_after);
  newton_set |= r.get("solver", "max_picard_iterations", newton.max_picard_iterations);
  if (newton_set) {
    if (!(newton.abs_tol >= 0.0) || !(newton.rel_tol >= 0.0) || newton.abs_tol + newton.rel_tol <= 0.0)
      throw ValidationError("solver: Newton tolerances must be non-negative and not both zero");
    if (newton.max_iterations < 1 || newton.picard_after < 1 || newton.max_picard_iterations < 0)
      throw ValidationError("solver: Newton iteration caps must be positive");
    cfg.newton = newton;
    cfg.optimizer.newton = newton;
  }
  OptimizeOptions& o = cfg.optimizer;
  r.get("solver", "tol", o.tol);
  r.get("solver", "pointwise_tol", o.pointwise_tol);
  r.get("solver", "max_iterations", o.max_iterations);
  r.get("solver", "armijo", o.armijo);
  r.get("solver", "backtrack", o.backtrack);
  r.get("solver", "max_backtracks", o.max_backtracks);
  r.get("solver", "initial_step", o.initial_step);
  if (!(o.tol > 0.0) || o.pointwise_tol < 0.0) throw ValidationError("solver.tol must be positive");
  if (o.max_iterations < 0 || o.max_backtracks < 0) throw ValidationError("solver: iteration caps must be non-negative");
  if (!(o.armijo > 0.0 && o.armijo < 1.0)) throw ValidationError("solver.armijo must lie in (0, 1)");
  if (!(o.backtrack > 0.0 && o.backtrack < 1.0)) throw ValidationError("solver.backtrack must lie in (0, 1)");
  if (!(o.initial_step > 0.0)) throw ValidationError("solver.initial_step must be positive");

  // study
  if (r.has_section("study")) {
    StudyConfig s;
    std::string coupling;
    r.get("study", "kind", s.kind);
    r.get("study", "case", s.case_name);
    if (r.get("study", "coupling", coupling)) {
      if (coupling == "tau_h") s.coupling = Coupling::tau_h;
      else if (coupling == "tau_h2") s.coupling = Coupling::tau_h2;
      else if (coupling == "tau_only") s.coupling = Coupling::tau_only;
      else throw ValidationError("study.coupling must be tau_h, tau_h2 or tau_only, got '" + coupling + "'");
    }
    r.get("study", "levels", s.levels);
    r.get("study", "base_n", s.base_n);
    r.get("study", "base_steps", s.base_steps);
    r.get("study", "threshold", s.threshold);
    r.get("study", "reference_offset", s.reference_offset);
    if (has_nu) s.nu = p.nu;
    if (has_alpha) s.alpha = p.alpha;
    if (has_gamma) s.gamma = p.gamma;
    if (has_aT) s.alpha_T = p.alpha_T;
    if (has_aQ) s.alpha_Q = p.alpha_Q;
    if (has_T) s.T = p.T;
    auto scalar = [](const std::vector<double>& v, double& out, const char* key) {
      if (v.empty()) return;
      for (double x : v)
        if (x != v[0]) throw ValidationError(std::string("problem.") + key + ": studies take one bound for all components");
      out = v[0];
    };
    scalar(lower, s.lower, "lower");
    scalar(upper, s.upper, "upper");
    if (cfg.newton) s.newton = *cfg.newton;
    s.optimizer = cfg.optimizer;
    s.validate();
    cfg.study = s;
  }

  // output
  r.get("output", "dir", cfg.out_dir);
  r.get("output", "vtk", cfg.write_vtk);

  r.reject_unused();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'", 0);
  return parse_config(in);
}

Mesh RunConfig::build_mesh() const {
  Mesh mesh = mesh_file.empty() ? build_structured(Box::unit(dim), n) : load_mesh(mesh_file);
  for (int i = 0; i < refine; ++i) mesh = refine_uniform(mesh);
  return mesh;
}

TimeGrid RunConfig::build_grid() const { return TimeGrid::uniform(problem.T, steps, rho0); }

}  // namespace nsv
