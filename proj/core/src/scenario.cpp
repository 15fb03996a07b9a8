#include "hjcone/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hjcone/extension.hpp"
#include "hjcone/sampling.hpp"

namespace hjcone {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---- parse helpers: every failure lands in errs, nothing throws ----------

void reject_unknown_keys(const json& o, const std::vector<std::string>& allowed,
                         const std::string& path, std::vector<std::string>& errs) {
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool known = false;
    for (const auto& k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) errs.push_back(path + ": unknown key \"" + it.key() + "\"");
  }
}

const json* get_object(const json& o, const std::string& key,
                       const std::string& path, bool required,
                       std::vector<std::string>& errs) {
  if (!o.contains(key)) {
    if (required) errs.push_back(path + ": missing required key \"" + key + "\"");
    return nullptr;
  }
  if (!o[key].is_object()) {
    errs.push_back(path + "." + key + ": expected an object");
    return nullptr;
  }
  return &o[key];
}

bool get_double(const json& o, const std::string& key, const std::string& path,
                double& out, std::vector<std::string>& errs) {
  if (!o.contains(key)) return false;
  if (!o[key].is_number()) {
    errs.push_back(path + "." + key + ": expected a number");
    return false;
  }
  out = o[key].get<double>();
  return true;
}

bool get_int(const json& o, const std::string& key, const std::string& path,
             int& out, std::vector<std::string>& errs) {
  if (!o.contains(key)) return false;
  if (!o[key].is_number_integer()) {
    errs.push_back(path + "." + key + ": expected an integer");
    return false;
  }
  out = o[key].get<int>();
  return true;
}

bool get_string(const json& o, const std::string& key, const std::string& path,
                std::string& out, std::vector<std::string>& errs) {
  if (!o.contains(key)) return false;
  if (!o[key].is_string()) {
    errs.push_back(path + "." + key + ": expected a string");
    return false;
  }
  out = o[key].get<std::string>();
  return true;
}

bool get_number_array(const json& v, const std::string& path,
                      std::vector<double>& out, std::vector<std::string>& errs) {
  if (!v.is_array()) {
    errs.push_back(path + ": expected an array of numbers");
    return false;
  }
  out.clear();
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      errs.push_back(path + "[" + std::to_string(i) + "]: expected a number");
      return false;
    }
    out.push_back(v[i].get<double>());
  }
  return true;
}

std::optional<ConeDescriptor> parse_cone(const json& o, const std::string& path,
                                         std::vector<std::string>& errs) {
  if (!o.is_object()) {
    errs.push_back(path + ": expected an object");
    return std::nullopt;
  }
  std::string kind;
  if (!get_string(o, "kind", path, kind, errs)) {
    errs.push_back(path + ": missing required key \"kind\"");
    return std::nullopt;
  }
  try {
    if (kind == "orthant") {
      reject_unknown_keys(o, {"kind", "dim"}, path, errs);
      int dim = 0;
      if (!get_int(o, "dim", path, dim, errs)) {
        errs.push_back(path + ": orthant needs \"dim\"");
        return std::nullopt;
      }
      return ConeDescriptor::orthant(dim);
    }
    if (kind == "psd") {
      reject_unknown_keys(o, {"kind", "matrix_dim"}, path, errs);
      int d = 0;
      if (!get_int(o, "matrix_dim", path, d, errs)) {
        errs.push_back(path + ": psd needs \"matrix_dim\"");
        return std::nullopt;
      }
      return ConeDescriptor::psd(d);
    }
    if (kind == "product") {
      reject_unknown_keys(o, {"kind", "factors", "weights"}, path, errs);
      if (!o.contains("factors") || !o["factors"].is_array() ||
          o["factors"].empty()) {
        errs.push_back(path + ": product needs a nonempty \"factors\" array");
        return std::nullopt;
      }
      std::vector<ConeDescriptor> factors;
      bool factors_ok = true;
      for (size_t i = 0; i < o["factors"].size(); ++i) {
        auto f = parse_cone(o["factors"][i],
                            path + ".factors[" + std::to_string(i) + "]", errs);
        if (f)
          factors.push_back(std::move(*f));
        else
          factors_ok = false;
      }
      std::vector<double> weights;
      if (!o.contains("weights") ||
          !get_number_array(o["weights"], path + ".weights", weights, errs)) {
        errs.push_back(path + ": product needs a \"weights\" array");
        return std::nullopt;
      }
      if (!factors_ok) return std::nullopt;
      return ConeDescriptor::product(std::move(factors), std::move(weights));
    }
  } catch (const std::invalid_argument& e) {
    errs.push_back(path + ": " + e.what());
    return std::nullopt;
  }
  errs.push_back(path + ".kind: must be \"orthant\", \"psd\" or \"product\"");
  return std::nullopt;
}

void parse_params(const json& o, const std::string& path, EvaluatorParams& out,
                  std::vector<std::string>& errs) {
  reject_unknown_keys(o, {"scalars", "vectors", "strings"}, path, errs);
  if (const json* s = get_object(o, "scalars", path, false, errs)) {
    for (auto it = s->begin(); it != s->end(); ++it) {
      if (!it.value().is_number()) {
        errs.push_back(path + ".scalars." + it.key() + ": expected a number");
        continue;
      }
      out.scalars[it.key()] = it.value().get<double>();
    }
  }
  if (const json* v = get_object(o, "vectors", path, false, errs)) {
    for (auto it = v->begin(); it != v->end(); ++it) {
      std::vector<double> vec;
      if (get_number_array(it.value(), path + ".vectors." + it.key(), vec, errs))
        out.vectors[it.key()] = std::move(vec);
    }
  }
  if (const json* s = get_object(o, "strings", path, false, errs)) {
    for (auto it = s->begin(); it != s->end(); ++it) {
      if (!it.value().is_string()) {
        errs.push_back(path + ".strings." + it.key() + ": expected a string");
        continue;
      }
      out.strings[it.key()] = it.value().get<std::string>();
    }
  }
}

void parse_function(const json& o, const std::string& path, FunctionConfig& out,
                    std::vector<std::string>& errs) {
  reject_unknown_keys(
      o, {"name", "params", "monotone", "convex", "nonneg", "lip"}, path, errs);
  if (!get_string(o, "name", path, out.name, errs))
    errs.push_back(path + ": missing required key \"name\"");
  if (const json* p = get_object(o, "params", path, false, errs))
    parse_params(*p, path + ".params", out.params, errs);
  for (const auto& [key, slot] :
       std::initializer_list<std::pair<const char*, std::optional<bool>*>>{
           {"monotone", &out.monotone},
           {"convex", &out.convex},
           {"nonneg", &out.nonneg}}) {
    if (o.contains(key)) {
      if (!o[key].is_boolean())
        errs.push_back(path + "." + key + ": expected a boolean");
      else
        *slot = o[key].get<bool>();
    }
  }
  if (o.contains("lip")) {
    double v = 0;
    if (get_double(o, "lip", path, v, errs)) {
      if (!(v >= 0) || !std::isfinite(v))
        errs.push_back(path + ".lip: must be finite and >= 0");
      else
        out.lip = v;
    }
  }
}

// ---- emit helpers --------------------------------------------------------

ordered_json emit_cone(const ConeDescriptor& c) {
  ordered_json o;
  switch (c.kind()) {
    case ConeKind::Orthant:
      o["kind"] = "orthant";
      o["dim"] = c.ambient_dim();
      break;
    case ConeKind::Psd:
      o["kind"] = "psd";
      o["matrix_dim"] = c.matrix_dim();
      break;
    case ConeKind::Product: {
      o["kind"] = "product";
      ordered_json fs = ordered_json::array();
      for (const auto& f : c.factors()) fs.push_back(emit_cone(f));
      o["factors"] = std::move(fs);
      o["weights"] = c.weights();
      break;
    }
  }
  return o;
}

ordered_json emit_function(const FunctionConfig& f) {
  ordered_json o;
  o["name"] = f.name;
  ordered_json p = ordered_json::object();
  if (!f.params.scalars.empty()) p["scalars"] = f.params.scalars;
  if (!f.params.vectors.empty()) p["vectors"] = f.params.vectors;
  if (!f.params.strings.empty()) p["strings"] = f.params.strings;
  if (!p.empty()) o["params"] = std::move(p);
  if (f.monotone) o["monotone"] = *f.monotone;
  if (f.convex) o["convex"] = *f.convex;
  if (f.nonneg) o["nonneg"] = *f.nonneg;
  if (f.lip) o["lip"] = *f.lip;
  return o;
}

}  // namespace

// ---- Scenario methods ----------------------------------------------------

HamiltonianSpec Scenario::make_hamiltonian_spec() const {
  HamiltonianSpec h = make_hamiltonian(hamiltonian.name, hamiltonian.params, cone);
  if (hamiltonian.monotone) h.flags.monotone_on_C = *hamiltonian.monotone;
  if (hamiltonian.convex) h.flags.convex_on_C = *hamiltonian.convex;
  if (hamiltonian.nonneg) h.flags.nonneg_on_C = *hamiltonian.nonneg;
  if (hamiltonian.lip) {
    h.global_lip = *hamiltonian.lip;
    const double g = *hamiltonian.lip;
    h.local_lip = [g](double) { return g; };
  }
  return h;
}

InitialConditionSpec Scenario::make_initial_spec() const {
  InitialConditionSpec p = make_initial(initial.name, initial.params, cone);
  if (initial.monotone) p.flags.monotone_on_C = *initial.monotone;
  if (initial.convex) p.flags.convex_on_C = *initial.convex;
  if (initial.nonneg) p.flags.nonneg_on_C = *initial.nonneg;
  if (initial.lip) p.lip = *initial.lip;
  return p;
}

HamiltonianSpec Scenario::make_extended_hamiltonian() const {
  OptimizerConfig opt = optimizer;
  opt.seed = subseed(seed, "extension");
  return make_extension(make_hamiltonian_spec(), cone, extension.method,
                        extension.radius, opt);
}

VariationalSolver Scenario::make_solver() const {
  OptimizerConfig opt = optimizer;
  opt.seed = subseed(seed, "solver");
  return VariationalSolver(make_hamiltonian_spec(), make_initial_spec(), cone,
                           opt);
}

std::vector<Point> Scenario::eval_points() const {
  if (!grid) return points;
  const EvalGrid& g = *grid;
  const size_t dim = g.n.size();
  std::vector<Point> out;
  size_t total = 1;
  for (int c : g.n) total *= static_cast<size_t>(c);
  out.reserve(total);
  std::vector<int> ix(dim, 0);
  for (size_t k = 0; k < total; ++k) {
    Point p(dim);
    for (size_t i = 0; i < dim; ++i)
      p[i] = g.n[i] == 1 ? g.min[i]
                         : g.min[i] + (g.max[i] - g.min[i]) * ix[i] / (g.n[i] - 1);
    out.push_back(std::move(p));
    // odometer increment, last axis fastest
    for (size_t i = dim; i-- > 0;) {
      if (++ix[i] < g.n[i]) break;
      ix[i] = 0;
    }
  }
  return out;
}

bool Scenario::operator==(const Scenario& o) const {
  const auto opt_eq = [](const OptimizerConfig& a, const OptimizerConfig& b) {
    return a.multistart_count == b.multistart_count && a.max_iter == b.max_iter &&
           a.step_tol == b.step_tol && a.value_tol == b.value_tol &&
           a.seed == b.seed;
  };
  return cone == o.cone && hamiltonian == o.hamiltonian &&
         initial == o.initial && extension == o.extension &&
         formula == o.formula && times == o.times && points == o.points &&
         grid == o.grid && opt_eq(optimizer, o.optimizer) && fd == o.fd &&
         seed == o.seed;
}

// ---- parse / emit --------------------------------------------------------

ParseOutcome parse_scenario(const std::string& json_text) {
  ParseOutcome out;
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) {
    out.errors.push_back("input is not valid JSON");
    return out;
  }
  if (!root.is_object()) {
    out.errors.push_back("top level: expected an object");
    return out;
  }
  auto& errs = out.errors;
  Scenario sc;

  reject_unknown_keys(root,
                      {"cone", "hamiltonian", "initial", "extension", "formula",
                       "times", "points", "grid", "optimizer", "fd", "seed"},
                      "top level", errs);

  bool have_cone = false;
  if (root.contains("cone")) {
    if (auto c = parse_cone(root["cone"], "cone", errs)) {
      sc.cone = std::move(*c);
      have_cone = true;
    }
  } else {
    errs.push_back("top level: missing required key \"cone\"");
  }

  if (const json* h = get_object(root, "hamiltonian", "top level", true, errs))
    parse_function(*h, "hamiltonian", sc.hamiltonian, errs);
  if (const json* p = get_object(root, "initial", "top level", true, errs))
    parse_function(*p, "initial", sc.initial, errs);

  if (const json* e = get_object(root, "extension", "top level", false, errs)) {
    reject_unknown_keys(*e, {"method", "radius"}, "extension", errs);
    get_string(*e, "method", "extension", sc.extension.method, errs);
    if (sc.extension.method != "lip" && sc.extension.method != "clip" &&
        sc.extension.method != "growing")
      errs.push_back("extension.method: must be \"lip\", \"clip\" or \"growing\"");
    double r = sc.extension.radius;
    if (get_double(*e, "radius", "extension", r, errs)) {
      if (!(r > 0) || !std::isfinite(r))
        errs.push_back("extension.radius: must be finite and > 0");
      else
        sc.extension.radius = r;
    }
  }

  if (root.contains("formula")) {
    get_string(root, "formula", "top level", sc.formula, errs);
    if (sc.formula != "hopf_lax" && sc.formula != "hopf" && sc.formula != "both")
      errs.push_back("formula: must be \"hopf_lax\", \"hopf\" or \"both\"");
  }

  if (root.contains("times")) {
    if (get_number_array(root["times"], "times", sc.times, errs)) {
      if (sc.times.empty()) errs.push_back("times: must be nonempty");
      for (double t : sc.times)
        if (!(t >= 0) || !std::isfinite(t)) {
          errs.push_back("times: entries must be finite and >= 0");
          break;
        }
    }
  } else {
    errs.push_back("top level: missing required key \"times\"");
  }

  const bool have_points = root.contains("points");
  const bool have_grid = root.contains("grid");
  if (have_points == have_grid) {
    errs.push_back("top level: exactly one of \"points\" and \"grid\" is required");
  } else if (have_points) {
    if (!root["points"].is_array() || root["points"].empty()) {
      errs.push_back("points: expected a nonempty array of points");
    } else {
      for (size_t i = 0; i < root["points"].size(); ++i) {
        Point p;
        if (get_number_array(root["points"][i],
                             "points[" + std::to_string(i) + "]", p, errs)) {
          if (have_cone &&
              static_cast<int>(p.size()) != sc.cone.ambient_dim())
            errs.push_back("points[" + std::to_string(i) +
                           "]: dimension does not match the cone");
          sc.points.push_back(std::move(p));
        }
      }
    }
  } else {
    if (const json* g = get_object(root, "grid", "top level", true, errs)) {
      reject_unknown_keys(*g, {"min", "max", "n"}, "grid", errs);
      EvalGrid eg;
      bool ok = true;
      if (!g->contains("min") ||
          !get_number_array((*g)["min"], "grid.min", eg.min, errs))
        ok = false;
      if (!g->contains("max") ||
          !get_number_array((*g)["max"], "grid.max", eg.max, errs))
        ok = false;
      if (g->contains("n") && (*g)["n"].is_array()) {
        for (size_t i = 0; i < (*g)["n"].size(); ++i) {
          if (!(*g)["n"][i].is_number_integer()) {
            errs.push_back("grid.n[" + std::to_string(i) + "]: expected an integer");
            ok = false;
          } else {
            eg.n.push_back((*g)["n"][i].get<int>());
          }
        }
      } else {
        errs.push_back("grid: needs an integer array \"n\"");
        ok = false;
      }
      if (ok) {
        if (eg.min.size() != eg.max.size() || eg.min.size() != eg.n.size())
          errs.push_back("grid: min, max and n must have equal lengths");
        else if (have_cone &&
                 static_cast<int>(eg.min.size()) != sc.cone.ambient_dim())
          errs.push_back("grid: dimension does not match the cone");
        for (size_t i = 0; i < eg.n.size() && i < eg.min.size() &&
                           i < eg.max.size();
             ++i) {
          if (eg.n[i] < 1)
            errs.push_back("grid.n[" + std::to_string(i) + "]: must be >= 1");
          if (!(eg.max[i] >= eg.min[i]))
            errs.push_back("grid: max must dominate min componentwise");
        }
        sc.grid = std::move(eg);
      }
    }
  }

  if (const json* o = get_object(root, "optimizer", "top level", false, errs)) {
    reject_unknown_keys(
        *o, {"multistart_count", "max_iter", "step_tol", "value_tol"},
        "optimizer", errs);
    int iv = 0;
    if (get_int(*o, "multistart_count", "optimizer", iv, errs)) {
      if (iv < 0)
        errs.push_back("optimizer.multistart_count: must be >= 0");
      else
        sc.optimizer.multistart_count = iv;
    }
    if (get_int(*o, "max_iter", "optimizer", iv, errs)) {
      if (iv < 1)
        errs.push_back("optimizer.max_iter: must be >= 1");
      else
        sc.optimizer.max_iter = iv;
    }
    double dv = 0;
    if (get_double(*o, "step_tol", "optimizer", dv, errs)) {
      if (!(dv > 0))
        errs.push_back("optimizer.step_tol: must be > 0");
      else
        sc.optimizer.step_tol = dv;
    }
    if (get_double(*o, "value_tol", "optimizer", dv, errs)) {
      if (!(dv > 0))
        errs.push_back("optimizer.value_tol: must be > 0");
      else
        sc.optimizer.value_tol = dv;
    }
  }

  if (const json* f = get_object(root, "fd", "top level", false, errs)) {
    reject_unknown_keys(*f, {"h", "extent", "cfl", "T"}, "fd", errs);
    FdConfig fc;
    double dv = 0;
    if (get_double(*f, "h", "fd", dv, errs)) {
      if (!(dv > 0))
        errs.push_back("fd.h: must be > 0");
      else
        fc.h = dv;
    }
    if (get_double(*f, "extent", "fd", dv, errs)) {
      if (!(dv >= 0))
        errs.push_back("fd.extent: must be >= 0");
      else
        fc.extent = dv;
    }
    if (get_double(*f, "cfl", "fd", dv, errs)) {
      if (!(dv > 0) || !(dv < 1))
        errs.push_back("fd.cfl: must lie in (0,1)");
      else
        fc.cfl = dv;
    }
    if (get_double(*f, "T", "fd", dv, errs)) {
      if (!(dv >= 0))
        errs.push_back("fd.T: must be >= 0");
      else
        fc.T = dv;
    }
    if (have_cone &&
        (!sc.cone.is_orthant_family() || sc.cone.ambient_dim() > 2))
      errs.push_back(
          "fd: the grid scheme supports orthant-family cones of dimension 1 "
          "or 2 only");
    sc.fd = fc;
  }

  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
      errs.push_back("seed: expected a nonnegative integer");
    else if (root["seed"].is_number_integer() && root["seed"].get<long long>() < 0)
      errs.push_back("seed: expected a nonnegative integer");
    else
      sc.seed = root["seed"].get<std::uint64_t>();
  }
  sc.optimizer.seed = sc.seed;

  // Registry-level validation (names, parameter shapes) once the structural
  // pieces are in place.
  if (have_cone && !sc.hamiltonian.name.empty()) {
    try {
      (void)make_hamiltonian(sc.hamiltonian.name, sc.hamiltonian.params, sc.cone);
    } catch (const std::exception& e) {
      errs.push_back(std::string("hamiltonian: ") + e.what());
    }
  }
  if (have_cone && !sc.initial.name.empty()) {
    try {
      (void)make_initial(sc.initial.name, sc.initial.params, sc.cone);
    } catch (const std::exception& e) {
      errs.push_back(std::string("initial: ") + e.what());
    }
  }

  if (errs.empty()) out.scenario = std::move(sc);
  return out;
}

ParseOutcome parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseOutcome out;
    out.errors.push_back("cannot open " + path);
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string emit_scenario(const Scenario& s) {
  ordered_json o;
  o["cone"] = emit_cone(s.cone);
  o["hamiltonian"] = emit_function(s.hamiltonian);
  o["initial"] = emit_function(s.initial);
  o["extension"] = {{"method", s.extension.method},
                    {"radius", s.extension.radius}};
  o["formula"] = s.formula;
  o["times"] = s.times;
  if (s.grid) {
    o["grid"] = {{"min", s.grid->min}, {"max", s.grid->max}, {"n", s.grid->n}};
  } else {
    o["points"] = s.points;
  }
  o["optimizer"] = {{"multistart_count", s.optimizer.multistart_count},
                    {"max_iter", s.optimizer.max_iter},
                    {"step_tol", s.optimizer.step_tol},
                    {"value_tol", s.optimizer.value_tol}};
  if (s.fd)
    o["fd"] = {
        {"h", s.fd->h}, {"extent", s.fd->extent}, {"cfl", s.fd->cfl}, {"T", s.fd->T}};
  o["seed"] = s.seed;
  return o.dump(2) + "\n";
}

}  // namespace hjcone
