#include "hjcone/registry.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hjcone {

namespace {

void reject_unknown(const EvaluatorParams& p,
                    const std::set<std::string>& scalar_keys,
                    const std::set<std::string>& vector_keys,
                    const std::set<std::string>& string_keys,
                    const std::string& name) {
  std::ostringstream bad;
  for (const auto& [k, v] : p.scalars)
    if (!scalar_keys.count(k)) bad << " scalar '" << k << "'";
  for (const auto& [k, v] : p.vectors)
    if (!vector_keys.count(k)) bad << " vector '" << k << "'";
  for (const auto& [k, v] : p.strings)
    if (!string_keys.count(k)) bad << " string '" << k << "'";
  if (!bad.str().empty())
    throw std::invalid_argument("evaluator '" + name +
                                "': unknown parameters:" + bad.str());
}

double scalar_or(const EvaluatorParams& p, const std::string& key,
                 double fallback) {
  auto it = p.scalars.find(key);
  return it == p.scalars.end() ? fallback : it->second;
}

Point required_vector(const EvaluatorParams& p, const std::string& key,
                      const ConeDescriptor& cone, const std::string& name) {
  auto it = p.vectors.find(key);
  if (it == p.vectors.end())
    throw std::invalid_argument("evaluator '" + name + "': missing vector '" +
                                key + "'");
  if (static_cast<int>(it->second.size()) != cone.ambient_dim())
    throw std::invalid_argument("evaluator '" + name + "': vector '" + key +
                                "' has wrong dimension");
  return it->second;
}

bool in_dual_cone(const ConeDescriptor& cone, const Point& p) {
  Point d = project_dual(cone, p);
  for (size_t i = 0; i < d.size(); ++i) d[i] -= p[i];
  return norm(cone, d) <= 1e-9 * (1.0 + norm(cone, p));
}

}  // namespace

HamiltonianSpec make_hamiltonian(const std::string& name,
                                 const EvaluatorParams& params,
                                 const ConeDescriptor& cone) {
  HamiltonianSpec H;
  H.name = name;

  if (name == "quadratic" || name == "norm2sq") {
    reject_unknown(params, {"offset"}, {}, {}, name);
    const double offset = scalar_or(params, "offset", 0.0);
    const double scale = (name == "quadratic") ? 0.5 : 1.0;
    H.evaluator = [cone, scale, offset](const Point& x) {
      return scale * inner_product(cone, x, x) + offset;
    };
    H.flags.monotone_on_C = true;  // gradient lies in C = C** on our cones
    H.flags.convex_on_C = true;
    H.flags.nonneg_on_C = offset >= 0.0;
    H.lower_bound = offset;
    H.local_lip = [scale](double R) { return 2.0 * scale * R; };
    return H;
  }

  if (name == "linear") {
    reject_unknown(params, {"offset"}, {"p"}, {}, name);
    const double offset = scalar_or(params, "offset", 0.0);
    const Point p = required_vector(params, "p", cone, name);
    const bool mono = in_dual_cone(cone, p);
    const double pn = norm(cone, p);
    H.evaluator = [cone, p, offset](const Point& x) {
      return inner_product(cone, p, x) + offset;
    };
    H.flags.monotone_on_C = mono;
    H.flags.convex_on_C = true;
    H.flags.nonneg_on_C = mono && offset >= 0.0;
    H.lower_bound = mono ? offset
                         : -std::numeric_limits<double>::infinity();
    H.local_lip = [pn](double) { return pn; };
    H.global_lip = pn;
    return H;
  }

  if (name == "affine_clip") {
    reject_unknown(params, {"offset", "clip"}, {"p"}, {"mode"}, name);
    const double offset = scalar_or(params, "offset", 0.0);
    auto cit = params.scalars.find("clip");
    if (cit == params.scalars.end())
      throw std::invalid_argument("evaluator 'affine_clip': missing scalar 'clip'");
    const double clip = cit->second;
    std::string mode = "min";
    if (auto mit = params.strings.find("mode"); mit != params.strings.end())
      mode = mit->second;
    if (mode != "min" && mode != "max")
      throw std::invalid_argument("evaluator 'affine_clip': mode must be 'min' or 'max'");
    const Point p = required_vector(params, "p", cone, name);
    const bool mono = in_dual_cone(cone, p);
    const double pn = norm(cone, p);
    const bool is_min = (mode == "min");
    H.evaluator = [cone, p, offset, clip, is_min](const Point& x) {
      const double a = inner_product(cone, p, x) + offset;
      return is_min ? std::min(a, clip) : std::max(a, clip);
    };
    H.flags.monotone_on_C = mono;
    H.flags.convex_on_C = !is_min;  // max of affine and constant
    H.lower_bound = is_min ? std::min(offset, clip) : std::max(offset, clip);
    H.flags.nonneg_on_C = mono && H.lower_bound >= 0.0;
    H.local_lip = [pn](double) { return pn; };
    H.global_lip = pn;
    return H;
  }

  throw std::invalid_argument("unknown evaluator '" + name + "'");
}

InitialConditionSpec make_initial(const std::string& name,
                                  const EvaluatorParams& params,
                                  const ConeDescriptor& cone) {
  if (name != "linear" && name != "affine_clip")
    throw std::invalid_argument(
        "initial condition '" + name +
        "' is not globally Lipschitz; use 'linear' or 'affine_clip'");
  HamiltonianSpec H = make_hamiltonian(name, params, cone);
  InitialConditionSpec psi;
  psi.evaluator = H.evaluator;
  psi.flags = H.flags;
  psi.lip = H.global_lip;
  psi.name = name;
  return psi;
}

std::vector<std::string> registry_names() {
  return {"quadratic", "norm2sq", "linear", "affine_clip"};
}

}  // namespace hjcone
