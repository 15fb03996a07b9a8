#pragma once

#include <map>
#include <string>
#include <vector>

#include "hjcone/functionals.hpp"

namespace hjcone {

/// Parameters for registry evaluators, as parsed from scenario files.
struct EvaluatorParams {
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> vectors;
  std::map<std::string, std::string> strings;

  bool operator==(const EvaluatorParams&) const = default;
};

/// Named Hamiltonians:
///   "quadratic"   0.5 |x|^2 + offset
///   "norm2sq"     |x|^2 + offset
///   "linear"      <p, x> + offset           (vector param "p")
///   "affine_clip" min(<p,x> + offset, clip) for mode "min"
///                 max(<p,x> + offset, clip) for mode "max"
/// Norms and pairings are those of the cone's ambient space. Metadata
/// (flags, bounds, Lipschitz data) is filled in exactly for these forms;
/// monotonicity of "linear"/"affine_clip" requires p in C*.
/// Throws std::invalid_argument for unknown names or malformed parameters.
HamiltonianSpec make_hamiltonian(const std::string& name,
                                 const EvaluatorParams& params,
                                 const ConeDescriptor& cone);

/// Same registry, packaged as an initial condition (lip = exact Lipschitz
/// constant of the form).
InitialConditionSpec make_initial(const std::string& name,
                                  const EvaluatorParams& params,
                                  const ConeDescriptor& cone);

std::vector<std::string> registry_names();

}  // namespace hjcone
