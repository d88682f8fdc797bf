#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zenodyn/lindblad.hpp"
#include "zenodyn/model.hpp"

namespace zenodyn {

/// Model file contents.
///
/// Hamiltonian keys: dim_A, dim_B (optional, checked against the lists),
/// diag_A: [{delta, phi, sweep?}], diag_B: [E...], coupling and intra_B as
/// row-major flat lists whose entries are [re, im] pairs or plain reals.
/// Open-system keys: dim_G, jumps: [{k, j, gamma}] with 1-based indices over
/// R + G, ground_energies: [..], coupling_RG: N x Q flat list (must be zero).
struct ModelFile {
  NonHermitianHamiltonian hamiltonian;
  std::vector<bool> swept;
  nlohmann::json source;
};

ModelFile parse_model(const nlohmann::json& j);
ModelFile load_model_file(const std::string& path);
nlohmann::json model_to_json(const NonHermitianHamiltonian& h);

/// Open-system model for a parsed file. H_S on R is the Hermitian part of the
/// Hamiltonian; without a "jumps" key, every decaying level m gets a jump of
/// rate 2 Gamma_m into the first ground state.
OpenSystemModel open_system_from_json(const ModelFile& file);

}  // namespace zenodyn
