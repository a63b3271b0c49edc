#pragma once

#include <string>
#include <vector>

#include "ggc/circuit.hpp"

namespace ggc {

/// Exact integer-entried target gate matrix. Known names: toffoli, ccphase,
/// cccphase, fredkin, cnot, cphase.
Matrix target_matrix(const std::string& name);

bool is_target_name(const std::string& name);
std::vector<std::string> target_names();

/// Named circuit transcribed from its published operator form. Known keys:
///   ccphase-global-3G, ccphase-HT, fredkin-global-4G, cccphase-global-7GG,
///   ccphase-unequal-J, toffoli-standard-6cnot.
Circuit catalog_circuit(const std::string& key);

std::vector<std::string> catalog_keys();

/// Target name a catalog entry is verified against.
std::string catalog_target(const std::string& key);

}  // namespace ggc
