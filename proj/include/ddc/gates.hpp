#pragma once

#include <vector>

#include "ddc/local_ops.hpp"
#include "ddc/params.hpp"

namespace ddc {

/// Two-site unitary exp(-i dt H_bond) on fused sites (site, site+1).
struct BondGate {
  int site = 0;    // 0-based left site of the bond
  double dt = 0.0;
  Matc u;          // 16x16
};

/// Bond Hamiltonian on (site, site+1), 0-based: two-site couplings plus
/// on-site terms absorbed with weight 1/2 in the bulk, 1 at the chain ends.
Matc bond_hamiltonian(const SystemParams& params, int site);

/// On-site part h_s,i sx + h_d,i dx + C s.d at a given 0-based site.
Matc onsite_term(const SystemParams& params, int site);

/// Gates for all bonds 0..L-2, each exp(-i dt H_bond).
std::vector<BondGate> build_bond_gates(const SystemParams& params, double dt);

}  // namespace ddc
