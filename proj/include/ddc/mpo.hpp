#pragma once

#include <map>
#include <vector>

#include "ddc/local_ops.hpp"
#include "ddc/params.hpp"

namespace ddc {

/// Matrix-product operator with per-site block-sparse tensors.
/// Site tensor W has bond dims (wl, wr); block (a,b) is a 4x4 matrix
/// acting on the fused physical space, empty when absent.
struct Mpo {
  struct Site {
    int wl = 0, wr = 0;
    std::vector<Matc> blocks;  // wl*wr entries, row-major; empty = zero

    Matc& at(int a, int b) { return blocks[a * wr + b]; }
    const Matc& at(int a, int b) const { return blocks[a * wr + b]; }
    bool nonzero(int a, int b) const { return blocks[a * wr + b].size() != 0; }
  };

  int length = 0;
  std::vector<Site> sites;

  int max_bond() const;
};

/// MPO for the double-chain Hamiltonian: XXZ (coefficients +1, +1, -2) on
/// each species plus transverse fields and the on-site s.d coupling.
/// Internal bond dimension 8. extra_onsite adds terms (0-based site index),
/// used for the DMRG pinning field.
Mpo build_hamiltonian_mpo(const SystemParams& params,
                          const std::map<int, Matc>& extra_onsite = {});

/// <bra| H |ket> for product states given as L local 4-vectors.
cxd mpo_product_expectation(const Mpo& mpo, const std::vector<Vecc>& bra,
                            const std::vector<Vecc>& ket);

}  // namespace ddc
