#pragma once

#include "ddc/local_ops.hpp"
#include "ddc/params.hpp"

namespace ddc {

constexpr int kDenseMaxL = 8;

/// Dense 4^L x 4^L Hamiltonian, oracle input only. Throws CapacityError
/// for L > 8.
Matc dense_hamiltonian(const SystemParams& params);

/// Dense embedding of a 4x4 local operator at a 0-based site.
Matc dense_local(int L, const Matc& op, int site);

/// Dense chain average (1/L) sum_i op_i.
Matc dense_chain_average(int L, const Matc& op);

}  // namespace ddc
