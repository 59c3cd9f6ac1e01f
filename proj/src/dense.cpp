#include "ddc/dense.hpp"

#include "ddc/gates.hpp"

namespace ddc {

Matc dense_local(int L, const Matc& op, int site) {
  Matc acc = Matc::Identity(1, 1);
  for (int i = 0; i < L; ++i)
    acc = kron(acc, i == site ? op : op_id4());
  return acc;
}

Matc dense_chain_average(int L, const Matc& op) {
  const long dim = 1L << (2 * L);
  Matc m = Matc::Zero(dim, dim);
  for (int i = 0; i < L; ++i) m += dense_local(L, op, i);
  return m / static_cast<double>(L);
}

namespace {

// op_a at site, op_b at site+1.
Matc dense_pair(int L, const Matc& a, const Matc& b, int site) {
  Matc acc = Matc::Identity(1, 1);
  for (int i = 0; i < L; ++i) {
    const Matc& o = (i == site) ? a : (i == site + 1 ? b : op_id4());
    acc = kron(acc, o);
  }
  return acc;
}

}  // namespace

Matc dense_hamiltonian(const SystemParams& params) {
  params.validate();
  const int L = params.L;
  if (L > kDenseMaxL)
    throw CapacityError("dense Hamiltonian limited to L <= " +
                        std::to_string(kDenseMaxL) + ", got " +
                        std::to_string(L));
  const long dim = 1L << (2 * L);
  Matc h = Matc::Zero(dim, dim);
  for (int i = 0; i < L - 1; ++i) {
    h += params.J_s * (dense_pair(L, op_sx(), op_sx(), i) +
                       dense_pair(L, op_sy(), op_sy(), i) -
                       2.0 * dense_pair(L, op_sz(), op_sz(), i));
    h += params.J_d * (dense_pair(L, op_dx(), op_dx(), i) +
                       dense_pair(L, op_dy(), op_dy(), i) -
                       2.0 * dense_pair(L, op_dz(), op_dz(), i));
  }
  for (int i = 0; i < L; ++i) h += dense_local(L, onsite_term(params, i), i);
  return h;
}

}  // namespace ddc
