#include "ddc/gates.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace ddc {

Matc onsite_term(const SystemParams& params, int site) {
  Matc m = params.h_s_at(site + 1) * op_sx() + params.h_d_at(site + 1) * op_dx();
  m += params.C * (op_sx() * op_dx() + op_sy() * op_dy() + op_sz() * op_dz());
  return m;
}

Matc bond_hamiltonian(const SystemParams& params, int site) {
  const int L = params.L;
  if (site < 0 || site >= L - 1)
    throw std::out_of_range("bond site outside [0, L-2]");
  const Matc& id = op_id4();

  Matc h = params.J_s * (kron(op_sx(), op_sx()) + kron(op_sy(), op_sy()) -
                         2.0 * kron(op_sz(), op_sz()));
  h += params.J_d * (kron(op_dx(), op_dx()) + kron(op_dy(), op_dy()) -
                     2.0 * kron(op_dz(), op_dz()));

  // On-site terms: weight 1/2 on interior sites (shared by two bonds),
  // full weight at the chain ends.
  const double wl = (site == 0) ? 1.0 : 0.5;
  const double wr = (site + 1 == L - 1) ? 1.0 : 0.5;
  h += wl * kron(onsite_term(params, site), id);
  h += wr * kron(id, onsite_term(params, site + 1));
  return h;
}

std::vector<BondGate> build_bond_gates(const SystemParams& params, double dt) {
  params.validate();
  std::vector<BondGate> gates;
  gates.reserve(params.L - 1);
  for (int i = 0; i < params.L - 1; ++i) {
    Matc h = bond_hamiltonian(params, i);
    Eigen::SelfAdjointEigenSolver<Matc> es(h);
    Vecc phases = (cxd(0, -dt) * es.eigenvalues().array().cast<cxd>()).exp();
    BondGate g;
    g.site = i;
    g.dt = dt;
    g.u = es.eigenvectors() * phases.asDiagonal() *
          es.eigenvectors().adjoint();
    gates.push_back(std::move(g));
  }
  return gates;
}

}  // namespace ddc
