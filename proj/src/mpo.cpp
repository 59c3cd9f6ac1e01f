#include "ddc/mpo.hpp"

#include <algorithm>

namespace ddc {

int Mpo::max_bond() const {
  int w = 0;
  for (const auto& s : sites) w = std::max(w, s.wr);
  return w;
}

namespace {

Matc onsite_matrix(const SystemParams& p, int site0) {
  // site0 is 0-based; the parameter map is 1-based.
  Matc m = p.h_s_at(site0 + 1) * op_sx() + p.h_d_at(site0 + 1) * op_dx();
  m += p.C * (op_sx() * op_dx() + op_sy() * op_dy() + op_sz() * op_dz());
  return m;
}

}  // namespace

Mpo build_hamiltonian_mpo(const SystemParams& params,
                          const std::map<int, Matc>& extra_onsite) {
  params.validate();
  const int L = params.L;
  constexpr int W = 8;  // identity + 6 coupling channels + completion

  // Channel operators with the coupling constant on the left factor.
  const std::vector<std::pair<Matc, Matc>> channels = {
      {params.J_s * op_sx(), op_sx()},        {params.J_s * op_sy(), op_sy()},
      {-2.0 * params.J_s * op_sz(), op_sz()}, {params.J_d * op_dx(), op_dx()},
      {params.J_d * op_dy(), op_dy()},        {-2.0 * params.J_d * op_dz(), op_dz()}};

  Mpo mpo;
  mpo.length = L;
  mpo.sites.resize(L);
  for (int i = 0; i < L; ++i) {
    Matc onsite = onsite_matrix(params, i);
    if (auto it = extra_onsite.find(i); it != extra_onsite.end())
      onsite += it->second;

    auto& s = mpo.sites[i];
    s.wl = (i == 0) ? 1 : W;
    s.wr = (i == L - 1) ? 1 : W;
    s.blocks.assign(static_cast<std::size_t>(s.wl) * s.wr, Matc());

    if (i == 0) {
      s.at(0, 0) = op_id4();
      for (int c = 0; c < 6; ++c) s.at(0, 1 + c) = channels[c].first;
      s.at(0, 7) = onsite;
    } else if (i == L - 1) {
      s.at(0, 0) = onsite;
      for (int c = 0; c < 6; ++c) s.at(1 + c, 0) = channels[c].second;
      s.at(7, 0) = op_id4();
    } else {
      s.at(0, 0) = op_id4();
      for (int c = 0; c < 6; ++c) s.at(0, 1 + c) = channels[c].first;
      s.at(0, 7) = onsite;
      for (int c = 0; c < 6; ++c) s.at(1 + c, 7) = channels[c].second;
      s.at(7, 7) = op_id4();
    }
  }
  return mpo;
}

cxd mpo_product_expectation(const Mpo& mpo, const std::vector<Vecc>& bra,
                            const std::vector<Vecc>& ket) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(mpo.sites[0].wr);
  for (int b = 0; b < mpo.sites[0].wr; ++b)
    if (mpo.sites[0].nonzero(0, b))
      v(b) = bra[0].dot(mpo.sites[0].at(0, b) * ket[0]);
  for (int i = 1; i < mpo.length; ++i) {
    const auto& s = mpo.sites[i];
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(s.wr);
    for (int a = 0; a < s.wl; ++a) {
      if (v(a) == cxd(0, 0)) continue;
      for (int b = 0; b < s.wr; ++b)
        if (s.nonzero(a, b)) next(b) += v(a) * bra[i].dot(s.at(a, b) * ket[i]);
    }
    v = next;
  }
  return v(0);
}

}  // namespace ddc
