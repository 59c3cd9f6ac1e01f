#include "ddc/ed.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ddc/mpo.hpp"

namespace ddc {

SpectralDecomposition diagonalize(const SystemParams& params) {
  Matc h = dense_hamiltonian(params);
  Eigen::SelfAdjointEigenSolver<Matc> es(h);
  SpectralDecomposition d;
  d.L = params.L;
  d.eigenvalues = es.eigenvalues();
  d.eigenvectors = es.eigenvectors();
  return d;
}

void set_initial_state(SpectralDecomposition& decomp, const Vecc& psi0) {
  decomp.overlaps = decomp.eigenvectors.adjoint() * psi0;
}

const std::vector<double>& EdSeries::of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw std::out_of_range("no such observable in series: " + name);
}

EdSeries evolve_exact(const SpectralDecomposition& decomp, const Vecc& psi0,
                      const std::vector<double>& times,
                      const std::vector<std::pair<std::string, Matc>>& obs) {
  const Vecc c = decomp.eigenvectors.adjoint() * psi0;
  std::vector<Matc> rotated;  // observables in the energy eigenbasis
  rotated.reserve(obs.size());
  for (const auto& [name, a] : obs) {
    (void)name;
    rotated.push_back(decomp.eigenvectors.adjoint() * a * decomp.eigenvectors);
  }
  EdSeries series;
  series.times = times;
  for (const auto& [name, a] : obs) {
    (void)a;
    series.names.push_back(name);
    series.values.emplace_back();
    series.values.back().reserve(times.size());
  }
  for (double t : times) {
    Vecc amp = c.array() *
               (cxd(0, -t) * decomp.eigenvalues.array().cast<cxd>()).exp();
    for (std::size_t k = 0; k < rotated.size(); ++k) {
      const cxd v = amp.dot(rotated[k] * amp);
      series.values[k].push_back(v.real());
    }
  }
  return series;
}

namespace {

// Unitary taking each electric qubit from the z basis to the x basis,
// as a dense 4^L matrix. Columns are the product eigenstates of d^x.
Matc dx_basis_rotation(int L) {
  const double r = 1.0 / std::sqrt(2.0);
  Matc rot2(2, 2);
  rot2 << r, r, r, -r;  // columns: |+x>, |-x>
  Matc site = kron(Matc::Identity(2, 2), rot2);
  Matc u = Matc::Identity(1, 1);
  for (int i = 0; i < L; ++i) u = kron(u, site);
  return u;
}

}  // namespace

std::vector<double> evolve_dx_via_flip_basis(const SpectralDecomposition& decomp,
                                             const Vecc& psi0,
                                             const std::vector<double>& times) {
  const int L = decomp.L;
  if (L > 6) throw CapacityError("flip-basis route limited to L <= 6");
  const long dim = 1L << (2 * L);
  const Matc u = dx_basis_rotation(L);

  // phi_mu: chain-averaged d^x eigenvalue of each product column.
  Eigen::VectorXd phi(dim);
  for (long mu = 0; mu < dim; ++mu) {
    double v = 0;
    for (int i = 0; i < L; ++i) {
      const int digit = static_cast<int>((mu >> (2 * (L - 1 - i))) & 3);
      v += (digit & 1) ? -0.5 : 0.5;  // fast bit = electric qubit
    }
    phi(mu) = v / L;
  }

  const Vecc c = decomp.eigenvectors.adjoint() * psi0;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    Vecc amp = c.array() *
               (cxd(0, -t) * decomp.eigenvalues.array().cast<cxd>()).exp();
    Vecc psi_t = decomp.eigenvectors * amp;
    Vecc b = u.adjoint() * psi_t;
    out.push_back((phi.array() * b.array().abs2()).sum());
  }
  return out;
}

std::vector<SpectralLine> spectral_report(const SpectralDecomposition& decomp,
                                          const Vecc& psi0, int n_top,
                                          double hd_post) {
  const int L = decomp.L;
  const double sign = hd_post >= 0 ? 1.0 : -1.0;
  Matc n_flip = 0.5 * L *
                Matc::Identity(decomp.eigenvectors.rows(), decomp.eigenvectors.rows());
  n_flip -= sign * static_cast<double>(L) * dense_chain_average(L, op_dx());

  const Vecc c = decomp.eigenvectors.adjoint() * psi0;
  const Eigen::VectorXd w = c.array().abs2();

  // Merge degenerate groups; report summed weight and the weight-averaged
  // flip character within each group.
  std::vector<SpectralLine> lines;
  const double scale =
      std::max(1.0, std::abs(decomp.eigenvalues(decomp.eigenvalues.size() - 1)));
  long i = 0;
  while (i < decomp.eigenvalues.size()) {
    long j = i;
    while (j + 1 < decomp.eigenvalues.size() &&
           std::abs(decomp.eigenvalues(j + 1) - decomp.eigenvalues(i)) <
               1e-8 * scale)
      ++j;
    SpectralLine line;
    line.energy = decomp.eigenvalues(i);
    double wsum = 0, fsum_w = 0, fsum = 0;
    for (long k = i; k <= j; ++k) {
      const double fk =
          (decomp.eigenvectors.col(k).dot(n_flip * decomp.eigenvectors.col(k)))
              .real();
      wsum += w(k);
      fsum_w += w(k) * fk;
      fsum += fk;
    }
    line.weight = wsum;
    line.flip_character = wsum > 1e-30 ? fsum_w / wsum : fsum / (j - i + 1);
    lines.push_back(line);
    i = j + 1;
  }
  std::sort(lines.begin(), lines.end(),
            [](const SpectralLine& a, const SpectralLine& b) {
              return a.weight > b.weight;
            });
  if (static_cast<int>(lines.size()) > n_top) lines.resize(n_top);
  return lines;
}

double gap_two_adjacent_flips(const SystemParams& params) {
  params.validate();
  const int L = params.L;
  const int s_sign = params.h_s > 0 ? -1 : 1;   // field ground orientation
  const int d_sign = params.h_d >= 0 ? 1 : -1;  // polarized (pre-quench) side

  const Eigen::Vector2cd s_loc = qubit_eigenstate('x', s_sign);
  const Eigen::Vector2cd d_pol = qubit_eigenstate('x', d_sign);
  const Eigen::Vector2cd d_flip = qubit_eigenstate('x', -d_sign);

  // Interior adjacent pair so both outer bonds exist; falls back to the
  // first pair on very short chains.
  int j = std::clamp((L - 2) / 2, 1, std::max(1, L - 3));
  if (L < 4) j = 0;

  std::vector<Vecc> pol(L), flipped(L);
  for (int i = 0; i < L; ++i) {
    pol[i] = fused_state(s_loc, d_pol);
    flipped[i] =
        (i == j || i == j + 1) ? fused_state(s_loc, d_flip) : pol[i];
  }
  const Mpo mpo = build_hamiltonian_mpo(params);
  const cxd e_pol = mpo_product_expectation(mpo, pol, pol);
  const cxd e_flip = mpo_product_expectation(mpo, flipped, flipped);
  return (e_pol - e_flip).real();
}

}  // namespace ddc
