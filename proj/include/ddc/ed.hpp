#pragma once

#include <string>
#include <vector>

#include "ddc/dense.hpp"
#include "ddc/params.hpp"

namespace ddc {

/// Full Hermitian eigendecomposition of the dense Hamiltonian plus,
/// optionally, overlaps c_alpha = <psi_alpha|psi(0)> for an initial state.
struct SpectralDecomposition {
  int L = 0;
  Eigen::VectorXd eigenvalues;  // ascending
  Matc eigenvectors;            // columns
  Vecc overlaps;                // c_alpha, empty until set_initial_state
};

SpectralDecomposition diagonalize(const SystemParams& params);

void set_initial_state(SpectralDecomposition& decomp, const Vecc& psi0);

struct EdSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // [observable][time]
  const std::vector<double>& of(const std::string& name) const;
};

/// <A>(t) for each observable via the eigenbasis phases
/// sum_ab c_a conj(c_b) e^{-i(E_a-E_b)t} A_ba.
EdSeries evolve_exact(const SpectralDecomposition& decomp, const Vecc& psi0,
                      const std::vector<double>& times,
                      const std::vector<std::pair<std::string, Matc>>& obs);

/// <d^x>(t) recomputed through the eigenbasis of the chain-averaged d^x
/// operator (projections onto its product eigenstates); an independent
/// route used for cross-checking.
std::vector<double> evolve_dx_via_flip_basis(const SpectralDecomposition& decomp,
                                             const Vecc& psi0,
                                             const std::vector<double>& times);

struct SpectralLine {
  double weight = 0.0;       // |c_alpha|^2 (summed over a degenerate group)
  double energy = 0.0;
  double flip_character = 0.0;  // <N_flip>, electric spins antiparallel to
                                // the post-quench field direction
};

/// Top-n_top eigenstates (degenerate groups merged) ranked by overlap
/// weight with psi0. hd_post fixes the flip-counting direction.
std::vector<SpectralLine> spectral_report(const SpectralDecomposition& decomp,
                                          const Vecc& psi0, int n_top,
                                          double hd_post);

/// Energy cost, in the d^x product basis, of flipping two adjacent
/// electric spins of the polarized state: <pol|H|pol> - <flipped|H|flipped>.
/// Equals 2 h_d + J_d in the electric-only sector.
double gap_two_adjacent_flips(const SystemParams& params);

}  // namespace ddc
