#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ddc/gates.hpp"
#include "ddc/local_ops.hpp"

namespace ddc {

struct TruncationReport {
  double discarded = 0.0;  // relative discarded weight at the cut
  int bond_dim = 1;        // dimension kept
};

/// Matrix-product state over L fused 4-dimensional sites.
/// Site tensor i is stored as four chi_l x chi_r matrices, one per
/// physical index. A single orthogonality center is tracked; tensors left
/// (right) of it are left (right) isometries.
class Mps {
 public:
  static Mps product_state(int L, const std::vector<Vecc>& locals);
  static Mps random_state(int L, int bond_dim, std::uint64_t seed);
  static Mps from_state_vector(const Vecc& v, int L);

  int length() const { return static_cast<int>(tensors_.size()); }
  int center() const { return center_; }
  int bond_dim(int bond) const;  // dimension of bond between site b and b+1
  int max_bond() const;
  double cumulative_discarded() const { return discarded_total_; }

  int chi_max = 128;
  double cutoff = 1e-10;  // relative truncation threshold on (s/s_max)^2

  std::array<Matc, 4>& site(int i) { return tensors_[i]; }
  const std::array<Matc, 4>& site(int i) const { return tensors_[i]; }

  void move_center_to(int i);

  double norm() const;  // sqrt(<psi|psi>), cheap with a tracked center
  void normalize();

  /// <psi| op_i |psi> for a Hermitian 4x4 op; asserts the imaginary part
  /// is below 1e-10 and discards it.
  double expect_local(const Matc& op, int i);

  /// One-sweep evaluation of <op_i> for all sites.
  std::vector<double> expect_all(const Matc& op);

  double chain_average(const Matc& op);

  cxd overlap(const Mps& other) const;  // <this|other>

  /// Apply a two-site gate at its bond, SVD-split with truncation,
  /// renormalize. The center ends on gate.site or gate.site+1 as
  /// requested by center_right.
  TruncationReport apply_bond_gate(const BondGate& gate,
                                   bool center_right = true);

  Vecc to_state_vector() const;  // L <= 8

  void save(const std::string& path, const std::string& params_json) const;
  static Mps load(const std::string& path, std::string* params_json = nullptr);

 private:
  std::vector<std::array<Matc, 4>> tensors_;
  int center_ = 0;
  double discarded_total_ = 0.0;

  void shift_center_right();
  void shift_center_left();
};

}  // namespace ddc
