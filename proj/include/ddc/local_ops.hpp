#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace ddc {

using cxd = std::complex<double>;
using Matc = Eigen::MatrixXcd;
using Vecc = Eigen::VectorXcd;

/// Operator on the fused 4-dimensional site space
/// span{|s up, d up>, |s up, d down>, |s down, d up>, |s down, d down>}.
/// The magnetic spin is the slow (left) tensor factor.
struct LocalOperator {
  Matc matrix;        // 4x4
  std::string label;  // sx, sy, sz, dx, dy, dz, identity
};

Matc pauli(char axis);            // 2x2 sigma_x / sigma_y / sigma_z
Matc kron(const Matc& a, const Matc& b);

// Spin-1/2 generators on the fused site: s_a = sigma_a/2 (x) 1,
// d_a = 1 (x) sigma_a/2.
const Matc& op_sx();
const Matc& op_sy();
const Matc& op_sz();
const Matc& op_dx();
const Matc& op_dy();
const Matc& op_dz();
const Matc& op_id4();

LocalOperator local_op(const std::string& label);

/// Normalized eigenvector of a 2x2 spin-1/2 component.
/// axis in {x,z}, sign +1/-1 selects the +1/2 or -1/2 eigenstate.
Eigen::Vector2cd qubit_eigenstate(char axis, int sign);

/// Fused-site product |s> (x) |d> from two qubit states.
Vecc fused_state(const Eigen::Vector2cd& s, const Eigen::Vector2cd& d);

}  // namespace ddc
