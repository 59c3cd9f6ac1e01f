#include "ddc/local_ops.hpp"

#include <stdexcept>

namespace ddc {

Matc pauli(char axis) {
  Matc m = Matc::Zero(2, 2);
  switch (axis) {
    case 'x':
      m(0, 1) = 1;
      m(1, 0) = 1;
      break;
    case 'y':
      m(0, 1) = cxd(0, -1);
      m(1, 0) = cxd(0, 1);
      break;
    case 'z':
      m(0, 0) = 1;
      m(1, 1) = -1;
      break;
    default:
      throw std::invalid_argument("pauli axis must be x, y or z");
  }
  return m;
}

Matc kron(const Matc& a, const Matc& b) {
  Matc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {
Matc make_s(char axis) { return kron(0.5 * pauli(axis), Matc::Identity(2, 2)); }
Matc make_d(char axis) { return kron(Matc::Identity(2, 2), 0.5 * pauli(axis)); }
}  // namespace

const Matc& op_sx() { static const Matc m = make_s('x'); return m; }
const Matc& op_sy() { static const Matc m = make_s('y'); return m; }
const Matc& op_sz() { static const Matc m = make_s('z'); return m; }
const Matc& op_dx() { static const Matc m = make_d('x'); return m; }
const Matc& op_dy() { static const Matc m = make_d('y'); return m; }
const Matc& op_dz() { static const Matc m = make_d('z'); return m; }
const Matc& op_id4() { static const Matc m = Matc::Identity(4, 4); return m; }

LocalOperator local_op(const std::string& label) {
  if (label == "sx") return {op_sx(), label};
  if (label == "sy") return {op_sy(), label};
  if (label == "sz") return {op_sz(), label};
  if (label == "dx") return {op_dx(), label};
  if (label == "dy") return {op_dy(), label};
  if (label == "dz") return {op_dz(), label};
  if (label == "identity") return {op_id4(), label};
  throw std::invalid_argument("unknown operator label: " + label);
}

Eigen::Vector2cd qubit_eigenstate(char axis, int sign) {
  Eigen::Vector2cd v;
  const double r = 1.0 / std::sqrt(2.0);
  if (axis == 'z') {
    v = sign > 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
  } else if (axis == 'x') {
    v = sign > 0 ? Eigen::Vector2cd(r, r) : Eigen::Vector2cd(r, -r);
  } else {
    throw std::invalid_argument("qubit_eigenstate supports axes x and z");
  }
  return v;
}

Vecc fused_state(const Eigen::Vector2cd& s, const Eigen::Vector2cd& d) {
  Vecc v(4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) v(a * 2 + b) = s(a) * d(b);
  return v;
}

}  // namespace ddc
