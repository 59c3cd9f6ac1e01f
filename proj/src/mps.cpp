#include "ddc/mps.hpp"

#include <Eigen/Dense>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace ddc {

namespace {

constexpr char kMagic[8] = {'D', 'D', 'C', 'M', 'P', 'S', '0', '1'};

struct SvdOut {
  Matc u;
  Eigen::VectorXd s;
  Matc v;  // M = u * s.asDiagonal() * v.adjoint()
};

SvdOut thin_svd(const Matc& m) {
  SvdOut out;
  // Jacobi only for small blocks; BDC wins already around 48x48
  if (m.rows() * m.cols() <= 32 * 32) {
    Eigen::JacobiSVD<Matc> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Matc> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.v = svd.matrixV();
  }
  return out;
}

}  // namespace

Mps Mps::product_state(int L, const std::vector<Vecc>& locals) {
  if (static_cast<int>(locals.size()) != L)
    throw std::invalid_argument("product_state needs L local vectors");
  Mps psi;
  psi.tensors_.resize(L);
  for (int i = 0; i < L; ++i) {
    if (locals[i].size() != 4)
      throw std::invalid_argument("local state must be a 4-vector");
    const double n = locals[i].norm();
    if (std::abs(n - 1.0) > 1e-8)
      throw std::invalid_argument("local state must be normalized");
    for (int s = 0; s < 4; ++s) {
      psi.tensors_[i][s] = Matc(1, 1);
      psi.tensors_[i][s](0, 0) = locals[i](s) / n;
    }
  }
  psi.center_ = 0;
  return psi;
}

Mps Mps::random_state(int L, int bond_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mps psi;
  psi.tensors_.resize(L);
  auto cap = [&](int bond) {
    // bond between site bond-1 and bond; 0 and L are the open ends
    double left = std::pow(4.0, bond);
    double right = std::pow(4.0, L - bond);
    return static_cast<int>(std::min({static_cast<double>(bond_dim), left, right}));
  };
  for (int i = 0; i < L; ++i) {
    int cl = cap(i), cr = cap(i + 1);
    for (int s = 0; s < 4; ++s) {
      psi.tensors_[i][s] = Matc(cl, cr);
      for (int a = 0; a < cl; ++a)
        for (int b = 0; b < cr; ++b)
          psi.tensors_[i][s](a, b) = cxd(g(rng), g(rng));
    }
  }
  psi.center_ = L - 1;
  psi.move_center_to(0);
  psi.normalize();
  return psi;
}

int Mps::bond_dim(int bond) const {
  return static_cast<int>(tensors_[bond][0].cols());
}

int Mps::max_bond() const {
  int m = 1;
  for (int b = 0; b + 1 < length(); ++b) m = std::max(m, bond_dim(b));
  return m;
}

void Mps::shift_center_right() {
  const int i = center_;
  auto& a = tensors_[i];
  const int cl = static_cast<int>(a[0].rows());
  const int cr = static_cast<int>(a[0].cols());
  Matc m(4 * cl, cr);
  for (int s = 0; s < 4; ++s) m.middleRows(s * cl, cl) = a[s];
  const int k = std::min(4 * cl, cr);
  Eigen::HouseholderQR<Matc> qr(m);
  Matc q = qr.householderQ() * Matc::Identity(4 * cl, k);
  Matc r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int s = 0; s < 4; ++s) a[s] = q.middleRows(s * cl, cl);
  auto& b = tensors_[i + 1];
  for (int s = 0; s < 4; ++s) b[s] = r * b[s];
  ++center_;
}

void Mps::shift_center_left() {
  const int i = center_;
  auto& b = tensors_[i];
  const int cl = static_cast<int>(b[0].rows());
  const int cr = static_cast<int>(b[0].cols());
  Matc m(cl, 4 * cr);
  for (int s = 0; s < 4; ++s) m.middleCols(s * cr, cr) = b[s];
  const int k = std::min(cl, 4 * cr);
  Eigen::HouseholderQR<Matc> qr(m.adjoint());
  Matc q = qr.householderQ() * Matc::Identity(4 * cr, k);
  Matc r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  // m = r.adjoint() * q.adjoint()
  for (int s = 0; s < 4; ++s) b[s] = q.adjoint().middleCols(s * cr, cr);
  auto& a = tensors_[i - 1];
  for (int s = 0; s < 4; ++s) a[s] = a[s] * r.adjoint();
  --center_;
}

void Mps::move_center_to(int i) {
  while (center_ < i) shift_center_right();
  while (center_ > i) shift_center_left();
}

double Mps::norm() const {
  double n2 = 0;
  for (int s = 0; s < 4; ++s) n2 += tensors_[center_][s].squaredNorm();
  return std::sqrt(n2);
}

void Mps::normalize() {
  const double n = norm();
  if (n == 0) throw std::runtime_error("cannot normalize a zero state");
  for (int s = 0; s < 4; ++s) tensors_[center_][s] /= n;
}

double Mps::expect_local(const Matc& op, int i) {
  move_center_to(i);
  cxd val(0, 0);
  const auto& a = tensors_[i];
  for (int sp = 0; sp < 4; ++sp)
    for (int s = 0; s < 4; ++s) {
      if (op(sp, s) == cxd(0, 0)) continue;
      val += op(sp, s) * a[sp].conjugate().cwiseProduct(a[s]).sum();
    }
  assert(std::abs(val.imag()) < 1e-10);
  return val.real();
}

std::vector<double> Mps::expect_all(const Matc& op) {
  std::vector<double> out(length());
  move_center_to(0);
  for (int i = 0; i < length(); ++i) {
    out[i] = expect_local(op, i);
    if (i + 1 < length()) shift_center_right();
  }
  return out;
}

double Mps::chain_average(const Matc& op) {
  auto vals = expect_all(op);
  double s = 0;
  for (double v : vals) s += v;
  return s / static_cast<double>(length());
}

cxd Mps::overlap(const Mps& other) const {
  if (other.length() != length())
    throw std::invalid_argument("overlap requires equal lengths");
  Matc env = Matc::Identity(1, 1);
  for (int i = 0; i < length(); ++i) {
    Matc next = Matc::Zero(tensors_[i][0].cols(), other.tensors_[i][0].cols());
    for (int s = 0; s < 4; ++s)
      next += tensors_[i][s].adjoint() * env * other.tensors_[i][s];
    env = std::move(next);
  }
  return env(0, 0);
}

TruncationReport Mps::apply_bond_gate(const BondGate& gate, bool center_right) {
  const int i = gate.site;
  if (center_ < i || center_ > i + 1) move_center_to(i);
  if (center_ == i + 1) shift_center_left();

  const auto& a = tensors_[i];
  const auto& b = tensors_[i + 1];
  const int cl = static_cast<int>(a[0].rows());
  const int cr = static_cast<int>(b[0].cols());

  std::array<Matc, 16> theta;  // [s*4+t]
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) theta[s * 4 + t] = a[s] * b[t];

  Matc m = Matc::Zero(4 * cl, 4 * cr);
  for (int sp = 0; sp < 4; ++sp)
    for (int tp = 0; tp < 4; ++tp) {
      Matc block = Matc::Zero(cl, cr);
      for (int st = 0; st < 16; ++st) {
        const cxd u = gate.u(sp * 4 + tp, st);
        if (u != cxd(0, 0)) block += u * theta[st];
      }
      m.block(sp * cl, tp * cr, cl, cr) = std::move(block);
    }

  SvdOut svd = thin_svd(m);
  const Eigen::VectorXd& sv = svd.s;
  const double total = sv.squaredNorm();
  const double smax2 = sv.size() ? sv(0) * sv(0) : 0.0;

  int keep = 0;
  for (int k = 0; k < sv.size(); ++k) {
    if (k >= chi_max) break;
    if (smax2 > 0 && (sv(k) * sv(k)) / smax2 < cutoff && k > 0) break;
    ++keep;
  }
  keep = std::max(keep, 1);

  double kept = sv.head(keep).squaredNorm();
  const double discarded = total > 0 ? 1.0 - kept / total : 0.0;
  Eigen::VectorXd lambda = sv.head(keep) / std::sqrt(kept);

  Matc u = svd.u.leftCols(keep);
  Matc w = lambda.cast<cxd>().asDiagonal() * svd.v.leftCols(keep).adjoint();
  if (center_right) {
    for (int s = 0; s < 4; ++s) tensors_[i][s] = u.middleRows(s * cl, cl);
    for (int t = 0; t < 4; ++t) tensors_[i + 1][t] = w.middleCols(t * cr, cr);
    center_ = i + 1;
  } else {
    Matc ul = u * lambda.cast<cxd>().asDiagonal();
    Matc vr = svd.v.leftCols(keep).adjoint();
    for (int s = 0; s < 4; ++s) tensors_[i][s] = ul.middleRows(s * cl, cl);
    for (int t = 0; t < 4; ++t) tensors_[i + 1][t] = vr.middleCols(t * cr, cr);
    center_ = i;
  }
  discarded_total_ += discarded;
  return {discarded, keep};
}

Vecc Mps::to_state_vector() const {
  if (length() > 8)
    throw std::length_error("to_state_vector limited to L <= 8");
  Matc cur = Matc::Ones(1, 1);
  for (int i = 0; i < length(); ++i) {
    const auto& a = tensors_[i];
    const int cr = static_cast<int>(a[0].cols());
    Matc next(cur.rows() * 4, cr);
    for (Eigen::Index c = 0; c < cur.rows(); ++c)
      for (int s = 0; s < 4; ++s)
        next.row(c * 4 + s) = cur.row(c) * a[s];
    cur = std::move(next);
  }
  return Vecc(cur.col(0));
}

Mps Mps::from_state_vector(const Vecc& v, int L) {
  const long dim = 1L << (2 * L);
  if (v.size() != dim)
    throw std::invalid_argument("state vector length must be 4^L");
  Mps psi;
  psi.tensors_.resize(L);
  // rest(r, c): r = bond index, c = remaining configuration, s_0 slowest
  Matc rest(1, dim);
  for (long c = 0; c < dim; ++c) rest(0, c) = v(c);
  int chi = 1;
  for (int i = 0; i < L - 1; ++i) {
    const long rem = dim >> (2 * (i + 1));
    Matc m(chi * 4, rem);
    for (int a = 0; a < chi; ++a)
      for (int s = 0; s < 4; ++s)
        for (long c = 0; c < rem; ++c) m(a * 4 + s, c) = rest(a, s * rem + c);
    SvdOut svd = thin_svd(m);
    int keep = 0;
    const double s0 = svd.s.size() ? svd.s(0) : 0;
    for (int k = 0; k < svd.s.size(); ++k)
      if (svd.s(k) > 1e-14 * s0) ++keep;
    keep = std::max(keep, 1);
    for (int s = 0; s < 4; ++s) {
      psi.tensors_[i][s] = Matc(chi, keep);
      for (int a = 0; a < chi; ++a)
        psi.tensors_[i][s].row(a) = svd.u.row(a * 4 + s).head(keep);
    }
    rest = svd.s.head(keep).cast<cxd>().asDiagonal() *
           svd.v.leftCols(keep).adjoint();
    chi = keep;
  }
  for (int s = 0; s < 4; ++s) psi.tensors_[L - 1][s] = rest.col(s);
  psi.center_ = L - 1;
  psi.normalize();
  return psi;
}

void Mps::save(const std::string& path, const std::string& params_json) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  auto wi = [&](std::int64_t x) { out.write(reinterpret_cast<char*>(&x), 8); };
  auto wd = [&](double x) { out.write(reinterpret_cast<char*>(&x), 8); };
  wi(length());
  wi(center_);
  wi(chi_max);
  wd(cutoff);
  wd(discarded_total_);
  for (const auto& site : tensors_) {
    wi(site[0].rows());
    wi(site[0].cols());
    for (int s = 0; s < 4; ++s)
      for (Eigen::Index a = 0; a < site[s].rows(); ++a)
        for (Eigen::Index b = 0; b < site[s].cols(); ++b) {
          wd(site[s](a, b).real());
          wd(site[s](a, b).imag());
        }
  }
  wi(static_cast<std::int64_t>(params_json.size()));
  out.write(params_json.data(), params_json.size());
}

Mps Mps::load(const std::string& path, std::string* params_json) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not a checkpoint file (bad magic): " + path);
  auto ri = [&]() { std::int64_t x; in.read(reinterpret_cast<char*>(&x), 8); return x; };
  auto rd = [&]() { double x; in.read(reinterpret_cast<char*>(&x), 8); return x; };
  Mps psi;
  const int L = static_cast<int>(ri());
  psi.center_ = static_cast<int>(ri());
  psi.chi_max = static_cast<int>(ri());
  psi.cutoff = rd();
  psi.discarded_total_ = rd();
  psi.tensors_.resize(L);
  for (int i = 0; i < L; ++i) {
    const int rows = static_cast<int>(ri());
    const int cols = static_cast<int>(ri());
    for (int s = 0; s < 4; ++s) {
      psi.tensors_[i][s] = Matc(rows, cols);
      for (int a = 0; a < rows; ++a)
        for (int b = 0; b < cols; ++b) {
          double re = rd(), im = rd();
          psi.tensors_[i][s](a, b) = cxd(re, im);
        }
    }
  }
  const auto len = ri();
  std::string pj(static_cast<std::size_t>(len), '\0');
  in.read(pj.data(), len);
  if (!in) throw std::runtime_error("truncated checkpoint file: " + path);
  if (params_json) *params_json = pj;
  return psi;
}

}  // namespace ddc
