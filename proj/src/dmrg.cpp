#include "ddc/dmrg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddc {

namespace {

using Env = std::vector<Matc>;  // one chi_bra x chi_ket block per MPO bond

Env left_edge() { return {Matc::Identity(1, 1)}; }
Env right_edge() { return {Matc::Identity(1, 1)}; }

Env advance_left(const Env& env, const Mpo::Site& w,
                 const std::array<Matc, 4>& a) {
  Env out(w.wr);
  for (int b = 0; b < w.wr; ++b)
    out[b] = Matc::Zero(a[0].cols(), a[0].cols());
  for (int aa = 0; aa < w.wl; ++aa) {
    if (env[aa].size() == 0) continue;
    std::array<Matc, 4> la;
    for (int s = 0; s < 4; ++s) la[s] = env[aa] * a[s];
    for (int b = 0; b < w.wr; ++b) {
      if (!w.nonzero(aa, b)) continue;
      const Matc& op = w.at(aa, b);
      for (int sp = 0; sp < 4; ++sp)
        for (int s = 0; s < 4; ++s)
          if (op(sp, s) != cxd(0, 0))
            out[b] += op(sp, s) * (a[sp].adjoint() * la[s]);
    }
  }
  return out;
}

Env advance_right(const Env& env, const Mpo::Site& w,
                  const std::array<Matc, 4>& a) {
  Env out(w.wl);
  for (int aa = 0; aa < w.wl; ++aa)
    out[aa] = Matc::Zero(a[0].rows(), a[0].rows());
  for (int b = 0; b < w.wr; ++b) {
    if (env[b].size() == 0) continue;
    std::array<Matc, 4> ra;
    for (int s = 0; s < 4; ++s) ra[s] = env[b] * a[s].transpose();
    for (int aa = 0; aa < w.wl; ++aa) {
      if (!w.nonzero(aa, b)) continue;
      const Matc& op = w.at(aa, b);
      for (int sp = 0; sp < 4; ++sp)
        for (int s = 0; s < 4; ++s)
          if (op(sp, s) != cxd(0, 0))
            out[aa] += op(sp, s) * (a[sp].conjugate() * ra[s]);
    }
  }
  return out;
}

// Two-site wavefunction as 16 chi_l x chi_r blocks indexed s*4+t.
using Theta = std::array<Matc, 16>;

Theta merge(const std::array<Matc, 4>& a, const std::array<Matc, 4>& b) {
  Theta t;
  for (int s = 0; s < 4; ++s)
    for (int u = 0; u < 4; ++u) t[s * 4 + u] = a[s] * b[u];
  return t;
}

Eigen::VectorXcd flatten(const Theta& t) {
  const Eigen::Index n = t[0].size();
  Eigen::VectorXcd v(16 * n);
  for (int k = 0; k < 16; ++k)
    v.segment(k * n, n) = Eigen::Map<const Eigen::VectorXcd>(t[k].data(), n);
  return v;
}

Theta unflatten(const Eigen::VectorXcd& v, Eigen::Index rows,
                Eigen::Index cols) {
  Theta t;
  const Eigen::Index n = rows * cols;
  for (int k = 0; k < 16; ++k)
    t[k] = Eigen::Map<const Matc>(v.data() + k * n, rows, cols);
  return t;
}

struct EffectiveH {
  const Env* lenv;
  const Mpo::Site* w1;
  const Mpo::Site* w2;
  const Env* renv;

  Theta apply(const Theta& theta) const {
    const Eigen::Index rows = theta[0].rows();
    const Eigen::Index cols = theta[0].cols();
    const int wl = w1->wl, wm = w1->wr, wr = w2->wr;

    // y[a][s*4+t] = L[a] * theta[s][t]
    std::vector<Theta> y(wl);
    for (int a = 0; a < wl; ++a) {
      if ((*lenv)[a].size() == 0) continue;
      for (int k = 0; k < 16; ++k) y[a][k] = (*lenv)[a] * theta[k];
    }
    // z[m][s'*4+t] = sum_{a,s} W1[a,m](s',s) y[a][s][t]
    std::vector<Theta> z(wm);
    std::vector<bool> z_set(wm, false);
    for (int m = 0; m < wm; ++m) {
      for (int a = 0; a < wl; ++a) {
        if (!w1->nonzero(a, m) || (*lenv)[a].size() == 0) continue;
        const Matc& op = w1->at(a, m);
        for (int sp = 0; sp < 4; ++sp)
          for (int s = 0; s < 4; ++s) {
            const cxd c = op(sp, s);
            if (c == cxd(0, 0)) continue;
            for (int t = 0; t < 4; ++t) {
              Matc& dst = z[m][sp * 4 + t];
              if (dst.size() == 0) dst = Matc::Zero(rows, cols);
              dst += c * y[a][s * 4 + t];
              z_set[m] = true;
            }
          }
      }
    }
    // v[b][s'*4+t'] = sum_{m,t} W2[m,b](t',t) z[m][s'][t]
    Theta out;
    for (int k = 0; k < 16; ++k) out[k] = Matc::Zero(rows, cols);
    for (int b = 0; b < wr; ++b) {
      if ((*renv)[b].size() == 0) continue;
      Theta v;
      bool any = false;
      for (int m = 0; m < wm; ++m) {
        if (!w2->nonzero(m, b) || !z_set[m]) continue;
        const Matc& op = w2->at(m, b);
        for (int tp = 0; tp < 4; ++tp)
          for (int t = 0; t < 4; ++t) {
            const cxd c = op(tp, t);
            if (c == cxd(0, 0)) continue;
            for (int sp = 0; sp < 4; ++sp) {
              if (z[m][sp * 4 + t].size() == 0) continue;
              Matc& dst = v[sp * 4 + tp];
              if (dst.size() == 0) dst = Matc::Zero(rows, cols);
              dst += c * z[m][sp * 4 + t];
              any = true;
            }
          }
      }
      if (!any) continue;
      const Matc rt = (*renv)[b].transpose();
      for (int k = 0; k < 16; ++k)
        if (v[k].size() != 0) out[k] += v[k] * rt;
    }
    return out;
  }

  Eigen::VectorXcd apply_vec(const Eigen::VectorXcd& x, Eigen::Index rows,
                             Eigen::Index cols) const {
    return flatten(apply(unflatten(x, rows, cols)));
  }
};

// Extremal (lowest) eigenpair by Lanczos with full reorthogonalization.
double lanczos_ground(const EffectiveH& heff, Eigen::VectorXcd& x,
                      Eigen::Index rows, Eigen::Index cols, int max_iter,
                      double tol) {
  const Eigen::Index n = x.size();
  max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
  std::vector<Eigen::VectorXcd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXcd q = x / x.norm();
  basis.push_back(q);
  double last_e = std::numeric_limits<double>::max();
  Eigen::VectorXd ritz_vec;
  for (int j = 0; j < max_iter; ++j) {
    Eigen::VectorXcd r = heff.apply_vec(basis[j], rows, cols);
    double a = basis[j].dot(r).real();
    alpha.push_back(a);
    r -= a * basis[j];
    if (j > 0) r -= beta[j - 1] * basis[j - 1];
    for (const auto& b : basis) r -= b.dot(r) * b;  // reorthogonalize

    // Ritz values of the current tridiagonal block
    const int m = j + 1;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) tri(k, k) = alpha[k];
    for (int k = 0; k + 1 < m; ++k) tri(k, k + 1) = tri(k + 1, k) = beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double e = es.eigenvalues()(0);
    ritz_vec = es.eigenvectors().col(0);

    const double bnorm = r.norm();
    if (std::abs(last_e - e) < tol || bnorm < 1e-13 || j == max_iter - 1) {
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
      for (int k = 0; k < m; ++k) out += ritz_vec(k) * basis[k];
      x = out / out.norm();
      return e;
    }
    last_e = e;
    beta.push_back(bnorm);
    basis.push_back(r / bnorm);
  }
  return last_e;
}

struct SplitResult {
  std::array<Matc, 4> left, right;
};

// SVD split of a two-site block with the (lambda/lambda_max)^2 cutoff and
// chi cap; singular values go left or right with the new center.
SplitResult split_theta(const Theta& theta, int chi_max, double cutoff,
                        bool center_right) {
  const Eigen::Index cl = theta[0].rows();
  const Eigen::Index cr = theta[0].cols();
  Matc m(4 * cl, 4 * cr);
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) m.block(s * cl, t * cr, cl, cr) = theta[s * 4 + t];
  Eigen::BDCSVD<Matc> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax2 = sv.size() ? sv(0) * sv(0) : 0;
  int keep = 0;
  for (int k = 0; k < sv.size(); ++k) {
    if (k >= chi_max) break;
    if (smax2 > 0 && sv(k) * sv(k) / smax2 < cutoff && k > 0) break;
    ++keep;
  }
  keep = std::max(keep, 1);
  Eigen::VectorXd lambda = sv.head(keep);
  lambda /= lambda.norm();

  SplitResult out;
  Matc u = svd.matrixU().leftCols(keep);
  Matc vh = svd.matrixV().leftCols(keep).adjoint();
  if (center_right)
    vh = lambda.cast<cxd>().asDiagonal() * vh;
  else
    u = u * lambda.cast<cxd>().asDiagonal();
  for (int s = 0; s < 4; ++s) out.left[s] = u.middleRows(s * cl, cl);
  for (int t = 0; t < 4; ++t) out.right[t] = vh.middleCols(t * cr, cr);
  return out;
}

}  // namespace

double mpo_expectation(const Mpo& mpo, const Mps& psi) {
  Env env = left_edge();
  for (int i = 0; i < mpo.length; ++i)
    env = advance_left(env, mpo.sites[i], psi.site(i));
  const cxd v = env[0](0, 0);
  double n2 = 0;
  {
    Matc e = Matc::Identity(1, 1);
    for (int i = 0; i < mpo.length; ++i) {
      Matc next = Matc::Zero(psi.site(i)[0].cols(), psi.site(i)[0].cols());
      for (int s = 0; s < 4; ++s)
        next += psi.site(i)[s].adjoint() * e * psi.site(i)[s];
      e = std::move(next);
    }
    n2 = e(0, 0).real();
  }
  return v.real() / n2;
}

ObservablesRecord measure_observables(Mps& psi) {
  ObservablesRecord r;
  r.sx_profile = psi.expect_all(op_sx());
  r.sz_profile = psi.expect_all(op_sz());
  r.dx_profile = psi.expect_all(op_dx());
  r.dz_profile = psi.expect_all(op_dz());
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  r.sx = mean(r.sx_profile);
  r.sz = mean(r.sz_profile);
  r.dx = mean(r.dx_profile);
  r.dz = mean(r.dz_profile);
  return r;
}

GroundStateResult find_ground_state(const SystemParams& params,
                                    const DmrgConfig& cfg) {
  params.validate();
  if (cfg.max_sweeps < 1) throw ParamError("max_sweeps must be >= 1");
  if (cfg.energy_tol <= 0 || cfg.cutoff < 0)
    throw ParamError("tolerances must be positive");
  const int L = params.L;

  std::map<int, Matc> pin;
  if (cfg.h_pin != 0)
    pin[0] = -cfg.h_pin * (op_sz() + op_dz());
  const Mpo mpo = build_hamiltonian_mpo(params, pin);

  Mps psi = Mps::random_state(L, cfg.init_bond, cfg.seed);
  psi.chi_max = cfg.chi_max;
  psi.cutoff = cfg.cutoff;
  psi.move_center_to(0);

  std::vector<Env> lenv(L + 1), renv(L + 1);
  lenv[0] = left_edge();
  renv[L] = right_edge();
  for (int i = L - 1; i >= 1; --i)
    renv[i] = advance_right(renv[i + 1], mpo.sites[i], psi.site(i));

  GroundStateResult res;
  res.seed = cfg.seed;
  const double local_tol = cfg.energy_tol / 10.0;
  double sweep_energy = 0;

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    // left-to-right
    for (int i = 0; i < L - 1; ++i) {
      EffectiveH heff{&lenv[i], &mpo.sites[i], &mpo.sites[i + 1], &renv[i + 2]};
      Theta theta = merge(psi.site(i), psi.site(i + 1));
      Eigen::VectorXcd x = flatten(theta);
      sweep_energy = lanczos_ground(heff, x, theta[0].rows(), theta[0].cols(),
                                    cfg.lanczos_max_iter, local_tol);
      theta = unflatten(x, theta[0].rows(), theta[0].cols());
      SplitResult sp = split_theta(theta, cfg.chi_max, cfg.cutoff, true);
      psi.site(i) = sp.left;
      psi.site(i + 1) = sp.right;
      psi.move_center_to(i + 1);  // bookkeeping only; tensors already canonical
      lenv[i + 1] = advance_left(lenv[i], mpo.sites[i], psi.site(i));
    }
    // right-to-left
    for (int i = L - 2; i >= 0; --i) {
      EffectiveH heff{&lenv[i], &mpo.sites[i], &mpo.sites[i + 1], &renv[i + 2]};
      Theta theta = merge(psi.site(i), psi.site(i + 1));
      Eigen::VectorXcd x = flatten(theta);
      sweep_energy = lanczos_ground(heff, x, theta[0].rows(), theta[0].cols(),
                                    cfg.lanczos_max_iter, local_tol);
      theta = unflatten(x, theta[0].rows(), theta[0].cols());
      SplitResult sp = split_theta(theta, cfg.chi_max, cfg.cutoff, false);
      psi.site(i) = sp.left;
      psi.site(i + 1) = sp.right;
      psi.move_center_to(i);
      renv[i + 1] = advance_right(renv[i + 2], mpo.sites[i + 1], psi.site(i + 1));
    }
    res.sweep_energies.push_back(sweep_energy);
    if (sweep > 0) {
      const double de = std::abs(res.sweep_energies[sweep - 1] - sweep_energy);
      if (de < cfg.energy_tol) {
        res.converged = true;
        break;
      }
    }
  }

  // Report against the unpinned Hamiltonian.
  const Mpo clean = build_hamiltonian_mpo(params);
  res.energy = mpo_expectation(clean, psi);
  res.psi = std::move(psi);
  res.obs = measure_observables(res.psi);
  return res;
}

std::pair<char, char> classify_phase(const GroundStateResult& result,
                                     double threshold_s, double threshold_d) {
  const char ms = std::abs(result.obs.sz) > threshold_s ? 'F' : 'P';
  const char es = std::abs(result.obs.dz) > threshold_d ? 'F' : 'P';
  return {ms, es};
}

}  // namespace ddc
