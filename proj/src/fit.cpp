#include "ddc/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace ddc {

double dominant_frequency(const std::vector<double>& times,
                          const std::vector<double>& values) {
  const int n = static_cast<int>(times.size());
  if (n < 4) return 0.0;
  const double dt = (times.back() - times.front()) / (n - 1);
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / n;

  const int kmax = n / 2;
  std::vector<std::complex<double>> spec(kmax + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    double re = 0, im = 0;
    for (int j = 0; j < n; ++j) {
      const double ph = 2.0 * M_PI * k * j / n;
      re += (values[j] - mean) * std::cos(ph);
      im -= (values[j] - mean) * std::sin(ph);
    }
    spec[k] = {re, im};
  }
  int kbest = 1;
  for (int k = 2; k <= kmax; ++k)
    if (std::norm(spec[k]) > std::norm(spec[kbest])) kbest = k;

  double kref = kbest;
  if (kbest > 1 && kbest < kmax && std::norm(spec[kbest]) > 0) {
    // Quinn's first estimator: sub-bin offset from the complex ratios of
    // the neighboring bins (parabolic interpolation of the raw power is
    // biased for a rectangular window)
    const double a1 = (spec[kbest - 1] / spec[kbest]).real();
    const double a2 = (spec[kbest + 1] / spec[kbest]).real();
    const double d1 = a1 / (1.0 - a1);
    const double d2 = -a2 / (1.0 - a2);
    double d = (d1 > 0 && d2 > 0) ? d2 : d1;
    if (std::isfinite(d) && std::abs(d) <= 0.5) kref += d;
  }
  return 2.0 * M_PI * kref / (n * dt);
}

namespace {

struct Window {
  std::vector<double> t, y;
};

Window extract(const std::vector<double>& times,
               const std::vector<double>& values, double t_min, double t_max) {
  if (times.size() != values.size())
    throw std::invalid_argument("times and values must have equal length");
  Window w;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= t_min - 1e-12 && times[i] <= t_max + 1e-12) {
      w.t.push_back(times[i]);
      w.y.push_back(values[i]);
    }
  return w;
}

double model(double t, double c, double A, double g, double w) {
  return c + A * std::exp(-g * t) * std::cos(w * t);
}

}  // namespace

FitResult fit_damped_cosine(const std::vector<double>& times,
                            const std::vector<double>& values, double t_min,
                            double t_max) {
  FitResult fit;
  fit.t_min = t_min;
  fit.t_max = t_max;

  Window w = extract(times, values, t_min, t_max);
  const int n = static_cast<int>(w.t.size());
  if (n < 8) {
    fit.status = "fit_failed";
    return fit;
  }

  const auto [lo, hi] = std::minmax_element(w.y.begin(), w.y.end());
  const double range = *hi - *lo;
  const double mean = std::accumulate(w.y.begin(), w.y.end(), 0.0) / n;
  // threshold sits above the numerical jitter of an unquenched evolution
  // (~1e-6) and far below any genuine oscillation amplitude
  if (range < 1e-5 * std::max(1.0, std::abs(mean))) {
    fit.c = mean;
    fit.A = 0;
    fit.unidentifiable = true;
    fit.status = "unidentifiable";
    return fit;
  }

  // Initialization: tail mean for c, first-point offset for A, periodogram
  // peak for omega, log-envelope regression for the decay rate.
  const int tail = std::max(1, n / 4);
  double c0 = 0;
  for (int i = n - tail; i < n; ++i) c0 += w.y[i];
  c0 /= tail;
  double a0 = w.y[0] - c0;
  double w0 = dominant_frequency(w.t, w.y);
  if (w0 <= 0) w0 = 2.0 * M_PI / (t_max - t_min);

  double g0 = 1.0 / (t_max - t_min);
  {
    std::vector<double> pt, pv;
    for (int i = 1; i + 1 < n; ++i) {
      const double e = std::abs(w.y[i] - c0);
      if (e > std::abs(w.y[i - 1] - c0) && e >= std::abs(w.y[i + 1] - c0) &&
          e > 1e-12)
        pt.push_back(w.t[i]), pv.push_back(std::log(e));
    }
    if (pt.size() >= 2) {
      double st = 0, sv = 0, stt = 0, stv = 0;
      for (std::size_t i = 0; i < pt.size(); ++i) {
        st += pt[i];
        sv += pv[i];
        stt += pt[i] * pt[i];
        stv += pt[i] * pv[i];
      }
      const double m = pt.size();
      const double slope = (m * stv - st * sv) / (m * stt - st * st);
      if (slope < 0) g0 = -slope;
    }
  }

  // Levenberg-Marquardt on (c, A, gamma, omega).
  Eigen::Vector4d p(c0, a0, g0, w0);
  double lambda = 1e-3;
  double cost = 0;
  auto residuals = [&](const Eigen::Vector4d& q, Eigen::VectorXd& r) {
    r.resize(n);
    for (int i = 0; i < n; ++i)
      r(i) = w.y[i] - model(w.t[i], q(0), q(1), q(2), q(3));
    return r.squaredNorm();
  };
  Eigen::VectorXd r;
  cost = residuals(p, r);
  bool converged = false;
  Eigen::MatrixXd jac(n, 4);
  for (int iter = 0; iter < 400; ++iter) {
    for (int i = 0; i < n; ++i) {
      const double t = w.t[i];
      const double e = std::exp(-p(2) * t);
      const double co = std::cos(p(3) * t);
      const double si = std::sin(p(3) * t);
      jac(i, 0) = 1.0;
      jac(i, 1) = e * co;
      jac(i, 2) = -p(1) * t * e * co;
      jac(i, 3) = -p(1) * t * e * si;
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d jtr = jac.transpose() * r;
    bool stepped = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix4d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::Vector4d delta = a.ldlt().solve(jtr);
      Eigen::Vector4d q = p + delta;
      Eigen::VectorXd rq;
      const double cq = residuals(q, rq);
      if (cq < cost) {
        const double rel = std::abs(cost - cq) / std::max(cost, 1e-300);
        p = q;
        r = rq;
        cost = cq;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (rel < 1e-12 || delta.norm() < 1e-13) converged = true;
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
    if (!stepped || converged) {
      converged = converged || !stepped;
      break;
    }
  }

  fit.c = p(0);
  fit.A = p(1);
  fit.omega = std::abs(p(3));
  fit.residual_rms = std::sqrt(cost / n);
  fit.c_tail_residual = std::abs(fit.c - c0);
  fit.A_initial_residual = std::abs(fit.A - (w.y[0] - fit.c));

  if (p(2) <= 0) {
    fit.status = "fit_failed";
    fit.tau = 0;
    return fit;
  }
  fit.tau = 1.0 / p(2);

  // Standard errors from the linearized covariance.
  if (n > 4) {
    const double sigma2 = cost / (n - 4);
    const Eigen::Matrix4d cov =
        sigma2 * (jac.transpose() * jac).inverse();
    fit.se_c = std::sqrt(std::max(cov(0, 0), 0.0));
    fit.se_A = std::sqrt(std::max(cov(1, 1), 0.0));
    const double se_g = std::sqrt(std::max(cov(2, 2), 0.0));
    fit.se_tau = se_g * fit.tau * fit.tau;
    fit.se_omega = std::sqrt(std::max(cov(3, 3), 0.0));
  }

  fit.converged = converged && fit.residual_rms < 0.05 * std::abs(fit.A);
  fit.status = fit.converged ? "ok" : "fit_failed";
  return fit;
}

}  // namespace ddc
