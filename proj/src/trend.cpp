#include "ddc/trend.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ddc {

TrendFit polynomial_trend(const std::vector<double>& x,
                          const std::vector<double>& y, int degree) {
  if (degree < 1 || degree > 2)
    throw std::invalid_argument("trend degree must be 1 or 2");
  const int n = static_cast<int>(x.size());
  if (x.size() != y.size() || n < degree + 1)
    throw std::invalid_argument("need at least degree+1 points");

  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    double p = 1;
    for (int d = 0; d <= degree; ++d) {
      design(i, d) = p;
      p *= x[i];
    }
    rhs(i) = y[i];
  }
  Eigen::VectorXd beta = design.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd resid = rhs - design * beta;
  const double rss = resid.squaredNorm();
  const double mean = rhs.mean();
  const double tss = (rhs.array() - mean).square().sum();

  TrendFit fit;
  fit.coeffs.assign(beta.data(), beta.data() + beta.size());
  fit.r2_defined = (n > degree + 1) && tss > 0;
  fit.r2 = fit.r2_defined ? 1.0 - rss / tss : 0.0;

  fit.std_errors.assign(degree + 1, 0.0);
  if (n > degree + 1) {
    const double sigma2 = rss / (n - degree - 1);
    Eigen::MatrixXd cov = sigma2 * (design.transpose() * design).inverse();
    for (int d = 0; d <= degree; ++d)
      fit.std_errors[d] = std::sqrt(std::max(cov(d, d), 0.0));
  }
  return fit;
}

}  // namespace ddc
