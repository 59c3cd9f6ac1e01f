#pragma once

#include <string>
#include <vector>

namespace ddc {

/// Least-squares fit of y(t) = c + A exp(-t/tau) cos(omega t).
struct FitResult {
  double c = 0, A = 0, tau = 0, omega = 0;
  double se_c = 0, se_A = 0, se_tau = 0, se_omega = 0;
  double t_min = 0, t_max = 0;
  double residual_rms = 0;
  bool converged = false;
  bool unidentifiable = false;  // constant input: omega/tau meaningless
  std::string status = "ok";    // ok | unidentifiable | fit_failed
  // Diagnostics against the limiting-value constraints
  // c = y(infinity), A = y(0) - c.
  double c_tail_residual = 0;
  double A_initial_residual = 0;
};

FitResult fit_damped_cosine(const std::vector<double>& times,
                            const std::vector<double>& values, double t_min,
                            double t_max);

/// Dominant angular frequency of a uniformly sampled, mean-subtracted
/// series, from the periodogram peak with sub-bin refinement.
double dominant_frequency(const std::vector<double>& times,
                          const std::vector<double>& values);

}  // namespace ddc
