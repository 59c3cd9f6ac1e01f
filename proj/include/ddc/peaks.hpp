#pragma once

#include <string>
#include <vector>

namespace ddc {

struct Peak {
  int index = 0;
  double value = 0;
  double prominence = 0;
};

/// Local maxima with prominence at or above min_prominence, in index order.
std::vector<Peak> find_peaks(const std::vector<double>& y,
                             double min_prominence);

enum class ConeSide { Left, Right };

struct VelocityEstimate {
  double velocity = 0;   // sites per t0, positive
  double std_error = 0;  // OLS regression standard error of the slope
  std::vector<int> sites;         // 0-based, sites that produced a peak
  std::vector<double> peak_times;
  bool ok = false;
  std::string status = "ok";  // ok | insufficient_signal
};

/// First-arrival tracking of a traveling excitation front. profiles is
/// [record][site]; each tracked site contributes the time of its first
/// deviation peak whose prominence is at least prominence_frac of that
/// site's full deviation amplitude. Velocity from OLS of distance vs time;
/// needs >= 4 points. Sites within edge_exclude of a chain end are skipped.
VelocityEstimate track_light_cone(const std::vector<double>& times,
                                  const std::vector<std::vector<double>>& profiles,
                                  int origin, ConeSide side,
                                  double prominence_frac = 0.25,
                                  int edge_exclude = 5);

}  // namespace ddc
