#include "ddc/peaks.hpp"

#include <algorithm>
#include <cmath>

namespace ddc {

std::vector<Peak> find_peaks(const std::vector<double>& y,
                             double min_prominence) {
  const int n = static_cast<int>(y.size());
  std::vector<Peak> peaks;
  for (int i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    // prominence: drop to the lowest point before a strictly higher value,
    // on each side; the smaller drop wins
    double left_min = y[i];
    for (int j = i - 1; j >= 0; --j) {
      if (y[j] > y[i]) break;
      left_min = std::min(left_min, y[j]);
    }
    double right_min = y[i];
    for (int j = i + 1; j < n; ++j) {
      if (y[j] > y[i]) break;
      right_min = std::min(right_min, y[j]);
    }
    const double prom = y[i] - std::max(left_min, right_min);
    if (prom >= min_prominence)
      peaks.push_back({i, y[i], prom});
  }
  return peaks;
}

VelocityEstimate track_light_cone(const std::vector<double>& times,
                                  const std::vector<std::vector<double>>& profiles,
                                  int origin, ConeSide side,
                                  double prominence_frac, int edge_exclude) {
  VelocityEstimate est;
  if (profiles.empty() || times.size() != profiles.size()) {
    est.status = "insufficient_signal";
    return est;
  }
  const int L = static_cast<int>(profiles[0].size());
  const int nt = static_cast<int>(times.size());

  std::vector<int> candidates;
  if (side == ConeSide::Right) {
    for (int i = origin + 1; i <= L - 1 - edge_exclude; ++i)
      candidates.push_back(i);
  } else {
    for (int i = origin - 1; i >= edge_exclude; --i) candidates.push_back(i);
  }

  std::vector<std::vector<double>> devs;
  std::vector<double> amps;
  double amp_max = 0;
  for (int site : candidates) {
    // deviation from the pre-quench profile; offsets cancel
    std::vector<double> dev(nt);
    double amp = 0;
    for (int k = 0; k < nt; ++k) {
      dev[k] = std::abs(profiles[k][site] - profiles[0][site]);
      amp = std::max(amp, dev[k]);
    }
    devs.push_back(std::move(dev));
    amps.push_back(amp);
    amp_max = std::max(amp_max, amp);
  }

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const int site = candidates[ci];
    const double amp = amps[ci];
    // skip sites the front never reached: their residual jitter (truncation
    // noise, boundary effects) would otherwise yield spurious early peaks
    if (amp < std::max(1e-9, 1e-2 * amp_max)) continue;
    auto pk = find_peaks(devs[ci], prominence_frac * amp);
    if (pk.empty()) continue;
    est.sites.push_back(site);
    // sub-sample arrival time: parabola through the peak and its neighbours,
    // otherwise the sampling stride quantizes every arrival time and
    // dominates the regression residuals
    const int idx = pk.front().index;
    double t_peak = times[idx];
    if (idx > 0 && idx + 1 < nt) {
      const double ym = devs[ci][idx - 1], y0 = devs[ci][idx],
                   yp = devs[ci][idx + 1];
      const double curv = ym - 2 * y0 + yp;
      if (curv < 0) {
        double delta = 0.5 * (ym - yp) / curv;
        delta = std::clamp(delta, -0.5, 0.5);
        t_peak += delta * 0.5 * (times[idx + 1] - times[idx - 1]);
      }
    }
    est.peak_times.push_back(t_peak);
  }

  const int m = static_cast<int>(est.sites.size());
  if (m < 4) {
    est.status = "insufficient_signal";
    return est;
  }

  // OLS of distance from origin vs arrival time
  double st = 0, sd = 0, stt = 0, std_ = 0;
  for (int k = 0; k < m; ++k) {
    const double t = est.peak_times[k];
    const double d = std::abs(est.sites[k] - origin);
    st += t;
    sd += d;
    stt += t * t;
    std_ += t * d;
  }
  const double denom = m * stt - st * st;
  if (std::abs(denom) < 1e-300) {
    est.status = "insufficient_signal";
    return est;
  }
  const double slope = (m * std_ - st * sd) / denom;
  const double intercept = (sd - slope * st) / m;
  double rss = 0;
  for (int k = 0; k < m; ++k) {
    const double d = std::abs(est.sites[k] - origin);
    const double r = d - (intercept + slope * est.peak_times[k]);
    rss += r * r;
  }
  est.velocity = slope;
  est.std_error =
      m > 2 ? std::sqrt(rss / (m - 2) / (stt - st * st / m)) : 0.0;
  est.ok = true;
  est.status = "ok";
  return est;
}

}  // namespace ddc
