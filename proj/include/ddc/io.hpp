#pragma once

#include <string>
#include <vector>

#include "ddc/fit.hpp"
#include "ddc/peaks.hpp"
#include "ddc/tebd.hpp"

namespace ddc {

extern const char* kVersion;

/// Fixed-format double, stable across runs for byte-identical CSVs.
std::string fmt(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// t,sx_avg,dx_avg,sz_avg,dz_avg,energy,discarded_weight
std::string timeseries_csv(const TimeSeries& ts);

/// Wide per-site CSV: t,<prefix>_1..<prefix>_L (1-based site columns).
std::string profile_csv(const std::vector<double>& times,
                        const std::vector<std::vector<double>>& profiles,
                        const std::string& prefix);

/// Parse the two CSV layouts back (for the re-fit / re-track subcommands).
void parse_series_csv(const std::string& text, std::vector<double>& times,
                      std::vector<std::string>& names,
                      std::vector<std::vector<double>>& columns);

std::string fit_result_json(const FitResult& fit, const std::string& params_json,
                            std::uint64_t seed);
std::string velocity_json(const VelocityEstimate& v, const std::string& params_json,
                          std::uint64_t seed);

}  // namespace ddc
