#pragma once

#include <string>
#include <vector>

#include "ddc/dmrg.hpp"
#include "ddc/mps.hpp"
#include "ddc/params.hpp"

namespace ddc {

struct QuenchSpec {
  SystemParams pre;    // H_i, ground state defines the t<0 state
  SystemParams post;   // H_f, generates the evolution
  double dt = 2e-3;    // Trotter step, units t0
  double t_end = 0.5;
  int stride = 10;     // record every stride steps
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> sx, dx, sz, dz;       // chain averages
  std::vector<double> energy;               // <H_f>
  std::vector<double> discarded;            // cumulative discarded weight
  std::vector<std::vector<double>> sx_profile;  // [record][site]
  std::vector<std::vector<double>> dx_profile;
  std::string status = "ok";  // ok | truncation_overflow
  bool prep_converged = true;  // DMRG convergence of the initial state
  bool ok() const { return status == "ok"; }
};

/// Second-order Trotter evolution of psi under params, appending records
/// to the series. Halts early with status=truncation_overflow if any step
/// discards more than overflow_limit of weight.
void evolve(Mps& psi, const SystemParams& params, double dt, double t_end,
            int stride, TimeSeries& series, double overflow_limit = 1e-3);

TimeSeries run_global_quench(const QuenchSpec& spec, const DmrgConfig& cfg);

TimeSeries run_local_quench(const SystemParams& base, int flip_site,
                            FieldPair prep_fields, const DmrgConfig& cfg,
                            double dt, double t_end, int stride = 10);

}  // namespace ddc
