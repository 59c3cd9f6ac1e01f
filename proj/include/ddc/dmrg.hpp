#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ddc/mpo.hpp"
#include "ddc/mps.hpp"
#include "ddc/params.hpp"

namespace ddc {

struct DmrgConfig {
  int max_sweeps = 40;
  double energy_tol = 1e-9;   // sweep-to-sweep energy change
  int chi_max = 128;
  double cutoff = 1e-10;
  double h_pin = 1e-6;        // -h_pin (sz_1 + dz_1) during the solve
  std::uint64_t seed = 1;
  int init_bond = 8;          // bond dimension of the random initial state
  int lanczos_max_iter = 60;
};

struct ObservablesRecord {
  double sx = 0, sz = 0, dx = 0, dz = 0;  // chain averages
  std::vector<double> sx_profile, sz_profile, dx_profile, dz_profile;
};

struct GroundStateResult {
  double energy = 0.0;
  Mps psi;
  std::vector<double> sweep_energies;
  bool converged = false;
  ObservablesRecord obs;
  std::uint64_t seed = 0;
};

GroundStateResult find_ground_state(const SystemParams& params,
                                    const DmrgConfig& cfg);

/// <psi| H |psi> for an MPO, full transfer contraction.
double mpo_expectation(const Mpo& mpo, const Mps& psi);

ObservablesRecord measure_observables(Mps& psi);

/// ('F' or 'P') for the magnetic and electric chains:
/// F iff |<sz>| (resp. |<dz>|) exceeds the threshold.
std::pair<char, char> classify_phase(const GroundStateResult& result,
                                     double threshold_s = 0.05,
                                     double threshold_d = 0.05);

}  // namespace ddc
