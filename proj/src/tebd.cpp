#include "ddc/tebd.hpp"

#include <cmath>

#include "ddc/gates.hpp"
#include "ddc/mpo.hpp"

namespace ddc {

namespace {

void record(Mps& psi, const Mpo& h_f, double t, TimeSeries& series) {
  series.times.push_back(t);
  auto sx = psi.expect_all(op_sx());
  auto sz = psi.expect_all(op_sz());
  auto dx = psi.expect_all(op_dx());
  auto dz = psi.expect_all(op_dz());
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  series.sx.push_back(mean(sx));
  series.sz.push_back(mean(sz));
  series.dx.push_back(mean(dx));
  series.dz.push_back(mean(dz));
  series.energy.push_back(mpo_expectation(h_f, psi));
  series.discarded.push_back(psi.cumulative_discarded());
  series.sx_profile.push_back(std::move(sx));
  series.dx_profile.push_back(std::move(dx));
}

}  // namespace

void evolve(Mps& psi, const SystemParams& params, double dt, double t_end,
            int stride, TimeSeries& series, double overflow_limit) {
  params.validate();
  if (dt <= 0) throw ParamError("dt must be positive");
  if (t_end < dt) throw ParamError("t_end must be at least dt");
  if (stride < 1) throw ParamError("stride must be >= 1");

  const Mpo h_f = build_hamiltonian_mpo(params);
  const auto half = build_bond_gates(params, dt / 2);
  const auto full = build_bond_gates(params, dt);

  record(psi, h_f, 0.0, series);

  const int steps = static_cast<int>(std::llround(t_end / dt));
  const double disc_at_start = psi.cumulative_discarded();
  double disc_prev = disc_at_start;
  for (int step = 1; step <= steps; ++step) {
    // second-order pattern: even bonds dt/2, odd bonds dt, even bonds dt/2
    for (int i = 0; i + 1 < params.L; i += 2) psi.apply_bond_gate(half[i]);
    for (int i = 1; i + 1 < params.L; i += 2) psi.apply_bond_gate(full[i]);
    for (int i = 0; i + 1 < params.L; i += 2) psi.apply_bond_gate(half[i]);
    psi.normalize();

    const double disc_now = psi.cumulative_discarded();
    if (disc_now - disc_prev > overflow_limit) {
      record(psi, h_f, step * dt, series);
      series.status = "truncation_overflow";
      return;
    }
    disc_prev = disc_now;
    if (step % stride == 0 || step == steps)
      record(psi, h_f, step * dt, series);
  }
}

TimeSeries run_global_quench(const QuenchSpec& spec, const DmrgConfig& cfg) {
  spec.pre.validate();
  spec.post.validate();
  if (spec.pre.L != spec.post.L)
    throw ParamError("pre- and post-quench Hamiltonians must share L");
  GroundStateResult gs = find_ground_state(spec.pre, cfg);
  TimeSeries series;
  series.prep_converged = gs.converged;
  Mps psi = std::move(gs.psi);
  psi.chi_max = cfg.chi_max;
  psi.cutoff = cfg.cutoff;
  evolve(psi, spec.post, spec.dt, spec.t_end, spec.stride, series);
  return series;
}

TimeSeries run_local_quench(const SystemParams& base, int flip_site,
                            FieldPair prep_fields, const DmrgConfig& cfg,
                            double dt, double t_end, int stride) {
  base.validate();
  if (flip_site < 0 || flip_site >= base.L)
    throw ParamError("flip site outside the chain");
  SystemParams prep = base;
  prep.site_overrides[flip_site + 1] = prep_fields;  // overrides are 1-based
  GroundStateResult gs = find_ground_state(prep, cfg);
  TimeSeries series;
  series.prep_converged = gs.converged;
  Mps psi = std::move(gs.psi);
  psi.chi_max = cfg.chi_max;
  psi.cutoff = cfg.cutoff;
  evolve(psi, base, dt, t_end, stride, series);
  return series;
}

}  // namespace ddc
