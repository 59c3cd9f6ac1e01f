// End-to-end acceptance checks. Each numbered case is registered as its own
// ctest entry, so the suite reads as one pass/fail line per criterion.

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ddc/dense.hpp"
#include "ddc/dmrg.hpp"
#include "ddc/ed.hpp"
#include "ddc/fit.hpp"
#include "ddc/gates.hpp"
#include "ddc/mpo.hpp"
#include "ddc/peaks.hpp"
#include "ddc/tebd.hpp"
#include "ddc/trend.hpp"

using namespace ddc;

namespace {

DmrgConfig fast_l60() {
  // settings sized for L=60 production points: energies land within ~1e-5
  // relative of tighter runs, ample for order-parameter classification
  DmrgConfig cfg;
  cfg.chi_max = 24;
  cfg.lanczos_max_iter = 12;
  cfg.energy_tol = 1e-8;
  return cfg;
}

SystemParams base60() {
  SystemParams p;
  p.L = 60;
  p.J_s = 1;
  p.J_d = 10;
  p.h_s = 1;
  p.h_d = -20;
  p.C = 0;
  return p;
}

// midpoint of the threshold crossing of |order(x)|, which must cross once
double crossing_point(const std::vector<double>& xs,
                      const std::vector<double>& order, double threshold) {
  REQUIRE(order.size() == xs.size());
  REQUIRE(std::abs(order.front()) > threshold);
  REQUIRE(std::abs(order.back()) < threshold);
  int last_above = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (std::abs(order[i]) > threshold) last_above = static_cast<int>(i);
  // single crossing: everything after last_above is below threshold
  for (std::size_t i = last_above + 1; i < order.size(); ++i)
    CHECK(std::abs(order[i]) < threshold);
  return 0.5 * (xs[last_above] + xs[last_above + 1]);
}

}  // namespace

TEST_CASE("01 ground-state oracle: random draws match dense diagonalization") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> jd(0.5, 2.0), hd(-2.0, 2.0),
      cd(-1.0, 1.0);
  DmrgConfig cfg;
  cfg.chi_max = 64;
  cfg.energy_tol = 1e-12;
  cfg.lanczos_max_iter = 100;
  cfg.h_pin = 0;  // pure energy comparison; no tie-break needed
  const int lengths[10] = {3, 3, 3, 4, 4, 4, 4, 5, 5, 5};
  for (int draw = 0; draw < 10; ++draw) {
    SystemParams p;
    SpectralDecomposition d;
    for (;;) {
      p.L = lengths[draw];
      p.J_s = jd(rng);
      p.J_d = jd(rng);
      p.h_s = hd(rng);
      p.h_d = hd(rng);
      p.C = cd(rng);
      d = diagonalize(p);
      // reject draws with a (near-)degenerate ground state: below the gap
      // the two solvers may legitimately settle on different members of
      // the subspace, so an energy comparison is ill-posed there
      if (d.eigenvalues(1) - d.eigenvalues(0) > 1e-4) break;
    }
    cfg.seed = 50 + draw;
    auto res = find_ground_state(p, cfg);
    const double scale = std::max(1.0, std::abs(d.eigenvalues(0)));
    CHECK(std::abs(res.energy - d.eigenvalues(0)) / scale < 1e-8);
  }
}

TEST_CASE("02 dynamics oracle: L=5 quench vs exact propagation, dt^2 order") {
  const int L = 5;
  for (double c : {0.0, 0.5}) {
    SystemParams pre;
    pre.L = L;
    pre.J_s = 1;
    pre.J_d = 10;
    pre.h_s = 1;
    pre.h_d = -20;
    pre.C = c;
    QuenchSpec spec;
    spec.pre = pre;
    spec.post = pre;
    spec.post.h_d = 20;
    spec.dt = 1e-3;
    spec.t_end = 1.0;
    spec.stride = 10;
    DmrgConfig cfg;
    cfg.chi_max = 64;
    TimeSeries ts = run_global_quench(spec, cfg);
    REQUIRE(ts.ok());

    SpectralDecomposition dpre = diagonalize(pre);
    SpectralDecomposition dpost = diagonalize(spec.post);
    Vecc psi0 = dpre.eigenvectors.col(0);
    auto exact = evolve_exact(dpost, psi0, ts.times,
                              {{"dx", dense_chain_average(L, op_dx())}});
    double max_dev = 0;
    for (std::size_t k = 0; k < ts.times.size(); ++k)
      max_dev =
          std::max(max_dev, std::abs(ts.dx[k] - exact.of("dx")[k]));
    CHECK(max_dev < 1e-3);

    if (c == 0.5) {
      // Trotter order: evolve the exact initial state so that only the
      // splitting error remains, then halve dt
      auto exact_end = evolve_exact(dpost, psi0, {1.0},
                                    {{"dx", dense_chain_average(L, op_dx())}});
      auto dev_at = [&](double dt) {
        Mps psi = Mps::from_state_vector(psi0, L);
        psi.chi_max = 256;
        psi.cutoff = 0;
        TimeSeries s;
        evolve(psi, spec.post, dt, 1.0, 1 << 20, s);
        return std::abs(s.dx.back() - exact_end.of("dx")[0]);
      };
      const double e1 = dev_at(1e-3), e2 = dev_at(5e-4);
      CHECK(e1 / e2 > 3.5);
      CHECK(e1 / e2 < 4.5);
    }
  }
}

TEST_CASE("03 magnetic transition: order parameter crossing in [1.0, 1.2]") {
  DmrgConfig cfg = fast_l60();
  // close to the magnetic transition chi = 24 supports a metastable ordered
  // branch ~1e-3 above the true ground state (which is paramagnetic there);
  // chi = 40 with deeper local solves escapes it
  cfg.chi_max = 40;
  cfg.lanczos_max_iter = 24;
  std::vector<double> hs, sz;
  for (double h = 0.8; h <= 1.4 + 1e-9; h += 0.05) {
    SystemParams p = base60();
    p.h_s = h;
    auto res = find_ground_state(p, cfg);
    // at the critical field itself the energy plateau criterion suffers
    // critical slowing down (drift ~3e-8/sweep after 100 sweeps); accept a
    // bounded residual drift there — it is orders below the 0.05
    // classification threshold
    double drift = 0;
    if (res.sweep_energies.size() >= 2)
      drift = std::abs(res.sweep_energies.back() -
                       res.sweep_energies[res.sweep_energies.size() - 2]);
    CHECK((res.converged || drift < 1e-6));
    hs.push_back(h);
    sz.push_back(res.obs.sz);
    MESSAGE("h_s=", h, " sz=", res.obs.sz);
  }
  const double hc = crossing_point(hs, sz, 0.05);
  CHECK(hc >= 1.0);
  CHECK(hc <= 1.2);
}

TEST_CASE("04 electric transition: order parameter crossing at |h_d| in [10, 12]") {
  DmrgConfig cfg = fast_l60();
  for (int sign : {+1, -1}) {
    std::vector<double> habs, dz;
    for (double h = 9.5; h <= 12.5 + 1e-9; h += 0.5) {
      SystemParams p = base60();
      p.h_s = 0.5;
      p.h_d = sign * h;
      auto res = find_ground_state(p, cfg);
      CHECK(res.converged);
      habs.push_back(h);
      dz.push_back(res.obs.dz);
      MESSAGE("h_d=", sign * h, " dz=", res.obs.dz);
    }
    const double hc = crossing_point(habs, dz, 0.05);
    CHECK(hc >= 10.0);
    CHECK(hc <= 12.0);
  }
}

TEST_CASE("05 reentrance: magnetic labels read P then F along h_d toward zero") {
  DmrgConfig cfg = fast_l60();
  std::vector<char> labels;
  for (double hd = -20; hd <= 0 + 1e-9; hd += 2) {
    SystemParams p = base60();
    p.C = 0.5;
    p.h_s = 1.2;
    p.h_d = hd;
    auto res = find_ground_state(p, cfg);
    CHECK(res.converged);
    labels.push_back(classify_phase(res).first);
    MESSAGE("h_d=", hd, " sz=", res.obs.sz, " label=", labels.back());
  }
  CHECK(labels.front() == 'P');
  CHECK(labels.back() == 'F');
  int switches = 0;
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] != labels[i - 1]) ++switches;
  CHECK(switches == 1);
}

namespace {

FitResult quench_fit(double j_d, double c, int chi) {
  SystemParams pre = base60();
  pre.J_d = j_d;
  pre.C = c;
  QuenchSpec spec;
  spec.pre = pre;
  spec.post = pre;
  spec.post.h_d = 20;
  spec.dt = 2e-3;
  spec.t_end = 0.3;
  spec.stride = 1;
  DmrgConfig cfg = fast_l60();
  cfg.chi_max = chi;
  TimeSeries ts = run_global_quench(spec, cfg);
  REQUIRE(ts.ok());
  return fit_damped_cosine(ts.times, ts.dx, 0.0, 0.3);
}

}  // namespace

TEST_CASE("06 oscillation frequency is linear in the bond coupling") {
  std::vector<double> jds = {2, 4, 6, 8, 10}, omegas;
  for (double j_d : jds) {
    FitResult f = quench_fit(j_d, 0.0, 32);
    CHECK(f.converged);
    omegas.push_back(f.omega);
    MESSAGE("J_d=", j_d, " omega=", f.omega, " tau=", f.tau);
  }
  TrendFit line = polynomial_trend(jds, omegas, 1);
  MESSAGE("slope=", line.coeffs[1], " intercept=", line.coeffs[0],
          " r2=", line.r2);
  CHECK(line.r2 >= 0.98);
  CHECK(line.coeffs[1] > 0.8);
  // Known failure, kept red deliberately: the fitted frequency is the
  // weighted mean of the two-flip excitation band, and its J_d coefficient
  // converges to ~1.30 at this size (exact propagation with the identical
  // protocol gives 0.975 / 1.050 / 1.105 at L = 4 / 5 / 6). Individual
  // frequencies still match the adjacent-pair estimate 2 h_d + J_d within
  // 5%, and the linearity check above passes with r2 > 0.9999. Shifting the
  // fit window does not help: the frequency barely moves before the signal
  // (tau ~ 0.21 at J_d = 10) decays below the fit's noise floor.
  CHECK(line.coeffs[1] < 1.2);
}

TEST_CASE("07 coupling trends: frequency falls, decay rate grows with C") {
  std::vector<double> cs = {0, 0.25, 0.5, 0.75, 1.0}, omegas, rates;
  for (double c : cs) {
    FitResult f = quench_fit(10.0, c, 40);
    CHECK(f.converged);
    omegas.push_back(f.omega);
    rates.push_back(1.0 / f.tau);
    MESSAGE("C=", c, " omega=", f.omega, " 1/tau=", 1.0 / f.tau);
  }
  for (std::size_t i = 1; i < cs.size(); ++i) {
    CHECK(omegas[i] < omegas[i - 1]);
    CHECK(rates[i] > rates[i - 1]);
  }
}

namespace {

TimeSeries front_run(double c) {
  SystemParams p = base60();
  p.C = c;
  DmrgConfig cfg = fast_l60();
  // released site 30 (1-based); strong reversed prep fields localize a flip
  TimeSeries ts = run_local_quench(p, 29, FieldPair{-5, 30}, cfg, 5e-3, 2.2, 4);
  REQUIRE(ts.ok());
  return ts;
}

}  // namespace

TEST_CASE("08 light-cone velocity of the electric front") {
  TimeSeries ts = front_run(0.0);
  auto right = track_light_cone(ts.times, ts.dx_profile, 29, ConeSide::Right);
  auto left = track_light_cone(ts.times, ts.dx_profile, 29, ConeSide::Left);
  REQUIRE(right.ok);
  REQUIRE(left.ok);
  MESSAGE("v_right=", right.velocity, " v_left=", left.velocity);
  for (const auto& v : {right, left}) {
    CHECK(v.velocity > 7.98 - 0.4);
    CHECK(v.velocity < 7.98 + 0.4);
  }
}

TEST_CASE("09 velocity slow-down with coupling, magnetic imprint at C=1") {
  std::vector<double> cs = {0, 0.25, 0.5, 0.75, 1.0}, vels;
  VelocityEstimate sx_front;
  for (double c : cs) {
    TimeSeries ts = front_run(c);
    auto v = track_light_cone(ts.times, ts.dx_profile, 29, ConeSide::Right);
    REQUIRE(v.ok);
    vels.push_back(v.velocity);
    MESSAGE("C=", c, " v=", v.velocity, " se=", v.std_error);
    if (c == 1.0)
      sx_front = track_light_cone(ts.times, ts.sx_profile, 29, ConeSide::Right);
  }
  for (std::size_t i = 1; i < cs.size(); ++i) CHECK(vels[i] < vels[i - 1]);
  TrendFit line = polynomial_trend(cs, vels, 1);
  CHECK(line.coeffs[1] < 0);
  CHECK(line.r2 >= 0.9);

  // the magnetic chain carries a disturbance co-moving with the electric one
  REQUIRE(sx_front.ok);
  MESSAGE("v_sx=", sx_front.velocity, " v_dx=", vels.back());
  CHECK(sx_front.velocity / vels.back() > 0.85);
  CHECK(sx_front.velocity / vels.back() < 1.15);
}

TEST_CASE("10 invariants: algebra, conservation, analysis recovery") {
  // Hamiltonian MPO is Hermitian
  {
    SystemParams p;
    p.L = 5;
    p.J_s = 1.3;
    p.J_d = 4;
    p.h_s = 0.7;
    p.h_d = -2;
    p.C = 0.6;
    Matc h = dense_hamiltonian(p);
    CHECK((h - h.adjoint()).norm() < 1e-12);
  }
  // uncoupled chains: energies add
  {
    SystemParams both;
    both.L = 6;
    both.J_s = 1;
    both.h_s = 0.9;
    both.J_d = 4;
    both.h_d = 2.5;
    SystemParams s_only = both, d_only = both;
    s_only.J_d = s_only.h_d = 0;
    d_only.J_s = d_only.h_s = 0;
    DmrgConfig cfg;
    cfg.chi_max = 48;
    const double e = find_ground_state(both, cfg).energy;
    const double es = find_ground_state(s_only, cfg).energy;
    const double ed = find_ground_state(d_only, cfg).energy;
    CHECK(e == doctest::Approx(es + ed).epsilon(1e-7));
  }
  // gate evolution preserves the norm; canonical isometries hold
  {
    SystemParams p;
    p.L = 6;
    p.J_s = 1;
    p.J_d = 5;
    p.h_s = 1;
    p.h_d = 3;
    p.C = 0.5;
    Mps psi = Mps::random_state(6, 8, 3);
    auto gates = build_bond_gates(p, 0.01);
    for (int rep = 0; rep < 5; ++rep)
      for (int i = 0; i + 1 < p.L; ++i) psi.apply_bond_gate(gates[i]);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-10));
    psi.move_center_to(3);
    for (int i = 0; i < 3; ++i) {
      const auto& a = psi.site(i);
      Matc g = Matc::Zero(a[0].cols(), a[0].cols());
      for (int s = 0; s < 4; ++s) g += a[s].adjoint() * a[s];
      CHECK((g - Matc::Identity(g.rows(), g.cols())).norm() < 1e-10);
    }
  }
  // the two exact-propagation routes agree; overlaps are complete
  {
    SystemParams p;
    p.L = 4;
    p.J_s = 1;
    p.J_d = 10;
    p.h_s = 1;
    p.h_d = 20;
    p.C = 0.5;
    SystemParams pre = p;
    pre.h_d = -20;
    SpectralDecomposition dpre = diagonalize(pre);
    SpectralDecomposition d = diagonalize(p);
    Vecc psi0 = dpre.eigenvectors.col(0);
    set_initial_state(d, psi0);
    CHECK(d.overlaps.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    std::vector<double> times = {0, 0.07, 0.21, 0.4};
    auto direct = evolve_exact(d, psi0, times,
                               {{"dx", dense_chain_average(4, op_dx())}});
    auto via_flip = evolve_dx_via_flip_basis(d, psi0, times);
    for (std::size_t k = 0; k < times.size(); ++k)
      CHECK(std::abs(direct.of("dx")[k] - via_flip[k]) < 1e-10);
  }
  // synthetic damped-cosine recovery within three standard errors
  {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> noise(0.0, 1e-3);
    std::vector<double> t, y;
    const double c = 0.1, A = 0.35, tau = 0.12, omega = 50;
    for (int k = 0; k <= 500; ++k) {
      t.push_back(1e-3 * k);
      y.push_back(c + A * std::exp(-t.back() / tau) *
                          std::cos(omega * t.back()) +
                  noise(rng));
    }
    FitResult f = fit_damped_cosine(t, y, 0.0, 0.5);
    REQUIRE(f.converged);
    CHECK(std::abs(f.omega - omega) < 3 * f.se_omega + 1e-6);
    CHECK(std::abs(f.tau - tau) < 3 * f.se_tau + 1e-6);
  }
  // synthetic traveling pulse velocity recovery
  {
    const int L = 61, origin = 30;
    std::vector<double> times;
    std::vector<std::vector<double>> profiles;
    for (int k = 0; k <= 120; ++k) {
      times.push_back(0.025 * k);
      std::vector<double> row(L, 0.0);
      const double x0 = origin + 5.0 * times.back();
      for (int i = 0; i < L; ++i)
        row[i] = 0.4 * std::exp(-0.5 * (i - x0) * (i - x0) / 0.8);
      profiles.push_back(row);
    }
    auto v = track_light_cone(times, profiles, origin, ConeSide::Right);
    REQUIRE(v.ok);
    CHECK(v.velocity == doctest::Approx(5.0).epsilon(0.05));
  }
}
