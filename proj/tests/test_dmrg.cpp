#include "doctest.h"

#include <random>

#include "ddc/dense.hpp"
#include "ddc/dmrg.hpp"
#include "ddc/ed.hpp"

using namespace ddc;

TEST_CASE("small chains match exact diagonalization") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> jd(0.5, 2.0), hd(-1.5, 1.5),
      cd(-1.0, 1.0);
  DmrgConfig cfg;
  cfg.chi_max = 64;
  for (int draw = 0; draw < 3; ++draw) {
    SystemParams p;
    p.L = 4;
    p.J_s = jd(rng);
    p.J_d = jd(rng);
    p.h_s = hd(rng);
    p.h_d = hd(rng);
    p.C = cd(rng);
    cfg.seed = 100 + draw;
    auto res = find_ground_state(p, cfg);
    SpectralDecomposition d = diagonalize(p);
    CHECK(res.converged);
    CHECK(res.energy == doctest::Approx(d.eigenvalues(0)).epsilon(1e-7));
  }

  // one larger instance, with observables checked against the exact state
  SystemParams p;
  p.L = 5;
  p.J_s = 1;
  p.J_d = 1.4;
  p.h_s = 0.8;
  p.h_d = -0.6;
  p.C = 0.5;
  cfg.seed = 7;
  auto res = find_ground_state(p, cfg);
  SpectralDecomposition d = diagonalize(p);
  CHECK(res.energy == doctest::Approx(d.eigenvalues(0)).epsilon(1e-7));
  Vecc g = d.eigenvectors.col(0);
  Matc ax = dense_chain_average(p.L, op_sx());
  Matc bx = dense_chain_average(p.L, op_dx());
  CHECK(res.obs.sx == doctest::Approx(g.dot(ax * g).real()).epsilon(1e-5));
  CHECK(res.obs.dx == doctest::Approx(g.dot(bx * g).real()).epsilon(1e-5));
}

TEST_CASE("field-free chain: exact ferromagnetic energy at L=60") {
  SystemParams p;
  p.L = 60;
  p.J_s = 1;
  // fully polarized product state: only the -2 sz sz bonds contribute,
  // -2 * (1/4) * (L-1) = -(L-1)/2
  DmrgConfig cfg;
  cfg.chi_max = 16;
  cfg.max_sweeps = 12;
  auto res = find_ground_state(p, cfg);
  CHECK(res.converged);
  CHECK(res.energy == doctest::Approx(-29.5).epsilon(1e-8));
  // the pinning tie-break selects the sz > 0 branch
  CHECK(res.obs.sz == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("sweep energies are monotonically non-increasing") {
  SystemParams p;
  p.L = 12;
  p.J_s = 1;
  p.J_d = 10;
  p.h_s = 1.1;
  p.h_d = 5;
  p.C = 0.5;
  DmrgConfig cfg;
  cfg.chi_max = 48;
  auto res = find_ground_state(p, cfg);
  CHECK(res.converged);
  REQUIRE(res.sweep_energies.size() >= 2);
  for (std::size_t i = 1; i < res.sweep_energies.size(); ++i)
    CHECK(res.sweep_energies[i] <= res.sweep_energies[i - 1] + 1e-10);
}

TEST_CASE("uncoupled chains: energies add") {
  SystemParams both;
  both.L = 8;
  both.J_s = 1;
  both.h_s = 0.9;
  both.J_d = 4;
  both.h_d = 2.5;
  both.C = 0;
  SystemParams s_only = both, d_only = both;
  s_only.J_d = s_only.h_d = 0;
  d_only.J_s = d_only.h_s = 0;
  DmrgConfig cfg;
  cfg.chi_max = 48;
  const double e_both = find_ground_state(both, cfg).energy;
  const double e_s = find_ground_state(s_only, cfg).energy;
  const double e_d = find_ground_state(d_only, cfg).energy;
  CHECK(e_both == doctest::Approx(e_s + e_d).epsilon(1e-7));
}

TEST_CASE("reported energy is pin-free") {
  SystemParams p;
  p.L = 10;
  p.J_s = 1;
  p.h_s = 0.5;
  DmrgConfig a, b;
  a.chi_max = b.chi_max = 32;
  a.h_pin = 1e-6;
  b.h_pin = 2e-6;
  const double ea = find_ground_state(p, a).energy;
  const double eb = find_ground_state(p, b).energy;
  CHECK(ea == doctest::Approx(eb).epsilon(1e-8));
}

TEST_CASE("phase classification on both chains") {
  DmrgConfig cfg;
  cfg.chi_max = 32;

  SystemParams p;
  p.L = 16;
  p.J_s = 1;
  p.J_d = 10;
  p.C = 0;

  SUBCASE("deep ordered: both chains break symmetry") {
    p.h_s = 0.3;
    p.h_d = 2;
    auto res = find_ground_state(p, cfg);
    auto [ms, md] = classify_phase(res);
    CHECK(ms == 'F');
    CHECK(md == 'F');
  }

  SUBCASE("strong fields: both chains polarized along x") {
    p.h_s = 3;
    p.h_d = 30;
    auto res = find_ground_state(p, cfg);
    auto [ms, md] = classify_phase(res);
    CHECK(ms == 'P');
    CHECK(md == 'P');
    CHECK(std::abs(res.obs.sx + 0.5) < 0.1);  // anti-aligned with +h_s
  }

  SUBCASE("mixed: magnetic disordered, electric ordered") {
    p.h_s = 3;
    p.h_d = 2;
    auto res = find_ground_state(p, cfg);
    auto [ms, md] = classify_phase(res);
    CHECK(ms == 'P');
    CHECK(md == 'F');
  }
}
