#include "rabiring/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rabiring/analytic.hpp"
#include "rabiring/meanfield.hpp"

using namespace rabiring;

namespace {

std::vector<double> sorted_dispersion(const ModelParams& p) {
  MomentumGrid grid = MomentumGrid::make(p.n_sites);
  std::vector<double> eps;
  for (double q : grid.q_values) eps.push_back(dispersion_normal(q, p));
  std::sort(eps.begin(), eps.end());
  return eps;
}

}  // namespace

TEST_CASE("effective coefficients") {
  ModelParams p = ModelParams::make(4, 0.45, 0.05, 1.0);
  auto c = effective_coefficients(MeanFieldState::zero(4), p);
  CHECK(c.uniform);
  for (int i = 0; i < 4; ++i) {
    CHECK(c.kappa[i] == doctest::Approx(0.45 * 0.45).epsilon(1e-15));
    CHECK(c.delta_ratio[i] == doctest::Approx(1.0).epsilon(1e-15));
  }

  // kappa decreases with |x|
  MeanFieldState s({0.1, 0.2, 0.3, 0.4}, {0, 0, 0, 0});
  auto cs = effective_coefficients(s, p);
  CHECK_FALSE(cs.uniform);
  for (int i = 1; i < 4; ++i) CHECK(cs.kappa[i] < cs.kappa[i - 1]);

  // square-ring chiral minimum: all |x_n| equal -> uniform coefficients
  ModelParams pc = ModelParams::make(4, 0.55, 0.05, M_PI / 2);
  MeanFieldSolution sol = minimize(pc);
  CHECK(effective_coefficients(sol.state, pc).uniform);

  // triangle chiral minimum: exactly one site with a distinct coefficient
  ModelParams p3 = ModelParams::make(3, 0.55, 0.05, M_PI / 2);
  MeanFieldSolution sol3 = minimize(p3);
  auto c3 = effective_coefficients(sol3.state, p3);
  CHECK_FALSE(c3.uniform);
  std::vector<double> k = c3.kappa;
  std::sort(k.begin(), k.end());
  bool two_equal = std::abs(k[1] - k[0]) < 1e-10 ||
                   std::abs(k[2] - k[1]) < 1e-10;
  CHECK(two_equal);
  CHECK(k[2] - k[0] > 1e-6);
}

TEST_CASE("normal-phase dispersion") {
  // J=0 closed form
  ModelParams p = ModelParams::make(4, 0.4, 0.0, 0.0);
  for (double q : {0.0, M_PI / 2, M_PI})
    CHECK(dispersion_normal(q, p) == doctest::Approx(0.6).epsilon(1e-14));

  // gap closes at the decoupled critical point
  ModelParams pc = ModelParams::make(4, 0.5, 0.0, 0.0);
  CHECK(dispersion_normal(0.0, pc) == doctest::Approx(0.0).epsilon(1e-12));

  // free-boson hopping band at g1=0
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uq(-M_PI, M_PI), ut(0.0, M_PI);
  for (int k = 0; k < 20; ++k) {
    double q = uq(rng), t = ut(rng);
    ModelParams pf = ModelParams::make(4, 0.0, 0.05, t);
    CHECK(dispersion_normal(q, pf) ==
          doctest::Approx(1.0 + 2 * 0.05 * std::cos(t - q)).epsilon(1e-13));
  }

  // far beyond the boundary the closed form turns complex
  ModelParams pb = ModelParams::make(4, 0.9, 0.0, 0.0);
  CHECK_THROWS_AS(dispersion_normal(0.0, pb), std::domain_error);
}

TEST_CASE("squeeze parameter diagonalizes the pair Hamiltonian") {
  auto omega_q = [](double q, const ModelParams& p) {
    return p.omega * (1 - 2 * p.g1 * p.g1) +
           2 * p.hopping() * std::cos(p.theta - q);
  };
  auto check_reconstruction = [&](double q, const ModelParams& p) {
    double r = squeeze_parameter(q, p);
    double wq = omega_q(q, p), wmq = omega_q(-q, p);
    double G = p.g1 * p.g1 * p.omega;
    double ch = std::cosh(2 * r), sh = std::sinh(2 * r);
    // anomalous coefficient after the squeeze must vanish
    double anom = 0.5 * (wq + wmq) * sh - 2 * G * ch;
    CHECK(std::abs(anom) < 1e-12);
    // and the diagonal part reproduces the dispersion
    double diag = 0.5 * (wq - wmq) + 0.5 * (wq + wmq) * ch - 2 * G * sh;
    CHECK(diag == doctest::Approx(dispersion_normal(q, p)).epsilon(1e-12));
  };

  ModelParams p = ModelParams::make(4, 0.4, 0.05, 0.9);
  for (double q : MomentumGrid::make(4).q_values) check_reconstruction(q, p);

  // g1 = 0: nothing to rotate away
  ModelParams p0 = ModelParams::make(4, 0.0, 0.05, 0.9);
  CHECK(squeeze_parameter(1.3, p0) == 0.0);
  check_reconstruction(1.3, p0);

  // theta = 0: symmetric two-mode squeeze, r_q = r_{-q}
  ModelParams ps = ModelParams::make(4, 0.4, 0.05, 0.0);
  for (double q : {0.3, 1.1, 2.6}) {
    CHECK(squeeze_parameter(q, ps) ==
          doctest::Approx(squeeze_parameter(-q, ps)).epsilon(1e-14));
    check_reconstruction(q, ps);
  }

  // frozen value at q=0, theta=0, j=0.05, g1=0.4
  CHECK(squeeze_parameter(0.0, ps) ==
        doctest::Approx(0.108979871162915).epsilon(1e-12));

  // beyond the stable window the log argument turns nonpositive
  ModelParams pb = ModelParams::make(4, 0.9, 0.0, 0.0);
  CHECK_THROWS_AS(squeeze_parameter(0.0, pb), std::domain_error);
}

TEST_CASE("superradiant dispersion") {
  // with normal-phase coefficients it reduces to dispersion_normal
  ModelParams p = ModelParams::make(4, 0.45, 0.05, 2.2);
  auto coeffs = effective_coefficients(MeanFieldState::zero(4), p);
  for (double q : MomentumGrid::make(4).q_values)
    CHECK(dispersion_superradiant(q, coeffs, p) ==
          doctest::Approx(dispersion_normal(q, p)).epsilon(1e-12));

  // ferro background at theta=pi: all four modes strictly positive
  ModelParams pf = ModelParams::make(4, 0.6, 0.05, M_PI);
  double a = fsp_amplitude(pf).value();
  MeanFieldState fsp({a, a, a, a}, {0, 0, 0, 0});
  auto cf = effective_coefficients(fsp, pf);
  for (double q : MomentumGrid::make(4).q_values)
    CHECK(dispersion_superradiant(q, cf, pf) > 1e-3);

  // continuity across the boundary at the condensing mode
  double g1c = critical_g1(0.0, M_PI, pf);
  ModelParams pe = pf.with_g1(g1c * (1 + 1e-10));
  double ae = fsp_amplitude(pe).value();
  MeanFieldState se({ae, ae, ae, ae}, {0, 0, 0, 0});
  auto ce = effective_coefficients(se, pe);
  CHECK(std::abs(dispersion_superradiant(0.0, ce, pe)) < 1e-4);

  // site-dependent coefficients are rejected
  ModelParams p3 = ModelParams::make(3, 0.55, 0.05, M_PI / 2);
  auto c3 = effective_coefficients(minimize(p3).state, p3);
  CHECK_THROWS_AS(dispersion_superradiant(0.0, c3, p3),
                  std::invalid_argument);
}

TEST_CASE("bogoliubov matrix structure") {
  // J=0, normal phase: per-site 2x2 blocks [[w/2-k, -k], [-k, w/2-k]]
  ModelParams p0 = ModelParams::make(4, 0.45, 0.0, 0.0);
  auto bm = build_bogoliubov_matrix(MeanFieldState::zero(4), p0);
  double k = 0.45 * 0.45;
  for (int i = 0; i < 4; ++i) {
    CHECK(bm.m(i, i).real() == doctest::Approx(0.5 - k));
    CHECK(bm.m(4 + i, 4 + i).real() == doctest::Approx(0.5 - k));
    CHECK(bm.m(i, 4 + i).real() == doctest::Approx(-k));
    CHECK(bm.m(4 + i, i).real() == doctest::Approx(-k));
  }
  for (int i = 0; i < 8; ++i)
    for (int jcol = 0; jcol < 8; ++jcol)
      if (jcol != i && jcol != (i + 4) % 8)
        CHECK(std::abs(bm.m(i, jcol)) < 1e-15);

  // hermiticity and the conjugate hole block, random backgrounds
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5), ut(0.0, M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + trial % 4;
    ModelParams p = ModelParams::make(n, 0.3 + 0.3 * (trial % 3), 0.05,
                                      ut(rng));
    MeanFieldState s = MeanFieldState::zero(n);
    for (int i = 0; i < n; ++i) {
      s.x[i] = u(rng);
      s.y[i] = u(rng);
    }
    auto b = build_bogoliubov_matrix(s, p);
    CHECK((b.m - b.m.adjoint()).norm() < 1e-14);
    CHECK((b.m.block(n, n, n, n) - b.m.block(0, 0, n, n).conjugate()).norm() <
          1e-14);
  }

  CHECK(bm.metric.head(4).isOnes());
  CHECK((bm.metric.tail(4).array() == -1.0).all());
}

TEST_CASE("real-space energies match the momentum-space route") {
  // normal phase, including the J=0 calibration point fixing the overall
  // factor of the quadratic-form convention
  ModelParams pj0 = ModelParams::make(4, 0.4, 0.0, 0.0);
  auto spec0 = excitation_energies(MeanFieldState::zero(4), pj0);
  REQUIRE(spec0.energies.size() == 4);
  CHECK(spec0.stable);
  for (double e : spec0.energies)
    CHECK(e == doctest::Approx(0.6).epsilon(1e-10));  // w sqrt(1-4 g1^2)

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ut(0.0, M_PI), ug(0.05, 0.95);
  for (int n : {3, 4}) {
    for (int trial = 0; trial < 40; ++trial) {
      double theta = ut(rng);
      ModelParams base = ModelParams::make(n, 0.0, 0.05, theta);
      double g1 = ug(rng) * second_order_boundary(theta, base).g1c;
      ModelParams p = base.with_g1(g1);
      auto spec = excitation_energies(MeanFieldState::zero(n), p);
      auto disp = sorted_dispersion(p);
      REQUIRE(spec.stable);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(spec.energies[i] - disp[i]) < 1e-8);
    }
  }

  // uniform superradiant backgrounds from the exact order parameters
  ModelParams pf = ModelParams::make(4, 0.6, 0.05, 2.9);
  double a = fsp_amplitude(pf).value();
  MeanFieldState fsp({a, a, a, a}, {0, 0, 0, 0});
  auto cf = effective_coefficients(fsp, pf);
  std::vector<double> eprime;
  for (double q : MomentumGrid::make(4).q_values)
    eprime.push_back(dispersion_superradiant(q, cf, pf));
  std::sort(eprime.begin(), eprime.end());
  auto specf = excitation_energies(fsp, pf);
  CHECK(specf.stable);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(specf.energies[i] - eprime[i]) < 1e-8);

  ModelParams pc = ModelParams::make(4, 0.53, 0.05, M_PI / 2);
  auto csp = csp_amplitudes_n4(pc);
  auto cc = effective_coefficients(csp->patterns[0], pc);
  std::vector<double> ec;
  for (double q : MomentumGrid::make(4).q_values)
    ec.push_back(dispersion_superradiant(q, cc, pc));
  std::sort(ec.begin(), ec.end());
  auto specc = excitation_energies(csp->patterns[0], pc);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(specc.energies[i] - ec[i]) < 1e-8);
}

TEST_CASE("two modes soften at a triple point") {
  ModelParams base = ModelParams::make(4, 0.0, 0.05, 0.0);
  double theta_cp = triple_points(base)[1];
  double g1c = second_order_boundary(theta_cp, base).g1c;
  ModelParams p = base.with_theta(theta_cp).with_g1(g1c);
  auto spec = excitation_energies(MeanFieldState::zero(4), p);
  CHECK(std::abs(spec.energies[0]) < 1e-7);
  CHECK(std::abs(spec.energies[1]) < 1e-7);
  CHECK(spec.energies[2] > 0.01);
}

TEST_CASE("saddle backgrounds are flagged unstable") {
  // alternating pattern inside the chiral region is a stationary saddle
  ModelParams p = ModelParams::make(4, 0.53, 0.05, M_PI / 2);
  double a = afsp_amplitude(p).value();
  MeanFieldState afsp({a, -a, a, -a}, {0, 0, 0, 0});
  auto spec = excitation_energies(afsp, p);
  CHECK_FALSE(spec.stable);
  CHECK(spec.max_imag > 1e-8);

  // converged global minima are stable across a small sweep
  for (double theta : {0.4, 1.55, 2.8}) {
    for (double rel : {1.05, 1.15}) {
      ModelParams base = ModelParams::make(4, 0.0, 0.05, theta);
      double g1 = rel * second_order_boundary(theta, base).g1c;
      MeanFieldSolution sol = minimize(base.with_g1(g1));
      auto s = excitation_energies(sol.state, base.with_g1(g1));
      CHECK(s.stable);
      for (double e : s.energies) CHECK(e > -1e-10);
    }
  }
}

TEST_CASE("energies scale linearly with omega") {
  ModelParams p1 = ModelParams::make(4, 0.4, 0.05, 1.1);
  ModelParams p2 = ModelParams::make(4, 0.4, 0.05, 1.1,
                                     EnergyFunctional::QrrCo, 2.0);
  for (double q : MomentumGrid::make(4).q_values)
    CHECK(dispersion_normal(q, p2) ==
          doctest::Approx(2.0 * dispersion_normal(q, p1)).epsilon(1e-14));
  auto s1 = excitation_energies(MeanFieldState::zero(4), p1);
  auto s2 = excitation_energies(MeanFieldState::zero(4), p2);
  for (int i = 0; i < 4; ++i)
    CHECK(s2.energies[i] ==
          doctest::Approx(2.0 * s1.energies[i]).epsilon(1e-12));
}
