#include "rabiring/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace rabiring {

namespace {

double omega_q(double q, double kappa, const ModelParams& p) {
  return p.omega * (1.0 - 2.0 * kappa) +
         2.0 * p.hopping() * std::cos(p.theta - q);
}

double dispersion_from_kappa(double q, double kappa, const ModelParams& p,
                             const char* who) {
  double wq = omega_q(q, kappa, p);
  double wmq = omega_q(-q, kappa, p);
  double anom = 4.0 * kappa * p.omega;  // coefficient of the pair terms
  double radicand = (wq + wmq) * (wq + wmq) - anom * anom;
  if (radicand < 0.0)
    throw std::domain_error(std::string(who) +
                            ": complex excitation energy at q=" +
                            std::to_string(q) + " (unstable mode)");
  return 0.5 * (wq - wmq + std::sqrt(radicand));
}

}  // namespace

EffectiveCoefficients effective_coefficients(const MeanFieldState& s,
                                             const ModelParams& p) {
  const double g2 = p.g1 * p.g1;
  EffectiveCoefficients c;
  c.kappa.resize(s.n());
  c.delta_ratio.resize(s.n());
  for (int i = 0; i < s.n(); ++i) {
    double u = 1.0 + 16.0 * g2 * s.x[i] * s.x[i];
    c.delta_ratio[i] = std::sqrt(u);
    c.kappa[i] = g2 / (u * std::sqrt(u));
  }
  auto [mn, mx] = std::minmax_element(c.kappa.begin(), c.kappa.end());
  c.uniform = (*mx - *mn) <= 1e-10;
  return c;
}

double dispersion_normal(double q, const ModelParams& p) {
  return dispersion_from_kappa(q, p.g1 * p.g1, p, "dispersion_normal");
}

double squeeze_parameter(double q, const ModelParams& p) {
  double kappa = p.g1 * p.g1;
  double sum = omega_q(q, kappa, p) + omega_q(-q, kappa, p);
  double anom = 4.0 * kappa * p.omega;
  double num = sum + anom, den = sum - anom;
  if (num <= 0.0 || den <= 0.0)
    throw std::domain_error("squeeze_parameter: nonpositive log argument");
  return std::log(num / den) / 8.0;
}

double dispersion_superradiant(double q, const EffectiveCoefficients& coeffs,
                               const ModelParams& p) {
  if (!coeffs.uniform)
    throw std::invalid_argument(
        "dispersion_superradiant: coefficients are site-dependent; use the "
        "real-space route (excitation_energies)");
  return dispersion_from_kappa(q, coeffs.kappa.front(), p,
                               "dispersion_superradiant");
}

BogoliubovMatrix build_bogoliubov_matrix(const MeanFieldState& s,
                                         const ModelParams& p) {
  const int n = s.n();
  EffectiveCoefficients c = effective_coefficients(s, p);
  const std::complex<double> hop =
      p.hopping() * std::exp(std::complex<double>(0.0, p.theta)) * 0.5;
  BogoliubovMatrix out;
  out.m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  out.metric = Eigen::VectorXd::Ones(2 * n);
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    double kw = c.kappa[i] * p.omega;
    out.m(i, i) = 0.5 * p.omega - kw;
    out.m(n + i, n + i) = 0.5 * p.omega - kw;
    out.m(i, n + i) = -kw;
    out.m(n + i, i) = -kw;
    out.m(i, ip) += std::conj(hop);
    out.m(i, im) += hop;
    out.m(n + i, n + ip) += hop;   // hole block: conjugate pattern
    out.m(n + i, n + im) += std::conj(hop);
    out.metric(n + i) = -1.0;
  }
  return out;
}

BogoliubovSpectrum excitation_energies(const MeanFieldState& s,
                                       const ModelParams& p) {
  const int n = s.n();
  BogoliubovMatrix bm = build_bogoliubov_matrix(s, p);
  Eigen::MatrixXcd lm = bm.metric.asDiagonal() * bm.m;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(lm, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("excitation_energies: eigensolver failed");

  std::vector<std::complex<double>> ev(2 * n);
  for (int i = 0; i < 2 * n; ++i) ev[i] = solver.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(),
            [](const auto& a, const auto& b) { return a.real() < b.real(); });

  double max_imag = 0.0;
  for (const auto& e : ev) max_imag = std::max(max_imag, std::abs(e.imag()));

  // eig(Lambda*M) comes in +-pairs; after the sort, entry i mirrors entry
  // 2N-1-i. The physical energy carries the quadratic-form factor 2.
  const double scale = bm.m.norm();
  for (int i = 0; i < n; ++i) {
    double mismatch = std::abs(ev[i].real() + ev[2 * n - 1 - i].real());
    if (mismatch > 1e-8 * std::max(1.0, scale))
      throw PairingError(
          "excitation_energies: unpaired eigenvalue (mismatch " +
          std::to_string(mismatch) + "); input is not a quadratic minimum");
  }

  BogoliubovSpectrum spec;
  spec.energies.resize(n);
  for (int i = 0; i < n; ++i) spec.energies[i] = 2.0 * ev[n + i].real();
  std::sort(spec.energies.begin(), spec.energies.end());
  spec.max_imag = 2.0 * max_imag;
  spec.stable = spec.max_imag < 1e-8;
  return spec;
}

}  // namespace rabiring
