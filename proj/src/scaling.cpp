#include "rabiring/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "rabiring/analytic.hpp"
#include "rabiring/parallel.hpp"
#include "rabiring/spectrum.hpp"

namespace rabiring {

namespace {

std::vector<double> log_spaced_descending(const FitWindow& w) {
  std::vector<double> d(w.n_samples);
  const double lo = std::log(w.rel_min), hi = std::log(w.rel_max);
  for (int i = 0; i < w.n_samples; ++i)
    d[i] = std::exp(hi + (lo - hi) * i / (w.n_samples - 1));
  return d;
}

// Sorted mode energies of the normal phase at given coupling.
std::vector<double> normal_modes(const ModelParams& p) {
  MomentumGrid grid = MomentumGrid::make(p.n_sites);
  std::vector<double> eps;
  eps.reserve(grid.q_values.size());
  for (double q : grid.q_values) eps.push_back(dispersion_normal(q, p));
  std::sort(eps.begin(), eps.end());
  return eps;
}

}  // namespace

std::string to_string(Side s) { return s == Side::Below ? "below" : "above"; }

PowerLawFit power_law_fit(const std::vector<double>& dg,
                          const std::vector<double>& eps) {
  if (dg.size() != eps.size() || dg.size() < 2)
    throw std::invalid_argument("power_law_fit: need >= 2 matching samples");
  const int n = static_cast<int>(dg.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (!(dg[i] > 0.0) || !(eps[i] > 0.0))
      throw std::invalid_argument("power_law_fit: samples must be positive");
    lx[i] = std::log(dg[i]);
    ly[i] = std::log(eps[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0, mean = sy / n;
  for (int i = 0; i < n; ++i) {
    double r = ly[i] - (slope * lx[i] + intercept);
    ss_res += r * r;
    ss_tot += (ly[i] - mean) * (ly[i] - mean);
  }
  return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

ScalingFit fit_exponent(const ModelParams& base, double theta, int mode_index,
                        Side side, const FitWindow& window,
                        const SeedSpec& seeds) {
  if (mode_index < 1 || mode_index > base.n_sites)
    throw std::invalid_argument("fit_exponent: mode_index out of range");
  ModelParams p = base.with_theta(theta);
  p.functional = EnergyFunctional::QrrCo;  // the spectrum pipeline's model
  const CriticalPoint cp = second_order_boundary(p.theta, p);

  const std::vector<double> deltas = log_spaced_descending(window);
  std::vector<double> dg(deltas.size()), eps(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i)
    dg[i] = cp.g1c * deltas[i];

  if (side == Side::Below) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      ModelParams ps = p.with_g1(cp.g1c * (1.0 - deltas[i]));
      eps[i] = normal_modes(ps)[mode_index - 1];
    }
  } else {
    // Warm-started continuation from the farthest sample inward keeps the
    // minimizer on one symmetry branch of the ordered phase.
    ModelParams p0 = p.with_g1(cp.g1c * (1.0 + deltas[0]));
    MeanFieldSolution first = minimize(p0, seeds);
    PhaseKind branch_kind = first.phase.kind;
    MeanFieldState state = first.state;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      ModelParams ps = p.with_g1(cp.g1c * (1.0 + deltas[i]));
      double gn = 0.0;
      state = descend_from(state, ps, MinimizeOptions{}, &gn);
      BogoliubovSpectrum spec = excitation_energies(state, ps);
      eps[i] = spec.energies[mode_index - 1];
      if (!(eps[i] > 0.0))
        throw FitQualityError(
            "fit_exponent: nonpositive mode energy above the boundary "
            "(sample did not converge to a stable minimum)",
            dg, eps);
    }
    if (classify_phase(state, p).kind != branch_kind)
      throw FitQualityError("fit_exponent: symmetry branch changed along the "
                            "continuation chain",
                            dg, eps);
  }

  PowerLawFit fit = power_law_fit(dg, eps);
  if (fit.r_squared < 0.999)
    throw FitQualityError("fit_exponent: r^2 = " +
                              std::to_string(fit.r_squared) +
                              " below 0.999 (wrong window or g1c?)",
                          dg, eps);
  ScalingFit out;
  out.theta = p.theta;
  out.mode_index = mode_index;
  out.side = side;
  out.gamma = fit.gamma;
  out.intercept = fit.intercept;
  out.r_squared = fit.r_squared;
  out.window = window;
  return out;
}

std::vector<ScanExponentEntry> scan_exponents(const ModelParams& base,
                                              const std::vector<double>& thetas,
                                              const FitWindow& window,
                                              const SeedSpec& seeds,
                                              int workers) {
  const std::vector<double> tps = triple_points(base);
  std::vector<ScanExponentEntry> entries(thetas.size());
  parallel_for(thetas.size(), workers, [&](std::size_t i) {
    ScanExponentEntry& e = entries[i];
    e.theta = thetas[i];
    for (double tc : tps) {
      if (std::abs(thetas[i] - tc) < 1e-4) {
        e.error = "theta too close to a triple point; use the dedicated "
                  "triple-point fit";
        return;
      }
    }
    try {
      e.fits.push_back(
          fit_exponent(base, thetas[i], 1, Side::Below, window, seeds));
      e.fits.push_back(
          fit_exponent(base, thetas[i], 1, Side::Above, window, seeds));
      e.ok = true;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  });
  return entries;
}

std::vector<ScalingFit> triple_point_exponents(const ModelParams& base,
                                               double theta_c,
                                               const FitWindow& window,
                                               const SeedSpec& seeds) {
  ModelParams p = base.with_theta(theta_c);
  p.functional = EnergyFunctional::QrrCo;
  const CriticalPoint cp = second_order_boundary(p.theta, p);
  // Softening modes: sample just below the boundary and count the modes
  // whose energy is far below the hopping-band gap scale.
  ModelParams probe = p.with_g1(cp.g1c * (1.0 - window.rel_min));
  std::vector<double> eps = normal_modes(probe);
  int soft = 0;
  for (double e : eps)
    if (e < 0.02 * p.omega) ++soft;
  if (soft < 2)
    throw std::runtime_error(
        "triple_point_exponents: fewer than two softening modes at theta=" +
        std::to_string(theta_c) + " (not a triple point?)");

  std::vector<ScalingFit> fits;
  for (int mode = 1; mode <= 2; ++mode)
    for (Side side : {Side::Below, Side::Above})
      fits.push_back(fit_exponent(base, theta_c, mode, side, window, seeds));
  return fits;
}

}  // namespace rabiring
