#include "rabiring/model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace rabiring {

std::string to_string(EnergyFunctional f) {
  return f == EnergyFunctional::QrrCo ? "qrr" : "lmgr";
}

std::string to_string(PhaseKind k) {
  switch (k) {
    case PhaseKind::Normal:    return "normal";
    case PhaseKind::Ferro:     return "ferro";
    case PhaseKind::Antiferro: return "antiferro";
    case PhaseKind::Chiral:    return "chiral";
  }
  return "?";
}

ThetaFold canonicalize_theta(double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("canonicalize_theta: theta must be finite");
  constexpr double two_pi = 2.0 * M_PI;
  // wrap into (-pi, pi]
  double t = std::remainder(theta, two_pi);
  if (t <= -M_PI) t += two_pi;
  if (t < 0.0) return {-t, true};
  return {t, false};
}

ModelParams ModelParams::make(int n_sites, double g1, double j_ratio,
                              double theta, EnergyFunctional functional,
                              double omega) {
  if (n_sites < 3)
    throw std::invalid_argument("ModelParams: n_sites must be >= 3");
  if (!(g1 >= 0.0) || !std::isfinite(g1))
    throw std::invalid_argument("ModelParams: g1 must be finite and >= 0");
  if (!(j_ratio >= 0.0) || !std::isfinite(j_ratio))
    throw std::invalid_argument("ModelParams: j_ratio must be finite and >= 0");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("ModelParams: omega must be finite and > 0");
  if (j_ratio > 0.2)
    std::cerr << "warning: j_ratio=" << j_ratio
              << " is outside the weak-hopping regime (J/omega << 1) of the "
                 "effective quadratic model\n";
  ThetaFold fold = canonicalize_theta(theta);
  ModelParams p;
  p.n_sites = n_sites;
  p.g1 = g1;
  p.j_ratio = j_ratio;
  p.theta = fold.theta;
  p.functional = functional;
  p.omega = omega;
  p.theta_mirrored = fold.mirrored;
  return p;
}

ModelParams ModelParams::with_g1(double new_g1) const {
  ModelParams p = *this;
  if (!(new_g1 >= 0.0) || !std::isfinite(new_g1))
    throw std::invalid_argument("ModelParams: g1 must be finite and >= 0");
  p.g1 = new_g1;
  return p;
}

ModelParams ModelParams::with_theta(double new_theta) const {
  ThetaFold fold = canonicalize_theta(new_theta);
  ModelParams p = *this;
  p.theta = fold.theta;
  p.theta_mirrored = fold.mirrored;
  return p;
}

MeanFieldState::MeanFieldState(std::vector<double> x_, std::vector<double> y_)
    : x(std::move(x_)), y(std::move(y_)) {
  if (x.size() != y.size())
    throw std::invalid_argument("MeanFieldState: x and y size mismatch");
}

MeanFieldState MeanFieldState::zero(int n) {
  return MeanFieldState(std::vector<double>(n, 0.0),
                        std::vector<double>(n, 0.0));
}

double MeanFieldState::site_length(int i) const {
  return std::hypot(x[i], y[i]);
}

double MeanFieldState::max_site_length() const {
  double m = 0.0;
  for (int i = 0; i < n(); ++i) m = std::max(m, site_length(i));
  return m;
}

std::vector<double> MeanFieldState::site_lengths() const {
  std::vector<double> l(n());
  for (int i = 0; i < n(); ++i) l[i] = site_length(i);
  return l;
}

MeanFieldState rotated(const MeanFieldState& s, int shift) {
  const int n = s.n();
  MeanFieldState r = MeanFieldState::zero(n);
  for (int i = 0; i < n; ++i) {
    int src = ((i + shift) % n + n) % n;
    r.x[i] = s.x[src];
    r.y[i] = s.y[src];
  }
  return r;
}

MeanFieldState negated(const MeanFieldState& s) {
  MeanFieldState r = s;
  for (auto& v : r.x) v = -v;
  for (auto& v : r.y) v = -v;
  return r;
}

MeanFieldState mirrored_y(const MeanFieldState& s) {
  MeanFieldState r = s;
  for (auto& v : r.y) v = -v;
  return r;
}

bool states_close(const MeanFieldState& a, const MeanFieldState& b,
                  double tol) {
  if (a.n() != b.n()) return false;
  for (int i = 0; i < a.n(); ++i) {
    if (std::abs(a.x[i] - b.x[i]) > tol) return false;
    if (std::abs(a.y[i] - b.y[i]) > tol) return false;
  }
  return true;
}

MomentumGrid MomentumGrid::make(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("MomentumGrid: n_sites >= 1");
  MomentumGrid g;
  g.q_values.resize(n_sites);
  for (int k = 0; k < n_sites; ++k) {
    double q = 2.0 * M_PI * k / n_sites;
    if (q > M_PI + 1e-15) q -= 2.0 * M_PI;
    g.q_values[k] = q;
  }
  return g;
}

std::vector<MeanFieldState> symmetry_orbit(const MeanFieldState& s,
                                           const ModelParams& params,
                                           double tol) {
  if (s.n() != params.n_sites)
    throw std::invalid_argument("symmetry_orbit: state size != n_sites");
  std::vector<MeanFieldState> orbit;
  auto add_unique = [&](const MeanFieldState& c) {
    for (const auto& o : orbit)
      if (states_close(o, c, tol)) return;
    orbit.push_back(c);
  };
  for (int shift = 0; shift < s.n(); ++shift) {
    MeanFieldState r = rotated(s, shift);
    add_unique(r);
    add_unique(negated(r));
  }
  return orbit;
}

std::size_t canonical_index(const std::vector<MeanFieldState>& states,
                            double tie_tol) {
  if (states.empty())
    throw std::invalid_argument("canonical_index: empty set");
  // Compare component sequences (x_0, y_0, x_1, y_1, ...) lexicographically
  // with a tie band, preferring larger values.
  auto better = [&](const MeanFieldState& a, const MeanFieldState& b) {
    for (int i = 0; i < a.n(); ++i) {
      if (a.x[i] > b.x[i] + tie_tol) return true;
      if (a.x[i] < b.x[i] - tie_tol) return false;
      if (a.y[i] > b.y[i] + tie_tol) return true;
      if (a.y[i] < b.y[i] - tie_tol) return false;
    }
    return false;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < states.size(); ++i)
    if (better(states[i], states[best])) best = i;
  return best;
}

}  // namespace rabiring
