#include "rabiring/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rabiring {

namespace {

// Chiral y-pattern fixed by the stationarity conditions:
// y_n = -(J/w) sin(t) (x_{n+1} - x_{n-1}).
std::vector<double> chiral_y_from_x(const std::vector<double>& x, double j,
                                    double theta) {
  const int n = static_cast<int>(x.size());
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    y[i] = -j * std::sin(theta) * (x[ip] - x[im]);
  }
  return y;
}

double collinear_amplitude(const ModelParams& p, double denom_factor) {
  // x^2 = (16 g1^4 / f^2 - 1) / (16 g1^2) with f = denom_factor
  double g2 = p.g1 * p.g1;
  double r = 16.0 * g2 * g2 / (denom_factor * denom_factor) - 1.0;
  if (r < -1e-12) return -1.0;  // below the boundary (rounding band -> 0)
  return std::sqrt(std::max(r, 0.0) / (16.0 * g2));
}

}  // namespace

double critical_g1(double q, double theta, const ModelParams& p) {
  const double j = p.j_ratio;
  if (j >= 0.5)
    throw std::domain_error("critical_g1: requires J/omega < 1/2");
  const double c = std::cos(theta), cq = std::cos(q);
  double num = 1.0 + 4.0 * j * c * cq +
               4.0 * j * j * std::cos(theta + q) * std::cos(theta - q);
  double den = 1.0 + 2.0 * j * c * cq;
  if (den <= 0.0)
    throw std::domain_error("critical_g1: nonpositive denominator");
  if (num <= 0.0) throw std::domain_error("critical_g1: nonpositive radicand");
  return 0.5 * std::sqrt(num / den);
}

CriticalPoint second_order_boundary(double theta, const ModelParams& p) {
  MomentumGrid grid = MomentumGrid::make(p.n_sites);
  CriticalPoint best{std::numeric_limits<double>::infinity(), 0.0};
  for (double q : grid.q_values) {
    double g = critical_g1(q, theta, p);
    if (g < best.g1c) best = {g, q};
  }
  return best;
}

std::vector<double> triple_points(const ModelParams& p) {
  const double j = p.j_ratio;
  if (p.n_sites == 4) {
    if (j == 0.0) return {M_PI / 2, M_PI / 2};  // both collapse to pi/2
    double r = (1.0 - std::sqrt(1.0 + 16.0 * j * j)) / (4.0 * j);
    return {std::acos(-r), std::acos(r)};  // theta_c-, theta_c+
  }
  if (p.n_sites == 3) {
    double c = -2.0 * j / (std::sqrt(8.0 * j * j + 1.0) + 1.0);
    return {0.0, std::acos(c)};  // frustration point, theta_c
  }
  // General N: locate every angle where the condensing mode switches.
  MomentumGrid grid = MomentumGrid::make(p.n_sites);
  auto arg_min = [&](double theta) {
    int best = 0;
    double bg = critical_g1(grid.q_values[0], theta, p);
    for (int k = 1; k < p.n_sites; ++k) {
      double g = critical_g1(grid.q_values[k], theta, p);
      if (g < bg) {
        bg = g;
        best = k;
      }
    }
    return best;
  };
  std::vector<double> points;
  const int n_scan = 4000;
  int prev = arg_min(0.0);
  for (int i = 1; i <= n_scan; ++i) {
    double theta = M_PI * i / n_scan;
    int cur = arg_min(theta);
    if (cur != prev) {
      // bisect the crossing of the two competing critical lines
      double qa = grid.q_values[prev], qb = grid.q_values[cur];
      double lo = M_PI * (i - 1) / n_scan, hi = theta;
      auto diff = [&](double t) {
        return critical_g1(qa, t, p) - critical_g1(qb, t, p);
      };
      for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (diff(mid) < 0.0)
          lo = mid;
        else
          hi = mid;
      }
      points.push_back(0.5 * (lo + hi));
      prev = cur;
    }
  }
  return points;
}

std::optional<double> fsp_amplitude(const ModelParams& p) {
  double a = collinear_amplitude(p, 1.0 + 2.0 * p.j_ratio * std::cos(p.theta));
  if (a < 0.0) return std::nullopt;
  return a;
}

std::optional<double> afsp_amplitude(const ModelParams& p) {
  double a = collinear_amplitude(p, 1.0 - 2.0 * p.j_ratio * std::cos(p.theta));
  if (a < 0.0) return std::nullopt;
  return a;
}

std::optional<CspPatterns> csp_amplitudes_n4(const ModelParams& p) {
  if (p.n_sites != 4)
    throw std::invalid_argument("csp_amplitudes_n4: requires N = 4");
  const double j = p.j_ratio, s = std::sin(p.theta);
  auto tps = triple_points(p);
  if (!(p.theta > tps[0] && p.theta < tps[1])) return std::nullopt;
  double f = 1.0 - 4.0 * j * j * s * s;
  double g2 = p.g1 * p.g1;
  double r = 16.0 * g2 * g2 / (f * f) - 1.0;
  if (r < -1e-12) return std::nullopt;
  CspPatterns out;
  out.x_amp = std::sqrt(std::max(r, 0.0) / (16.0 * g2));
  out.y_amp = 2.0 * j * std::abs(s) * out.x_amp;
  const double a = out.x_amp;
  std::vector<std::vector<double>> xs = {
      {a, -a, -a, a}, {-a, a, a, -a}, {a, a, -a, -a}, {-a, -a, a, a}};
  for (auto& x : xs) {
    std::vector<double> y = chiral_y_from_x(x, j, p.theta);
    out.patterns.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

}  // namespace rabiring
