// analytic.hpp - closed-form critical lines, triple points and exact N=4
// order-parameter amplitudes. These serve as the oracle the numerical
// minimizer is validated against.
#pragma once

#include <optional>
#include <vector>

#include "rabiring/model.hpp"

namespace rabiring {

// Critical coupling of the mode-q instability of the normal phase,
//   g1c(q, t) = (1/2) sqrt[ (1 + 4(J/w) cos t cos q
//                              + 4(J/w)^2 cos(t+q) cos(t-q))
//                           / (1 + 2(J/w) cos t cos q) ].
// Specializations: q=0 gives (1/2)sqrt(1 + 2(J/w)cos t) (ferro line),
// q=pi gives (1/2)sqrt(1 - 2(J/w)cos t) (antiferro line), q=+-pi/2 gives
// (1/2)sqrt(1 - 4(J/w)^2 sin^2 t) (chiral line; note the minus sign).
// Throws std::domain_error if the radicand or denominator is nonpositive.
double critical_g1(double q, double theta, const ModelParams& p);

struct CriticalPoint {
  double g1c;     // smallest critical coupling over the momentum grid
  double q_star;  // the condensing mode
};

// Minimize critical_g1 over the momentum grid q_k = 2*pi*k/N.
CriticalPoint second_order_boundary(double theta, const ModelParams& p);

// Angles where two adjacent condensing modes exchange stability (the
// second-order line is non-smooth and three phases meet). N=4 uses the
// closed form cos(tc+-) = +-(1 - sqrt(1 + 16 J^2/w^2))/(4 J/w); N=3 returns
// the frustration point theta=0 plus arccos(-2J/(sqrt(8J^2+w^2)+w));
// other N are root-found on crossings of critical_g1 to 1e-12.
std::vector<double> triple_points(const ModelParams& p);

// Rescaled uniform order-parameter amplitude of the ferro phase,
//   x = sqrt[ (16 g1^4 / (1 + 2(J/w)cos t)^2 - 1) / (16 g1^2) ],
// exactly 0 at the boundary; std::nullopt below it (not superradiant).
std::optional<double> fsp_amplitude(const ModelParams& p);

// Same with 1 - 2(J/w)cos t: the alternating (antiferro) amplitude.
std::optional<double> afsp_amplitude(const ModelParams& p);

struct CspPatterns {
  double x_amp;  // |x_n|, common to all four sites
  double y_amp;  // |y_n| = 2 (J/w) sin(t) * x_amp
  std::vector<MeanFieldState> patterns;  // the 4 degenerate states
};

// Exact chiral order parameters of the square ring (N=4 only):
// x pattern (a, -a, -a, a) or (a, a, -a, -a) with the matching y pattern
// and global flips. std::nullopt outside the chiral region.
std::optional<CspPatterns> csp_amplitudes_n4(const ModelParams& p);

}  // namespace rabiring
