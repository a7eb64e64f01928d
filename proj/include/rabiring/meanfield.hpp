// meanfield.hpp - the two mean-field energy functionals, their analytic
// derivatives, the multi-start minimizer, phase classification, parameter
// sweeps and first-order boundary location.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabiring/model.hpp"

namespace rabiring {

struct MeanFieldSolution {
  MeanFieldState state;        // canonical representative
  double energy = 0.0;         // units of omega
  double gradient_norm = 0.0;  // inf-norm of the analytic gradient
  double residual_norm = 0.0;  // inf-norm of the saddle-point residuals
  PhaseLabel phase;
  int degeneracy = 1;          // size of the degenerate set found
  std::vector<double> site_lengths;
  std::vector<MeanFieldState> degenerate_states;  // canonical member first
};

// Rescaled mean-field energy of the spin ring: per site
//   -sqrt(1 - x^2 - y^2) - 2 g1^2 x^2
//   + (J/w) cos(t) (x_n x_{n+1} + y_n y_{n+1})
//   + (J/w) sin(t) (x_n y_{n+1} - x_{n+1} y_n),
// in units of omega*S. Throws std::domain_error if any site violates
// x^2 + y^2 < 1.
double energy_lmgr(const MeanFieldState& s, const ModelParams& p);

// Rescaled mean-field energy of the cavity ring in the classical-oscillator
// limit: per site
//   (x^2 + y^2) - (1/2) sqrt(1 + 16 g1^2 x^2)
//   + 2 (J/w) [cos(t) (x_n x_{n+1} + y_n y_{n+1})
//              + sin(t) (y_n x_{n+1} - y_{n+1} x_n)],
// in units of omega. Globally defined.
double energy_qrr(const MeanFieldState& s, const ModelParams& p);

// Dispatch on p.functional.
double energy(const MeanFieldState& s, const ModelParams& p);

// Analytic partial derivatives of the selected functional, laid out as
// [dE/dx_0 .. dE/dx_{N-1}, dE/dy_0 .. dE/dy_{N-1}].
std::vector<double> gradient(const MeanFieldState& s, const ModelParams& p);

// Analytic Hessian, row-major 2N x 2N, same variable order as gradient().
std::vector<double> hessian(const MeanFieldState& s, const ModelParams& p);

// Rescaled left-hand sides of the stationarity conditions of the cavity-ring
// functional, [real parts.., imaginary parts..]; both vanish at minima.
// Identical to gradient()/2 for the QrrCo functional. Throws
// std::invalid_argument for the Lmgr functional.
std::vector<double> saddle_residual(const MeanFieldState& s,
                                    const ModelParams& p);

struct SeedSpec {
  std::uint64_t rng_seed = 42;
  int n_random = 32;            // random starts in the ball of radius
  double random_radius = 0.8;   // `random_radius` in state space
  bool include_templates = true;  // zero state + one wave template per q_k
  double template_amplitude = 0.3;
  std::vector<MeanFieldState> warm_starts;  // extra caller-provided starts
};

struct MinimizeOptions {
  double grad_tol = 1e-10;  // accept a stationary point below this inf-norm
  int max_iterations = 100000;
  double energy_window = 1e-9;  // relative window grouping degenerate minima
};

class MinimizeError : public std::runtime_error {
 public:
  MinimizeError(const std::string& msg, MeanFieldSolution best_found)
      : std::runtime_error(msg), best(std::move(best_found)) {}
  MeanFieldSolution best;
};

class UnclassifiedPhaseError : public std::runtime_error {
 public:
  UnclassifiedPhaseError(const std::string& msg, MeanFieldState s)
      : std::runtime_error(msg), state(std::move(s)) {}
  MeanFieldState state;
};

// Template-match a converged state against the known phases. Teeth of the
// classifier, in order: normal (all amplitudes below threshold), ferro
// (collinear, all sites equal), antiferro (collinear, alternating; even N
// only, except the frustrated collinear pattern of the triangle at theta=0),
// chiral (anything else with a nonzero loop current). Throws
// UnclassifiedPhaseError when no template fits.
PhaseLabel classify_phase(const MeanFieldState& s, const ModelParams& p);

// Signed loop current sum_n (x_n y_{n+1} - x_{n+1} y_n).
double loop_current(const MeanFieldState& s);

// Global minimization by multi-start projected gradient descent with a
// Newton polish. Returns the best minimum with its full degenerate set
// (all distinct minima within the energy window, completed by symmetry
// orbits) and the canonical representative. Throws MinimizeError if no
// start converges.
MeanFieldSolution minimize(const ModelParams& p, const SeedSpec& seeds = {},
                           const MinimizeOptions& opts = {});

// Descend from a single starting state (no multi-start, no orbit
// completion); used for warm-started continuation. Returns the converged
// state; gradient inf-norm written to *grad_norm_out when non-null.
MeanFieldState descend_from(const MeanFieldState& start, const ModelParams& p,
                            const MinimizeOptions& opts = {},
                            double* grad_norm_out = nullptr);

struct GridSpec {
  double theta_min = 0.0;
  double theta_max = M_PI;
  int n_theta = 2;
  double g1_min = 0.4;
  double g1_max = 0.6;
  int n_g1 = 2;
};

struct GridCell {
  double theta = 0.0;
  double g1 = 0.0;
  bool ok = false;
  std::string error;
  PhaseLabel phase;
  MeanFieldState state;  // canonical representative
  double energy = 0.0;
  int degeneracy = 0;
};

// Row-major sweep (theta outer, g1 inner). Cells are solved in waves of
// ascending g1; each cell warm-starts from the converged neighbors of the
// previous wave plus its own fresh multi-start with a per-cell RNG stream,
// so parallel and serial runs produce identical results. Per-cell failures
// are recorded in the cell, the scan continues.
std::vector<GridCell> scan_grid(const ModelParams& base, const GridSpec& grid,
                                const SeedSpec& seeds = {}, int workers = 1);

// Locate the first-order boundary between the two distinct non-normal
// phases found at the bracket endpoints, at fixed g1 (taken from `base`),
// by bisecting on the sign of the phase-restricted energy difference.
// Throws std::invalid_argument if the bracket does not straddle a boundary.
double first_order_boundary(const ModelParams& base, double theta_lo,
                            double theta_hi, double theta_tol = 1e-6,
                            const SeedSpec& seeds = {});

}  // namespace rabiring
