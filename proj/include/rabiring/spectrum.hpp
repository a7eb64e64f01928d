// spectrum.hpp - excitation spectrum of the effective quadratic boson
// model by two routes: momentum-space squeezing (uniform phases) and
// real-space Bogoliubov diagonalization of the 2N x 2N matrix Lambda*M
// (valid everywhere, including site-dependent backgrounds).
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

#include "rabiring/model.hpp"

namespace rabiring {

// Per-site coefficients of the effective quadratic Hamiltonian around a
// mean-field state: kappa_n = g1^2 / (1 + 16 g1^2 x_n^2)^{3/2} (units of
// omega) and the renormalized-splitting ratio sqrt(1 + 16 g1^2 x_n^2).
struct EffectiveCoefficients {
  std::vector<double> kappa;
  std::vector<double> delta_ratio;
  bool uniform = false;  // all kappa_n equal within 1e-10
};

EffectiveCoefficients effective_coefficients(const MeanFieldState& s,
                                             const ModelParams& p);

// Normal-phase excitation energy
//   eps_q = (1/2) [w_q - w_{-q} + sqrt((w_q + w_{-q})^2 - 16 g1^4 w^2)],
//   w_q = w - 2 g1^2 w + 2 J cos(theta - q).
// Throws std::domain_error when the radicand is negative (mode q unstable).
double dispersion_normal(double q, const ModelParams& p);

// Two-mode squeezing parameter that removes the anomalous coupling of the
// (q, -q) pair: r_q = (1/8) log[(w_q + w_{-q} + 4 g1^2 w) /
// (w_q + w_{-q} - 4 g1^2 w)]. Throws std::domain_error on a nonpositive
// log argument.
double squeeze_parameter(double q, const ModelParams& p);

// Same dispersion with g1^2 w replaced by the uniform kappa*w of a
// superradiant background. Requires site-uniform coefficients; throws
// std::invalid_argument otherwise (use excitation_energies instead).
double dispersion_superradiant(double q, const EffectiveCoefficients& coeffs,
                               const ModelParams& p);

struct BogoliubovMatrix {
  Eigen::MatrixXcd m;       // 2N x 2N Hermitian coefficient matrix
  Eigen::VectorXd metric;   // diagonal of Lambda = diag(I_N, -I_N)
};

// Coefficient matrix of the quadratic form H = alpha M alpha^dagger with
// alpha = (a_1..a_N, a_1^dag..a_N^dag): particle-block diagonal
// w/2 - kappa_n w, hopping J e^{-+i theta}/2, conjugate pattern in the hole
// block, anomalous -kappa_n w on the block diagonal.
BogoliubovMatrix build_bogoliubov_matrix(const MeanFieldState& s,
                                         const ModelParams& p);

struct BogoliubovSpectrum {
  std::vector<double> energies;  // positive branch, ascending, units of omega
  bool stable = false;           // all eigenvalues real within tolerance
  double max_imag = 0.0;         // largest imaginary residue (energy scale)
};

class PairingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Positive excitation branch from the eigenvalues of Lambda*M. The overall
// scale is fixed so the normal-phase spectrum reproduces dispersion_normal
// (the quadratic-form convention makes eig(Lambda*M) = eps/2; the J=0
// normal-phase gap w*sqrt(1-4g1^2) pins the factor, asserted in tests).
// Throws PairingError if the +-eps pairing fails beyond 1e-8.
BogoliubovSpectrum excitation_energies(const MeanFieldState& s,
                                       const ModelParams& p);

}  // namespace rabiring
