// model.hpp - shared parameter and state types for the cavity-ring /
// spin-ring mean-field solver: rescaling conventions, theta folding,
// symmetry operations and the momentum grid.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabiring {

// Which mean-field energy functional a computation uses. QrrCo is the
// cavity-ring functional in the classical-oscillator limit, expressed in
// rescaled order parameters so the atomic splitting never appears; Lmgr is
// the classical-spin functional of the coupled large-spin ring.
enum class EnergyFunctional { QrrCo, Lmgr };

std::string to_string(EnergyFunctional f);

struct ThetaFold {
  double theta;    // folded into [0, pi]
  bool mirrored;   // true if solutions must be mapped back via y_n -> -y_n
};

// Fold an arbitrary finite hopping phase into the canonical domain [0, pi]
// using 2*pi periodicity and the theta -> -theta mirror symmetry.
// Throws std::invalid_argument on non-finite input.
ThetaFold canonicalize_theta(double theta);

struct ModelParams {
  int n_sites = 4;          // ring size N >= 3
  double g1 = 0.0;          // dimensionless coupling g/sqrt(Delta*omega) >= 0
  double j_ratio = 0.05;    // hopping J/omega >= 0
  double theta = 0.0;       // hopping phase, canonical domain [0, pi]
  EnergyFunctional functional = EnergyFunctional::QrrCo;
  double omega = 1.0;       // energy unit; outputs are in units of omega
  bool theta_mirrored = false;  // set when the input theta was folded

  // Validates and canonicalizes. theta outside [0, pi] is folded and the
  // mirror flag recorded. j_ratio above 0.2 leaves the weak-hopping
  // validity regime of the effective quadratic model and emits a warning
  // on stderr.
  static ModelParams make(int n_sites, double g1, double j_ratio, double theta,
                          EnergyFunctional functional = EnergyFunctional::QrrCo,
                          double omega = 1.0);

  ModelParams with_g1(double new_g1) const;
  ModelParams with_theta(double new_theta) const;

  double hopping() const { return j_ratio * omega; }  // J in energy units
};

// Per-site real order-parameter pairs (x_n, y_n). For the QrrCo functional
// these are the cavity displacements A_n, B_n rescaled by sqrt(omega/Delta);
// for Lmgr they are the transverse spin components <S^x>/S, <S^y>/S.
// Periodic indexing: site N == site 0.
struct MeanFieldState {
  std::vector<double> x;
  std::vector<double> y;

  MeanFieldState() = default;
  MeanFieldState(std::vector<double> x_, std::vector<double> y_);
  static MeanFieldState zero(int n);

  int n() const { return static_cast<int>(x.size()); }
  double site_length(int i) const;
  double max_site_length() const;
  std::vector<double> site_lengths() const;
};

MeanFieldState rotated(const MeanFieldState& s, int shift);
MeanFieldState negated(const MeanFieldState& s);
MeanFieldState mirrored_y(const MeanFieldState& s);
bool states_close(const MeanFieldState& a, const MeanFieldState& b, double tol);

enum class PhaseKind { Normal, Ferro, Antiferro, Chiral };

std::string to_string(PhaseKind k);

struct PhaseLabel {
  PhaseKind kind = PhaseKind::Normal;
  int chirality_sign = 0;  // sign of the loop current; 0 for non-chiral phases
};

// Amplitudes below this are treated as zero when labelling the normal phase.
inline constexpr double kNormalAmplitudeThreshold = 1e-6;

// q_k = 2*pi*k/N for k = 0..N-1, mapped to (-pi, pi].
struct MomentumGrid {
  std::vector<double> q_values;
  static MomentumGrid make(int n_sites);
};

// All states generated from s by the global sign flip and cyclic site
// rotations (group of order 2N), duplicates removed within tol.
std::vector<MeanFieldState> symmetry_orbit(const MeanFieldState& s,
                                           const ModelParams& params,
                                           double tol = 1e-9);

// Deterministic representative of a degenerate set: the member maximizing
// x_0, ties broken by y_0 then x_1 (and so on through the remaining
// components). Returns the index into `states`.
std::size_t canonical_index(const std::vector<MeanFieldState>& states,
                            double tie_tol = 1e-9);

}  // namespace rabiring
