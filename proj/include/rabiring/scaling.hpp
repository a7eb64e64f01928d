// scaling.hpp - power-law exponents of the softening excitation modes near
// second-order boundaries, fitted on log-spaced samples from both sides.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rabiring/meanfield.hpp"
#include "rabiring/model.hpp"

namespace rabiring {

enum class Side { Below, Above };

std::string to_string(Side s);

struct FitWindow {
  double rel_min = 1e-6;  // relative offsets |g1/g1c - 1| sampled
  double rel_max = 1e-3;
  int n_samples = 20;     // log-spaced
};

struct ScalingFit {
  double theta = 0.0;
  int mode_index = 1;  // 1 = lowest mode, 2 = second-lowest
  Side side = Side::Below;
  double gamma = 0.0;
  double intercept = 0.0;  // log-log fit intercept
  double r_squared = 0.0;
  FitWindow window;
};

struct PowerLawFit {
  double gamma;
  double intercept;
  double r_squared;
};

// Least-squares fit of log(eps) against log(dg).
PowerLawFit power_law_fit(const std::vector<double>& dg,
                          const std::vector<double>& eps);

class FitQualityError : public std::runtime_error {
 public:
  FitQualityError(const std::string& msg, std::vector<double> offsets_,
                  std::vector<double> energies_)
      : std::runtime_error(msg),
        offsets(std::move(offsets_)),
        energies(std::move(energies_)) {}
  std::vector<double> offsets;   // |g1 - g1c| per sample
  std::vector<double> energies;  // eps per sample
};

// Fit eps_{mode_index} ~ |g1 - g1c|^gamma on one side of the boundary at
// the given angle. Below the boundary the samples come from the
// momentum-space dispersion; above they come from the real-space
// Bogoliubov route on warm-started mean-field minima (the chain keeps one
// symmetry branch, so the samples are sequential by design). The pipeline
// always runs on the cavity-ring functional. Throws FitQualityError
// (carrying the raw samples) when r^2 < 0.999.
ScalingFit fit_exponent(const ModelParams& base, double theta, int mode_index,
                        Side side, const FitWindow& window = {},
                        const SeedSpec& seeds = {});

struct ScanExponentEntry {
  double theta = 0.0;
  bool ok = false;
  std::string error;
  std::vector<ScalingFit> fits;  // below and above, mode 1
};

// gamma(theta) for the lowest mode over a grid of angles; per-point
// failures are recorded and the scan continues. Angles must stay at least
// 1e-4 rad away from triple points (use triple_point_exponents there).
std::vector<ScanExponentEntry> scan_exponents(const ModelParams& base,
                                              const std::vector<double>& thetas,
                                              const FitWindow& window = {},
                                              const SeedSpec& seeds = {},
                                              int workers = 1);

// Exponents of both softening modes at a triple point (theta must be set
// to the analytic triple-point value): four fits, modes 1 and 2 from both
// sides. Throws std::runtime_error if fewer than two modes soften there.
std::vector<ScalingFit> triple_point_exponents(const ModelParams& base,
                                               double theta_c,
                                               const FitWindow& window = {},
                                               const SeedSpec& seeds = {});

}  // namespace rabiring
