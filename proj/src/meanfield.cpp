#include "rabiring/meanfield.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rabiring/parallel.hpp"

namespace rabiring {

namespace {

// ---- raw-buffer energy/gradient kernels ------------------------------
// The optimizer keeps the state as one contiguous vector v = [x.., y..].

double energy_qrr_raw(const double* x, const double* y, int n,
                      const ModelParams& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const double g2 = p.g1 * p.g1, j = p.j_ratio;
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n;
    e += x[i] * x[i] + y[i] * y[i] - 0.5 * std::sqrt(1.0 + 16.0 * g2 * x[i] * x[i]);
    e += 2.0 * j * (c * (x[i] * x[ip] + y[i] * y[ip]) +
                    s * (y[i] * x[ip] - y[ip] * x[i]));
  }
  return e * p.omega;
}

double energy_lmgr_raw(const double* x, const double* y, int n,
                       const ModelParams& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const double g2 = p.g1 * p.g1, j = p.j_ratio;
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n;
    double r2 = 1.0 - x[i] * x[i] - y[i] * y[i];
    if (r2 <= 0.0)
      throw std::domain_error("energy_lmgr: x^2 + y^2 >= 1 at a site");
    e += -std::sqrt(r2) - 2.0 * g2 * x[i] * x[i];
    e += j * (c * (x[i] * x[ip] + y[i] * y[ip]) +
              s * (x[i] * y[ip] - x[ip] * y[i]));
  }
  return e * p.omega;
}

double energy_raw(const double* v, int n, const ModelParams& p) {
  return p.functional == EnergyFunctional::QrrCo
             ? energy_qrr_raw(v, v + n, n, p)
             : energy_lmgr_raw(v, v + n, n, p);
}

void gradient_qrr_raw(const double* x, const double* y, int n,
                      const ModelParams& p, double* gx, double* gy) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const double g2 = p.g1 * p.g1, j = p.j_ratio;
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    double root = std::sqrt(1.0 + 16.0 * g2 * x[i] * x[i]);
    gx[i] = 2.0 * x[i] - 8.0 * g2 * x[i] / root +
            2.0 * j * (c * (x[ip] + x[im]) + s * (y[im] - y[ip]));
    gy[i] = 2.0 * y[i] + 2.0 * j * (c * (y[ip] + y[im]) + s * (x[ip] - x[im]));
    gx[i] *= p.omega;
    gy[i] *= p.omega;
  }
}

void gradient_lmgr_raw(const double* x, const double* y, int n,
                       const ModelParams& p, double* gx, double* gy) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const double g2 = p.g1 * p.g1, j = p.j_ratio;
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    double r2 = 1.0 - x[i] * x[i] - y[i] * y[i];
    if (r2 <= 0.0)
      throw std::domain_error("gradient: x^2 + y^2 >= 1 at a site");
    double inv = 1.0 / std::sqrt(r2);
    gx[i] = x[i] * inv - 4.0 * g2 * x[i] +
            j * (c * (x[ip] + x[im]) + s * (y[ip] - y[im]));
    gy[i] = y[i] * inv + j * (c * (y[ip] + y[im]) + s * (x[im] - x[ip]));
    gx[i] *= p.omega;
    gy[i] *= p.omega;
  }
}

void gradient_raw(const double* v, int n, const ModelParams& p, double* g) {
  if (p.functional == EnergyFunctional::QrrCo)
    gradient_qrr_raw(v, v + n, n, p, g, g + n);
  else
    gradient_lmgr_raw(v, v + n, n, p, g, g + n);
}

void hessian_raw(const double* v, int n, const ModelParams& p, double* h) {
  const double* x = v;
  const double* y = v + n;
  const int m = 2 * n;
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  const double g2 = p.g1 * p.g1, j = p.j_ratio;
  std::fill(h, h + m * m, 0.0);
  auto at = [&](int r, int col) -> double& { return h[r * m + col]; };
  if (p.functional == EnergyFunctional::QrrCo) {
    for (int i = 0; i < n; ++i) {
      int ip = (i + 1) % n, im = (i + n - 1) % n;
      double u = 1.0 + 16.0 * g2 * x[i] * x[i];
      at(i, i) = 2.0 - 8.0 * g2 / (u * std::sqrt(u));
      at(n + i, n + i) = 2.0;
      at(i, ip) += 2.0 * j * c;
      at(i, im) += 2.0 * j * c;
      at(n + i, n + ip) += 2.0 * j * c;
      at(n + i, n + im) += 2.0 * j * c;
      at(i, n + ip) += -2.0 * j * s;
      at(i, n + im) += 2.0 * j * s;
      at(n + i, ip) += 2.0 * j * s;
      at(n + i, im) += -2.0 * j * s;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      int ip = (i + 1) % n, im = (i + n - 1) % n;
      double r2 = 1.0 - x[i] * x[i] - y[i] * y[i];
      if (r2 <= 0.0)
        throw std::domain_error("hessian: x^2 + y^2 >= 1 at a site");
      double r3 = r2 * std::sqrt(r2);
      at(i, i) = (1.0 - y[i] * y[i]) / r3 - 4.0 * g2;
      at(n + i, n + i) = (1.0 - x[i] * x[i]) / r3;
      at(i, n + i) += x[i] * y[i] / r3;
      at(n + i, i) += x[i] * y[i] / r3;
      at(i, ip) += j * c;
      at(i, im) += j * c;
      at(n + i, n + ip) += j * c;
      at(n + i, n + im) += j * c;
      at(i, n + ip) += j * s;
      at(i, n + im) += -j * s;
      at(n + i, ip) += -j * s;
      at(n + i, im) += j * s;
    }
  }
  for (int k = 0; k < m * m; ++k) h[k] *= p.omega;
}

double inf_norm(const std::vector<double>& g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

// Keep every site strictly inside the unit disc (Lmgr constraint). The
// minimum is interior for finite g1; this only guards transients.
void project_lmgr(std::vector<double>& v, int n) {
  for (int i = 0; i < n; ++i) {
    double r2 = v[i] * v[i] + v[n + i] * v[n + i];
    if (r2 >= 1.0 - 1e-12) {
      double scale = (1.0 - 1e-9) / std::sqrt(r2);
      v[i] *= scale;
      v[n + i] *= scale;
    }
  }
}

// ---- local descent: backtracking gradient steps + Newton polish -------

struct DescentResult {
  std::vector<double> v;
  double grad_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
};

DescentResult descend_raw(std::vector<double> v, const ModelParams& p,
                          const MinimizeOptions& opts) {
  const int n = p.n_sites, m = 2 * n;
  const bool lmgr = p.functional == EnergyFunctional::Lmgr;
  std::vector<double> g(m), trial(m), gt(m);
  if (lmgr) project_lmgr(v, n);

  auto grad_norm_at = [&](const std::vector<double>& w, std::vector<double>& gw) {
    gradient_raw(w.data(), n, p, gw.data());
    return inf_norm(gw);
  };

  double gn = grad_norm_at(v, g);
  int iters_left = opts.max_iterations;

  for (int round = 0; round < 4 && gn > opts.grad_tol; ++round) {
    // gradient descent with Armijo backtracking
    double gd_tol = std::max(opts.grad_tol, 1e-6 / std::pow(10.0, round));
    int budget = std::min(iters_left, 4000 * (round + 1));
    double step = 0.1;
    double e = energy_raw(v.data(), n, p);
    while (budget-- > 0 && gn > gd_tol) {
      double gsq = 0.0;
      for (double gi : g) gsq += gi * gi;
      bool moved = false;
      while (step > 1e-16) {
        for (int k = 0; k < m; ++k) trial[k] = v[k] - step * g[k];
        if (lmgr) project_lmgr(trial, n);
        double et = energy_raw(trial.data(), n, p);
        if (et < e - 1e-4 * step * gsq) {
          v.swap(trial);
          e = et;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      --iters_left;
      if (!moved) break;  // stuck at a stationary point at machine precision
      step = std::min(step * 1.3, 1.0);
      gn = grad_norm_at(v, g);
    }

    // Newton polish on the stationarity system; quadratic convergence takes
    // over where plain descent crawls along nearly flat directions.
    std::vector<double> h(m * m);
    for (int it = 0; it < 60 && gn > 1e-15 && iters_left > 0; ++it) {
      --iters_left;
      hessian_raw(v.data(), n, p, h.data());
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>> H(h.data(), m, m);
      Eigen::Map<Eigen::VectorXd> G(g.data(), m);
      Eigen::VectorXd d = H.partialPivLu().solve(-G);
      if (!d.allFinite()) break;
      double alpha = 1.0;
      bool improved = false;
      while (alpha > 1e-4) {
        for (int k = 0; k < m; ++k) trial[k] = v[k] + alpha * d[k];
        if (lmgr) project_lmgr(trial, n);
        double gnt;
        try {
          gnt = grad_norm_at(trial, gt);
        } catch (const std::domain_error&) {
          alpha *= 0.5;
          continue;
        }
        if (gnt < gn) {
          v.swap(trial);
          g.swap(gt);
          gn = gnt;
          improved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!improved) break;
    }
    if (iters_left <= 0) break;
  }

  DescentResult r;
  r.v = std::move(v);
  r.grad_norm = gn;
  r.converged = gn <= opts.grad_tol;
  return r;
}

std::vector<double> pack(const MeanFieldState& s) {
  std::vector<double> v(2 * s.n());
  std::copy(s.x.begin(), s.x.end(), v.begin());
  std::copy(s.y.begin(), s.y.end(), v.begin() + s.n());
  return v;
}

MeanFieldState unpack(const std::vector<double>& v, int n) {
  return MeanFieldState(std::vector<double>(v.begin(), v.begin() + n),
                        std::vector<double>(v.begin() + n, v.end()));
}

// ---- deterministic RNG (engine output only; no libstdc++ distributions,
// so streams are identical across standard libraries) -------------------

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // in [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double gaussian() {
    double u1 = std::max(uniform(), 0x1.0p-53);
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  SplitMix64 rng(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^
                 (b * 0xbf58476d1ce4e5b9ULL));
  return rng.next();
}

std::vector<std::vector<double>> build_starts(const ModelParams& p,
                                              const SeedSpec& seeds) {
  const int n = p.n_sites, m = 2 * n;
  std::vector<std::vector<double>> starts;
  for (const auto& w : seeds.warm_starts) {
    if (w.n() == n) starts.push_back(pack(w));
  }
  if (seeds.include_templates) {
    starts.emplace_back(m, 0.0);  // the normal-phase candidate
    MomentumGrid grid = MomentumGrid::make(n);
    for (double q : grid.q_values) {
      std::vector<double> v(m);
      for (int i = 0; i < n; ++i) {
        v[i] = seeds.template_amplitude * std::cos(q * i);
        v[n + i] = seeds.template_amplitude * std::sin(q * i);
      }
      starts.push_back(std::move(v));
    }
  }
  SplitMix64 rng(seeds.rng_seed);
  for (int k = 0; k < seeds.n_random; ++k) {
    std::vector<double> v(m);
    double norm2 = 0.0;
    for (int i = 0; i < m; ++i) {
      v[i] = rng.gaussian();
      norm2 += v[i] * v[i];
    }
    double radius =
        seeds.random_radius * std::pow(rng.uniform(), 1.0 / m);
    double scale = norm2 > 0 ? radius / std::sqrt(norm2) : 0.0;
    for (double& vi : v) vi *= scale;
    starts.push_back(std::move(v));
  }
  return starts;
}

}  // namespace

// ---- public energy / derivative API -----------------------------------

double energy_lmgr(const MeanFieldState& s, const ModelParams& p) {
  return energy_lmgr_raw(s.x.data(), s.y.data(), s.n(), p);
}

double energy_qrr(const MeanFieldState& s, const ModelParams& p) {
  return energy_qrr_raw(s.x.data(), s.y.data(), s.n(), p);
}

double energy(const MeanFieldState& s, const ModelParams& p) {
  return p.functional == EnergyFunctional::QrrCo ? energy_qrr(s, p)
                                                 : energy_lmgr(s, p);
}

std::vector<double> gradient(const MeanFieldState& s, const ModelParams& p) {
  std::vector<double> g(2 * s.n());
  if (p.functional == EnergyFunctional::QrrCo)
    gradient_qrr_raw(s.x.data(), s.y.data(), s.n(), p, g.data(),
                     g.data() + s.n());
  else
    gradient_lmgr_raw(s.x.data(), s.y.data(), s.n(), p, g.data(),
                      g.data() + s.n());
  return g;
}

std::vector<double> hessian(const MeanFieldState& s, const ModelParams& p) {
  std::vector<double> h(4 * s.n() * s.n());
  std::vector<double> v = pack(s);
  hessian_raw(v.data(), s.n(), p, h.data());
  return h;
}

std::vector<double> saddle_residual(const MeanFieldState& s,
                                    const ModelParams& p) {
  if (p.functional != EnergyFunctional::QrrCo)
    throw std::invalid_argument(
        "saddle_residual: defined for the QrrCo functional only");
  const int n = s.n();
  const double c = std::cos(p.theta), sn = std::sin(p.theta);
  const double g2 = p.g1 * p.g1, j = p.j_ratio;
  std::vector<double> r(2 * n);
  for (int i = 0; i < n; ++i) {
    int ip = (i + 1) % n, im = (i + n - 1) % n;
    double root = std::sqrt(1.0 + 16.0 * g2 * s.x[i] * s.x[i]);
    // real part of the off-diagonal condition, rescaled
    r[i] = s.x[i] - 4.0 * g2 * s.x[i] / root +
           j * (c * (s.x[ip] + s.x[im]) + sn * (s.y[im] - s.y[ip]));
    // imaginary part
    r[n + i] =
        s.y[i] + j * (sn * (s.x[ip] - s.x[im]) + c * (s.y[ip] + s.y[im]));
  }
  return r;
}

double loop_current(const MeanFieldState& s) {
  double cur = 0.0;
  for (int i = 0; i < s.n(); ++i) {
    int ip = (i + 1) % s.n();
    cur += s.x[i] * s.y[ip] - s.x[ip] * s.y[i];
  }
  return cur;
}

PhaseLabel classify_phase(const MeanFieldState& s, const ModelParams& p) {
  const int n = s.n();
  const double amp = s.max_site_length();
  if (amp < kNormalAmplitudeThreshold) return {PhaseKind::Normal, 0};

  const double tol = 1e-5 * amp;
  bool collinear = true;
  for (double yi : s.y)
    if (std::abs(yi) > tol) collinear = false;

  if (collinear) {
    bool uniform = true, alternating = true;
    for (int i = 0; i < n; ++i) {
      int ip = (i + 1) % n;
      if (std::abs(s.x[i] - s.x[ip]) > tol) uniform = false;
      if (std::abs(s.x[i] + s.x[ip]) > tol) alternating = false;
    }
    if (uniform) return {PhaseKind::Ferro, 0};
    if (alternating && n % 2 == 0) return {PhaseKind::Antiferro, 0};
    // Frustrated collinear pattern of the triangle at theta = 0: two sites
    // aligned with equal amplitude, the third anti-aligned.
    if (n == 3 && std::abs(std::sin(p.theta)) < 1e-9) {
      for (int odd = 0; odd < 3; ++odd) {
        int a = (odd + 1) % 3, b = (odd + 2) % 3;
        if (std::abs(s.x[a] - s.x[b]) <= tol &&
            s.x[odd] * s.x[a] < 0.0)
          return {PhaseKind::Antiferro, 0};
      }
    }
    throw UnclassifiedPhaseError(
        "classify_phase: collinear state matches no template", s);
  }

  double cur = loop_current(s);
  if (std::abs(cur) <= 1e-8 * amp * amp)
    throw UnclassifiedPhaseError(
        "classify_phase: non-collinear state with vanishing loop current", s);
  return {PhaseKind::Chiral, cur > 0 ? 1 : -1};
}

MeanFieldState descend_from(const MeanFieldState& start, const ModelParams& p,
                            const MinimizeOptions& opts,
                            double* grad_norm_out) {
  if (start.n() != p.n_sites)
    throw std::invalid_argument("descend_from: state size != n_sites");
  DescentResult r = descend_raw(pack(start), p, opts);
  if (grad_norm_out) *grad_norm_out = r.grad_norm;
  return unpack(r.v, p.n_sites);
}

MeanFieldSolution minimize(const ModelParams& p, const SeedSpec& seeds,
                           const MinimizeOptions& opts) {
  const int n = p.n_sites;
  auto starts = build_starts(p, seeds);

  struct Found {
    std::vector<double> v;
    double energy;
  };
  std::vector<Found> found;
  double best_energy = std::numeric_limits<double>::infinity();
  double best_failed_gn = std::numeric_limits<double>::infinity();
  std::vector<double> best_failed;

  for (auto& v0 : starts) {
    DescentResult r = descend_raw(std::move(v0), p, opts);
    if (!r.converged) {
      if (r.grad_norm < best_failed_gn) {
        best_failed_gn = r.grad_norm;
        best_failed = r.v;
      }
      continue;
    }
    double e = energy_raw(r.v.data(), n, p);
    best_energy = std::min(best_energy, e);
    found.push_back({std::move(r.v), e});
  }

  if (found.empty()) {
    MeanFieldSolution best;
    if (!best_failed.empty()) {
      best.state = unpack(best_failed, n);
      best.gradient_norm = best_failed_gn;
      best.energy = energy_raw(best_failed.data(), n, p);
    }
    throw MinimizeError("minimize: no start converged within max_iterations",
                        std::move(best));
  }

  // Degenerate set: every distinct minimum within the energy window of the
  // best, completed by symmetry orbits (the energy is exactly invariant
  // under global sign flip and cyclic rotation).
  const double window =
      opts.energy_window * std::max(1.0, std::abs(best_energy));
  const double dedup_tol = 1e-6;
  std::vector<MeanFieldState> degenerate;
  auto add_unique = [&](const MeanFieldState& s) {
    for (const auto& d : degenerate)
      if (states_close(d, s, dedup_tol)) return;
    degenerate.push_back(s);
  };
  for (const auto& f : found) {
    if (f.energy > best_energy + window) continue;
    MeanFieldState s = unpack(f.v, n);
    for (const auto& o : symmetry_orbit(s, p, dedup_tol)) add_unique(o);
  }

  std::size_t canon = canonical_index(degenerate);
  std::swap(degenerate[0], degenerate[canon]);

  if (p.theta_mirrored)  // map back to the caller's original theta
    for (auto& s : degenerate) s = mirrored_y(s);

  MeanFieldSolution sol;
  sol.state = degenerate[0];
  sol.energy = best_energy;
  sol.degeneracy = static_cast<int>(degenerate.size());
  sol.degenerate_states = std::move(degenerate);
  sol.site_lengths = sol.state.site_lengths();
  // Norms are mirror-invariant; evaluate at the folded-theta image.
  MeanFieldState eval = p.theta_mirrored ? mirrored_y(sol.state) : sol.state;
  sol.gradient_norm = inf_norm(gradient(eval, p));
  sol.residual_norm = p.functional == EnergyFunctional::QrrCo
                          ? inf_norm(saddle_residual(eval, p))
                          : 0.5 * sol.gradient_norm;
  PhaseLabel label = classify_phase(sol.state, p);
  if (label.kind == PhaseKind::Normal && sol.degeneracy != 1) {
    // collapse the spurious near-zero duplicates the window may have kept
    sol.degeneracy = 1;
    sol.degenerate_states.resize(1);
  }
  sol.phase = label;
  return sol;
}

std::vector<GridCell> scan_grid(const ModelParams& base, const GridSpec& grid,
                                const SeedSpec& seeds, int workers) {
  if (grid.n_theta < 2 || grid.n_g1 < 2)
    throw std::invalid_argument("scan_grid: resolutions must be >= 2");
  if (!(grid.theta_max >= grid.theta_min) || !(grid.g1_max >= grid.g1_min))
    throw std::invalid_argument("scan_grid: ranges must be well-ordered");

  auto theta_at = [&](int i) {
    return grid.theta_min +
           (grid.theta_max - grid.theta_min) * i / (grid.n_theta - 1);
  };
  auto g1_at = [&](int k) {
    return grid.g1_min + (grid.g1_max - grid.g1_min) * k / (grid.n_g1 - 1);
  };

  std::vector<GridCell> cells(
      static_cast<std::size_t>(grid.n_theta) * grid.n_g1);

  // Waves of ascending g1: each cell may warm-start from the converged
  // neighbors of the already-finished previous wave, so the result is
  // independent of how cells within a wave are scheduled.
  for (int k = 0; k < grid.n_g1; ++k) {
    parallel_for(grid.n_theta, workers, [&](std::size_t ti) {
      int i = static_cast<int>(ti);
      GridCell& cell = cells[static_cast<std::size_t>(i) * grid.n_g1 + k];
      cell.theta = theta_at(i);
      cell.g1 = g1_at(k);
      SeedSpec cell_seeds = seeds;
      cell_seeds.rng_seed = mix_seed(seeds.rng_seed, ti, k);
      if (k > 0) {
        for (int di = -1; di <= 1; ++di) {
          int pi = i + di;
          if (pi < 0 || pi >= grid.n_theta) continue;
          const GridCell& prev =
              cells[static_cast<std::size_t>(pi) * grid.n_g1 + (k - 1)];
          if (prev.ok) cell_seeds.warm_starts.push_back(prev.state);
        }
      }
      try {
        ModelParams p = base.with_theta(cell.theta).with_g1(cell.g1);
        MeanFieldSolution sol = minimize(p, cell_seeds);
        cell.ok = true;
        cell.phase = sol.phase;
        cell.state = sol.state;
        cell.energy = sol.energy;
        cell.degeneracy = sol.degeneracy;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    });
  }
  return cells;
}

double first_order_boundary(const ModelParams& base, double theta_lo,
                            double theta_hi, double theta_tol,
                            const SeedSpec& seeds) {
  if (!(theta_hi > theta_lo))
    throw std::invalid_argument("first_order_boundary: bad bracket");

  MeanFieldSolution lo_sol = minimize(base.with_theta(theta_lo), seeds);
  MeanFieldSolution hi_sol = minimize(base.with_theta(theta_hi), seeds);
  if (lo_sol.phase.kind == PhaseKind::Normal ||
      hi_sol.phase.kind == PhaseKind::Normal ||
      lo_sol.phase.kind == hi_sol.phase.kind)
    throw std::invalid_argument(
        "first_order_boundary: bracket endpoints must classify into two "
        "distinct non-normal phases (got " +
        to_string(lo_sol.phase.kind) + " / " + to_string(hi_sol.phase.kind) +
        ")");

  // Track one representative state per competing phase; each evaluation
  // continues from the tracked state closest in theta to keep the branch.
  struct Branch {
    PhaseKind kind;
    std::vector<std::pair<double, MeanFieldState>> history;
    double energy_at(double theta, const ModelParams& base_params) {
      ModelParams p = base_params.with_theta(theta);
      double best_d = std::numeric_limits<double>::infinity();
      const MeanFieldState* seed = nullptr;
      for (const auto& [t, s] : history) {
        double d = std::abs(t - theta);
        if (d < best_d) {
          best_d = d;
          seed = &s;
        }
      }
      MeanFieldState s = descend_from(*seed, p);
      PhaseLabel label;
      try {
        label = classify_phase(s, p);
      } catch (const UnclassifiedPhaseError&) {
        return std::numeric_limits<double>::infinity();
      }
      if (label.kind != kind)  // phase lost metastability here
        return std::numeric_limits<double>::infinity();
      history.emplace_back(theta, s);
      return energy(s, p);
    }
  };
  Branch lo_branch{lo_sol.phase.kind, {{theta_lo, lo_sol.state}}};
  Branch hi_branch{hi_sol.phase.kind, {{theta_hi, hi_sol.state}}};

  double lo = theta_lo, hi = theta_hi;
  while (hi - lo > theta_tol) {
    double mid = 0.5 * (lo + hi);
    double e_lo_phase = lo_branch.energy_at(mid, base);
    double e_hi_phase = hi_branch.energy_at(mid, base);
    if (std::isinf(e_lo_phase) && std::isinf(e_hi_phase))
      throw MinimizeError("first_order_boundary: both branches lost at theta=" +
                              std::to_string(mid),
                          MeanFieldSolution{});
    if (e_lo_phase < e_hi_phase)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rabiring
