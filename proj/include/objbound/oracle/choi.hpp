#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/oracle/channels.hpp"
#include "objbound/oracle/linalg.hpp"
#include "objbound/oracle/quantum.hpp"
#include "objbound/oracle/rng.hpp"
#include "objbound/spectrum.hpp"

namespace objbound::oracle {

/// The first n levels of a spectrum with c_f renormalised over them.
struct Truncation {
  std::vector<double> levels;
  double c_f = 0.0;

  std::size_t dim() const noexcept { return levels.size(); }

  /// eps_d over the truncated levels (zero once d reaches the dimension).
  double epsilon(std::size_t d) const {
    double tail = 0.0;
    for (std::size_t k = d; k < levels.size(); ++k) tail += 1.0 / levels[k];
    return c_f * std::sqrt(tail);
  }

  /// sigma in bits of p_k = c_f^2 / f_k.
  double sigma_bits() const {
    double s = 0.0;
    for (double f : levels) {
      const double p = c_f * c_f / f;
      s -= p * std::log2(p);
    }
    return s;
  }

  double energy(const RealVector& populations) const {
    double e = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) e += levels[k] * populations(static_cast<Eigen::Index>(k));
    return e;
  }
};

inline Truncation truncate(const Spectrum& spec, std::size_t n) {
  if (n == 0) throw std::invalid_argument("truncate: dimension must be positive");
  if (spec.is_finite() && n > spec.level_count()) {
    throw DimensionMismatch("truncate: spectrum has " + std::to_string(spec.level_count()) + " levels, channel needs " +
                            std::to_string(n));
  }
  Truncation t;
  t.levels = spec.truncated_levels(n);
  double s = 0.0;
  for (double f : t.levels) s += 1.0 / f;
  t.c_f = 1.0 / std::sqrt(s);
  return t;
}

/// |phi> = c_f sum_k f_k^{-1/2} |k>|k>, index a * n + b.
inline Vector phi_vector(const Truncation& t) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  Vector v = Vector::Zero(n * n);
  for (Eigen::Index k = 0; k < n; ++k) v(k * n + k) = t.c_f / std::sqrt(t.levels[static_cast<std::size_t>(k)]);
  return v;
}

struct FChoiState {
  Truncation truncation;
  std::size_t dim_A = 0;
  std::size_t dim_B = 0;
  DensityOperator state;
  double marginal_error = 0.0;  ///< max |Tr_B state - diag(c_f^2 / f)|
};

/// (id_A (x) Lambda)|phi><phi| with the spectrum truncated to the channel input.
inline FChoiState f_choi(const KrausChannel& ch, const Spectrum& spec) {
  auto t = truncate(spec, ch.dim_in());
  const std::size_t n = ch.dim_in();
  DensityOperator rho(ch.apply_second_pure(phi_vector(t), n));
  const Matrix marginal = trace_second(rho.matrix(), n, ch.dim_out());
  Matrix expected = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    expected(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = t.c_f * t.c_f / t.levels[k];
  }
  const double err = (marginal - expected).cwiseAbs().maxCoeff();
  if (err > kInvariantTolerance) throw InvariantViolation("f_choi: A marginal differs from diag(c_f^2/f)");
  return FChoiState{std::move(t), n, ch.dim_out(), std::move(rho), err};
}

/// (Pi_d (x) I) X (Pi_d (x) I) with Pi_d the projector on the first d levels of A.
inline Matrix truncate_reference(const Matrix& x, std::size_t dim_a, std::size_t dim_b, std::size_t d) {
  Matrix out = x;
  const auto db = static_cast<Eigen::Index>(dim_b);
  const auto cut = static_cast<Eigen::Index>(std::min(d, dim_a)) * db;
  const auto total = static_cast<Eigen::Index>(dim_a) * db;
  out.bottomRows(total - cut).setZero();
  out.rightCols(total - cut).setZero();
  return out;
}

struct CheckResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs
  bool pass = false;
};

inline CheckResult make_check(double lhs, double rhs, double tol = kInvariantTolerance) {
  return CheckResult{lhs, rhs, rhs - lhs, lhs <= rhs + tol};
}

/// ||rho - rho_d||_1 <= 2 eps_d for rho = J_f(ch).
inline CheckResult truncation_check(const KrausChannel& ch, const Spectrum& spec, std::size_t d) {
  if (d < 1 || d > ch.dim_in()) throw std::invalid_argument("truncation_check: need 1 <= d <= dim_in");
  const auto choi = f_choi(ch, spec);
  const Matrix& rho = choi.state.matrix();
  const double lhs = trace_norm(rho - truncate_reference(rho, choi.dim_A, choi.dim_B, d));
  return make_check(lhs, 2.0 * choi.truncation.epsilon(d));
}

/// ||(id (x) (ch0 - ch1))[psi]||_1 for a pure input on R (x) A'.
inline double output_distance(const KrausChannel& ch0, const KrausChannel& ch1, const Vector& psi, std::size_t dim_r) {
  return trace_norm(ch0.apply_second_pure(psi, dim_r) - ch1.apply_second_pure(psi, dim_r));
}

/// Mean energy of the A' marginal of psi on R (x) A'.
inline double input_energy(const Vector& psi, const Truncation& t, std::size_t dim_r) {
  const auto n = static_cast<Eigen::Index>(t.dim());
  double e = 0.0;
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(dim_r); ++r) {
    for (Eigen::Index a = 0; a < n; ++a) e += t.levels[static_cast<std::size_t>(a)] * std::norm(psi(r * n + a));
  }
  return e;
}

struct DiamondLowerBound {
  double value = 0.0;
  std::size_t admissible = 0;  ///< inputs that met the energy constraint
  std::size_t sampled = 0;
};

/// Lower bound on the energy-constrained diamond distance from pure inputs
/// with an ancilla as large as the input. Deterministic witnesses (|kk> for
/// admissible levels and geometrically damped copies of |phi>) are always
/// tried; Haar-random inputs violating the energy cap are rejected.
inline DiamondLowerBound sampled_diamond_lower_detail(const KrausChannel& ch0, const KrausChannel& ch1,
                                                      const Spectrum& spec, double E, std::size_t samples,
                                                      std::uint64_t seed, std::uint64_t stream = 0) {
  if (ch0.dim_in() != ch1.dim_in() || ch0.dim_out() != ch1.dim_out()) {
    throw DimensionMismatch("sampled_diamond_lower: channels differ in shape");
  }
  const auto t = truncate(spec, ch0.dim_in());
  const std::size_t n = t.dim();
  const auto ni = static_cast<Eigen::Index>(n);
  if (E < t.levels.front()) throw EnergyTooLow("sampled_diamond_lower: E below the ground energy, no admissible input");

  DiamondLowerBound out;
  auto consider = [&](const Vector& psi) {
    ++out.sampled;
    if (input_energy(psi, t, n) > E * (1.0 + 1e-12)) return;
    ++out.admissible;
    out.value = std::max(out.value, output_distance(ch0, ch1, psi, n));
  };

  for (Eigen::Index k = 0; k < ni; ++k) {
    Vector v = Vector::Zero(ni * ni);
    v(k * ni + k) = 1.0;
    consider(v);
  }
  for (double damp = 1.0; damp > 1e-3; damp *= 0.5) {
    Vector v = Vector::Zero(ni * ni);
    for (Eigen::Index k = 0; k < ni; ++k) {
      v(k * ni + k) = std::pow(damp, static_cast<double>(k)) / std::sqrt(t.levels[static_cast<std::size_t>(k)]);
    }
    consider(v / v.norm());
  }
  CounterRng rng(seed, stream);
  for (std::size_t s = 0; s < samples; ++s) consider(random_pure_state(n * n, rng));
  if (out.admissible == 0) throw EnergyTooLow("sampled_diamond_lower: no admissible input found");
  return out;
}

inline double sampled_diamond_lower(const KrausChannel& ch0, const KrausChannel& ch1, const Spectrum& spec, double E,
                                    std::size_t samples, std::uint64_t seed) {
  return sampled_diamond_lower_detail(ch0, ch1, spec, E, samples, seed).value;
}

/// sampled lower bound <= (E / c_f^2) ||J_f(ch0) - J_f(ch1)||_1.
inline CheckResult choi_distance_check(const KrausChannel& ch0, const KrausChannel& ch1, const Spectrum& spec,
                                       double E, std::size_t samples, std::uint64_t seed, std::uint64_t stream = 0) {
  const auto j0 = f_choi(ch0, spec);
  const auto j1 = f_choi(ch1, spec);
  const double cf2 = j0.truncation.c_f * j0.truncation.c_f;
  const double rhs = E / cf2 * trace_norm(j0.state.matrix() - j1.state.matrix());
  const double lhs = sampled_diamond_lower_detail(ch0, ch1, spec, E, samples, seed, stream).value;
  return make_check(lhs, rhs);
}

/// Sum_l ||Tr_B[(I (x) N_l) X]||_1: the trace norm after measuring B with {N_l}.
inline double measured_norm(const Matrix& x, std::size_t dim_a, std::size_t dim_b, const std::vector<Matrix>& povm) {
  const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_a));
  double total = 0.0;
  for (const auto& n : povm) total += trace_norm(trace_second(kron(id, n) * x, dim_a, dim_b));
  return total;
}

/// Qubit projective measurement along the Bloch direction (theta, phi).
inline std::vector<Matrix> qubit_projectors(double theta, double phi) {
  Vector up(2);
  up << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  Vector down(2);
  down << -std::conj(up(1)), std::conj(up(0));
  return {up * up.adjoint(), down * down.adjoint()};
}

/// Maximises measured_norm over qubit projective measurements: a coarse
/// (theta, phi) grid, then shrinking-step coordinate search from the best
/// `starts` grid points.
inline double max_qubit_projective(const std::function<double(const std::vector<Matrix>&)>& objective,
                                   std::size_t starts = 3) {
  struct Point {
    double value, theta, phi;
  };
  std::vector<Point> grid;
  constexpr int kTheta = 13;
  constexpr int kPhi = 24;
  for (int i = 0; i <= kTheta; ++i) {
    const double th = std::numbers::pi * i / kTheta;
    for (int j = 0; j < (i == 0 || i == kTheta ? 1 : kPhi); ++j) {
      const double ph = 2.0 * std::numbers::pi * j / kPhi;
      grid.push_back({objective(qubit_projectors(th, ph)), th, ph});
    }
  }
  std::sort(grid.begin(), grid.end(), [](const Point& a, const Point& b) { return a.value > b.value; });
  double best = grid.front().value;
  for (std::size_t s = 0; s < std::min(starts, grid.size()); ++s) {
    Point p = grid[s];
    for (double step = 0.2; step > 1e-7; step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (auto [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
          const double v = objective(qubit_projectors(p.theta + dt, p.phi + dp));
          if (v > p.value + 1e-15) {
            p = {v, p.theta + dt, p.phi + dp};
            moved = true;
          }
        }
      }
    }
    best = std::max(best, p.value);
  }
  return best;
}

/// Rank-one POVM with k outcomes on a qubit from a random k x 2 isometry.
inline std::vector<Matrix> random_qubit_povm(std::size_t k, CounterRng& rng) {
  const Matrix v = random_isometry(k, 2, rng);
  std::vector<Matrix> out;
  for (Eigen::Index l = 0; l < v.rows(); ++l) {
    const Vector row = v.row(l).adjoint();
    out.push_back(row * row.adjoint());
  }
  return out;
}

struct LemmaA1Report {
  double lhs = 0.0;            ///< ||J_f(ch0) - J_f(ch1)||_1
  double measured_max = 0.0;   ///< best measured norm found (a lower bound on the true max)
  double epsilon_d = 0.0;
  double rhs = 0.0;            ///< 4 d^{3/2} measured_max + 4 eps_d
  bool pass = false;
};

/// Heuristic probe of ||L||_1 <= 4 d^{3/2} max_M ||id (x) M[L]||_1 + 4 eps_d on a qubit output.
inline LemmaA1Report lemma_a1_probe(const KrausChannel& ch0, const KrausChannel& ch1, const Spectrum& spec,
                                    std::size_t d, std::size_t restarts, std::uint64_t seed,
                                    std::uint64_t stream = 0) {
  if (ch0.dim_out() != 2 || ch1.dim_out() != 2) throw DimensionMismatch("lemma_a1_probe: output must be a qubit");
  if (ch0.dim_in() != ch1.dim_in()) throw DimensionMismatch("lemma_a1_probe: channels differ in input dimension");
  if (d < 1 || d > ch0.dim_in()) throw std::invalid_argument("lemma_a1_probe: need 1 <= d <= dim_in");
  const auto j0 = f_choi(ch0, spec);
  const auto j1 = f_choi(ch1, spec);
  const Matrix L = j0.state.matrix() - j1.state.matrix();
  const std::size_t n = j0.dim_A;

  LemmaA1Report r;
  r.lhs = trace_norm(L);
  auto objective = [&](const std::vector<Matrix>& povm) { return measured_norm(L, n, 2, povm); };
  r.measured_max = max_qubit_projective(objective, std::max<std::size_t>(restarts, 1));
  CounterRng rng(seed, stream);
  for (std::size_t s = 0; s < restarts; ++s) {
    r.measured_max = std::max(r.measured_max, objective(random_qubit_povm(3 + s % 2, rng)));
  }
  r.epsilon_d = j0.truncation.epsilon(d);
  r.rhs = 4.0 * std::pow(static_cast<double>(d), 1.5) * r.measured_max + 4.0 * r.epsilon_d;
  r.pass = r.lhs <= r.rhs + kInvariantTolerance;
  return r;
}

}  // namespace objbound::oracle
