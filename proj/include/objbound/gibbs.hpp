#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "objbound/errors.hpp"
#include "objbound/numeric.hpp"
#include "objbound/spectrum.hpp"

namespace objbound {

/// Gibbs state gamma(E) = e^{-beta H} / Z at energy cap E.
///
/// For finite spectra beta may be zero or negative (E at or above the
/// arithmetic mean of the levels); for infinite spectra beta > 0.
struct GibbsSolution {
  double beta = 0.0;
  double Z = 0.0;      ///< may underflow for large beta; log_Z is exact
  double log_Z = 0.0;  ///< natural log of Z
  double entropy_bits = 0.0;
  double E = 0.0;
  double mean_energy = 0.0;  ///< achieved <H>; equals E within solver tolerance
  int iterations = 0;
};

namespace detail {

struct GibbsMoments {
  double log_Z = 0.0;        // ln sum_j e^{-beta f_j}
  double log_Z_shifted = 0.0;  // ln sum_j e^{-beta (f_j - shift)}
  double shift = 0.0;
  double mean_energy = 0.0;
};

// Sums over an infinite spectrum whose term ratios t_{k+1}/t_k are
// nonincreasing once the levels start to grow (true for Box and for Bridge
// beyond the flat block). The loop stops when the geometric majorant
// t_k / (1 - r_k) of the remaining terms is negligible against the partial sum.
inline GibbsMoments infinite_moments(const Spectrum& spec, double beta) {
  const double e0 = spec.ground_energy();
  CompensatedSum z;
  CompensatedSum m;
  constexpr double rel = 1e-17;
  constexpr std::size_t kMaxTerms = 200'000'000;
  double f = spec.level(0);
  for (std::size_t k = 0;; ++k) {
    if (k > kMaxTerms) throw ConvergenceFailure("gibbs: partition sum did not converge");
    const double w = std::exp(-beta * (f - e0));
    if (w == 0.0) break;
    const double f_next = spec.level(k + 1);
    if (f_next > f && k > 0) {
      const double w_next = std::exp(-beta * (f_next - e0));
      const double rz = w_next / w;
      const double rm = rz * (f_next / f);
      if (rz < 1.0 && rm < 1.0) {
        const double tail_z = w / (1.0 - rz);
        const double tail_m = f * w / (1.0 - rm);
        if (tail_z <= rel * z.value() && tail_m <= rel * m.value()) break;
      }
    }
    z += w;
    m += f * w;
    f = f_next;
  }
  GibbsMoments out;
  out.shift = e0;
  out.log_Z_shifted = std::log(z.value());
  out.log_Z = -beta * e0 + out.log_Z_shifted;
  out.mean_energy = m.value() / z.value();
  return out;
}

inline GibbsMoments harmonic_moments(double beta) {
  // Levels j >= 1: sum_{k>=0} e^{-beta k} = 1 / (1 - e^{-beta}).
  GibbsMoments out;
  out.shift = 1.0;
  out.log_Z_shifted = -std::log(-std::expm1(-beta));
  out.log_Z = -beta + out.log_Z_shifted;
  out.mean_energy = 1.0 + 1.0 / std::expm1(beta);
  return out;
}

inline GibbsMoments finite_moments(const Spectrum& spec, double beta) {
  const auto& lv = spec.custom_levels();
  const double shift = beta >= 0.0 ? lv.front() : lv.back();
  CompensatedSum z;
  CompensatedSum m;
  for (double f : lv) {
    const double w = std::exp(-beta * (f - shift));
    z += w;
    m += f * w;
  }
  GibbsMoments out;
  out.shift = shift;
  out.log_Z_shifted = std::log(z.value());
  out.log_Z = -beta * shift + out.log_Z_shifted;
  out.mean_energy = m.value() / z.value();
  return out;
}

inline GibbsMoments gibbs_moments(const Spectrum& spec, double beta) {
  switch (spec.family()) {
    case SpectrumFamily::Harmonic:
      return harmonic_moments(beta);
    case SpectrumFamily::FiniteCustom:
      return finite_moments(spec, beta);
    case SpectrumFamily::Box:
    case SpectrumFamily::Bridge:
      return infinite_moments(spec, beta);
  }
  throw std::logic_error("gibbs_moments: unknown family");
}

inline bool degenerate(const Spectrum& spec) {
  if (!spec.is_finite()) return false;
  const auto& lv = spec.custom_levels();
  return lv.front() == lv.back();
}

}  // namespace detail

/// Z(beta) = sum_j e^{-beta f_j}.
inline double partition_function(const Spectrum& spec, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("partition_function: beta must be positive");
  }
  return std::exp(detail::gibbs_moments(spec, beta).log_Z);
}

/// Solves Tr e^{-beta H}(H - E) = 0 for beta by bracketing and bisection.
inline GibbsSolution solve_beta(const Spectrum& spec, double E) {
  if (!std::isfinite(E)) throw std::invalid_argument("solve_beta: energy must be finite");
  const double e0 = spec.ground_energy();

  auto finish = [&](double beta, const detail::GibbsMoments& mom, int iterations) {
    GibbsSolution sol;
    sol.beta = beta;
    sol.E = E;
    sol.log_Z = mom.log_Z;
    sol.Z = std::exp(mom.log_Z);
    sol.mean_energy = mom.mean_energy;
    // S = ln Z + beta E, evaluated as ln Z' + beta (E - shift).
    sol.entropy_bits = (mom.log_Z_shifted + beta * (E - mom.shift)) / std::numbers::ln2;
    sol.iterations = iterations;
    return sol;
  };

  if (detail::degenerate(spec)) {
    if (std::abs(E - e0) > 1e-12 * e0) {
      throw EnergyTooLow("solve_beta: all levels equal " + to_shortest_string(e0) +
                         "; only E equal to that level is admissible");
    }
    return finish(0.0, detail::gibbs_moments(spec, 0.0), 0);
  }
  if (!(E > e0)) {
    throw EnergyTooLow("solve_beta: E = " + to_shortest_string(E) +
                       " must exceed the ground energy " + to_shortest_string(e0));
  }
  if (spec.is_finite() && !(E < spec.custom_levels().back())) {
    throw std::domain_error("solve_beta: E must lie below the highest level of a finite spectrum");
  }

  auto energy = [&](double beta) { return detail::gibbs_moments(spec, beta).mean_energy; };

  // Bracket [lo, hi] with U(lo) >= E >= U(hi); U is decreasing in beta.
  double lo = 0.0;
  double hi = 0.0;
  constexpr int kMaxBracket = 2000;
  const bool negative = spec.is_finite() && E > energy(0.0);
  if (negative) {
    hi = 0.0;
    lo = -1.0;
    int steps = 0;
    while (energy(lo) < E) {
      hi = lo;
      lo *= 2.0;
      if (++steps > kMaxBracket) throw ConvergenceFailure("solve_beta: bracket failure (beta < 0)");
    }
  } else if (energy(1.0) > E) {
    lo = 1.0;
    hi = 2.0;
    int steps = 0;
    while (energy(hi) > E) {
      lo = hi;
      hi *= 2.0;
      if (++steps > kMaxBracket || !std::isfinite(hi)) {
        throw ConvergenceFailure("solve_beta: bracket failure (large beta)");
      }
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    int steps = 0;
    while (energy(lo) < E) {
      hi = lo;
      lo *= 0.5;
      if (++steps > kMaxBracket || lo == 0.0) {
        throw ConvergenceFailure("solve_beta: bracket failure (small beta)");
      }
    }
  }

  constexpr int kMaxIterations = 200;
  constexpr double kResidualTol = 1e-12;
  double beta = 0.5 * (lo + hi);
  detail::GibbsMoments mom = detail::gibbs_moments(spec, beta);
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    if (std::abs(mom.mean_energy - E) <= kResidualTol * std::abs(E)) break;
    if (mom.mean_energy > E) {
      lo = beta;
    } else {
      hi = beta;
    }
    const double next = 0.5 * (lo + hi);
    if (next == beta) break;
    beta = next;
    mom = detail::gibbs_moments(spec, beta);
  }
  if (std::abs(mom.mean_energy - E) > 1e-10 * std::abs(E)) {
    throw ConvergenceFailure("solve_beta: residual " + to_shortest_string(mom.mean_energy - E) +
                             " after " + std::to_string(it) + " iterations");
  }
  return finish(beta, mom, it);
}

/// Largest entropy, in bits, of a state with mean energy at most E. On a
/// finite spectrum this saturates at log2(n) once E reaches the mean level.
inline double gibbs_entropy(const Spectrum& spec, double E) {
  if (spec.is_finite()) {
    const auto& f = spec.custom_levels();
    CompensatedSum mean;
    for (double x : f) mean += x;
    if (E >= mean.value() / static_cast<double>(f.size())) return std::log2(static_cast<double>(f.size()));
  }
  return solve_beta(spec, E).entropy_bits;
}

/// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log2(x) + (1.0 - x) * std::log2(1.0 - x));
}

}  // namespace objbound
