#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "objbound/errors.hpp"

namespace objbound {

struct LowerBoundResult {
  std::uint64_t N = 0;
  double t_star = 0.0;  ///< optimal tanh^2 s
  double s_star = 0.0;
  double E_bar = 0.0;   ///< sinh^2 of the matched two-mode squeezing
  double value = 0.0;   ///< 2 sup_t t (1 - t) / (N - t)
};

namespace detail {
inline void require_fragments(double N, const char* what) {
  if (!(N >= 2.0) || !std::isfinite(N)) throw std::invalid_argument(std::string(what) + ": N must be >= 2");
}
}  // namespace detail

/// <phi_s| id (x) Lambda [psi_r] |phi_s> for the 1/N pure-loss channel.
inline double tmsv_overlap(double N, double r, double s) {
  detail::require_fragments(N, "tmsv_overlap");
  if (!(r >= 0.0) || !(s >= 0.0)) throw std::invalid_argument("tmsv_overlap: r and s must be nonnegative");
  const double den = std::sqrt(N) * std::cosh(r) * std::cosh(s) - std::sinh(r) * std::sinh(s);
  return N / (den * den);
}

/// sinh(r) = sqrt(tanh^2 s / (N - tanh^2 s)), the r maximising tmsv_overlap at fixed s.
inline double optimal_r(double N, double s) {
  detail::require_fragments(N, "optimal_r");
  if (!(s >= 0.0)) throw std::invalid_argument("optimal_r: s must be nonnegative");
  const double t = std::tanh(s) * std::tanh(s);
  return std::asinh(std::sqrt(t / (N - t)));
}

inline LowerBoundResult lower_bound(std::uint64_t N) {
  if (N < 2) throw std::invalid_argument("lower_bound: N must be >= 2");
  const double n = static_cast<double>(N);
  // t* = N - sqrt(N^2 - N), rationalised so no cancellation occurs at large N.
  const double t = 1.0 / (1.0 + std::sqrt(1.0 - 1.0 / n));
  LowerBoundResult out;
  out.N = N;
  out.t_star = t;
  out.s_star = std::atanh(std::sqrt(t));
  out.E_bar = t / (n - t);
  out.value = 2.0 * t * (1.0 - t) / (n - t);
  if (!(out.value >= 1.0 / (2.0 * n - 1.0) * (1.0 - 1e-12))) {
    throw InvariantViolation("lower_bound: value fell below 1/(2N-1)");
  }
  return out;
}

}  // namespace objbound
