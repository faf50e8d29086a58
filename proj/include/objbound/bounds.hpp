#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/numeric.hpp"
#include "objbound/spectrum.hpp"

namespace objbound {

struct ObjectivityParams {
  double E = 1.0;
  double delta = 0.01;
  double N = 1e6;

  void validate() const {
    if (!(E > 0.0) || !std::isfinite(E)) throw std::invalid_argument("E must be positive and finite");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(N >= 2.0) || !std::isfinite(N)) throw std::invalid_argument("N must be finite and >= 2");
  }
};

/// zeta = first_term + tail_term, bound = zeta / delta.
struct ZetaBreakdown {
  double first_term = 0.0;
  double tail_term = 0.0;
  std::size_t d = 0;
  std::optional<std::uint64_t> m_opt;  ///< empty when m was eliminated analytically
  double zeta = 0.0;
  double bound = 0.0;
  bool trivial = false;  ///< bound > 2: no trace-norm information

  void finalize(double delta) {
    zeta = first_term + tail_term;
    bound = zeta / delta;
    trivial = bound > 2.0;
  }
};

enum class BoundFamily { General, Box, Bridge, BridgeLimit, Harmonic };

/// A choice of zeta formula: the general spectrum-agnostic bound, or one of
/// the closed-form specialisations.
class BoundModel {
 public:
  static BoundModel general(const Spectrum& spec) {
    auto summary = local_entropy(spec);
    BoundModel m(BoundFamily::General);
    m.spec_ = spec;
    m.c_f_ = summary.c_f;
    m.sigma_bits_ = summary.sigma_bits;
    return m;
  }

  static BoundModel box() { return BoundModel(BoundFamily::Box); }

  static BoundModel bridge(std::size_t D, double omega) {
    if (D < 1) throw std::invalid_argument("bridge bound: D must be >= 1");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("bridge bound: omega must be positive");
    BoundModel m(BoundFamily::Bridge);
    m.D_ = D;
    m.omega_ = omega;
    m.s_nats_ = bridge_closed_form::s_nats(D, omega);
    return m;
  }

  static BoundModel bridge_limit(std::size_t D) {
    if (D < 1) throw std::invalid_argument("bridge limit bound: D must be >= 1");
    BoundModel m(BoundFamily::BridgeLimit);
    m.D_ = D;
    return m;
  }

  static BoundModel harmonic() { return BoundModel(BoundFamily::Harmonic); }

  /// Closed form where one exists, otherwise the general bound.
  static BoundModel for_spectrum(const Spectrum& spec) {
    switch (spec.family()) {
      case SpectrumFamily::Box:
        return box();
      case SpectrumFamily::Harmonic:
        return harmonic();
      case SpectrumFamily::Bridge:
        return bridge(spec.bridge_dimension(), spec.bridge_omega());
      case SpectrumFamily::FiniteCustom:
        return general(spec);
    }
    throw std::logic_error("for_spectrum: unknown family");
  }

  BoundFamily family() const noexcept { return family_; }

  std::size_t min_d() const noexcept {
    switch (family_) {
      case BoundFamily::Bridge:
      case BoundFamily::BridgeLimit:
        return D_;
      case BoundFamily::Harmonic:
        return 2;
      default:
        return 1;
    }
  }

  /// Largest meaningful truncation (finite spectra only).
  std::optional<std::size_t> max_d() const {
    if (family_ == BoundFamily::General && spec_->is_finite()) return spec_->level_count();
    return std::nullopt;
  }

  ZetaBreakdown evaluate(const ObjectivityParams& p, std::size_t d) const {
    p.validate();
    if (d < min_d()) {
      throw std::invalid_argument("zeta: d = " + std::to_string(d) + " below the minimum " +
                                  std::to_string(min_d()) + " for this family");
    }
    const double dd = static_cast<double>(d);
    const double E = p.E;
    ZetaBreakdown z;
    z.d = d;
    switch (family_) {
      case BoundFamily::General: {
        const double cf2 = c_f_ * c_f_;
        z.first_term = kappa() * dd * std::cbrt(E * E * sigma_bits_ / (p.N * cf2 * cf2));
        const auto n = max_d();
        const double eps = n && d >= *n ? 0.0 : tail_epsilon(*spec_, d, c_f_);
        z.tail_term = 4.0 * E / cf2 * eps;
        break;
      }
      case BoundFamily::Box: {
        const double s = box_s_nats();
        z.first_term = box_alpha() * std::cbrt(s * dd * dd * dd * E * E / p.N);
        z.tail_term = box_beta() * E * std::sqrt(trigamma(dd + 1.0));
        break;
      }
      case BoundFamily::Bridge: {
        const double S = bridge_closed_form::inverse_sum(D_, omega_);
        z.first_term = std::cbrt(432.0 * E * E * S * S * dd * dd * dd * s_nats_ / p.N);
        z.tail_term = 4.0 * E * std::sqrt(S * std::exp(-omega_ * dd));
        break;
      }
      case BoundFamily::BridgeLimit: {
        const double Dd = static_cast<double>(D_);
        z.first_term = std::cbrt(432.0 * E * E * Dd * Dd * dd * dd * dd * std::log(Dd) / p.N);
        z.tail_term = 0.0;
        break;
      }
      case BoundFamily::Harmonic: {
        z.first_term = kappa() * std::cbrt(std::pow(dd, 5.0) * std::log2(dd) / p.N);
        z.tail_term = 4.0 * std::sqrt(E / dd);
        break;
      }
    }
    z.finalize(p.delta);
    return z;
  }

  /// s = ln(2) sigma for the particle in a box.
  static double box_s_nats() {
    static const double s = local_entropy(Spectrum::box()).s_nats;
    return s;
  }

 private:
  explicit BoundModel(BoundFamily f) : family_(f) {}

  BoundFamily family_;
  std::optional<Spectrum> spec_;
  double c_f_ = 0.0;
  double sigma_bits_ = 0.0;
  std::size_t D_ = 0;
  double omega_ = 0.0;
  double s_nats_ = 0.0;
};

/// zeta = kappa d (E^2 sigma / (N c_f^4))^{1/3} + (4E / c_f^2) eps_d.
inline ZetaBreakdown zeta_general(const Spectrum& spec, const ObjectivityParams& p, std::size_t d) {
  return BoundModel::general(spec).evaluate(p, d);
}

/// The same bound before m is eliminated: minimises
///   g(m) = a / sqrt(m) + (4E / c_f^2) eps_d + 2m / N,  a = sqrt(32 ln2 E^2 d^3 sigma / c_f^4)
/// over integers 1 <= m <= floor(N).
inline ZetaBreakdown zeta_exact_m(const Spectrum& spec, const ObjectivityParams& p, std::size_t d) {
  p.validate();
  if (d < 1) throw std::invalid_argument("zeta_exact_m: d must be >= 1");
  const auto summary = local_entropy(spec);
  const double cf2 = summary.c_f * summary.c_f;
  const double dd = static_cast<double>(d);
  const double a =
      std::sqrt(32.0 * std::numbers::ln2 * p.E * p.E * dd * dd * dd * summary.sigma_bits / (cf2 * cf2));
  const double m_max = std::floor(p.N);
  const double m_star = std::pow(a * p.N / 4.0, 2.0 / 3.0);
  auto g = [&](double m) { return a / std::sqrt(m) + 2.0 * m / p.N; };

  double lo = std::clamp(std::floor(m_star), 1.0, m_max);
  double hi = std::clamp(std::ceil(m_star), 1.0, m_max);
  const double m = g(hi) < g(lo) ? hi : lo;

  ZetaBreakdown z;
  z.d = d;
  z.m_opt = static_cast<std::uint64_t>(m);
  z.first_term = g(m);
  const bool full = spec.is_finite() && d >= spec.level_count();
  z.tail_term = full ? 0.0 : 4.0 * p.E / cf2 * tail_epsilon(spec, d, summary.c_f);
  z.finalize(p.delta);
  return z;
}

/// Closed-form specialisations. Bridge needs d >= D, Harmonic needs d >= 2.
inline ZetaBreakdown zeta_special(BoundFamily family, std::size_t D, double omega, const ObjectivityParams& p,
                                  std::size_t d) {
  switch (family) {
    case BoundFamily::Box:
      return BoundModel::box().evaluate(p, d);
    case BoundFamily::Bridge:
      return BoundModel::bridge(D, omega).evaluate(p, d);
    case BoundFamily::BridgeLimit:
      return BoundModel::bridge_limit(D).evaluate(p, d);
    case BoundFamily::Harmonic:
      return BoundModel::harmonic().evaluate(p, d);
    case BoundFamily::General:
      break;
  }
  throw std::invalid_argument("zeta_special: General has no closed form; use zeta_general");
}

/// Minimises zeta over the truncation dimension d.
///
/// Doubles d from the family minimum until zeta has risen on three successive
/// doublings past the running best while the first term dominates, then
/// locates the integer minimiser inside [best/2, 2 best]: exhaustively when
/// that bracket is at most 2^16 wide, by integer ternary search otherwise.
/// Finite spectra are scanned over every admissible d.
inline ZetaBreakdown optimize_d(const BoundModel& model, const ObjectivityParams& p) {
  p.validate();
  auto eval = [&](std::size_t d) { return model.evaluate(p, d); };
  auto better = [](const ZetaBreakdown& a, const ZetaBreakdown& b) {
    return a.zeta < b.zeta || (a.zeta == b.zeta && a.d < b.d);
  };
  auto scan = [&](std::size_t lo, std::size_t hi) {
    ZetaBreakdown best = eval(lo);
    for (std::size_t d = lo + 1; d <= hi; ++d) {
      auto z = eval(d);
      if (better(z, best)) best = z;
    }
    return best;
  };

  const std::size_t lo = model.min_d();
  if (auto hi = model.max_d()) return scan(lo, std::max(lo, *hi));

  ZetaBreakdown best = eval(lo);
  int rises = 0;
  constexpr std::size_t kLimit = std::size_t{1} << 62;
  for (std::size_t d = lo; d < kLimit;) {
    d *= 2;
    const auto z = eval(d);
    if (better(z, best)) {
      best = z;
      rises = 0;
    } else if (z.first_term > z.tail_term) {
      if (++rises >= 3) break;
    }
  }

  std::size_t a = std::max(lo, best.d / 2);
  std::size_t b = best.d * 2;
  constexpr std::size_t kScanWidth = std::size_t{1} << 16;
  while (b - a > 64 && b - a > kScanWidth) {
    const std::size_t m1 = a + (b - a) / 3;
    const std::size_t m2 = b - (b - a) / 3;
    if (eval(m1).zeta <= eval(m2).zeta) {
      b = m2;
    } else {
      a = m1;
    }
  }
  auto found = scan(a, b);
  return better(found, best) ? found : best;
}

inline ZetaBreakdown optimize_d(const Spectrum& spec, const ObjectivityParams& p) {
  return optimize_d(BoundModel::for_spectrum(spec), p);
}

/// Qi-Ranard bounds: b1 = sqrt(2 D^6 ln D / (N delta)), b2 = 4 sqrt(2 D^5 ln D / (N delta)).
inline double qi_ranard(std::size_t D, double N, double delta, int variant) {
  if (D < 2) throw std::invalid_argument("qi_ranard: D must be >= 2 (ln D = 0 is degenerate)");
  if (!(N > 0.0)) throw std::invalid_argument("qi_ranard: N must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("qi_ranard: delta must lie in (0, 1)");
  const double Dd = static_cast<double>(D);
  const double lnD = std::log(Dd);
  switch (variant) {
    case 1:
      return std::sqrt(2.0 * std::pow(Dd, 6.0) * lnD / (N * delta));
    case 2:
      return 4.0 * std::sqrt(2.0 * std::pow(Dd, 5.0) * lnD / (N * delta));
    default:
      throw std::invalid_argument("qi_ranard: variant must be 1 or 2");
  }
}

/// Our bound in the omega -> infinity bridge limit at d = D, E = 1, divided by delta.
inline double qr_comparison_bound(std::size_t D, double N, double delta) {
  ObjectivityParams p{1.0, delta, std::max(N, 2.0)};
  if (N < 2.0) {
    const double Dd = static_cast<double>(D);
    return std::cbrt(432.0 * std::pow(Dd, 5.0) * std::log(Dd) / N) / delta;
  }
  return BoundModel::bridge_limit(D).evaluate(p, D).bound;
}

/// N above which the bridge-limit bound (d = D, E = 1) is below 2.
inline double qr_threshold(std::size_t D, double delta) {
  if (D < 2) throw std::invalid_argument("qr_threshold: D must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("qr_threshold: delta must lie in (0, 1)");
  const double Dd = static_cast<double>(D);
  return 54.0 * std::pow(Dd, 5.0) * std::log(Dd) / (delta * delta * delta);
}

/// Root of b(N) = 2 by bisection in log N.
inline double qr_threshold_by_bisection(std::size_t D, double delta) {
  if (D < 2) throw std::invalid_argument("qr_threshold: D must be >= 2");
  double lo = 0.0;  // log10 N
  double hi = 300.0;
  if (!(qr_comparison_bound(D, std::pow(10.0, hi), delta) < 2.0)) {
    throw ConvergenceFailure("qr_threshold_by_bisection: no root below N = 1e300");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (qr_comparison_bound(D, std::pow(10.0, mid), delta) > 2.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::pow(10.0, 0.5 * (lo + hi));
}

/// mu = 5 lambda^{1/5}.
inline double pureloss_mu() { return 5.0 * std::pow(kappa(), 0.2); }

/// mu (E^6 / N)^{1/15}: the harmonic bound minimised over real d with ln d <= d.
inline double pureloss_envelope(double E, double N) {
  if (!(N >= 2.0)) throw std::invalid_argument("pureloss_envelope: N must be >= 2");
  if (!(E > 0.0)) throw std::invalid_argument("pureloss_envelope: E must be positive");
  return pureloss_mu() * std::pow(std::pow(E, 6.0) / N, 1.0 / 15.0);
}

/// Fraction of samples strictly above mean / delta (Markov: at most delta).
inline double markov_exceedance_fraction(const std::vector<double>& samples, double delta) {
  if (samples.empty()) throw std::invalid_argument("markov_exceedance_fraction: no samples");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("markov_exceedance_fraction: delta in (0, 1)");
  CompensatedSum sum;
  for (double x : samples) {
    if (x < 0.0) throw std::invalid_argument("markov_exceedance_fraction: samples must be nonnegative");
    sum += x;
  }
  const double threshold = sum.value() / static_cast<double>(samples.size()) / delta;
  const auto above = std::count_if(samples.begin(), samples.end(), [&](double x) { return x > threshold; });
  return static_cast<double>(above) / static_cast<double>(samples.size());
}

}  // namespace objbound
