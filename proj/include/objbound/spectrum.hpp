#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/numeric.hpp"

namespace objbound {

inline constexpr double kDefaultSeriesTolerance = 1e-12;

enum class SpectrumFamily { Box, Harmonic, Bridge, FiniteCustom };

/// Hamiltonian eigenvalue sequence f = {f_j}.
///
/// Level labels start at `start_index()`: Box and Harmonic at j = 1 (so that
/// the ground energy stays positive), Bridge and FiniteCustom at j = 0. A
/// truncation to d levels keeps the first d labels counted from the start.
///
///   Box          f_j = j^2
///   Harmonic     f_j = j                      (sum of 1/f_j diverges)
///   Bridge(D,w)  f_j = 1 for j <= D-1, e^{wj} / (1 - e^{-w}) otherwise
///   FiniteCustom explicit positive nondecreasing list
class Spectrum {
 public:
  static Spectrum box(double tol = kDefaultSeriesTolerance) {
    return Spectrum(SpectrumFamily::Box, 1, tol);
  }

  static Spectrum harmonic(double tol = kDefaultSeriesTolerance) {
    return Spectrum(SpectrumFamily::Harmonic, 1, tol);
  }

  static Spectrum bridge(std::size_t D, double omega, double tol = kDefaultSeriesTolerance) {
    if (D < 1) throw std::invalid_argument("bridge spectrum: D must be a positive integer");
    if (!(omega > 0.0) || !std::isfinite(omega)) {
      throw std::invalid_argument("bridge spectrum: omega must be positive and finite");
    }
    Spectrum s(SpectrumFamily::Bridge, 0, tol);
    s.dimension_ = D;
    s.omega_ = omega;
    return s;
  }

  static Spectrum custom(std::vector<double> levels, double tol = kDefaultSeriesTolerance) {
    if (levels.empty()) throw std::invalid_argument("custom spectrum: level list is empty");
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (!(levels[k] > 0.0) || !std::isfinite(levels[k])) {
        throw std::invalid_argument("custom spectrum: levels must be positive and finite");
      }
      if (k > 0 && levels[k] < levels[k - 1]) {
        throw std::invalid_argument("custom spectrum: levels must be nondecreasing");
      }
    }
    Spectrum s(SpectrumFamily::FiniteCustom, 0, tol);
    s.levels_ = std::move(levels);
    return s;
  }

  /// Parses `box`, `harmonic`, `bridge:D=<int>,omega=<float>` or
  /// `custom:<comma-separated floats>`.
  static Spectrum parse(std::string_view text, double tol = kDefaultSeriesTolerance);

  SpectrumFamily family() const noexcept { return family_; }
  std::size_t start_index() const noexcept { return start_; }
  double series_tolerance() const noexcept { return tol_; }

  std::size_t bridge_dimension() const {
    require(SpectrumFamily::Bridge);
    return dimension_;
  }
  double bridge_omega() const {
    require(SpectrumFamily::Bridge);
    return omega_;
  }
  const std::vector<double>& custom_levels() const {
    require(SpectrumFamily::FiniteCustom);
    return levels_;
  }

  bool is_finite() const noexcept { return family_ == SpectrumFamily::FiniteCustom; }
  bool summable() const noexcept { return family_ != SpectrumFamily::Harmonic; }

  /// Number of levels; throws for infinite spectra.
  std::size_t level_count() const {
    if (!is_finite()) throw std::logic_error("level_count: spectrum is infinite");
    return levels_.size();
  }

  /// f_j for the level labelled j.
  double eigenvalue(std::size_t j) const {
    check_label(j);
    switch (family_) {
      case SpectrumFamily::Box: {
        const double x = static_cast<double>(j);
        return x * x;
      }
      case SpectrumFamily::Harmonic:
        return static_cast<double>(j);
      case SpectrumFamily::Bridge:
        if (j + 1 <= dimension_) return 1.0;
        return std::exp(omega_ * static_cast<double>(j)) / -std::expm1(-omega_);
      case SpectrumFamily::FiniteCustom:
        return levels_[j];
    }
    return 0.0;
  }

  /// 1/f_j, computed without forming f_j where that would overflow.
  double inverse_eigenvalue(std::size_t j) const {
    check_label(j);
    if (family_ == SpectrumFamily::Bridge && j + 1 > dimension_) {
      return -std::expm1(-omega_) * std::exp(-omega_ * static_cast<double>(j));
    }
    return 1.0 / eigenvalue(j);
  }

  /// Level k counted from the start index (k = 0 is the ground level).
  double level(std::size_t k) const { return eigenvalue(start_ + k); }
  double inverse_level(std::size_t k) const { return inverse_eigenvalue(start_ + k); }

  double ground_energy() const { return level(0); }

  /// The first n levels; n may not exceed the level count of a finite spectrum.
  std::vector<double> truncated_levels(std::size_t n) const {
    if (is_finite() && n > levels_.size()) {
      throw std::out_of_range("truncated_levels: more levels requested than the spectrum has");
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = level(k);
    return out;
  }

  /// Canonical text form; parse(name()) reproduces the spectrum.
  std::string name() const {
    switch (family_) {
      case SpectrumFamily::Box:
        return "box";
      case SpectrumFamily::Harmonic:
        return "harmonic";
      case SpectrumFamily::Bridge:
        return "bridge:D=" + std::to_string(dimension_) + ",omega=" + to_shortest_string(omega_);
      case SpectrumFamily::FiniteCustom: {
        std::string out = "custom:";
        for (std::size_t k = 0; k < levels_.size(); ++k) {
          if (k) out += ',';
          out += to_shortest_string(levels_[k]);
        }
        return out;
      }
    }
    return {};
  }

 private:
  Spectrum(SpectrumFamily family, std::size_t start, double tol)
      : family_(family), start_(start), tol_(tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  }

  void require(SpectrumFamily f) const {
    if (family_ != f) throw std::logic_error("spectrum family does not carry this parameter");
  }

  void check_label(std::size_t j) const {
    if (j < start_) {
      throw std::out_of_range("eigenvalue: label " + std::to_string(j) +
                              " is below the start index (ground energy must be positive)");
    }
    if (family_ == SpectrumFamily::FiniteCustom && j >= levels_.size()) {
      throw std::out_of_range("eigenvalue: label " + std::to_string(j) + " beyond the custom list");
    }
  }

  SpectrumFamily family_;
  std::size_t start_;
  double tol_;
  std::size_t dimension_ = 0;
  double omega_ = 0.0;
  std::vector<double> levels_;
};

inline Spectrum Spectrum::parse(std::string_view text, double tol) {
  auto fail = [&](const std::string& why) -> std::invalid_argument {
    return std::invalid_argument("cannot parse spectrum '" + std::string(text) + "': " + why);
  };
  if (text == "box") return box(tol);
  if (text == "harmonic") return harmonic(tol);

  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw fail("unknown family");
  const auto head = text.substr(0, colon);
  auto body = text.substr(colon + 1);

  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = body.find(',');
    parts.push_back(body.substr(0, comma));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }

  if (head == "bridge") {
    std::optional<double> D;
    std::optional<double> omega;
    for (auto part : parts) {
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) throw fail("expected key=value");
      const auto key = part.substr(0, eq);
      const auto value = parse_double(part.substr(eq + 1));
      if (!value) throw fail("bad number for " + std::string(key));
      if (key == "D") {
        D = value;
      } else if (key == "omega") {
        omega = value;
      } else {
        throw fail("unknown key " + std::string(key));
      }
    }
    if (!D || !omega) throw fail("bridge needs D and omega");
    if (*D < 1 || std::floor(*D) != *D) throw fail("D must be a positive integer");
    return bridge(static_cast<std::size_t>(*D), *omega, tol);
  }
  if (head == "custom") {
    std::vector<double> levels;
    for (auto part : parts) {
      const auto value = parse_double(part);
      if (!value) throw fail("bad level '" + std::string(part) + "'");
      levels.push_back(*value);
    }
    return custom(std::move(levels), tol);
  }
  throw fail("unknown family");
}

// ---------------------------------------------------------------------------
// Convergent-series summaries

/// A series value with a rigorous bound on the truncation error.
struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t terms = 0;
};

namespace detail {

inline void require_summable(const Spectrum& spec, const char* what) {
  if (!spec.summable()) {
    throw NotSummable(std::string(what) + ": sum of 1/f_j diverges for spectrum " + spec.name());
  }
}

// Sum of 1/j^2 over j >= 1. Terms j < n are added exactly; the remainder lies
// in [1/n, 1/n + 1/n^2] by the integral test and is replaced by its midpoint.
inline SeriesValue box_inverse_sum(double tol) {
  const auto n = static_cast<std::size_t>(std::ceil(std::sqrt(0.5 / tol))) + 1;
  CompensatedSum acc;
  for (std::size_t j = n - 1; j >= 1; --j) {
    const double x = static_cast<double>(j);
    acc += 1.0 / (x * x);
  }
  const double x = static_cast<double>(n);
  acc += 1.0 / x + 0.5 / (x * x);
  return {acc.value(), 0.5 / (x * x), n - 1};
}

// Sum of 2 ln(j) / j^2 over j >= 1. g(x) = 2 ln x / x^2 decreases for x >= 2,
// so the remainder from n lies in [I, I + g(n)] with I = 2 (ln n + 1) / n.
inline SeriesValue box_log_sum(double tol) {
  std::size_t n = 16;
  auto g = [](double x) { return 2.0 * std::log(x) / (x * x); };
  while (0.5 * g(static_cast<double>(n)) > tol) n *= 2;
  std::size_t lo = n / 2;
  while (n - lo > 1) {
    const std::size_t mid = lo + (n - lo) / 2;
    if (0.5 * g(static_cast<double>(mid)) > tol) {
      lo = mid;
    } else {
      n = mid;
    }
  }
  CompensatedSum acc;
  for (std::size_t j = n - 1; j >= 2; --j) acc += g(static_cast<double>(j));
  const double x = static_cast<double>(n);
  acc += 2.0 * (std::log(x) + 1.0) / x + 0.5 * g(x);
  return {acc.value(), 0.5 * g(x), n - 1};
}

// Geometric part of the bridge spectrum: sum over j >= from of
// (1-q) q^j * weight(j), q = e^{-w}. `remainder(n)` must bound the sum over
// j >= n. Stops once the remainder is below tol * min(1, partial).
template <class Term, class Remainder>
SeriesValue geometric_tail(std::size_t from, double tol, Term term, Remainder remainder) {
  CompensatedSum acc;
  std::size_t n = from;
  std::size_t terms = 0;
  while (true) {
    const double r = remainder(n);
    const double partial = std::abs(acc.value());
    if (r == 0.0 || r <= tol * std::min(1.0, partial) || r < std::numeric_limits<double>::min()) {
      acc += 0.5 * r;
      return {acc.value(), 0.5 * r, terms};
    }
    acc += term(n);
    ++n;
    ++terms;
    if (terms > 100'000'000) throw ConvergenceFailure("geometric series did not converge");
  }
}

}  // namespace detail

/// Sum of 1/f over every level.
inline SeriesValue inverse_sum(const Spectrum& spec) {
  detail::require_summable(spec, "inverse_sum");
  const double tol = spec.series_tolerance();
  switch (spec.family()) {
    case SpectrumFamily::Box:
      return detail::box_inverse_sum(tol);
    case SpectrumFamily::Bridge: {
      const std::size_t D = spec.bridge_dimension();
      const double w = spec.bridge_omega();
      auto tail = detail::geometric_tail(
          D, tol, [&](std::size_t j) { return spec.inverse_eigenvalue(j); },
          [&](std::size_t n) { return std::exp(-w * static_cast<double>(n)); });
      tail.value += static_cast<double>(D);
      tail.terms += D;
      return tail;
    }
    case SpectrumFamily::FiniteCustom: {
      CompensatedSum acc;
      for (double f : spec.custom_levels()) acc += 1.0 / f;
      return {acc.value(), 0.0, spec.level_count()};
    }
    case SpectrumFamily::Harmonic:
      break;
  }
  throw NotSummable("inverse_sum: unsupported family");
}

/// Sum of 1/f over the levels beyond the first d (the truncation tail).
inline SeriesValue inverse_tail_sum(const Spectrum& spec, std::size_t d) {
  detail::require_summable(spec, "inverse_tail_sum");
  const double tol = spec.series_tolerance();
  switch (spec.family()) {
    case SpectrumFamily::Box: {
      // Levels j = 1..d kept; the tail over j >= d+1 is psi'(d+1).
      const double v = trigamma(static_cast<double>(d) + 1.0);
      return {v, 1e-15 * v, 0};
    }
    case SpectrumFamily::Bridge: {
      const std::size_t D = spec.bridge_dimension();
      const double w = spec.bridge_omega();
      const std::size_t from = std::max(d, D);
      auto tail = detail::geometric_tail(
          from, tol, [&](std::size_t j) { return spec.inverse_eigenvalue(j); },
          [&](std::size_t n) { return std::exp(-w * static_cast<double>(n)); });
      if (d < D) tail.value += static_cast<double>(D - d);
      return tail;
    }
    case SpectrumFamily::FiniteCustom: {
      CompensatedSum acc;
      const auto& lv = spec.custom_levels();
      for (std::size_t k = lv.size(); k > d; --k) acc += 1.0 / lv[k - 1];
      return {acc.value(), 0.0, lv.size() > d ? lv.size() - d : 0};
    }
    case SpectrumFamily::Harmonic:
      break;
  }
  throw NotSummable("inverse_tail_sum: unsupported family");
}

/// Sum of (1/f) ln f over every level (natural log).
inline SeriesValue log_weighted_sum(const Spectrum& spec) {
  detail::require_summable(spec, "log_weighted_sum");
  const double tol = spec.series_tolerance();
  switch (spec.family()) {
    case SpectrumFamily::Box:
      return detail::box_log_sum(tol);
    case SpectrumFamily::Bridge: {
      // Levels below D have f = 1 and contribute nothing.
      const std::size_t D = spec.bridge_dimension();
      const double w = spec.bridge_omega();
      const double one_minus_q = -std::expm1(-w);
      const double log_norm = -std::log1p(-std::exp(-w));  // -ln(1 - q)
      auto term = [&](std::size_t j) {
        const double x = static_cast<double>(j);
        return spec.inverse_eigenvalue(j) * (w * x + log_norm);
      };
      // Exact remainder of sum_{j>=n} (1-q) q^j (w j - ln(1-q)).
      auto remainder = [&](std::size_t n) {
        const double x = static_cast<double>(n);
        const double qn = std::exp(-w * x);
        const double q = std::exp(-w);
        return qn * (w * (x + q / one_minus_q) + log_norm);
      };
      return detail::geometric_tail(D, tol, term, remainder);
    }
    case SpectrumFamily::FiniteCustom: {
      CompensatedSum acc;
      for (double f : spec.custom_levels()) acc += std::log(f) / f;
      return {acc.value(), 0.0, spec.level_count()};
    }
    case SpectrumFamily::Harmonic:
      break;
  }
  throw NotSummable("log_weighted_sum: unsupported family");
}

/// State-tail quantities of the f-weighted entangled state.
struct SpectrumSummary {
  double c_f = 0.0;         ///< (sum 1/f_j)^{-1/2}
  double sigma_bits = 0.0;  ///< local entropy of |phi>, base 2
  double s_nats = 0.0;      ///< ln(2) * sigma_bits
  bool summable = false;
  double inverse_sum = 0.0;
};

inline double normalization(const Spectrum& spec) {
  return 1.0 / std::sqrt(inverse_sum(spec).value);
}

/// eps_d = c_f * sqrt(sum of 1/f over the levels beyond the first d).
inline double tail_epsilon(const Spectrum& spec, std::size_t d, double c_f) {
  if (d < 1) throw std::invalid_argument("tail_epsilon: d must be >= 1");
  const double tail = inverse_tail_sum(spec, d).value;
  return c_f * std::sqrt(std::max(tail, 0.0));
}

inline double tail_epsilon(const Spectrum& spec, std::size_t d) {
  return tail_epsilon(spec, d, normalization(spec));
}

/// sigma = -sum p_j log2 p_j with p_j = c_f^2 / f_j, written as
/// ln(S) + L / S in nats, S = sum 1/f, L = sum (1/f) ln f.
inline SpectrumSummary local_entropy(const Spectrum& spec) {
  detail::require_summable(spec, "local_entropy");
  const double S = inverse_sum(spec).value;
  const double L = log_weighted_sum(spec).value;
  SpectrumSummary out;
  out.summable = true;
  out.inverse_sum = S;
  out.c_f = 1.0 / std::sqrt(S);
  out.s_nats = std::log(S) + L / S;
  out.sigma_bits = out.s_nats / std::numbers::ln2;
  return out;
}

struct SummabilityReport {
  bool inverse_sum_converges = false;  ///< sum 1/f_j < inf
  bool log_sum_converges = false;      ///< |sum (1/f_j) log(1/f_j)| < inf
  bool positive_ground_energy = false;
  std::string reason;

  bool summable() const { return inverse_sum_converges && log_sum_converges && positive_ground_energy; }
};

inline SummabilityReport check_summability(const Spectrum& spec) {
  SummabilityReport r;
  r.positive_ground_energy = spec.ground_energy() > 0.0;
  switch (spec.family()) {
    case SpectrumFamily::Box:
      r.inverse_sum_converges = r.log_sum_converges = true;
      r.reason = "p-series with p = 2; ln(j)/j^2 is dominated by j^{-3/2}";
      break;
    case SpectrumFamily::Harmonic:
      r.reason = "harmonic series: sum 1/j diverges";
      break;
    case SpectrumFamily::Bridge:
      r.inverse_sum_converges = r.log_sum_converges = true;
      r.reason = "geometric tail with ratio e^{-omega} < 1";
      break;
    case SpectrumFamily::FiniteCustom:
      r.inverse_sum_converges = r.log_sum_converges = true;
      r.reason = "finite spectrum";
      break;
  }
  return r;
}

/// Closed forms for the bridge spectrum (used by the specialised bound and as
/// a cross-check on the series route).
namespace bridge_closed_form {

inline double inverse_sum(std::size_t D, double omega) {
  return static_cast<double>(D) + std::exp(-omega * static_cast<double>(D));
}

inline double c_f(std::size_t D, double omega) { return 1.0 / std::sqrt(inverse_sum(D, omega)); }

/// eps_d for d >= D.
inline double tail_epsilon(std::size_t D, double omega, std::size_t d) {
  return std::exp(-0.5 * omega * static_cast<double>(d)) * c_f(D, omega);
}

/// s = ln(2) sigma, rewritten so no e^{omega D} factor is formed.
inline double s_nats(std::size_t D, double omega) {
  const double Dd = static_cast<double>(D);
  const double x = std::exp(-omega * Dd);  // e^{-omega D}
  const double q = std::exp(-omega);
  const double S = Dd + x;
  const double weight = x / S;  // 1 / (1 + D e^{omega D})
  const double second = omega * (Dd + (1.0 - Dd) * q) / -std::expm1(-omega) * weight;
  const double third = -std::log1p(-q) * weight;
  return std::log(S) + second + third;
}

}  // namespace bridge_closed_form

}  // namespace objbound
