#pragma once

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace objbound {

/// Compensated (Neumaier) accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// kappa = lambda = 3 (16 ln 2)^{1/3}.
inline double kappa() { return 3.0 * std::cbrt(16.0 * std::numbers::ln2); }

/// Particle-in-a-box constants: alpha = (12 pi^4)^{1/3}, beta = sqrt(8 pi^2 / 3).
inline double box_alpha() {
  const double pi = std::numbers::pi;
  return std::cbrt(12.0 * pi * pi * pi * pi);
}
inline double box_beta() {
  const double pi = std::numbers::pi;
  return std::sqrt(8.0 * pi * pi / 3.0);
}

/// Trigamma psi'(x) for x > 0.
///
/// Shifts x upward with psi'(x) = psi'(x+1) + 1/x^2 until x >= 12, then uses
/// the asymptotic expansion
///   psi'(x) ~ 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
/// truncated after B_12; the neglected term is below 1e-17 relative.
inline double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("trigamma: argument must be positive and finite");
  }
  double shifted = 0.0;
  while (x < 12.0) {
    shifted += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli numbers B_2..B_12.
  constexpr double b2 = 1.0 / 6.0;
  constexpr double b4 = -1.0 / 30.0;
  constexpr double b6 = 1.0 / 42.0;
  constexpr double b8 = -1.0 / 30.0;
  constexpr double b10 = 5.0 / 66.0;
  constexpr double b12 = -691.0 / 2730.0;
  const double series =
      inv2 * (b2 + inv2 * (b4 + inv2 * (b6 + inv2 * (b8 + inv2 * (b10 + inv2 * b12)))));
  return shifted + inv * (1.0 + 0.5 * inv + series);
}

/// Shortest decimal text that parses back to exactly `x`.
inline std::string to_shortest_string(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Whole-string parse of a double; nullopt on any trailing garbage.
inline std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace objbound
