#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/oracle/channels.hpp"
#include "objbound/oracle/linalg.hpp"
#include "objbound/oracle/quantum.hpp"

namespace objbound::oracle {

inline constexpr std::size_t kMaxSplitterDim = 4096;

/// Restriction of the symmetric N-splitter (vacuum on ports 2..N) to the
/// single-mode Fock space |0>..|cutoff-1>:
/// |n> -> sum_{|m| = n} sqrt(n! / prod m_j!) N^{-n/2} |m_1 ... m_N>.
/// Rows are indexed m_1 * cutoff^{N-1} + ... + m_N.
inline Matrix nsplitter_isometry(std::size_t N, std::size_t cutoff) {
  if (N < 2) throw std::invalid_argument("nsplitter_isometry: N must be >= 2");
  if (cutoff < 1) throw std::invalid_argument("nsplitter_isometry: cutoff must be positive");
  double total = 1.0;
  for (std::size_t j = 0; j < N; ++j) {
    total *= static_cast<double>(cutoff);
    if (total > static_cast<double>(kMaxSplitterDim)) {
      throw DimensionMismatch("nsplitter_isometry: cutoff^N exceeds " + std::to_string(kMaxSplitterDim));
    }
  }
  const auto rows = static_cast<Eigen::Index>(total);
  Matrix w = Matrix::Zero(rows, static_cast<Eigen::Index>(cutoff));
  const double log_n_ports = std::log(static_cast<double>(N));
  std::vector<std::size_t> m(N, 0);
  for (Eigen::Index row = 0; row < rows; ++row) {
    auto rest = static_cast<std::size_t>(row);
    std::size_t n = 0;
    double log_coeff = 0.0;
    for (std::size_t j = N; j-- > 0;) {
      m[j] = rest % cutoff;
      rest /= cutoff;
      n += m[j];
      log_coeff -= std::lgamma(static_cast<double>(m[j]) + 1.0);
    }
    if (n >= cutoff) continue;
    log_coeff += std::lgamma(static_cast<double>(n) + 1.0);
    w(row, static_cast<Eigen::Index>(n)) = std::exp(0.5 * log_coeff - 0.5 * static_cast<double>(n) * log_n_ports);
  }
  return w;
}

struct NSplitterResult {
  std::vector<DensityOperator> outputs;  ///< reduced output of each port
  DensityOperator attenuated;            ///< attenuator(1/N) applied to the input
  double symmetry_error = 0.0;           ///< max entrywise spread across ports
  std::optional<double> path_error;      ///< splitter vs attenuator; empty when the splitter is too large
};

/// Reduced outputs of the N-splitter computed on the full Fock space and,
/// independently, through the single-mode pure-loss channel of parameter 1/N.
inline NSplitterResult nsplitter_reduce(const DensityOperator& rho_A, std::size_t N, std::size_t cutoff) {
  if (N < 2) throw std::invalid_argument("nsplitter_reduce: N must be >= 2");
  if (rho_A.dim() > cutoff) throw DimensionMismatch("nsplitter_reduce: input exceeds the Fock cutoff");
  const auto c = static_cast<Eigen::Index>(cutoff);
  Matrix rho = Matrix::Zero(c, c);
  const auto d = static_cast<Eigen::Index>(rho_A.dim());
  rho.topLeftCorner(d, d) = rho_A.matrix();

  DensityOperator attenuated(attenuator(1.0 / static_cast<double>(N), cutoff).apply(rho));

  double total = 1.0;
  for (std::size_t j = 0; j < N && total <= static_cast<double>(kMaxSplitterDim); ++j) total *= static_cast<double>(cutoff);
  if (total > static_cast<double>(kMaxSplitterDim)) {
    return NSplitterResult{std::vector<DensityOperator>(N, attenuated), attenuated, 0.0, std::nullopt};
  }

  const Matrix w = nsplitter_isometry(N, cutoff);
  const Matrix global = w * rho * w.adjoint();
  const std::vector<std::size_t> dims(N, cutoff);
  std::vector<DensityOperator> outputs;
  for (std::size_t j = 0; j < N; ++j) outputs.emplace_back(partial_trace(global, dims, {j}));

  double sym = 0.0;
  double path = 0.0;
  for (const auto& o : outputs) {
    sym = std::max(sym, (o.matrix() - outputs.front().matrix()).cwiseAbs().maxCoeff());
    path = std::max(path, (o.matrix() - attenuated.matrix()).cwiseAbs().maxCoeff());
  }
  return NSplitterResult{std::move(outputs), std::move(attenuated), sym, path};
}

/// Coefficients sech(r) tanh(r)^n of the two-mode squeezed vacuum, n < cutoff.
inline RealVector tmsv_coefficients(double r, std::size_t cutoff) {
  RealVector c(static_cast<Eigen::Index>(cutoff));
  const double t = std::tanh(r);
  double v = 1.0 / std::cosh(r);
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    c(n) = v;
    v *= t;
  }
  return c;
}

/// <phi_s| (id (x) Lambda_{1/N})[psi_r] |phi_s> by brute force on the
/// truncated Fock space: sum_K |<phi_s|(I (x) A_K)|psi_r>|^2.
inline double tmsv_overlap_check(std::size_t N, double r, double s, std::size_t cutoff) {
  if (N < 2) throw std::invalid_argument("tmsv_overlap_check: N must be >= 2");
  if (!(r >= 0.0 && s >= 0.0)) throw std::invalid_argument("tmsv_overlap_check: r and s must be non-negative");
  const double tail = std::pow(std::tanh(std::max(r, s)), 2.0 * static_cast<double>(cutoff));
  if (!(tail < 1e-12)) throw std::invalid_argument("tmsv_overlap_check: cutoff too small for the squeezing");

  const RealVector cr = tmsv_coefficients(r, cutoff);
  const RealVector cs = tmsv_coefficients(s, cutoff);
  // |psi> <-> diagonal coefficient matrix C; (I (x) A) psi <-> C A^T.
  const auto ch = attenuator(1.0 / static_cast<double>(N), cutoff);
  double total = 0.0;
  for (const auto& a : ch.kraus()) {
    // <phi_s| lives on |mm>, and (C A^T)(m, m) = C(m, m) A(m, m).
    cd amp = 0.0;
    for (Eigen::Index m = 0; m < cr.size(); ++m) amp += cs(m) * cr(m) * a(m, m);
    total += std::norm(amp);
  }
  return total;
}

}  // namespace objbound::oracle
