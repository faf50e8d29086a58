#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "objbound/errors.hpp"

namespace objbound::oracle {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline double hermiticity_error(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double tol = 1e-10) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

/// Eigenvalues of the Hermitian part, ascending.
inline RealVector hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Schatten 1-norm: |eigenvalues| for Hermitian input, singular values otherwise.
inline double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("trace_norm: matrix is not square");
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw std::invalid_argument("trace_norm: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_error(m) <= 1e-13 * scale) return hermitian_eigenvalues(m).cwiseAbs().sum();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

/// Entropy in bits of a spectrum, with 0 log 0 = 0 and tiny negative rounding clipped.
inline double entropy_bits(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues(i);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

inline double von_neumann_entropy(const Matrix& rho) { return entropy_bits(hermitian_eigenvalues(rho)); }

/// Principal square root of a positive semidefinite matrix.
inline Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  const RealVector lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

/// Trace over every subsystem not listed in `keep`.
///
/// Subsystems are ordered as in the Kronecker product (first factor is the
/// most significant index); `keep` must be strictly increasing.
inline Matrix partial_trace(const Matrix& m, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& keep) {
  const std::size_t total = product(dims);
  if (m.rows() != static_cast<Eigen::Index>(total) || m.cols() != m.rows()) {
    throw DimensionMismatch("partial_trace: matrix size " + std::to_string(m.rows()) +
                            " does not match the subsystem dimensions");
  }
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= dims.size() || (k > 0 && keep[k] <= keep[k - 1])) {
      throw std::invalid_argument("partial_trace: kept subsystems must be increasing and in range");
    }
  }
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[k] = true;

  // Offsets of every kept (resp. traced) multi-index within the full index.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> out{0};
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (kept[s] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(out.size() * dims[s]);
      for (auto base : out) {
        for (std::size_t v = 0; v < dims[s]; ++v) next.push_back(base + v * stride[s]);
      }
      out = std::move(next);
    }
    return out;
  };
  const auto kept_off = offsets(true);
  const auto traced_off = offsets(false);

  const auto n = static_cast<Eigen::Index>(kept_off.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      cd acc = 0.0;
      for (auto t : traced_off) acc += m(kept_off[i] + t, kept_off[j] + t);
      out(i, j) = acc;
    }
  }
  return out;
}

/// Bipartite shorthands: keep the first or the second factor.
inline Matrix trace_second(const Matrix& m, std::size_t dim_a, std::size_t dim_b) {
  return partial_trace(m, {dim_a, dim_b}, {0});
}
inline Matrix trace_first(const Matrix& m, std::size_t dim_a, std::size_t dim_b) {
  return partial_trace(m, {dim_a, dim_b}, {1});
}

}  // namespace objbound::oracle
