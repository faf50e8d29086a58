#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/oracle/linalg.hpp"

namespace objbound::oracle {

inline constexpr double kInvariantTolerance = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix (checked on construction).
class DensityOperator {
 public:
  explicit DensityOperator(Matrix m, double tol = kInvariantTolerance) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) throw DimensionMismatch("DensityOperator: matrix must be square");
    if (!is_hermitian(m_, tol)) throw InvariantViolation("DensityOperator: not Hermitian");
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol) throw InvariantViolation("DensityOperator: trace " + std::to_string(tr) + " != 1");
    const double lo = hermitian_eigenvalues(m_).minCoeff();
    if (lo < -tol) throw InvariantViolation("DensityOperator: negative eigenvalue " + std::to_string(lo));
  }

  static DensityOperator pure(const Vector& psi) { return DensityOperator(psi * psi.adjoint()); }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Completely positive map in Kraus form; trace preservation checked on construction.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> kraus, double tol = kInvariantTolerance) : ops_(std::move(kraus)) {
    if (ops_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
    dim_out_ = static_cast<std::size_t>(ops_.front().rows());
    dim_in_ = static_cast<std::size_t>(ops_.front().cols());
    Matrix sum = Matrix::Zero(ops_.front().cols(), ops_.front().cols());
    for (const auto& k : ops_) {
      if (static_cast<std::size_t>(k.rows()) != dim_out_ || static_cast<std::size_t>(k.cols()) != dim_in_) {
        throw DimensionMismatch("KrausChannel: Kraus operators differ in shape");
      }
      sum += k.adjoint() * k;
    }
    const double err = (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
    if (err > tol) throw InvariantViolation("KrausChannel: sum K^dag K deviates from identity by " + std::to_string(err));
  }

  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }
  const std::vector<Matrix>& kraus() const noexcept { return ops_; }

  /// Lambda(X) for any operator X on the input space.
  Matrix apply(const Matrix& x) const {
    if (static_cast<std::size_t>(x.rows()) != dim_in_ || x.cols() != x.rows()) {
      throw DimensionMismatch("KrausChannel::apply: input dimension mismatch");
    }
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim_out_), static_cast<Eigen::Index>(dim_out_));
    for (const auto& k : ops_) out.noalias() += k * x * k.adjoint();
    return out;
  }

  DensityOperator apply(const DensityOperator& rho) const { return DensityOperator(apply(rho.matrix())); }

  /// (id_R (x) Lambda)(X) for X on R (x) input, with R of dimension dim_r first.
  Matrix apply_second(const Matrix& x, std::size_t dim_r) const {
    const auto r = static_cast<Eigen::Index>(dim_r);
    if (x.rows() != r * static_cast<Eigen::Index>(dim_in_) || x.cols() != x.rows()) {
      throw DimensionMismatch("KrausChannel::apply_second: input dimension mismatch");
    }
    const Matrix id = Matrix::Identity(r, r);
    Matrix out = Matrix::Zero(r * static_cast<Eigen::Index>(dim_out_), r * static_cast<Eigen::Index>(dim_out_));
    for (const auto& k : ops_) {
      const Matrix big = kron(id, k);
      out.noalias() += big * x * big.adjoint();
    }
    return out;
  }

  /// (id_R (x) Lambda)|psi><psi| for a pure input, via coefficient matrices.
  Matrix apply_second_pure(const Vector& psi, std::size_t dim_r) const {
    const auto r = static_cast<Eigen::Index>(dim_r);
    const auto din = static_cast<Eigen::Index>(dim_in_);
    const auto dout = static_cast<Eigen::Index>(dim_out_);
    if (psi.size() != r * din) throw DimensionMismatch("KrausChannel::apply_second_pure: dimension mismatch");
    // psi(a * din + b) = C(a, b); (I (x) K) psi <-> C K^T.
    Matrix coeff(r, din);
    for (Eigen::Index a = 0; a < r; ++a) {
      for (Eigen::Index b = 0; b < din; ++b) coeff(a, b) = psi(a * din + b);
    }
    Matrix out = Matrix::Zero(r * dout, r * dout);
    Vector v(r * dout);
    for (const auto& k : ops_) {
      const Matrix c = coeff * k.transpose();
      for (Eigen::Index a = 0; a < r; ++a) {
        for (Eigen::Index b = 0; b < dout; ++b) v(a * dout + b) = c(a, b);
      }
      out.noalias() += v * v.adjoint();
    }
    return out;
  }

 private:
  std::vector<Matrix> ops_;
  std::size_t dim_in_ = 0;
  std::size_t dim_out_ = 0;
};

/// Positive operator-valued measure; elements PSD and summing to identity.
class Povm {
 public:
  explicit Povm(std::vector<Matrix> elements, double tol = kInvariantTolerance) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
    const auto n = elements_.front().rows();
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& e : elements_) {
      if (e.rows() != n || e.cols() != n) throw DimensionMismatch("Povm: elements differ in shape");
      if (!is_hermitian(e, tol)) throw InvariantViolation("Povm: element not Hermitian");
      if (hermitian_eigenvalues(e).minCoeff() < -tol) throw InvariantViolation("Povm: element not positive");
      sum += e;
    }
    completeness_error_ = (sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (completeness_error_ > tol) {
      throw InvariantViolation("Povm: elements sum to identity only within " + std::to_string(completeness_error_));
    }
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(elements_.front().rows()); }
  const std::vector<Matrix>& elements() const noexcept { return elements_; }
  double completeness_error() const noexcept { return completeness_error_; }

 private:
  std::vector<Matrix> elements_;
  double completeness_error_ = 0.0;
};

}  // namespace objbound::oracle
