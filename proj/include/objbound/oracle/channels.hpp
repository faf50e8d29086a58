#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "objbound/oracle/linalg.hpp"
#include "objbound/oracle/quantum.hpp"
#include "objbound/oracle/rng.hpp"

namespace objbound::oracle {

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = cd(rng.normal(), rng.normal());
  }
  return g;
}

/// Haar-random unit vector.
inline Vector random_pure_state(std::size_t dim, CounterRng& rng) {
  Vector v = gaussian_matrix(dim, 1, rng).col(0);
  return v / v.norm();
}

/// Haar-random isometry (rows >= cols): QR of a Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
inline Matrix random_isometry(std::size_t rows, std::size_t cols, CounterRng& rng) {
  if (rows < cols) throw std::invalid_argument("random_isometry: need rows >= cols");
  const Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix r = qr.matrixQR().topRows(g.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cd d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

/// Stinespring sampling: V is a Haar isometry into out (x) env and
/// K_e(b, a) = V(b * env + e, a).
inline KrausChannel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t env_dim, std::uint64_t seed,
                                   std::uint64_t stream = 0) {
  if (dim_in == 0 || dim_out == 0 || env_dim == 0) throw std::invalid_argument("random_channel: zero dimension");
  if (dim_out * env_dim < dim_in) throw std::invalid_argument("random_channel: dim_out * env_dim < dim_in");
  CounterRng rng(seed, stream);
  const Matrix v = random_isometry(dim_out * env_dim, dim_in, rng);
  std::vector<Matrix> kraus(env_dim, Matrix(static_cast<Eigen::Index>(dim_out), static_cast<Eigen::Index>(dim_in)));
  const auto env = static_cast<Eigen::Index>(env_dim);
  for (Eigen::Index e = 0; e < env; ++e) {
    for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(dim_out); ++b) kraus[e].row(b) = v.row(b * env + e);
  }
  return KrausChannel(std::move(kraus));
}

inline KrausChannel identity_channel(std::size_t dim) {
  return KrausChannel({Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))});
}

/// X -> sum_k <k|X|k> |k><k|.
inline KrausChannel dephasing_channel(std::size_t dim) {
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < dim; ++k) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    ops.push_back(p);
  }
  return KrausChannel(std::move(ops));
}

/// Pure-loss channel of transmissivity eta on Fock states |0>..|cutoff-1>:
/// A_k = sum_n sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k><n|.
inline KrausChannel attenuator(double eta, std::size_t cutoff) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("attenuator: eta must lie in (0, 1]");
  if (cutoff < 2) throw std::invalid_argument("attenuator: cutoff must be >= 2");
  const auto n_max = static_cast<Eigen::Index>(cutoff);
  std::vector<Matrix> ops;
  for (Eigen::Index k = 0; k < n_max; ++k) {
    Matrix a = Matrix::Zero(n_max, n_max);
    for (Eigen::Index n = k; n < n_max; ++n) {
      const double log_binom = std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0);
      const double log_eta = n - k == 0 ? 0.0 : double(n - k) * std::log(eta);
      const double log_loss = k == 0 ? 0.0 : (eta == 1.0 ? -INFINITY : double(k) * std::log1p(-eta));
      a(n - k, n) = std::exp(0.5 * (log_binom + log_eta + log_loss));
    }
    if (a.cwiseAbs().maxCoeff() > 0.0) ops.push_back(std::move(a));
  }
  return KrausChannel(std::move(ops));
}

}  // namespace objbound::oracle
