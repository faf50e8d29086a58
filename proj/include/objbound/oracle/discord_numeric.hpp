#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/oracle/choi.hpp"
#include "objbound/oracle/linalg.hpp"
#include "objbound/oracle/quantum.hpp"

namespace objbound::oracle {

inline std::size_t second_dimension(const DensityOperator& rho, std::size_t dim_A, const char* what) {
  if (dim_A == 0 || rho.dim() % dim_A != 0) {
    throw DimensionMismatch(std::string(what) + ": dim_A does not divide the state dimension");
  }
  return rho.dim() / dim_A;
}

/// I(A:B) = S(A) + S(B) - S(AB) in bits.
inline double mutual_information(const DensityOperator& rho_AB, std::size_t dim_A) {
  const std::size_t dim_B = second_dimension(rho_AB, dim_A, "mutual_information");
  const Matrix& m = rho_AB.matrix();
  const double i = von_neumann_entropy(trace_second(m, dim_A, dim_B)) + von_neumann_entropy(trace_first(m, dim_A, dim_B)) -
                   von_neumann_entropy(m);
  return std::max(0.0, i);
}

/// S(A) - sum_l p_l S(rho_A^l) after measuring B with {N_l}.
inline double measured_information(const Matrix& rho, std::size_t dim_A, std::size_t dim_B,
                                   const std::vector<Matrix>& povm) {
  const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(dim_A), static_cast<Eigen::Index>(dim_A));
  double conditional = 0.0;
  for (const auto& n : povm) {
    const Matrix branch = trace_second(kron(id, n) * rho, dim_A, dim_B);
    const double p = branch.trace().real();
    if (p <= 1e-15) continue;
    const Matrix b = branch / p;
    conditional += p * von_neumann_entropy(0.5 * (b + b.adjoint()));
  }
  return von_neumann_entropy(trace_second(rho, dim_A, dim_B)) - conditional;
}

/// D(A|B) with B a qubit, optimised over rank-one projective measurements
/// on B (grid over the Bloch sphere plus local refinement).
inline double discord_numeric(const DensityOperator& rho_AB, std::size_t dim_A) {
  const std::size_t dim_B = second_dimension(rho_AB, dim_A, "discord_numeric");
  if (dim_B != 2) throw DimensionMismatch("discord_numeric: B must be a qubit");
  const Matrix& m = rho_AB.matrix();
  const double classical =
      max_qubit_projective([&](const std::vector<Matrix>& p) { return measured_information(m, dim_A, 2, p); }, 3);
  return std::max(0.0, mutual_information(rho_AB, dim_A) - classical);
}

}  // namespace objbound::oracle
