#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "objbound/errors.hpp"
#include "objbound/oracle/choi.hpp"
#include "objbound/oracle/linalg.hpp"
#include "objbound/oracle/quantum.hpp"
#include "objbound/spectrum.hpp"

namespace objbound::oracle {

/// One outcome z of the fragment measurement: p(z) and the unnormalised
/// post-measurement state with the measured fragments still attached.
struct Branch {
  std::vector<std::size_t> outcome;
  double probability = 0.0;
  Matrix state;
};

/// Measures fragments `measured` (0-based) of the global state on
/// A (x) B_0 (x) ... (x) B_{N-1} in the orthonormal bases given as the columns
/// of `bases`. Outcomes with probability below `cutoff` are dropped.
inline std::vector<Branch> measure_fragments(const Matrix& rho, const std::vector<std::size_t>& dims,
                                             const std::vector<std::size_t>& measured,
                                             const std::vector<Matrix>& bases, double cutoff = 1e-14) {
  if (measured.size() != bases.size()) throw std::invalid_argument("measure_fragments: one basis per measured fragment");
  const std::size_t fragments = dims.size() - 1;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (measured[i] >= fragments) throw std::invalid_argument("measure_fragments: fragment index out of range");
    if (std::count(measured.begin(), measured.end(), measured[i]) != 1) {
      throw std::invalid_argument("measure_fragments: fragment measured twice");
    }
    const auto db = static_cast<Eigen::Index>(dims[measured[i] + 1]);
    if (bases[i].rows() != db || bases[i].cols() != db) throw DimensionMismatch("measure_fragments: basis shape");
    if ((bases[i].adjoint() * bases[i] - Matrix::Identity(db, db)).cwiseAbs().maxCoeff() > kInvariantTolerance) {
      throw InvariantViolation("measure_fragments: basis is not orthonormal");
    }
  }

  std::vector<Branch> out;
  std::vector<std::size_t> z(measured.size(), 0);
  while (true) {
    Matrix proj = Matrix::Identity(static_cast<Eigen::Index>(dims[0]), static_cast<Eigen::Index>(dims[0]));
    for (std::size_t f = 0; f < fragments; ++f) {
      const auto db = static_cast<Eigen::Index>(dims[f + 1]);
      auto it = std::find(measured.begin(), measured.end(), f);
      if (it == measured.end()) {
        proj = kron(proj, Matrix::Identity(db, db));
      } else {
        const auto i = static_cast<std::size_t>(it - measured.begin());
        const Vector b = bases[i].col(static_cast<Eigen::Index>(z[i]));
        proj = kron(proj, Matrix(b * b.adjoint()));
      }
    }
    Matrix s = proj * rho * proj;
    const double p = s.trace().real();
    if (p > cutoff) out.push_back(Branch{z, p, std::move(s)});

    std::size_t i = 0;
    for (; i < z.size(); ++i) {
      if (++z[i] < dims[measured[i] + 1]) break;
      z[i] = 0;
    }
    if (i == z.size()) break;
  }
  return out;
}

struct MeasurePrepareResult {
  Povm povm;
  std::vector<double> probabilities;
  std::vector<DensityOperator> prepared;  ///< rho_{B_j}^z
  KrausChannel channel;                   ///< E_j
  Matrix average_state;                   ///< E_z rho_A^z (x) rho_{B_j}^z
  double completeness_error = 0.0;
  double choi_error = 0.0;          ///< max |J_f(E_j) - average_state|
  double fragment_distance = 0.0;   ///< ||rho_{A B_j} - average_state||_1
};

/// Builds the measure-and-prepare channel attached to fragment `target`
/// from measurements on the fragments `measured`.
///
/// The POVM is {c_f^{-2} p(z) H^{1/2} (rho_A^z)^T H^{1/2}}_z and E_j prepares
/// rho_{B_j}^z; its Kraus operators are sqrt(mu_a lambda_b) |v_b><u_a| from
/// the eigendecompositions of each POVM element and prepared state.
inline MeasurePrepareResult mp_construct(const KrausChannel& lam, const Spectrum& spec,
                                         const std::vector<std::size_t>& fragment_dims,
                                         const std::vector<std::size_t>& measured, const std::vector<Matrix>& bases,
                                         std::size_t target) {
  if (fragment_dims.empty()) throw std::invalid_argument("mp_construct: no fragments");
  if (product(fragment_dims) != lam.dim_out()) {
    throw DimensionMismatch("mp_construct: fragment dimensions do not multiply to the channel output");
  }
  if (target >= fragment_dims.size()) throw std::invalid_argument("mp_construct: target out of range");
  if (std::find(measured.begin(), measured.end(), target) != measured.end()) {
    throw std::invalid_argument("mp_construct: target fragment is among the measured ones");
  }
  const std::size_t n = lam.dim_in();
  if (n * lam.dim_out() > 4096) throw DimensionMismatch("mp_construct: global state too large");

  const auto choi = f_choi(lam, spec);
  const auto& t = choi.truncation;
  std::vector<std::size_t> dims{n};
  dims.insert(dims.end(), fragment_dims.begin(), fragment_dims.end());

  const auto branches = measure_fragments(choi.state.matrix(), dims, measured, bases);

  const auto ni = static_cast<Eigen::Index>(n);
  Matrix h_sqrt = Matrix::Zero(ni, ni);
  for (Eigen::Index k = 0; k < ni; ++k) h_sqrt(k, k) = std::sqrt(t.levels[static_cast<std::size_t>(k)]);
  const double inv_cf2 = 1.0 / (t.c_f * t.c_f);
  const std::size_t db = fragment_dims[target];
  const auto dbi = static_cast<Eigen::Index>(db);

  std::vector<Matrix> elements;
  std::vector<double> probs;
  std::vector<DensityOperator> prepared;
  std::vector<Matrix> kraus;
  Matrix average = Matrix::Zero(ni * dbi, ni * dbi);
  for (const auto& br : branches) {
    const Matrix rho_a = partial_trace(br.state, dims, {0}) / br.probability;
    const Matrix rho_b = partial_trace(br.state, dims, {target + 1}) / br.probability;
    const Matrix m = inv_cf2 * br.probability * h_sqrt * rho_a.transpose() * h_sqrt;
    elements.push_back(0.5 * (m + m.adjoint()));
    probs.push_back(br.probability);
    prepared.emplace_back(0.5 * (rho_b + rho_b.adjoint()));
    average += br.probability * kron(rho_a, rho_b);

    Eigen::SelfAdjointEigenSolver<Matrix> em(elements.back());
    Eigen::SelfAdjointEigenSolver<Matrix> eb(prepared.back().matrix());
    for (Eigen::Index a = 0; a < ni; ++a) {
      const double mu = em.eigenvalues()(a);
      if (mu <= 1e-15) continue;
      for (Eigen::Index b = 0; b < dbi; ++b) {
        const double lambda = eb.eigenvalues()(b);
        if (lambda <= 1e-15) continue;
        kraus.push_back(std::sqrt(mu * lambda) * eb.eigenvectors().col(b) * em.eigenvectors().col(a).adjoint());
      }
    }
  }

  Povm povm(elements);
  KrausChannel channel(std::move(kraus));
  const auto mp_choi = f_choi(channel, spec);
  const Matrix rho_abj = partial_trace(choi.state.matrix(), dims, {0, target + 1});

  MeasurePrepareResult r{std::move(povm), std::move(probs), std::move(prepared), std::move(channel), average};
  r.completeness_error = r.povm.completeness_error();
  r.choi_error = (mp_choi.state.matrix() - average).cwiseAbs().maxCoeff();
  r.fragment_distance = trace_norm(rho_abj - average);
  return r;
}

/// Largest entrywise difference between two POVMs with matching outcomes.
inline double povm_difference(const Povm& a, const Povm& b) {
  if (a.elements().size() != b.elements().size()) return INFINITY;
  double err = 0.0;
  for (std::size_t z = 0; z < a.elements().size(); ++z) {
    err = std::max(err, (a.elements()[z] - b.elements()[z]).cwiseAbs().maxCoeff());
  }
  return err;
}

struct FragmentProbeReport {
  double best_lhs = INFINITY;   ///< min over measured sets J of the averaged measured distance
  double bound = 0.0;           ///< sqrt(2 ln2 sigma / m)
  std::vector<std::size_t> best_set;
  std::size_t sets_tried = 0;
  bool pass = false;
};

/// Necessary-condition probe of the measured-distance lemma for qubit
/// fragments: every subset J with |J| <= m - 1 is measured in the
/// computational basis, the distance for each unmeasured fragment is
/// maximised over qubit projective measurements (so it lower-bounds the
/// maximum over all measurements), and the best J is compared with
/// sqrt(2 ln2 sigma / m). Report only.
inline FragmentProbeReport fragment_probe(const KrausChannel& lam, const Spectrum& spec, std::size_t fragments,
                                              std::size_t m) {
  if (m < 1 || m > fragments) throw std::invalid_argument("fragment_probe: need 1 <= m <= N");
  std::vector<std::size_t> fdims(fragments, 2);
  if (product(fdims) != lam.dim_out()) throw DimensionMismatch("fragment_probe: output is not N qubits");
  const auto choi = f_choi(lam, spec);
  const std::size_t n = lam.dim_in();
  std::vector<std::size_t> dims{n};
  dims.insert(dims.end(), fdims.begin(), fdims.end());

  FragmentProbeReport rep;
  rep.bound = std::sqrt(2.0 * std::numbers::ln2 * choi.truncation.sigma_bits() / static_cast<double>(m));
  const Matrix computational = Matrix::Identity(2, 2);
  for (std::size_t mask = 0; mask < (std::size_t{1} << fragments); ++mask) {
    std::vector<std::size_t> J;
    for (std::size_t f = 0; f < fragments; ++f) {
      if (mask >> f & 1u) J.push_back(f);
    }
    if (J.size() + 1 > m || J.size() == fragments) continue;
    ++rep.sets_tried;
    const auto branches = measure_fragments(choi.state.matrix(), dims, J, std::vector<Matrix>(J.size(), computational));
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < fragments; ++j) {
      if (mask >> j & 1u) continue;
      Matrix avg = Matrix::Zero(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
      for (const auto& br : branches) {
        avg += br.probability * kron(Matrix(partial_trace(br.state, dims, {0}) / br.probability),
                                     Matrix(partial_trace(br.state, dims, {j + 1}) / br.probability));
      }
      const Matrix diff = partial_trace(choi.state.matrix(), dims, {0, j + 1}) - avg;
      total += max_qubit_projective([&](const std::vector<Matrix>& p) { return measured_norm(diff, n, 2, p); }, 2);
      ++count;
    }
    const double lhs = total / static_cast<double>(count);
    if (lhs < rep.best_lhs) {
      rep.best_lhs = lhs;
      rep.best_set = J;
    }
  }
  rep.pass = rep.best_lhs <= rep.bound;
  return rep;
}

}  // namespace objbound::oracle
