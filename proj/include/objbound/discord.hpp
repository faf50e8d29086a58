#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "objbound/bounds.hpp"
#include "objbound/errors.hpp"
#include "objbound/gibbs.hpp"
#include "objbound/report.hpp"
#include "objbound/spectrum.hpp"

namespace objbound {

struct SlackInputs {
  double zeta = 0.0;
  double delta = 0.1;
  Spectrum spec_A = Spectrum::harmonic();
  double E_A = 1.0;

  double epsilon_prime() const { return zeta / delta; }
  bool regime_valid() const { return epsilon_prime() <= 1.0; }
};

/// The three pieces of the mutual-information slack, in bits.
struct SlackTerms {
  double epsilon_prime = 0.0;
  double Delta = 0.0;             ///< eps' / (2 (1 + eps'))
  double gibbs_entropy = 0.0;     ///< S(gamma(E_A / Delta))
  double energy_term = 0.0;       ///< (2 eps' + 4 Delta) S(gamma(E_A / Delta))
  double continuity_term = 0.0;   ///< (1 + eps') h(eps' / (1 + eps'))
  double delta_term = 0.0;        ///< 2 h(Delta)
  double total = 0.0;
};

inline SlackTerms slack_terms(const SlackInputs& in) {
  if (!(in.zeta >= 0.0) || !std::isfinite(in.zeta)) throw std::invalid_argument("slack: zeta must be nonnegative");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw std::invalid_argument("slack: delta must lie in (0, 1)");
  if (!(in.E_A > 0.0)) throw std::invalid_argument("slack: E_A must be positive");
  SlackTerms t;
  t.epsilon_prime = in.epsilon_prime();
  if (!in.regime_valid()) {
    throw RegimeViolation("slack: eps' = zeta/delta = " + to_shortest_string(t.epsilon_prime) +
                          " exceeds 1; the continuity bound does not apply");
  }
  if (t.epsilon_prime == 0.0) return t;
  const double e = t.epsilon_prime;
  t.Delta = 0.5 * e / (1.0 + e);
  t.gibbs_entropy = gibbs_entropy(in.spec_A, in.E_A / t.Delta);
  t.energy_term = (2.0 * e + 4.0 * t.Delta) * t.gibbs_entropy;
  t.continuity_term = (1.0 + e) * binary_entropy(e / (1.0 + e));
  t.delta_term = 2.0 * binary_entropy(t.Delta);
  t.total = t.energy_term + t.continuity_term + t.delta_term;
  return t;
}

inline double slack(const SlackInputs& in) { return slack_terms(in).total; }

/// Slack along an N grid with delta = sqrt(zeta).
///
/// zeta comes from optimize_d on `model` at energy E_B. `excess` is the
/// amount by which the fragment-averaged mutual information can exceed the
/// accessible information: (1 - delta) slack + delta S_cap, where S_cap stands
/// in for 2 S(A) and defaults to 2 S(gamma(E_A)). Rows with eps' > 1 carry
/// regime_valid = false and NaN slack.
inline SweepReport convergence_profile(const BoundModel& model, const Spectrum& spec_A, double E_A, double E_B,
                                       const std::vector<double>& N_grid,
                                       std::optional<double> S_cap = std::nullopt) {
  if (N_grid.empty()) throw std::invalid_argument("convergence_profile: empty N grid");
  const double cap = S_cap ? *S_cap : 2.0 * gibbs_entropy(spec_A, E_A);

  SweepReport rep;
  rep.command = "discord-slack";
  rep.columns = {"N", "d_opt", "zeta", "delta", "epsilon_prime", "Delta", "regime_valid", "slack", "excess"};

  std::vector<double> grid = N_grid;
  std::sort(grid.begin(), grid.end());
  auto rows = parallel_map<std::vector<Cell>>(grid.size(), [&](std::size_t i) {
    const double N = grid[i];
    // zeta does not depend on delta; 0.5 is a placeholder for validation.
    const auto z = optimize_d(model, ObjectivityParams{E_B, 0.5, N});
    const double delta = std::sqrt(z.zeta);
    const double eps = z.zeta / (delta > 0.0 ? delta : 1.0);
    const bool valid = delta > 0.0 && delta < 1.0 && eps <= 1.0;
    double s = std::numeric_limits<double>::quiet_NaN();
    double Delta = 0.5 * eps / (1.0 + eps);
    double excess = std::numeric_limits<double>::quiet_NaN();
    if (valid) {
      const auto terms = slack_terms(SlackInputs{z.zeta, delta, spec_A, E_A});
      s = terms.total;
      Delta = terms.Delta;
      excess = (1.0 - delta) * s + delta * cap;
    }
    return std::vector<Cell>{N,     static_cast<std::int64_t>(z.d), z.zeta, delta, eps, Delta, valid, s,
                             excess};
  });
  for (auto& r : rows) rep.add_row(std::move(r));
  return rep;
}

}  // namespace objbound
