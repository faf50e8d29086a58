// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "objbound/bounds.hpp"
#include "objbound/cli.hpp"
#include "objbound/oracle/suite.hpp"
#include "objbound/pureloss.hpp"
#include "objbound/spectrum.hpp"

using namespace objbound;

namespace {

// Tolerances, pinned.
constexpr double kSigmaTarget = 2.40;
constexpr double kSigmaTol = 0.05;
constexpr double kSigmaSeconds = 1.0;
constexpr double kKappaTol = 1e-12;
constexpr double kBoxGridRel = 1e-9;
constexpr double kBridgeRel = 1e-6;
constexpr double kBridgeOmega = 50.0;
constexpr double kQrRel = 1e-3;
constexpr double kOverlapTol = 1e-6;
constexpr double kOverlapPoint = 0.955600;
constexpr double kSymmetryTol = 1e-10;
constexpr double kDualPathTol = 1e-8;
constexpr double kMpTol = 1e-10;
constexpr double kBoxFarBound = 0.06;
constexpr double kDiscordTol = 0.005;
constexpr std::uint64_t kSeed = 20240601;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("[%s] %2d %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  if (!pass) ++failures;
}

std::string num(double x) { return to_shortest_string(x); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

void sigma_box() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = local_entropy(Spectrum::box());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = std::abs(s.sigma_bits - kSigmaTarget) <= kSigmaTol && secs < kSigmaSeconds;
  report(1, ok, "sigma(Box) = " + num(s.sigma_bits) + " bits in " + num(secs) + " s");
}

void constants() {
  const double lambda = 3.0 * std::exp(std::log(16.0 * std::numbers::ln2) / 3.0);
  const double alpha = std::cbrt(12.0 * std::pow(std::numbers::pi, 4));
  const double beta = std::sqrt(8.0 * std::numbers::pi * std::numbers::pi / 3.0);
  bool ok = std::abs(kappa() - lambda) <= kKappaTol && std::abs(box_alpha() - alpha) <= kKappaTol * alpha &&
            std::abs(box_beta() - beta) <= kKappaTol * beta;
  double worst = 0.0;
  const auto box = Spectrum::box();
  for (double E : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (double N : {1e3, 1e6, 1e12, 1e20, 1e40}) {
      for (std::size_t d : {1u, 10u, 100u, 1000u, 100000u}) {
        const ObjectivityParams p{E, 0.01, N};
        worst = std::max(worst, rel(zeta_general(box, p, d).zeta, zeta_special(BoundFamily::Box, 0, 0.0, p, d).zeta));
      }
    }
  }
  ok = ok && worst <= kBoxGridRel;
  report(2, ok, "kappa = " + num(kappa()) + ", alpha = " + num(box_alpha()) + ", beta = " + num(box_beta()) +
                    "; Box general vs special worst rel " + num(worst));
}

void bridge_limit() {
  double worst = 0.0;
  for (std::size_t D = 2; D <= 10; ++D) {
    for (std::size_t d = D; d <= 50; ++d) {
      for (double N : {1e4, 1e8, 1e16}) {
        const ObjectivityParams p{1.0, 0.1, N};
        worst = std::max(worst, rel(zeta_special(BoundFamily::Bridge, D, kBridgeOmega, p, d).zeta,
                                    zeta_special(BoundFamily::BridgeLimit, D, 0.0, p, d).zeta));
      }
    }
  }
  report(3, worst <= kBridgeRel, "Bridge(omega=50) vs limit, D 2..10, d D..50: worst rel " + num(worst));
}

void qi_ranard_claims() {
  double worst = 0.0;
  for (std::size_t D = 2; D <= 20; ++D) {
    for (double delta : {0.01, 0.1}) worst = std::max(worst, rel(qr_threshold(D, delta), qr_threshold_by_bisection(D, delta)));
  }
  std::size_t nontrivial = 0, beats_b2 = 0, beats_b1 = 0;
  std::vector<std::size_t> dims;
  for (std::size_t D = 2; D <= 20; ++D) dims.push_back(D);
  for (double D = 30; D <= 1e6; D *= 1.5) dims.push_back(static_cast<std::size_t>(D));
  for (std::size_t D : dims) {
    for (double delta : {0.01, 0.05, 0.1, 0.3, 0.5, 0.9}) {
      for (double lg = 0.0; lg <= 60.0; lg += 0.25) {
        const double N = std::pow(10.0, lg);
        const double b = qr_comparison_bound(D, N, delta);
        if (!(b < 2.0)) continue;
        ++nontrivial;
        beats_b2 += b < qi_ranard(D, N, delta, 2) ? 1 : 0;
        beats_b1 += b < qi_ranard(D, N, delta, 1) ? 1 : 0;
      }
    }
  }
  const bool ok = worst <= kQrRel && beats_b2 == 0 && beats_b1 > 0;
  report(4, ok, "threshold vs bisection worst rel " + num(worst) + "; of " + std::to_string(nontrivial) +
                    " nontrivial points, " + std::to_string(beats_b2) + " beat b2, " + std::to_string(beats_b1) +
                    " beat b1");
}

void pureloss_sandwich() {
  bool ok = pureloss_mu() < 10.0;
  std::size_t checked = 0;
  for (double x : log_grid(2.0, 1e6, 60)) {
    const auto N = static_cast<std::uint64_t>(std::llround(x));
    const double Nd = static_cast<double>(N);
    const double lb = lower_bound(N).value;
    const double E = std::max(1.0, 2.0 / Nd);
    ok = ok && 1.0 / (2.0 * Nd) <= 1.0 / (2.0 * Nd - 1.0) && 1.0 / (2.0 * Nd - 1.0) <= lb &&
         lb <= pureloss_envelope(E, Nd);
    ++checked;
  }
  report(5, ok, "1/(2N) <= 1/(2N-1) <= lower_bound <= envelope on " + std::to_string(checked) +
                    " N in [2, 1e6]; mu = " + num(pureloss_mu()));
}

void overlap_oracle() {
  double worst = 0.0;
  for (std::size_t N : {2u, 3u}) {
    for (double r : {0.1, 0.3, 0.5}) {
      for (double s : {0.1, 0.3, 0.5}) {
        for (std::size_t cutoff = 40; cutoff <= 60; cutoff += 5) {
          worst = std::max(worst, std::abs(oracle::tmsv_overlap_check(N, r, s, cutoff) - tmsv_overlap(double(N), r, s)));
        }
      }
    }
  }
  const double point = oracle::tmsv_overlap_check(2, 0.3, 0.2, 40);
  const bool ok = worst <= kOverlapTol && std::abs(point - kOverlapPoint) <= kOverlapTol;
  report(6, ok, "Fock overlap vs closed form worst " + num(worst) + "; (N=2, r=0.3, s=0.2) = " + num(point) +
                    " vs expected " + num(kOverlapPoint));
}

void nsplitter() {
  const auto r = oracle::nsplitter_suite(kSeed, 3);
  report(7, r.ok() && r.passes == 3,
         "N=3 splitter, cutoff 5, 3 random inputs: " + std::to_string(r.passes) + "/3 within symmetry " +
             num(kSymmetryTol) + " and dual path " + num(kDualPathTol) + ", worst margin " + num(r.worst_margin));
}

void truncation() {
  const auto r = oracle::truncation_suite(kSeed, 100);
  report(8, r.passes == r.instances && r.instances >= 100,
         "truncation lemma: " + std::to_string(r.passes) + "/" + std::to_string(r.instances) + " pass, worst margin " +
             num(r.worst_margin));
}

void measure_prepare() {
  const auto m = oracle::mp_suite(kSeed, 20);
  report(9, m.result.passes == m.result.instances && m.result.instances >= 20,
         "measure-and-prepare: " + std::to_string(m.result.passes) + "/" + std::to_string(m.result.instances) +
             " within " + num(kMpTol) + " (completeness, Choi identity, target independence)");
}

void choi_distance() {
  const auto r = oracle::choi_distance_suite(kSeed, 100);
  report(10, r.passes == r.instances && r.instances >= 100,
         "Choi-distance bound: " + std::to_string(r.passes) + "/" + std::to_string(r.instances) + " pass, worst margin " +
             num(r.worst_margin));
}

void figures() {
  bool ok = true;
  for (const char* cmd : {"figure1", "figure2"}) {
    cli::RunConfig cfg;
    cfg.command = cmd;
    const auto b = cli::run_sweep(cfg).numbers("bound");
    for (std::size_t i = 0; i < b.size(); ++i) ok = ok && b[i] > 0.0 && (i == 0 || b[i] <= b[i - 1]);
  }
  const auto far = optimize_d(BoundModel::box(), ObjectivityParams{1.0, 0.01, 1e60});
  ok = ok && far.bound < kBoxFarBound;
  report(11, ok, "figure1/figure2 bounds positive and nonincreasing on [1e3, 1e15]; Box at N=1e60: " +
                     num(far.bound) + " (d=" + std::to_string(far.d) + ")");
}

void discord() {
  oracle::Vector bell = oracle::Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  oracle::Matrix classical = oracle::Matrix::Zero(4, 4);
  classical(0, 0) = classical(3, 3) = 0.5;
  const double d_bell = oracle::discord_numeric(oracle::DensityOperator::pure(bell), 2);
  const double d_cl = oracle::discord_numeric(oracle::DensityOperator(classical), 2);

  cli::RunConfig cfg;
  cfg.command = "discord-slack";
  cfg.n_max = 1e60;
  const auto rep = cli::run_sweep(cfg);
  bool decreasing = true;
  std::size_t valid = 0;
  double prev = INFINITY;
  for (std::size_t r = 0; r < rep.rows.size(); ++r) {
    if (!(rep.number(r, "epsilon_prime") < 1.0)) continue;
    const double s = rep.number(r, "slack");
    decreasing = decreasing && s < prev;
    prev = s;
    ++valid;
  }
  const bool ok = std::abs(d_bell - 1.0) <= kDiscordTol && d_cl <= kDiscordTol && decreasing && valid >= 2;
  report(12, ok, "discord(Bell) = " + num(d_bell) + ", discord(classical) = " + num(d_cl) + "; slack decreasing over " +
                     std::to_string(valid) + " rows with eps' < 1");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  sigma_box();
  constants();
  bridge_limit();
  qi_ranard_claims();
  pureloss_sandwich();
  overlap_oracle();
  nsplitter();
  truncation();
  measure_prepare();
  choi_distance();
  figures();
  discord();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 12 criteria failed (%.2f s)\n", failures, secs);
  return failures;
}
