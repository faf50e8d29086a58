#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "objbound/bounds.hpp"
#include "objbound/discord.hpp"
#include "objbound/numeric.hpp"
#include "objbound/oracle/suite.hpp"
#include "objbound/pureloss.hpp"
#include "objbound/report.hpp"
#include "objbound/spectrum.hpp"

#ifndef OBJBOUND_VERSION
#define OBJBOUND_VERSION "dev"
#endif

namespace objbound::cli {

enum class ExitCode : int { Ok = 0, Config = 1, Convergence = 2, Oracle = 3 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"figure1", "figure2", "compare-qr", "pureloss", "discord-slack", "oracle"};
  return names;
}

struct RunConfig {
  std::string command;
  std::optional<std::string> spectrum;
  std::optional<double> E;
  std::optional<double> E_A;
  double delta = 0.01;
  std::optional<double> n_min;
  std::optional<double> n_max;
  std::size_t points = 49;
  std::size_t D = 2;
  std::optional<double> omega;
  std::uint64_t seed = 0;
  std::size_t cutoff = 40;
  std::string format = "csv";
  std::string out;

  double n_lo() const { return n_min.value_or(command == "pureloss" ? 2.0 : 1e3); }
  double n_hi() const { return n_max.value_or(command == "pureloss" ? 1e6 : 1e15); }
  double energy() const { return E.value_or(command == "discord-slack" ? 2.0 : 1.0); }

  void validate() const {
    if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
      throw std::invalid_argument("unknown command '" + command + "'");
    }
    if (!(n_lo() > 0.0) || !(n_lo() < n_hi())) throw std::invalid_argument("need 0 < n-min < n-max");
    if (points < 2) throw std::invalid_argument("points must be >= 2");
    if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(energy() > 0.0)) throw std::invalid_argument("E must be positive");
    if (omega && !(*omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (cutoff < 2) throw std::invalid_argument("cutoff must be >= 2");
  }

  std::vector<std::pair<std::string, std::string>> echo() const {
    std::vector<std::pair<std::string, std::string>> c{
        {"E", to_shortest_string(energy())},  {"delta", to_shortest_string(delta)},
        {"n-min", to_shortest_string(n_lo())}, {"n-max", to_shortest_string(n_hi())},
        {"points", std::to_string(points)},    {"D", std::to_string(D)},
        {"cutoff", std::to_string(cutoff)},    {"format", format}};
    if (spectrum) c.emplace_back("spectrum", *spectrum);
    if (E_A) c.emplace_back("E-a", to_shortest_string(*E_A));
    if (omega) c.emplace_back("omega", to_shortest_string(*omega));
    return c;
  }
};

namespace detail {

inline SweepReport header(const RunConfig& cfg, std::vector<std::string> columns) {
  SweepReport rep;
  rep.command = cfg.command;
  rep.version = OBJBOUND_VERSION;
  rep.seed = cfg.seed;
  rep.config = cfg.echo();
  rep.columns = std::move(columns);
  return rep;
}

inline SweepReport figure(const RunConfig& cfg, const BoundModel& model) {
  auto rep = header(cfg, {"N", "d_opt", "zeta", "bound"});
  const auto grid = log_grid(cfg.n_lo(), cfg.n_hi(), cfg.points);
  auto rows = parallel_map<std::vector<Cell>>(grid.size(), [&](std::size_t i) {
    const auto z = optimize_d(model, ObjectivityParams{cfg.energy(), cfg.delta, grid[i]});
    return std::vector<Cell>{grid[i], static_cast<std::int64_t>(z.d), z.zeta, z.bound};
  });
  for (auto& r : rows) rep.add_row(std::move(r));
  return rep;
}

inline SweepReport compare_qr(const RunConfig& cfg) {
  auto rep = header(cfg, {"D", "delta", "N", "b", "b1", "b2", "threshold", "b_nontrivial", "b1_nontrivial",
                          "b2_nontrivial", "b_below_b1", "b_below_b2"});
  const double threshold = qr_threshold(cfg.D, cfg.delta);
  std::vector<double> grid = log_grid(cfg.n_lo(), cfg.n_hi(), cfg.points);
  if (threshold > cfg.n_lo() && threshold < cfg.n_hi()) {
    grid.push_back(threshold);
    std::sort(grid.begin(), grid.end());
  }
  for (double N : grid) {
    const double b = cfg.omega && N >= 2.0
                         ? BoundModel::bridge(cfg.D, *cfg.omega).evaluate({1.0, cfg.delta, N}, cfg.D).bound
                         : qr_comparison_bound(cfg.D, N, cfg.delta);
    const double b1 = qi_ranard(cfg.D, N, cfg.delta, 1);
    const double b2 = qi_ranard(cfg.D, N, cfg.delta, 2);
    rep.add_row({static_cast<std::int64_t>(cfg.D), cfg.delta, N, b, b1, b2, threshold, b < 2.0, b1 < 2.0, b2 < 2.0,
                 b < b1, b < b2});
  }
  return rep;
}

inline SweepReport pureloss(const RunConfig& cfg) {
  auto rep = header(cfg, {"N", "lower_bound", "envelope", "ratio"});
  std::set<std::uint64_t> ns;
  for (double x : log_grid(std::max(2.0, cfg.n_lo()), cfg.n_hi(), cfg.points)) {
    ns.insert(static_cast<std::uint64_t>(std::llround(x)));
  }
  const std::vector<std::uint64_t> grid(ns.begin(), ns.end());
  auto rows = parallel_map<std::vector<Cell>>(grid.size(), [&](std::size_t i) {
    const auto N = grid[i];
    const double lb = lower_bound(N).value;
    const double env = pureloss_envelope(cfg.energy(), static_cast<double>(N));
    return std::vector<Cell>{static_cast<std::int64_t>(N), lb, env, env / lb};
  });
  for (auto& r : rows) rep.add_row(std::move(r));
  return rep;
}

inline Spectrum slack_spectrum(const RunConfig& cfg) {
  if (cfg.spectrum) return Spectrum::parse(*cfg.spectrum);
  if (cfg.omega) return Spectrum::bridge(cfg.D, *cfg.omega);
  return Spectrum::harmonic();
}

inline SweepReport discord_slack(const RunConfig& cfg) {
  const auto spec = slack_spectrum(cfg);
  auto rep = convergence_profile(BoundModel::for_spectrum(spec), spec, cfg.E_A.value_or(cfg.energy()), cfg.energy(),
                                 log_grid(cfg.n_lo(), cfg.n_hi(), cfg.points));
  auto h = header(cfg, rep.columns);
  h.rows = std::move(rep.rows);
  return h;
}

}  // namespace detail

/// The sweep for every command except `oracle`.
inline SweepReport run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "figure1") {
    if (cfg.spectrum) throw std::invalid_argument("figure1 is fixed to the box spectrum");
    return detail::figure(cfg, BoundModel::box());
  }
  if (cfg.command == "figure2") {
    if (cfg.spectrum) throw std::invalid_argument("figure2 is fixed to the harmonic spectrum");
    return detail::figure(cfg, BoundModel::harmonic());
  }
  if (cfg.command == "compare-qr") return detail::compare_qr(cfg);
  if (cfg.command == "pureloss") return detail::pureloss(cfg);
  if (cfg.command == "discord-slack") return detail::discord_slack(cfg);
  throw std::invalid_argument("run_sweep: '" + cfg.command + "' is not a sweep");
}

inline std::string cell_text(const Cell& c) {
  if (auto p = std::get_if<double>(&c)) return to_shortest_string(*p);
  if (auto p = std::get_if<std::int64_t>(&c)) return std::to_string(*p);
  if (auto p = std::get_if<bool>(&c)) return *p ? "true" : "false";
  return std::get<std::string>(c);
}

inline nlohmann::json cell_json(const Cell& c) {
  if (auto p = std::get_if<double>(&c)) {
    if (!std::isfinite(*p)) return nullptr;
    return *p;
  }
  if (auto p = std::get_if<std::int64_t>(&c)) return *p;
  if (auto p = std::get_if<bool>(&c)) return *p;
  return std::get<std::string>(c);
}

inline void write_csv(std::ostream& os, const SweepReport& rep) {
  for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << rep.columns[i];
  os << '\n';
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

inline nlohmann::ordered_json report_header(const std::string& command, std::uint64_t seed,
                                            const std::vector<std::pair<std::string, std::string>>& config) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = OBJBOUND_VERSION;
  j["seed"] = seed;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) j["config"][k] = v;
  return j;
}

inline void write_json(std::ostream& os, const SweepReport& rep) {
  auto j = report_header(rep.command, rep.seed, rep.config);
  j["columns"] = rep.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[rep.columns[i]] = cell_json(row[i]);
    j["rows"].push_back(std::move(r));
  }
  os << j.dump(2) << '\n';
}

inline nlohmann::ordered_json oracle_json(const RunConfig& cfg, const std::vector<oracle::SuiteResult>& suites) {
  auto j = report_header("oracle", cfg.seed, {{"seed", std::to_string(cfg.seed)}});
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& s : suites) {
    nlohmann::ordered_json r;
    r["suite"] = s.suite;
    r["instances"] = s.instances;
    r["passes"] = s.passes;
    r["worst_margin"] = std::isfinite(s.worst_margin) ? nlohmann::ordered_json(s.worst_margin) : nullptr;
    r["seed"] = s.seed;
    r["asserted"] = s.asserted;
    j["suites"].push_back(std::move(r));
  }
  return j;
}

/// Runs one command and writes its report; returns the process exit code.
inline ExitCode run(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.command == "oracle") {
    const auto suites = oracle::run_all_suites(cfg.seed);
    out << oracle_json(cfg, suites).dump(2) << '\n';
    const bool ok = std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.ok(); });
    return ok ? ExitCode::Ok : ExitCode::Oracle;
  }
  const auto rep = run_sweep(cfg);
  if (cfg.format == "json") {
    write_json(out, rep);
  } else {
    write_csv(out, rep);
  }
  return ExitCode::Ok;
}

}  // namespace objbound::cli
