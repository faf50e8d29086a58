#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

namespace objbound {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Tabular result of a sweep; columns are fixed per command.
struct SweepReport {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("SweepReport: row width does not match header");
    rows.push_back(std::move(row));
  }

  std::size_t column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("SweepReport: no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }

  /// Numeric view of a cell (bools as 0/1).
  double number(std::size_t row, const std::string& name) const {
    const Cell& c = rows.at(row).at(column(name));
    if (auto p = std::get_if<double>(&c)) return *p;
    if (auto p = std::get_if<std::int64_t>(&c)) return static_cast<double>(*p);
    if (auto p = std::get_if<bool>(&c)) return *p ? 1.0 : 0.0;
    throw std::invalid_argument("SweepReport: column '" + name + "' is not numeric");
  }

  std::vector<double> numbers(const std::string& name) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out.push_back(number(r, name));
    return out;
  }
};

/// out[i] = fn(i) for i < n, spread over hardware threads; results keep index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
  std::vector<T> out(n);
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// n points from lo to hi, evenly spaced in log10.
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace objbound
