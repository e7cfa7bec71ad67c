#pragma once

// Exponent bookkeeping for rectangular matrix multiplication: ω(k) is the
// exponent of an n×n^k by n^k×n product. Everything here is double precision
// and only ever feeds integer blocking choices.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ffinv/error.hpp"

namespace ffinv {

class OmegaTable {
 public:
  using Point = std::pair<double, double>;

  explicit OmegaTable(std::vector<Point> points) : points_(std::move(points)) { validate(); }

  /// Sampled upper bounds on ω(k) for k in [0, 1], plus the point where the
  /// flat region ω = 2 ends.
  static OmegaTable bundled() {
    return OmegaTable({
        {0.0, 2.0},          {0.31389, 2.0},      {0.31477, 2.000001}, {0.31508, 2.000002},
        {0.31532, 2.000003}, {0.31552, 2.000004}, {0.32, 2.000064},    {0.33, 2.000448},
        {0.34, 2.001118},    {0.35, 2.001957},    {0.36, 2.0031},      {0.37, 2.0045},
        {0.375, 2.0053},     {0.3825, 2.0067},    {0.4, 2.010314},     {0.4125, 2.0135},
        {0.425, 2.0169},     {0.4375, 2.0207},    {0.45, 2.024801},    {0.47, 2.0321},
        {0.5, 2.044183},     {0.5286, 2.057085},  {0.55, 2.067488},    {0.6, 2.093981},
        {0.65, 2.123097},    {0.7, 2.154399},     {0.75, 2.187543},    {0.8, 2.222256},
        {0.85, 2.258317},    {0.9, 2.295544},     {0.95, 2.333789},    {1.0, 2.37286},
    });
  }

  /// Text format: one `k omega` pair per line, ascending k. '#' starts a comment.
  static OmegaTable parse(std::istream& in) {
    std::vector<Point> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      double k = 0, w = 0;
      if (!(ls >> k)) continue;
      std::string rest;
      if (!(ls >> w) || (ls >> rest)) {
        throw FormatError("omega table line " + std::to_string(lineno) + ": expected `k omega`");
      }
      pts.emplace_back(k, w);
    }
    try {
      return OmegaTable(std::move(pts));
    } catch (const UsageError& e) {
      throw FormatError(std::string("omega table: ") + e.what());
    }
  }

  static OmegaTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open omega table " + path);
    return parse(in);
  }

  const std::vector<Point>& points() const noexcept { return points_; }

  /// ω(1), the square exponent.
  double omega() const noexcept { return points_.back().second; }

 private:
  void validate() const {
    if (points_.size() < 2) throw UsageError("table needs at least two points");
    if (points_.front().first != 0.0 || points_.back().first != 1.0) {
      throw UsageError("table must span k = 0 to k = 1");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const auto [k, w] = points_[i];
      if (w < 2.0 || w < 1.0 + k) throw UsageError("table value below the trivial bounds at k = " + std::to_string(k));
      if (i > 0) {
        if (k <= points_[i - 1].first) throw UsageError("table k values must be strictly increasing");
        if (w < points_[i - 1].second) throw UsageError("table omega values must be nondecreasing");
      }
    }
  }

  std::vector<Point> points_;
};

/// Piecewise-linear interpolation, exact at the sample points.
inline double omega_of_k(const OmegaTable& table, double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw UsageError("k must lie in [0, 1]");
  const auto& pts = table.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (k <= pts[i].first) {
      const auto [k0, w0] = pts[i - 1];
      const auto [k1, w1] = pts[i];
      if (k == k1) return w1;
      return w0 + (w1 - w0) * (k - k0) / (k1 - k0);
    }
  }
  return pts.back().second;
}

/// Exponents (base n) of the four competing costs at one k = log_n s.
struct ExponentSample {
  double k;
  double omega_k;     // n^{ω_s}
  double mn2;         // m n² = n^{3-k}
  double sw_m;        // s^ω m = n^{1+(ω-1)k}
  double sw_m2;       // s^ω m² = n^{2+(ω-2)k}
};

struct ExponentReport {
  double k_star = 0;
  double omega_star = 0;
  std::vector<ExponentSample> grid;

  /// Blocking factor round(n^{k*}).
  std::size_t s_of_n(std::size_t n) const {
    return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), k_star)));
  }
};

/// Bisection for ω(k) = 3 - k; the difference is strictly increasing in k.
inline ExponentReport solve_crossing(const OmegaTable& table, std::size_t grid_steps = 100) {
  auto diff = [&](double k) { return omega_of_k(table, k) - (3.0 - k); };
  double lo = 0.0, hi = 1.0;
  if (diff(hi) <= 0.0) {
    lo = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (diff(mid) < 0.0 ? lo : hi) = mid;
    }
  }
  ExponentReport r;
  r.k_star = 0.5 * (lo + hi);
  r.omega_star = 3.0 - r.k_star;
  const double w = table.omega();
  for (std::size_t i = 0; i <= grid_steps; ++i) {
    const double k = static_cast<double>(i) / static_cast<double>(grid_steps);
    r.grid.push_back({k, omega_of_k(table, k), 3.0 - k, 1.0 + (w - 1.0) * k, 2.0 + (w - 2.0) * k});
  }
  return r;
}

struct Blocking {
  std::size_t s = 1;
  std::size_t m = 1;
  bool fallback = false;  // n had no divisor other than 1 and n
};

/// Divisor of n nearest to n^{k*}, ties toward the larger divisor.
inline Blocking choose_blocking(std::size_t n, const OmegaTable& table) {
  if (n < 4) throw UsageError("choose_blocking needs n >= 4");
  const double target = std::pow(static_cast<double>(n), solve_crossing(table, 1).k_star);
  std::size_t best = 1;
  double best_dist = std::abs(1.0 - target);
  bool composite = false;
  for (std::size_t d = 2; d <= n; ++d) {
    if (n % d != 0) continue;
    if (d < n) composite = true;
    const double dist = std::abs(static_cast<double>(d) - target);
    if (dist <= best_dist) {
      best = d;
      best_dist = dist;
    }
  }
  if (!composite) return {1, n, true};
  return {best, n / best, false};
}

}  // namespace ffinv
