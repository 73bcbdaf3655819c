#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "memqec/bipoly.hpp"
#include "memqec/fidelity.hpp"

namespace memqec {

struct ThresholdQuery {
  int n = 4;
  double p = 0.45;        // strictly inside (0, 0.5); endpoints are degenerate
  double tolerance = 1e-9;
};

inline void check_threshold_query(const ThresholdQuery& q) {
  if (!(q.p > 0.0 && q.p < 0.5)) {
    throw std::invalid_argument("ThresholdQuery: p must lie strictly inside (0, 0.5)");
  }
  if (!(q.tolerance > 0.0)) throw std::invalid_argument("ThresholdQuery: tolerance must be positive");
}

// Smallest root of first - second (in mu) on (0,1), if any; the number of
// grid sign changes is reported so multi-crossing cases stay visible.
struct CrossingResult {
  std::optional<double> mu_star;
  int sign_changes = 0;
};

// Sign-change bracketing on a uniform mu grid followed by bisection.
inline CrossingResult find_crossing(const BiPoly& first, const BiPoly& second, double p,
                                    double tolerance, int grid_points = 1024) {
  if (grid_points < 2) throw std::invalid_argument("find_crossing: grid too coarse");
  auto g = [&](double mu) { return first.eval(mu, p) - second.eval(mu, p); };
  CrossingResult out;
  double prev_mu = 0.0;
  double prev_g = g(0.0);
  std::optional<std::pair<double, double>> bracket;
  for (int i = 1; i <= grid_points; ++i) {
    const double mu = static_cast<double>(i) / grid_points;
    const double cur_g = g(mu);
    if (prev_g == 0.0) {
      ++out.sign_changes;
      if (!bracket) bracket = {prev_mu, prev_mu};
    } else if ((prev_g < 0.0) != (cur_g < 0.0)) {
      ++out.sign_changes;
      if (!bracket) bracket = {prev_mu, mu};
    }
    prev_mu = mu;
    prev_g = cur_g;
  }
  if (!bracket) return out;
  auto [lo, hi] = *bracket;
  if (lo == hi) {
    out.mu_star = lo;  // exact grid-point root
    return out;
  }
  double g_lo = g(lo);
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if (g_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((g_lo < 0.0) == (g_mid < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  out.mu_star = 0.5 * (lo + hi);
  return out;
}

// mu*(p) where the DFS and repetition fidelities of equal length cross.
inline CrossingResult crossing(const ThresholdQuery& query, int grid_points = 1024) {
  check_threshold_query(query);
  const BiPoly f_dfs = derive_fidelity(CodeFamily::dfs, query.n).poly;
  const BiPoly f_rc = derive_fidelity(CodeFamily::rc, query.n).poly;
  return find_crossing(f_dfs, f_rc, query.p, query.tolerance, grid_points);
}

struct CurvePoint {
  double p;
  std::optional<double> mu_star;
  int sign_changes = 0;
};

inline std::vector<CurvePoint> threshold_curve(int n, std::vector<double> p_grid,
                                               double tolerance = 1e-9, int grid_points = 1024) {
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 0.5)) {
      throw std::invalid_argument("threshold_curve: every p must lie strictly inside (0, 0.5)");
    }
  }
  std::sort(p_grid.begin(), p_grid.end());
  const BiPoly f_dfs = derive_fidelity(CodeFamily::dfs, n).poly;
  const BiPoly f_rc = derive_fidelity(CodeFamily::rc, n).poly;
  std::vector<CurvePoint> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    CrossingResult c = find_crossing(f_dfs, f_rc, p, tolerance, grid_points);
    out.push_back(CurvePoint{p, c.mu_star, c.sign_changes});
  }
  return out;
}

}  // namespace memqec
