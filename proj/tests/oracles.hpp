// Independent reference implementations used by the tests. Nothing here
// calls into the library except for plain data types.
#ifndef PAIRBOUNDS_TESTS_ORACLES_HPP
#define PAIRBOUNDS_TESTS_ORACLES_HPP

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pairbounds/error.hpp"

namespace oracle {

using Pair = std::pair<std::size_t, std::size_t>;

inline std::vector<std::size_t> degrees(std::size_t n, const std::vector<Pair>& edges) {
  std::vector<std::size_t> d(n, 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

inline std::size_t max_degree(std::size_t n, const std::vector<Pair>& edges) {
  const auto d = degrees(n, edges);
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

/// Line-graph degree of edge e by direct pairwise comparison.
inline std::size_t line_degree(const std::vector<Pair>& edges, std::size_t e) {
  std::size_t count = 0;
  for (std::size_t f = 0; f < edges.size(); ++f) {
    if (f == e) continue;
    const auto [a, b] = edges[e];
    const auto [c, d] = edges[f];
    if (a == c || a == d || b == c || b == d) ++count;
  }
  return count;
}

/// Can the edges be properly colored with k colors? Plain backtracking.
inline bool colorable(std::size_t n, const std::vector<Pair>& edges, std::size_t k) {
  std::vector<std::vector<bool>> used(n, std::vector<bool>(k, false));
  // Colors not used anywhere yet are interchangeable, so only the lowest of
  // them is tried.
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t e, std::size_t opened) {
    if (e == edges.size()) return true;
    const auto [u, v] = edges[e];
    for (std::size_t c = 0; c < std::min(k, opened + 1); ++c) {
      if (used[u][c] || used[v][c]) continue;
      used[u][c] = used[v][c] = true;
      if (go(e + 1, std::max(opened, c + 1))) return true;
      used[u][c] = used[v][c] = false;
    }
    return false;
  };
  return go(0, 0);
}

/// Chromatic index by exhaustive search.
inline std::size_t chromatic_index(std::size_t n, const std::vector<Pair>& edges) {
  if (edges.empty()) return 0;
  for (std::size_t k = 1;; ++k) {
    if (colorable(n, edges, k)) return k;
  }
}

/// Maximum matching size by exhaustive include/exclude recursion.
inline std::size_t max_matching_size(std::size_t n, const std::vector<Pair>& edges) {
  std::vector<bool> used(n, false);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t e) -> std::size_t {
    if (e == edges.size()) return 0;
    std::size_t best = go(e + 1);
    const auto [u, v] = edges[e];
    if (!used[u] && !used[v]) {
      used[u] = used[v] = true;
      best = std::max(best, 1 + go(e + 1));
      used[u] = used[v] = false;
    }
    return best;
  };
  return go(0);
}

/// Every graph on n labeled vertices, as edge lists over pairs i<j in
/// lexicographic order, bit b of the mask selecting the b-th pair.
inline std::vector<Pair> all_pairs(std::size_t n) {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

inline std::vector<Pair> graph_from_mask(const std::vector<Pair>& pairs, std::uint64_t mask) {
  std::vector<Pair> out;
  for (std::size_t b = 0; b < pairs.size(); ++b) {
    if (mask >> b & 1U) out.push_back(pairs[b]);
  }
  return out;
}

inline double chi_square_quantile(double df, double p) {
  return boost::math::quantile(boost::math::chi_squared(df), p);
}

// ---------------------------------------------------------------------------
// Bound formulas in 50-digit decimal arithmetic, written out from their
// definitions independently of the library's templated versions.

using HP = boost::multiprecision::cpp_dec_float_50;

inline HP hp(double v) { return HP(v); }

inline HP eq_rad_generic(HP remp, HP rad, HP rho, HP m, HP delta) {
  return remp + rad + sqrt((rho + 1) / (2 * m) * log(1 / delta));
}

inline HP eq_rad_kernel(HP remp, HP B, HP gamma, HP rho, HP m, HP delta) {
  return remp + 4 * B / (gamma * sqrt(m)) + sqrt((rho + 1) / (2 * m) * log(1 / delta));
}

inline HP eq_stab_generic(HP remp, HP beta, HP rho, HP m, HP M, HP delta) {
  return remp + 4 * rho * beta + (4 * m * beta + M) * sqrt(rho / m * log(1 / delta));
}

inline HP eq_stab_ramp(HP remp, HP beta, HP gamma, HP rho, HP m, HP delta) {
  return remp + 4 * rho * beta / gamma + (4 * m * beta / gamma + 1) * sqrt(rho / m * log(1 / delta));
}

inline HP eq_stab_svm(HP remp, HP B, HP lambda, HP rho, HP m, HP delta) {
  return remp + 2 * rho * B * B / (lambda * m) + (2 * B * B / lambda + 1) * sqrt(rho / m * log(1 / delta));
}

inline HP eq_er_max_degree(HP n, HP m, HP delta) {
  return 2 * m / n * (1 + sqrt(3 * n / (2 * m) * log(n / delta)));
}

inline HP eq_er_constant(HP n, HP m, HP delta) { return 1 + sqrt(3 * n / (2 * m) * log(2 * n / delta)); }

inline HP eq_er_rad_kernel(HP remp, HP B, HP gamma, HP n, HP m, HP delta) {
  const HP c = eq_er_constant(n, m, delta);
  return remp + sqrt(HP(32)) * B / (gamma * sqrt(n)) + sqrt((c + 1) / n * log(2 / delta));
}

inline double rel_error(double got, const HP& want) {
  const HP diff = abs(HP(got) - want);
  const HP scale = abs(want) > 0 ? abs(want) : HP(1);
  return static_cast<double>(diff / scale);
}

// ---------------------------------------------------------------------------
// One-dimensional SVM objective f(w) = mean hinge + λ w², minimized by a
// fine grid refined around the best point.

inline std::pair<double, double> svm_1d_grid(const std::vector<double>& phi, const std::vector<int>& y,
                                             double lambda, double lo, double hi) {
  auto f = [&](double w) {
    double s = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) s += std::max(0.0, 1.0 - y[i] * w * phi[i]);
    return s / static_cast<double>(phi.size()) + lambda * w * w;
  };
  double best_w = lo;
  double best_f = f(lo);
  for (int round = 0; round < 6; ++round) {
    const double step = (hi - lo) / 1000.0;
    for (int i = 0; i <= 1000; ++i) {
      const double w = lo + step * i;
      const double v = f(w);
      if (v < best_f) {
        best_f = v;
        best_w = w;
      }
    }
    lo = best_w - step;
    hi = best_w + step;
  }
  return {best_w, best_f};
}

}  // namespace oracle

/// Code of the pairbounds::Error thrown by fn, or nullopt.
template <typename Fn>
std::optional<pairbounds::Errc> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const pairbounds::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

#endif  // PAIRBOUNDS_TESTS_ORACLES_HPP
