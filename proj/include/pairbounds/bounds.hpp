#ifndef PAIRBOUNDS_BOUNDS_HPP
#define PAIRBOUNDS_BOUNDS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace pairbounds {

/// Closed-form pieces of the risk bounds, generic in the scalar type so they
/// can be evaluated in extended precision as well as double.
namespace formula {

/// Chromatic tail sqrt((ρ+1)/(2m) · ln(1/δ)).
template <typename T>
T chromatic_tail(const T& rho, const T& m, const T& delta) {
  using std::log;
  using std::sqrt;
  return sqrt((rho + T(1)) / (T(2) * m) * log(T(1) / delta));
}

/// Bounded-differences tail sqrt(ρ/m · ln(1/δ)).
template <typename T>
T frequency_tail(const T& rho, const T& m, const T& delta) {
  using std::log;
  using std::sqrt;
  return sqrt(rho / m * log(T(1) / delta));
}

/// Rademacher term of the bounded-kernel class under a γ-ramp: 4B/(γ√m).
template <typename T>
T kernel_complexity(const T& norm_bound, const T& gamma, const T& m) {
  using std::sqrt;
  return T(4) * norm_bound / (gamma * sqrt(m));
}

/// Maximum-degree bound for G(n, m):
/// (2m/n)(1 + sqrt(3n/(2m) · ln(n/δ))).
template <typename T>
T er_max_degree(const T& n, const T& m, const T& delta) {
  using std::log;
  using std::sqrt;
  return T(2) * m / n * (T(1) + sqrt(T(3) * n / (T(2) * m) * log(n / delta)));
}

/// 1 + sqrt(3n/(2m) · ln(2n/δ)); the degree-bound factor at failure δ/2.
template <typename T>
T er_constant(const T& n, const T& m, const T& delta) {
  using std::log;
  using std::sqrt;
  return T(1) + sqrt(T(3) * n / (T(2) * m) * log(T(2) * n / delta));
}

}  // namespace formula

/// An evaluated bound: named inputs, named additive terms, and their sum.
///
/// `total` is the left-to-right sum of `terms`. `valid` is false when an
/// input is outside the range the bound is stated for but the arithmetic is
/// still defined (an empirical risk above M, ρ > m).
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::pair<std::string, double>> terms;
  double total = 0.0;
  bool valid = true;
  std::string note;

  double term(const std::string& key) const;
  double input(const std::string& key) const;
  /// A bound on a {0,1}-valued risk is vacuous once it reaches 1.
  bool vacuous() const noexcept { return total >= 1.0; }
};

/// Stable field order: bound, inputs, terms, total, valid, note.
nlohmann::ordered_json to_json(const BoundReport& report);

/// χ of the dependency graph is at most ρ + 1.
std::size_t chromatic_bound(std::size_t rho);

/// remp + R + sqrt((ρ+1)/(2m) · ln(1/δ)) for a [0,1]-valued class whose
/// Rademacher complexity R is supplied by the caller.
BoundReport rad_generic_bound(double remp, double rademacher, std::size_t rho, std::size_t m, double delta);

struct TraceBound {
  double trace_term = 0.0;  // 4 sqrt(tr K) / (γ m)
  double relaxed = 0.0;     // 4 B / (γ sqrt(m)), using tr K <= m B²
};

/// Throws TraceExceedsBound when tr K > m B² (beyond rounding).
TraceBound kernel_rademacher_trace_bound(double gram_trace, std::size_t m, double gamma, double norm_bound);

/// 2 W sqrt(tr K) / m: Jensen bound on the empirical Rademacher complexity of
/// {z -> <w, Φ(z)> : ||w|| <= W}.
double linear_rademacher_trace_bound(double gram_trace, std::size_t m, double weight_cap);

/// remp^γ + 4B/(γ√m) + sqrt((ρ+1)/(2m) · ln(1/δ)).
BoundReport rad_kernel_bound(double remp_ramp, double norm_bound, double gamma, std::size_t rho, std::size_t m,
                             double delta);

/// remp + 4ρβ + (4mβ + M) sqrt(ρ/m · ln(1/δ)).
BoundReport stab_generic_bound(double remp, double beta, std::size_t rho, std::size_t m, double loss_bound,
                               double delta);

/// remp^γ + 4ρβ/γ + (4mβ/γ + 1) sqrt(ρ/m · ln(1/δ)).
BoundReport stab_ramp_bound(double remp_ramp, double beta, double gamma, std::size_t rho, std::size_t m,
                            double delta);

/// remp^hinge + 2ρB²/(λm) + (2B²/λ + 1) sqrt(ρ/m · ln(1/δ)).
BoundReport stab_svm_bound(double remp_hinge, double norm_bound, double lambda, std::size_t rho, std::size_t m,
                           double delta);

/// Δ(G) bound holding with probability >= 1-δ for G ~ G(n, m).
double er_max_degree_bound(std::size_t n, std::size_t m, double delta);

/// remp^γ + √32 B/(γ√n) + sqrt((C+1)/n · ln(2/δ)), C = 1 + sqrt(3n/(2m) ln(2n/δ)).
/// Throws PreconditionMNotBigEnough when m < n/2.
BoundReport er_rad_kernel_bound(double remp_ramp, double norm_bound, double gamma, std::size_t n, std::size_t m,
                                double delta);

/// Fair ±1 signs.
struct RademacherDraw {
  std::vector<int> signs;
  std::uint64_t seed = 0;

  static RademacherDraw draw(std::size_t m, std::uint64_t seed);
};

struct RademacherEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t draws = 0;
};

/// Monte-Carlo empirical Rademacher complexity of the norm-ball linear class
/// {z -> <w, Φ(z)> : ||w|| <= W}: the supremum is (2/m) W ||Σ σ_i Φ_i||, so
/// only the expectation over σ is sampled. `features` is p × m.
RademacherEstimate empirical_rademacher_mc(const Eigen::MatrixXd& features, double weight_cap, std::size_t draws,
                                           std::uint64_t seed);

}  // namespace pairbounds

#endif  // PAIRBOUNDS_BOUNDS_HPP
