#ifndef PAIRBOUNDS_LEARNER_HPP
#define PAIRBOUNDS_LEARNER_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairbounds/error.hpp"
#include "pairbounds/relations.hpp"

namespace pairbounds {

/// Decision rule for a real-valued score; zero counts as +1.
template <typename Scalar>
constexpr int sign_of(Scalar v) noexcept {
  return v >= Scalar(0) ? 1 : -1;
}

struct LossKind {
  enum class Kind { ZeroOne, Ramp, Hinge };

  Kind kind = Kind::ZeroOne;
  double gamma = 1.0;  // Ramp margin

  static LossKind zero_one() { return {Kind::ZeroOne, 1.0}; }
  static LossKind ramp(double gamma) { return {Kind::Ramp, gamma}; }
  static LossKind hinge() { return {Kind::Hinge, 1.0}; }

  bool bounded() const noexcept { return kind != Kind::Hinge; }
  /// Upper bound M on the loss (infinite for the hinge).
  double bound() const noexcept { return bounded() ? 1.0 : std::numeric_limits<double>::infinity(); }
  std::string name() const;
};

/// ℓ(y, h): 0-1 is [sign(h) != y]; ramp is min{max{0, 1 - y h / γ}, 1};
/// hinge is max{0, 1 - y h}. Throws BadGamma for a ramp with γ <= 0.
template <typename Scalar>
Scalar loss(const LossKind& kind, int y, Scalar h) {
  switch (kind.kind) {
    case LossKind::Kind::ZeroOne:
      return sign_of(h) != y ? Scalar(1) : Scalar(0);
    case LossKind::Kind::Ramp: {
      if (!(kind.gamma > 0.0)) throw Error(Errc::BadGamma, "ramp loss needs gamma > 0");
      const Scalar r = Scalar(1) - Scalar(y) * h / Scalar(kind.gamma);
      return std::min(std::max(Scalar(0), r), Scalar(1));
    }
    case LossKind::Kind::Hinge:
      return std::max(Scalar(0), Scalar(1) - Scalar(y) * h);
  }
  throw Error(Errc::BadParams, "unknown loss");
}

/// Linear pair classifier h(z) = <w, Φ(z)>, no bias.
struct Hypothesis {
  Eigen::VectorXd weights;
  FeatureMode mode = FeatureMode::SymmetricProduct;

  template <typename Derived>
  double value(const Eigen::MatrixBase<Derived>& phi) const {
    return weights.dot(phi);
  }

  /// h on an instance pair, through the hypothesis' feature map.
  template <typename DerivedA, typename DerivedB>
  double value(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& xp) const {
    return weights.dot(pair_feature_map(x, xp, mode));
  }

  template <typename Derived>
  int predict(const Eigen::MatrixBase<Derived>& phi) const {
    return sign_of(value(phi));
  }
};

/// {weights, feature_mode, gamma?}
nlohmann::json to_json(const Hypothesis& h, std::optional<double> gamma = std::nullopt);
Hypothesis hypothesis_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Training

struct SolverParams {
  std::size_t iterations = 20000;
  std::size_t checkpoints = 100;  // objective evaluations along the run
};

/// Result of train_svm with its accuracy certificate.
///
/// The solver is full-batch projected subgradient descent on the
/// 2λ-strongly convex objective, step 1/(λ(t+1)), projection onto
/// ||w|| <= 1/sqrt(λ) (which contains the minimizer), and t-weighted iterate
/// averaging. For that scheme f(w̄) - f* <= G²/(λ(T+1)) where G bounds the
/// subgradient norms; G is the largest norm actually observed.
struct SvmFit {
  Hypothesis hypothesis;
  double lambda = 0.0;
  double objective = 0.0;
  double objective_gap_bound = 0.0;  // τ_obj >= f(w) - f*
  double weight_error_bound = 0.0;   // ||w - w*|| <= sqrt(τ_obj / λ)
  double output_error_bound = 0.0;   // τ_h: |h(z) - h*(z)| for ||Φ(z)|| <= B
  double max_subgradient_norm = 0.0;
  std::size_t iterations = 0;
  std::vector<double> objective_trace;  // best-so-far objective per checkpoint
};

/// (1/m) Σ max{0, 1 - y_i <w, Φ_i>} + λ ||w||².
double svm_objective(const Eigen::VectorXd& w, const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                     double lambda);

/// Trains on explicit features (p × m) and ±1 labels. `norm_bound` is B,
/// used only for the output certificate. Throws EmptyDataset, BadParams for
/// λ <= 0, Divergence on a non-finite objective.
SvmFit train_svm(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels, double lambda,
                 double norm_bound, FeatureMode mode, const SolverParams& params = {});

SvmFit train_svm(const PairDataset& data, double lambda, const SolverParams& params = {});

// ---------------------------------------------------------------------------
// Risk

struct RiskEstimate {
  double value = 0.0;
  LossKind loss;
  std::size_t sample_size = 0;
  double standard_error = 0.0;
};

/// (1/m) Σ ℓ(h, z) over the training examples.
RiskEstimate empirical_risk(const Hypothesis& h, const PairDataset& data, const LossKind& kind);
RiskEstimate empirical_risk(const Hypothesis& h, const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                            const LossKind& kind);

/// Monte-Carlo risk over N fresh independent pairs (x, x') from `dist`,
/// labeled by `rel`. Throws BadParams for N == 0 or a mode that differs from
/// the hypothesis' own.
RiskEstimate true_risk_mc(const Hypothesis& h, const InstanceDistribution& dist, const RelationSpec& rel,
                          FeatureMode mode, std::size_t samples, std::uint64_t seed, const LossKind& kind);

struct DefectEstimate {
  double defect = 0.0;  // true - empirical; may be negative
  RiskEstimate true_risk;
  RiskEstimate empirical;
};

DefectEstimate defect(const Hypothesis& h, const PairDataset& data, const InstanceDistribution& dist,
                      const RelationSpec& rel, FeatureMode mode, std::size_t samples, std::uint64_t seed,
                      const LossKind& kind);

// ---------------------------------------------------------------------------
// Stability

/// B² / (2 λ m).
double certified_classification_stability(double norm_bound, double lambda, std::size_t m);

/// β / γ. Throws BadGamma for γ <= 0, BadParams for β < 0.
double uniform_stability_from_classification(double beta, double gamma);

struct StabilityProbe {
  double observed_sup = 0.0;  // max over probes and removals of |h_D - h_D'|
  double ball_sup = 0.0;      // max over removals of B ||w_D - w_D'||
  double certified = 0.0;     // B² / (2 λ m)
  double solver_slack = 0.0;  // largest τ_h over all fits
  std::vector<EdgeId> removed;
};

/// Retrains with each of `removals` distinct random examples left out and
/// compares outputs on `probe_points` random feature vectors of norm B.
StabilityProbe classification_stability_probe(const PairDataset& data, double lambda, std::size_t probe_points,
                                              std::size_t removals, std::uint64_t seed,
                                              const SolverParams& params = {});

}  // namespace pairbounds

#endif  // PAIRBOUNDS_LEARNER_HPP
