#include "pairbounds/learner.hpp"

#include <cmath>
#include <numeric>

#include "pairbounds/random.hpp"

namespace pairbounds {

std::string LossKind::name() const {
  switch (kind) {
    case Kind::ZeroOne: return "zero-one";
    case Kind::Ramp: return "ramp";
    case Kind::Hinge: return "hinge";
  }
  return "unknown";
}

nlohmann::json to_json(const Hypothesis& h, std::optional<double> gamma) {
  nlohmann::json j;
  j["weights"] = std::vector<double>(h.weights.data(), h.weights.data() + h.weights.size());
  j["feature_mode"] = feature_mode_name(h.mode);
  if (gamma) j["gamma"] = *gamma;
  return j;
}

Hypothesis hypothesis_from_json(const nlohmann::json& j) {
  try {
    const auto w = j.at("weights").get<std::vector<double>>();
    Hypothesis h;
    h.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    h.mode = feature_mode_from_name(j.at("feature_mode").get<std::string>());
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("hypothesis: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Training

double svm_objective(const Eigen::VectorXd& w, const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                     double lambda) {
  const Eigen::ArrayXd margins = labels.array() * (features.transpose() * w).array();
  return (1.0 - margins).max(0.0).mean() + lambda * w.squaredNorm();
}

SvmFit train_svm(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels, double lambda,
                 double norm_bound, FeatureMode mode, const SolverParams& params) {
  const Eigen::Index m = features.cols();
  if (m == 0) throw Error(Errc::EmptyDataset, "cannot train on zero examples");
  if (labels.size() != m) throw Error(Errc::SizeMismatch, "one label per example required");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(Errc::BadParams, "lambda must be positive");
  if (params.iterations == 0) throw Error(Errc::BadParams, "solver needs at least one iteration");

  const Eigen::Index p = features.rows();
  const double radius = 1.0 / std::sqrt(lambda);
  const std::size_t T = params.iterations;
  const std::size_t every = std::max<std::size_t>(1, T / std::max<std::size_t>(1, params.checkpoints));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd weighted_sum = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd grad(p);
  Eigen::ArrayXd coeff(m);
  double max_grad = 0.0;

  SvmFit fit;
  fit.lambda = lambda;
  fit.hypothesis.mode = mode;
  fit.hypothesis.weights = w;
  fit.objective = svm_objective(w, features, labels, lambda);

  for (std::size_t t = 1; t <= T; ++t) {
    weighted_sum += static_cast<double>(t) * w;

    const Eigen::ArrayXd margins = labels.array() * (features.transpose() * w).array();
    coeff = (margins < 1.0).select(labels.array(), 0.0);
    grad.noalias() = 2.0 * lambda * w - (features * coeff.matrix()) / static_cast<double>(m);
    max_grad = std::max(max_grad, grad.norm());

    w -= grad / (lambda * static_cast<double>(t + 1));
    const double norm = w.norm();
    if (norm > radius) w *= radius / norm;

    if (t % every == 0 || t == T) {
      const double scale = 2.0 / (static_cast<double>(t) * static_cast<double>(t + 1));
      const Eigen::VectorXd avg = scale * weighted_sum;
      const double obj = svm_objective(avg, features, labels, lambda);
      if (!std::isfinite(obj)) throw Error(Errc::Divergence, "objective became non-finite");
      if (obj <= fit.objective) {
        fit.objective = obj;
        fit.hypothesis.weights = avg;
      }
      fit.objective_trace.push_back(fit.objective);
    }
  }

  fit.iterations = T;
  fit.max_subgradient_norm = max_grad;
  fit.objective_gap_bound = max_grad * max_grad / (lambda * static_cast<double>(T + 1));
  fit.weight_error_bound = std::sqrt(fit.objective_gap_bound / lambda);
  fit.output_error_bound = norm_bound * fit.weight_error_bound;
  return fit;
}

SvmFit train_svm(const PairDataset& data, double lambda, const SolverParams& params) {
  return train_svm(data.features, data.labels, lambda, data.norm_bound, data.mode, params);
}

// ---------------------------------------------------------------------------
// Risk

namespace {

RiskEstimate summarize(const Eigen::ArrayXd& losses, const LossKind& kind) {
  RiskEstimate r;
  r.loss = kind;
  r.sample_size = static_cast<std::size_t>(losses.size());
  r.value = losses.mean();
  if (losses.size() > 1) {
    const double var = (losses - r.value).square().sum() / static_cast<double>(losses.size() - 1);
    r.standard_error = std::sqrt(var / static_cast<double>(losses.size()));
  }
  return r;
}

}  // namespace

RiskEstimate empirical_risk(const Hypothesis& h, const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                            const LossKind& kind) {
  if (features.cols() == 0) throw Error(Errc::EmptyDataset, "empirical risk of zero examples");
  if (features.rows() != h.weights.size()) throw Error(Errc::DimMismatch, "hypothesis and feature dimensions differ");
  const Eigen::VectorXd values = features.transpose() * h.weights;
  Eigen::ArrayXd losses(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    losses(i) = loss(kind, static_cast<int>(labels(i)), values(i));
  }
  RiskEstimate r = summarize(losses, kind);
  r.standard_error = 0.0;  // exact average, not an estimate
  return r;
}

RiskEstimate empirical_risk(const Hypothesis& h, const PairDataset& data, const LossKind& kind) {
  return empirical_risk(h, data.features, data.labels, kind);
}

RiskEstimate true_risk_mc(const Hypothesis& h, const InstanceDistribution& dist, const RelationSpec& rel,
                          FeatureMode mode, std::size_t samples, std::uint64_t seed, const LossKind& kind) {
  if (samples == 0) throw Error(Errc::BadParams, "Monte-Carlo risk needs at least one sample");
  if (mode != h.mode) throw Error(Errc::BadParams, "feature mode differs from the hypothesis' mode");
  const std::size_t d = rel.dim();
  if (static_cast<std::size_t>(h.weights.size()) != d) {
    throw Error(Errc::DimMismatch, "hypothesis dimension differs from the relation's");
  }
  Rng rng(seed);
  Eigen::ArrayXd losses(static_cast<Eigen::Index>(samples));
  for (std::size_t i = 0; i < samples; ++i) {
    const Eigen::VectorXd x = draw_instance(dist, d, rng);
    const Eigen::VectorXd xp = draw_instance(dist, d, rng);
    losses(static_cast<Eigen::Index>(i)) = loss(kind, relation_label(rel, x, xp), h.value(x, xp));
  }
  return summarize(losses, kind);
}

DefectEstimate defect(const Hypothesis& h, const PairDataset& data, const InstanceDistribution& dist,
                      const RelationSpec& rel, FeatureMode mode, std::size_t samples, std::uint64_t seed,
                      const LossKind& kind) {
  DefectEstimate out;
  out.empirical = empirical_risk(h, data, kind);
  out.true_risk = true_risk_mc(h, dist, rel, mode, samples, seed, kind);
  out.defect = out.true_risk.value - out.empirical.value;
  return out;
}

// ---------------------------------------------------------------------------
// Stability

double certified_classification_stability(double norm_bound, double lambda, std::size_t m) {
  if (!(lambda > 0.0)) throw Error(Errc::BadParams, "lambda must be positive");
  if (m == 0) throw Error(Errc::EmptyDataset, "stability of an empty training set");
  return norm_bound * norm_bound / (2.0 * lambda * static_cast<double>(m));
}

double uniform_stability_from_classification(double beta, double gamma) {
  if (!(gamma > 0.0)) throw Error(Errc::BadGamma, "gamma must be positive");
  if (!(beta >= 0.0)) throw Error(Errc::BadParams, "beta must be non-negative");
  return beta / gamma;
}

StabilityProbe classification_stability_probe(const PairDataset& data, double lambda, std::size_t probe_points,
                                              std::size_t removals, std::uint64_t seed,
                                              const SolverParams& params) {
  const std::size_t m = data.size();
  if (m < 2) throw Error(Errc::EmptyDataset, "stability probe needs at least two examples");
  removals = std::min(removals, m);

  Rng rng(seed);
  const auto p = static_cast<Eigen::Index>(data.feature_dim());
  Eigen::MatrixXd probes(p, static_cast<Eigen::Index>(probe_points));
  for (Eigen::Index j = 0; j < probes.cols(); ++j) {
    Eigen::VectorXd v(p);
    do {
      for (Eigen::Index i = 0; i < p; ++i) v(i) = rng.normal();
    } while (v.norm() == 0.0);
    probes.col(j) = data.norm_bound * v.normalized();
  }

  std::vector<EdgeId> order(m);
  std::iota(order.begin(), order.end(), EdgeId{0});
  for (std::size_t i = 0; i < removals; ++i) {
    std::swap(order[i], order[i + rng.uniform_index(m - i)]);
  }

  const SvmFit full = train_svm(data, lambda, params);
  StabilityProbe out;
  out.certified = certified_classification_stability(data.norm_bound, lambda, m);
  out.solver_slack = full.output_error_bound;
  for (std::size_t r = 0; r < removals; ++r) {
    const EdgeId e = order[r];
    out.removed.push_back(e);
    const SvmFit loo = train_svm(remove_example(data, e), lambda, params);
    out.solver_slack = std::max(out.solver_slack, loo.output_error_bound);
    const Eigen::VectorXd diff = full.hypothesis.weights - loo.hypothesis.weights;
    if (probes.cols() > 0) {
      out.observed_sup = std::max(out.observed_sup, (probes.transpose() * diff).cwiseAbs().maxCoeff());
    }
    out.ball_sup = std::max(out.ball_sup, data.norm_bound * diff.norm());
  }
  return out;
}

}  // namespace pairbounds
