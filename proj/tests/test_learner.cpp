#include "doctest.h"
#include "oracles.hpp"
#include "pairbounds/labeler.hpp"
#include "pairbounds/learner.hpp"
#include "pairbounds/random.hpp"

using namespace pairbounds;

namespace {

PairDataset two_cluster_data(std::size_t n, const TrainingGraph& g, double spread, std::uint64_t seed) {
  const auto dist = InstanceDistribution::gaussian_mixture(2, spread, 0.5);
  const InstanceSample s = sample_instances(dist, n, 2, seed);
  return build_dataset(s.points, g, RelationSpec::equivalence_for(dist, 2), FeatureMode::SymmetricProduct);
}

}  // namespace

TEST_CASE("losses") {
  CHECK(loss(LossKind::ramp(1.0), 1, 0.5) == doctest::Approx(0.5));
  CHECK(loss(LossKind::hinge(), -1, -2.0) == 0.0);
  CHECK(loss(LossKind::hinge(), -1, 1.0) == doctest::Approx(2.0));
  CHECK(loss(LossKind::zero_one(), 1, 3.0) == 0.0);
  CHECK(loss(LossKind::zero_one(), -1, 0.0) == 1.0);  // sign(0) = +1
  CHECK(loss(LossKind::ramp(0.5), 1, 0.25) == doctest::Approx(0.5));
  CHECK(thrown_code([] { loss(LossKind::ramp(0.0), 1, 0.0); }) == Errc::BadGamma);
  CHECK(thrown_code([] { loss(LossKind::ramp(-1.0), 1, 0.0); }) == Errc::BadGamma);
  CHECK(sign_of(0.0) == 1);
  CHECK(LossKind::hinge().bound() == std::numeric_limits<double>::infinity());
  CHECK(LossKind::ramp(2.0).bound() == 1.0);
}

TEST_CASE("ramp dominates 0-1 and hinge dominates the unit ramp on a dense grid") {
  for (int y : {-1, 1}) {
    for (int i = 0; i <= 6000; ++i) {
      const double v = -3.0 + i * 1e-3;
      REQUIRE(loss(LossKind::zero_one(), y, v) <= loss(LossKind::ramp(1.0), y, v));
      REQUIRE(loss(LossKind::zero_one(), y, v) <= loss(LossKind::ramp(0.3), y, v));
      REQUIRE(loss(LossKind::ramp(1.0), y, v) <= loss(LossKind::hinge(), y, v));
    }
  }
}

TEST_CASE("SVM on the one-dimensional two-point problem matches the grid oracle") {
  Eigen::MatrixXd phi(1, 2);
  phi << 1.0, -1.0;
  const Eigen::Vector2d y(1.0, -1.0);
  const auto [w_star, f_star] = oracle::svm_1d_grid({1.0, -1.0}, {1, -1}, 1.0, -2.0, 2.0);
  CHECK(w_star == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(f_star == doctest::Approx(0.75).epsilon(1e-9));

  const SvmFit fit = train_svm(phi, y, 1.0, 1.0, FeatureMode::SymmetricProduct, {50000, 100});
  CHECK(std::abs(fit.hypothesis.weights(0) - w_star) <= fit.weight_error_bound + 1e-9);
  CHECK(std::abs(fit.hypothesis.weights(0) - w_star) < 1e-3);
  CHECK(fit.objective - f_star <= fit.objective_gap_bound + 1e-12);
  CHECK(fit.objective == doctest::Approx(0.75).epsilon(1e-5));
  CHECK(fit.objective == doctest::Approx(svm_objective(fit.hypothesis.weights, phi, y, 1.0)));
}

TEST_CASE("SVM certificate holds against the grid oracle on random 1-D data") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 3 + rng.uniform_index(20);
    std::vector<double> p(m);
    std::vector<int> yy(m);
    Eigen::MatrixXd phi(1, static_cast<Eigen::Index>(m));
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = rng.uniform(-1, 1);
      yy[i] = rng.sign();
      phi(0, static_cast<Eigen::Index>(i)) = p[i];
      y(static_cast<Eigen::Index>(i)) = yy[i];
    }
    const double lambda = 0.05 + rng.uniform01();
    const auto [w_star, f_star] = oracle::svm_1d_grid(p, yy, lambda, -10.0, 10.0);
    const SvmFit fit = train_svm(phi, y, lambda, 1.0, FeatureMode::SymmetricProduct, {3000, 30});
    REQUIRE(fit.objective - f_star <= fit.objective_gap_bound + 1e-9);
    REQUIRE(std::abs(fit.hypothesis.weights(0) - w_star) <= fit.weight_error_bound + 1e-6);
  }
}

TEST_CASE("heavy regularization drives the weights to zero") {
  const PairDataset d = two_cluster_data(30, er_sample(30, 80, 1), 0.1, 2);
  const SvmFit fit = train_svm(d, 1e6, {2000, 20});
  CHECK(fit.hypothesis.weights.norm() < 1e-5);
  CHECK(empirical_risk(fit.hypothesis, d, LossKind::hinge()).value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("separable two-cluster equivalence data is fit exactly") {
  const PairDataset d = two_cluster_data(60, er_sample(60, 300, 3), 0.05, 4);
  // separability oracle: w = e1 has a positive margin on every example
  const Eigen::Vector2d e1(1, 0);
  const Eigen::ArrayXd margins = d.labels.array() * (d.features.transpose() * e1).array();
  REQUIRE(margins.minCoeff() > 0.0);

  const SvmFit fit = train_svm(d, 1e-3, {20000, 50});
  CHECK(empirical_risk(fit.hypothesis, d, LossKind::zero_one()).value == 0.0);
}

TEST_CASE("solver bookkeeping") {
  const PairDataset d = two_cluster_data(40, er_sample(40, 150, 5), 0.2, 6);
  const SvmFit fit = train_svm(d, 0.1, {5000, 50});
  CHECK(fit.objective_trace.size() == 50);
  CHECK(std::is_sorted(fit.objective_trace.rbegin(), fit.objective_trace.rend()));
  CHECK(fit.hypothesis.weights.norm() <= 1.0 / std::sqrt(0.1) + 1e-12);
  CHECK(fit.output_error_bound == doctest::Approx(d.norm_bound * fit.weight_error_bound));
  const SvmFit again = train_svm(d, 0.1, {5000, 50});
  CHECK(again.hypothesis.weights == fit.hypothesis.weights);

  CHECK(thrown_code([&] { train_svm(d, 0.0); }) == Errc::BadParams);
  CHECK(thrown_code([&] {
          train_svm(Eigen::MatrixXd(2, 0), Eigen::VectorXd(0), 1.0, 1.0, FeatureMode::SymmetricProduct);
        }) == Errc::EmptyDataset);
  CHECK(thrown_code([&] {
          train_svm(Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Ones(2), 1.0, 1.0, FeatureMode::SymmetricProduct);
        }) == Errc::SizeMismatch);
}

TEST_CASE("antisymmetric hypotheses predict the converse with the opposite sign") {
  const auto dist = InstanceDistribution::uniform_cube();
  const InstanceSample s = sample_instances(dist, 50, 3, 7);
  const RelationSpec ord = RelationSpec::total_order(Eigen::Vector3d(1, -1, 0.5));
  const PairDataset d = build_dataset(s.points, er_sample(50, 200, 8), ord, FeatureMode::AntisymmetricDiff);
  const SvmFit fit = train_svm(d, 0.01, {3000, 30});
  Rng rng(9);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd x = draw_instance(dist, 3, rng), xp = draw_instance(dist, 3, rng);
    REQUIRE(std::abs(fit.hypothesis.value(x, xp) + fit.hypothesis.value(xp, x)) <= 1e-12);
  }
}

TEST_CASE("empirical risk") {
  Eigen::MatrixXd phi(1, 2);
  phi << 1.0, 1.0;
  const Hypothesis h{Eigen::VectorXd::Constant(1, 1.0), FeatureMode::SymmetricProduct};
  CHECK(empirical_risk(h, phi, Eigen::Vector2d(1, -1), LossKind::zero_one()).value == 0.5);

  const Hypothesis zero{Eigen::VectorXd::Zero(1), FeatureMode::SymmetricProduct};
  CHECK(empirical_risk(zero, phi, Eigen::Vector2d(1, 1), LossKind::zero_one()).value == 0.0);
  CHECK(empirical_risk(zero, phi, Eigen::Vector2d(1, -1), LossKind::ramp(0.7)).value == 1.0);
  CHECK(thrown_code([&] { empirical_risk(zero, Eigen::MatrixXd(1, 0), Eigen::VectorXd(0), LossKind::hinge()); }) ==
        Errc::EmptyDataset);
}

TEST_CASE("Monte-Carlo risk") {
  const auto dist = InstanceDistribution::gaussian_mixture(2, 0.0, 0.5);
  const RelationSpec eq = RelationSpec::equivalence_for(dist, 2);
  const auto mode = FeatureMode::SymmetricProduct;

  const Hypothesis plus{Eigen::Vector2d::Zero(), mode};  // sign(0) = +1 on every pair
  const RiskEstimate half = true_risk_mc(plus, dist, eq, mode, 20000, 1, LossKind::zero_one());
  CHECK(std::abs(half.value - 0.5) <= 3 * half.standard_error);
  CHECK(half.standard_error > 0.0);

  const Hypothesis zero{Eigen::Vector2d::Zero(), mode};
  const RiskEstimate ramp = true_risk_mc(zero, dist, eq, mode, 500, 2, LossKind::ramp(1.0));
  CHECK(ramp.value == 1.0);
  CHECK(ramp.standard_error == 0.0);

  // d = 1, centers at ±1: sign(x x') is exactly the cluster relation
  const auto wide = InstanceDistribution::gaussian_mixture(2, 0.0, 1.0);
  const RelationSpec eq1 = RelationSpec::equivalence_for(wide, 1);
  const Hypothesis bayes{Eigen::VectorXd::Constant(1, 1.0), mode};
  CHECK(true_risk_mc(bayes, wide, eq1, mode, 5000, 3, LossKind::zero_one()).value == 0.0);

  CHECK(thrown_code([&] { true_risk_mc(plus, dist, eq, mode, 0, 1, LossKind::zero_one()); }) == Errc::BadParams);
  CHECK(thrown_code([&] { true_risk_mc(plus, dist, eq, FeatureMode::SymmetricAbsDiff, 10, 1, LossKind::zero_one()); }) ==
        Errc::BadParams);
}

TEST_CASE("defect") {
  const auto dist = InstanceDistribution::gaussian_mixture(2, 0.0, 0.5);
  const RelationSpec eq = RelationSpec::equivalence_for(dist, 2);
  const auto mode = FeatureMode::SymmetricProduct;
  const PairDataset d = two_cluster_data(40, er_sample(40, 100, 3), 0.0, 4);

  const Hypothesis zero{Eigen::Vector2d::Zero(), mode};
  CHECK(defect(zero, d, dist, eq, mode, 1000, 5, LossKind::ramp(1.0)).defect == 0.0);

  // w = e1 reproduces the cluster relation exactly, so both risks vanish
  const Hypothesis exact{Eigen::Vector2d(1, 0), mode};
  const DefectEstimate de = defect(exact, d, dist, eq, mode, 20000, 5, LossKind::zero_one());
  CHECK(de.empirical.value == 0.0);
  CHECK(std::abs(de.defect) <= 3 * de.true_risk.standard_error);

  // memorizing star data: a single shared instance, many features, tiny λ
  const auto noisy = InstanceDistribution::gaussian_mixture(4, 0.35, 0.5);
  const RelationSpec eq4 = RelationSpec::equivalence_for(noisy, 8);
  const InstanceSample s = sample_instances(noisy, 25, 8, 11);
  const PairDataset star = build_dataset(s.points, star_sample(25, 24), eq4, FeatureMode::SymmetricAbsDiff);
  const SvmFit fit = train_svm(star, 1e-4, {20000, 50});
  const DefectEstimate over = defect(fit.hypothesis, star, noisy, eq4, FeatureMode::SymmetricAbsDiff, 20000, 12,
                                     LossKind::zero_one());
  CHECK(over.defect > 0.0);
}

TEST_CASE("stability quantities") {
  CHECK(certified_classification_stability(1.0, 1.0, 100) == doctest::Approx(0.005));
  CHECK(certified_classification_stability(1.0, 1.0, 200) ==
        doctest::Approx(certified_classification_stability(1.0, 1.0, 100) / 2));
  CHECK(uniform_stability_from_classification(0.0, 0.3) == 0.0);
  CHECK(uniform_stability_from_classification(0.005, 1.0) == doctest::Approx(0.005));
  CHECK(uniform_stability_from_classification(0.005, 0.5) == doctest::Approx(0.01));
  CHECK(thrown_code([] { uniform_stability_from_classification(0.1, 0.0); }) == Errc::BadGamma);
  CHECK(thrown_code([] { certified_classification_stability(1.0, 0.0, 3); }) == Errc::BadParams);
}

TEST_CASE("stability probe") {
  const PairDataset d = two_cluster_data(30, er_sample(30, 50, 13), 0.2, 14);
  const StabilityProbe heavy = classification_stability_probe(d, 1e6, 50, 5, 1, {2000, 10});
  CHECK(heavy.observed_sup < 1e-6);
  CHECK(heavy.removed.size() == 5);

  const StabilityProbe p = classification_stability_probe(d, 1.0, 200, 10, 2, {50000, 50});
  CHECK(p.certified == doctest::Approx(1.0 / 100));
  CHECK(p.observed_sup <= p.ball_sup + 1e-15);
  CHECK(p.ball_sup <= p.certified + 2 * p.solver_slack);

  CHECK(thrown_code([&] { classification_stability_probe(remove_example(remove_example(d, 0), 0), 1.0, 1, 1, 0); }) ==
        std::nullopt);
}

TEST_CASE("hypothesis JSON") {
  const Hypothesis h{Eigen::Vector3d(0.25, -1.5, 3.0), FeatureMode::AntisymmetricDiff};
  const nlohmann::json j = to_json(h, 0.5);
  CHECK(j["gamma"] == 0.5);
  const Hypothesis back = hypothesis_from_json(j);
  CHECK(back.weights == h.weights);
  CHECK(back.mode == h.mode);
  CHECK(thrown_code([] { hypothesis_from_json({{"weights", {1.0}}}); }) == Errc::ConfigError);
}
