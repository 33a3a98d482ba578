#ifndef PAIRBOUNDS_RELATIONS_HPP
#define PAIRBOUNDS_RELATIONS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairbounds/error.hpp"
#include "pairbounds/pair_graph.hpp"
#include "pairbounds/random.hpp"

namespace pairbounds {

// ---------------------------------------------------------------------------
// Pair feature maps

enum class FeatureMode { SymmetricAbsDiff, SymmetricProduct, AntisymmetricDiff };

std::string feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

constexpr bool is_antisymmetric(FeatureMode mode) noexcept {
  return mode == FeatureMode::AntisymmetricDiff;
}

/// Certified bound on ||Φ(x, x')|| for instances in the unit ball:
/// |x - x'| and x - x' have norm at most 2, x ⊙ x' at most 1.
constexpr double feature_norm_bound(FeatureMode mode) noexcept {
  return mode == FeatureMode::SymmetricProduct ? 1.0 : 2.0;
}

/// Φ(x, x'): elementwise |x - x'|, x ⊙ x', or x - x'.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> pair_feature_map(
    const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& xp, FeatureMode mode) {
  if (x.size() != xp.size()) {
    throw Error(Errc::DimMismatch, "instances of dimension " + std::to_string(x.size()) + " and " +
                                       std::to_string(xp.size()));
  }
  switch (mode) {
    case FeatureMode::SymmetricAbsDiff:
      return (x - xp).cwiseAbs();
    case FeatureMode::SymmetricProduct:
      return x.cwiseProduct(xp);
    case FeatureMode::AntisymmetricDiff:
      return x - xp;
  }
  throw Error(Errc::BadParams, "unknown feature mode");
}

// ---------------------------------------------------------------------------
// Instance distributions

struct InstanceDistribution {
  enum class Kind { GaussianMixture, UniformCube };

  Kind kind = Kind::GaussianMixture;
  std::size_t clusters = 2;
  double spread = 0.1;         // per-coordinate standard deviation
  double center_radius = 0.5;  // centers lie on a circle of this radius

  static InstanceDistribution gaussian_mixture(std::size_t clusters, double spread, double center_radius = 0.5) {
    return {Kind::GaussianMixture, clusters, spread, center_radius};
  }
  static InstanceDistribution uniform_cube() { return {Kind::UniformCube, 0, 0.0, 0.0}; }

  /// Mixture centers as columns of a d × c matrix: equally spaced on a circle
  /// in the first two coordinates (±radius on the axis when d == 1).
  Eigen::MatrixXd centers(std::size_t d) const;

  void validate(std::size_t d) const;
};

nlohmann::json to_json(const InstanceDistribution& dist);
InstanceDistribution distribution_from_json(const nlohmann::json& j);

/// n instances stored column-wise; every column has norm at most 1.
struct InstanceSample {
  Eigen::MatrixXd points;      // d × n
  std::vector<int> component;  // mixture component per instance, -1 for the cube

  std::size_t size() const noexcept { return static_cast<std::size_t>(points.cols()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points.rows()); }
};

/// One draw, projected onto the unit ball when it falls outside. For the
/// cube, coordinates are U[-1, 1] scaled by 1/sqrt(d).
Eigen::VectorXd draw_instance(const InstanceDistribution& dist, std::size_t d, Rng& rng,
                              int* component = nullptr);

/// i.i.d. instances. Throws BadParams for n < 2, d < 1 or an invalid
/// distribution.
InstanceSample sample_instances(const InstanceDistribution& dist, std::size_t n, std::size_t d,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Relations

/// Ground-truth binary relation on instances.
///
/// Equivalence: x ≡ x' iff both have the same nearest center (lowest index
/// wins ties). TotalOrder: x ≤ x' iff <dir, x> <= <dir, x'>; equal scores
/// relate in both directions.
struct RelationSpec {
  enum class Kind { Equivalence, TotalOrder };

  Kind kind = Kind::Equivalence;
  Eigen::MatrixXd centers;    // d × c, Equivalence
  Eigen::VectorXd direction;  // d, TotalOrder

  static RelationSpec equivalence(Eigen::MatrixXd centers) {
    return {Kind::Equivalence, std::move(centers), Eigen::VectorXd()};
  }
  static RelationSpec total_order(Eigen::VectorXd direction) {
    return {Kind::TotalOrder, Eigen::MatrixXd(), std::move(direction)};
  }
  /// Equivalence whose classes are the mixture components of `dist`.
  static RelationSpec equivalence_for(const InstanceDistribution& dist, std::size_t d) {
    return equivalence(dist.centers(d));
  }

  bool symmetric() const noexcept { return kind == Kind::Equivalence; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(kind == Kind::Equivalence ? centers.rows() : direction.size());
  }

  template <typename Derived>
  Eigen::Index cluster_of(const Eigen::MatrixBase<Derived>& x) const {
    Eigen::Index best = 0;
    (centers.colwise() - x.template cast<double>()).colwise().squaredNorm().minCoeff(&best);
    return best;
  }
};

nlohmann::json to_json(const RelationSpec& rel);
RelationSpec relation_from_json(const nlohmann::json& j);

/// r(x, x') in {-1, +1}.
template <typename DerivedA, typename DerivedB>
int relation_label(const RelationSpec& rel, const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& xp) {
  if (x.size() != xp.size() || static_cast<std::size_t>(x.size()) != rel.dim()) {
    throw Error(Errc::DimMismatch, "instance dimension does not match the relation");
  }
  if (rel.kind == RelationSpec::Kind::Equivalence) {
    return rel.cluster_of(x) == rel.cluster_of(xp) ? 1 : -1;
  }
  return rel.direction.dot(x.template cast<double>()) <= rel.direction.dot(xp.template cast<double>()) ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Datasets

/// Labeled pairs over a fixed instance table. features.col(e) is Φ of the
/// ordered pair g.oriented(e), labels(e) its relation value.
struct PairDataset {
  Eigen::MatrixXd instances;  // d × n
  TrainingGraph graph;
  RelationSpec relation;
  FeatureMode mode = FeatureMode::SymmetricProduct;
  double norm_bound = 0.0;
  Eigen::MatrixXd features;  // p × m
  Eigen::VectorXd labels;    // m entries in {-1, +1}

  std::size_t size() const noexcept { return graph.num_edges(); }
  std::size_t feature_dim() const noexcept { return static_cast<std::size_t>(features.rows()); }
};

/// Labels every edge of g with rel and computes its features. Throws
/// SizeMismatch when g and X disagree on n, DimMismatch when the relation
/// dimension differs, BadParams when an instance lies outside the unit ball.
PairDataset build_dataset(const Eigen::MatrixXd& X, const TrainingGraph& g, const RelationSpec& rel,
                          FeatureMode mode);

/// Copy of `data` without example `e`; the instance table is unchanged.
PairDataset remove_example(const PairDataset& data, EdgeId e);

/// Writes instances.csv, edges.txt and meta.json into `dir` (created if
/// needed). `provenance` is stored verbatim under meta.json's "provenance".
void write_dataset(const std::string& dir, const PairDataset& data,
                   const nlohmann::json& provenance = nlohmann::json::object());

/// Reads a directory written by write_dataset, recomputing features and
/// checking every stored label against the relation.
PairDataset read_dataset(const std::string& dir);

}  // namespace pairbounds

#endif  // PAIRBOUNDS_RELATIONS_HPP
