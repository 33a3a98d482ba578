#ifndef PAIRBOUNDS_EXPERIMENT_HPP
#define PAIRBOUNDS_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairbounds/bounds.hpp"
#include "pairbounds/learner.hpp"
#include "pairbounds/pair_graph.hpp"
#include "pairbounds/relations.hpp"
#include "pairbounds/report.hpp"

namespace pairbounds {

// ---------------------------------------------------------------------------
// Configuration

/// A JSON config file after `--set` overrides. `kind` selects the
/// experiment; the remaining keys are experiment-specific.
struct ExperimentConfig {
  std::string kind;  // analyze-graph | sample-labeler | compute-bounds | defect-study | verify-maxdeg
  nlohmann::json body = nlohmann::json::object();

  std::uint64_t seed() const { return body.value("seed", std::uint64_t{0}); }
  std::string output_dir() const { return body.value("output_dir", std::string(".")); }
};

/// Applies "a.b=value" to `config`; the value is parsed as JSON when it can
/// be, and taken as a string otherwise. Throws ConfigError.
void apply_override(nlohmann::json& config, const std::string& assignment);

ExperimentConfig parse_config(nlohmann::json config, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// ---------------------------------------------------------------------------
// Graph analysis

struct GraphAnalysis {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t rho = 0;
  std::size_t min_degree = 0;
  double mean_degree = 0.0;
  bool handshaking_ok = false;
  bool regular = false;
  std::size_t colors_used = 0;
  std::size_t chromatic_bound = 0;
  bool coloring_proper = false;
  bool classes_are_matchings = false;
  std::vector<std::size_t> class_sizes;
  std::size_t line_graph_links = 0;
  bool line_degree_identity_ok = false;
  double effective_training_size = 0.0;

  /// All structural checks hold.
  bool consistent() const;
  nlohmann::json to_json() const;
};

GraphAnalysis analyze_graph(const TrainingGraph& g);

// ---------------------------------------------------------------------------
// Bound evaluation from JSON inputs

/// Evaluates one {"bound": name, ...inputs} object. Names: rad_generic,
/// rad_kernel, stab_generic, stab_ramp, stab_svm, er_rad_kernel,
/// er_max_degree, chromatic, kernel_trace.
nlohmann::ordered_json compute_bound(const nlohmann::json& request);

/// Accepts a single request or an array of them; always returns an array.
nlohmann::ordered_json compute_bounds(const nlohmann::json& requests);

// ---------------------------------------------------------------------------
// Defect study

struct DefectStudyConfig {
  std::string regime = "er";  // star | regular | er
  std::size_t n = 200;
  std::size_t m = 2000;       // star and er
  std::size_t k = 4;          // regular
  std::size_t d = 2;
  InstanceDistribution distribution = InstanceDistribution::gaussian_mixture(2, 0.1, 0.5);
  std::string relation = "equivalence";  // equivalence | total-order
  FeatureMode mode = FeatureMode::SymmetricProduct;
  double lambda = 0.1;
  double gamma = 1.0;
  double delta = 0.1;
  std::size_t trials = 10;
  std::size_t mc_samples = 20000;
  SolverParams solver{2000, 20};
  std::uint64_t seed = 0;

  static DefectStudyConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct DefectStudyRow {
  std::size_t trial = 0;
  std::string regime;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t rho = 0;
  double effective_size = 0.0;
  double remp = 0.0;        // 0-1
  double remp_ramp = 0.0;
  double remp_hinge = 0.0;
  double risk_mc = 0.0;     // 0-1, Monte Carlo
  double risk_mc_se = 0.0;
  double defect = 0.0;
  double bound_rad_kernel = 0.0;
  double bound_stab_svm = 0.0;
  std::optional<double> bound_er_rad_kernel;
  double solver_gap = 0.0;
};

struct DefectStudyResult {
  DefectStudyConfig config;
  std::vector<DefectStudyRow> rows;

  /// Rows where risk_mc - 3 SE stays at or below the stability SVM bound.
  std::size_t covered_stab_svm() const;
  std::size_t covered_rad_kernel() const;
  /// Bounded risks inside [0, 1] in every row.
  bool rows_in_range() const;
  Table table() const;
};

/// Column order of the defect-study table.
const std::vector<std::string>& defect_study_columns();

/// One row per trial; trial t draws everything from derive_seed(seed, t), so
/// rows do not depend on evaluation order and two studies sharing a seed see
/// the same instances trial by trial.
DefectStudyResult defect_study(const DefectStudyConfig& config);

/// The training graph a regime produces for the given trial seed.
TrainingGraph regime_graph(const DefectStudyConfig& config, std::uint64_t graph_seed);

// ---------------------------------------------------------------------------
// Maximum-degree concentration

struct MaxDegreeVerification {
  std::size_t n = 0;
  std::size_t m = 0;
  double delta = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double bound = 0.0;
  std::size_t exceedances = 0;  // trials with Δ(G) >= bound
  double exceed_fraction = 0.0;
  double mean_max_degree = 0.0;
  double mean_degree = 0.0;     // average vertex degree over all trials
  double expected_degree = 0.0; // 2m/n

  bool holds() const noexcept { return exceed_fraction <= delta; }
  nlohmann::json to_json() const;
};

MaxDegreeVerification verify_max_degree(std::size_t n, std::size_t m, double delta, std::size_t trials,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Dispatch

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 invariant violation
  std::vector<std::string> artifacts;
  nlohmann::json summary;
};

/// Runs a config end to end and writes its artifacts into output_dir.
RunOutcome run(const ExperimentConfig& config);

}  // namespace pairbounds

#endif  // PAIRBOUNDS_EXPERIMENT_HPP
