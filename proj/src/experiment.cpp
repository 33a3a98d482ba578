#include "pairbounds/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "pairbounds/error.hpp"
#include "pairbounds/labeler.hpp"
#include "pairbounds/random.hpp"

namespace pairbounds {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

void apply_override(nlohmann::json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(Errc::ConfigError, "override '" + assignment + "' is not key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception&) {
    value = raw;
  }
  nlohmann::json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw Error(Errc::ConfigError, "empty key in override '" + assignment + "'");
    if (!node->is_object()) throw Error(Errc::ConfigError, "override '" + path + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = nlohmann::json::object();
    start = dot + 1;
  }
}

ExperimentConfig parse_config(nlohmann::json config, const std::vector<std::string>& overrides) {
  if (!config.is_object()) throw Error(Errc::ConfigError, "config must be a JSON object");
  for (const auto& o : overrides) apply_override(config, o);
  static const std::set<std::string> kinds = {"analyze-graph", "sample-labeler", "compute-bounds", "defect-study",
                                              "verify-maxdeg"};
  ExperimentConfig out;
  if (!config.contains("kind") || !config["kind"].is_string()) {
    throw Error(Errc::ConfigError, "config needs a string 'kind'");
  }
  out.kind = config["kind"].get<std::string>();
  if (!kinds.contains(out.kind)) throw Error(Errc::ConfigError, "unknown experiment kind '" + out.kind + "'");
  out.body = std::move(config);
  return out;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config " + path);
  try {
    return parse_config(nlohmann::json::parse(in), overrides);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, path + ": " + e.what());
  }
}

namespace {

double num(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw Error(Errc::ConfigError, std::string("missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

double num_or(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

std::size_t count(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() < 0) {
    throw Error(Errc::ConfigError, std::string("missing non-negative integer field '") + key + "'");
  }
  return j[key].get<std::size_t>();
}

std::size_t count_or(const nlohmann::json& j, const char* key, std::size_t fallback) {
  return j.contains(key) ? count(j, key) : fallback;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir + ": " + ec.message());
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph analysis

bool GraphAnalysis::consistent() const {
  return handshaking_ok && line_degree_identity_ok && coloring_proper && classes_are_matchings &&
         (m == 0 || (colors_used >= rho && colors_used <= rho + 1));
}

nlohmann::json GraphAnalysis::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["rho"] = rho;
  j["min_degree"] = min_degree;
  j["mean_degree"] = mean_degree;
  j["handshaking_ok"] = handshaking_ok;
  j["regular"] = regular;
  j["colors_used"] = colors_used;
  j["chromatic_bound"] = chromatic_bound;
  j["coloring_proper"] = coloring_proper;
  j["classes_are_matchings"] = classes_are_matchings;
  j["class_sizes"] = class_sizes;
  j["line_graph_links"] = line_graph_links;
  j["line_degree_identity_ok"] = line_degree_identity_ok;
  j["effective_training_size"] = m == 0 ? nlohmann::json(nullptr) : nlohmann::json(effective_training_size);
  j["consistent"] = consistent();
  return j;
}

GraphAnalysis analyze_graph(const TrainingGraph& g) {
  GraphAnalysis a;
  a.n = g.num_vertices();
  a.m = g.num_edges();
  const auto deg = degree_sequence(g);
  std::size_t sum = 0;
  for (std::size_t x : deg) sum += x;
  a.handshaking_ok = sum == 2 * a.m;
  a.rho = max_instance_frequency(g);
  a.min_degree = *std::min_element(deg.begin(), deg.end());
  a.mean_degree = static_cast<double>(sum) / static_cast<double>(a.n);
  a.regular = is_regular(g);
  a.chromatic_bound = chromatic_bound(a.rho);
  if (a.m == 0) {
    a.coloring_proper = a.classes_are_matchings = a.line_degree_identity_ok = true;
    return a;
  }
  const DependencyPartition part = edge_coloring(g);
  a.colors_used = part.num_colors;
  a.coloring_proper = is_proper_edge_coloring(g, part.color_of);
  a.class_sizes = part.class_sizes();
  a.classes_are_matchings = true;
  for (const auto& cls : part.classes()) a.classes_are_matchings = a.classes_are_matchings && is_matching(g, cls);
  const LineGraph lg = line_graph(g);
  a.line_graph_links = lg.num_links();
  a.line_degree_identity_ok = true;
  for (EdgeId e = 0; e < a.m; ++e) {
    const Edge& ed = g.edge(e);
    if (lg.degree(e) != deg[ed.u] + deg[ed.v] - 2) a.line_degree_identity_ok = false;
  }
  a.effective_training_size = effective_training_size(g).value;
  return a;
}

// ---------------------------------------------------------------------------
// Bounds from JSON

nlohmann::ordered_json compute_bound(const nlohmann::json& r) {
  if (!r.is_object() || !r.contains("bound") || !r["bound"].is_string()) {
    throw Error(Errc::ConfigError, "bound request needs a string 'bound'");
  }
  const std::string name = r["bound"].get<std::string>();
  if (name == "rad_generic") {
    return to_json(rad_generic_bound(num_or(r, "remp", 0.0), num(r, "rademacher"), count(r, "rho"), count(r, "m"),
                                     num(r, "delta")));
  }
  if (name == "rad_kernel") {
    return to_json(rad_kernel_bound(num_or(r, "remp_ramp", 0.0), num(r, "B"), num(r, "gamma"), count(r, "rho"),
                                    count(r, "m"), num(r, "delta")));
  }
  if (name == "stab_generic") {
    return to_json(stab_generic_bound(num_or(r, "remp", 0.0), num(r, "beta"), count(r, "rho"), count(r, "m"),
                                      num(r, "M"), num(r, "delta")));
  }
  if (name == "stab_ramp") {
    return to_json(stab_ramp_bound(num_or(r, "remp_ramp", 0.0), num(r, "beta"), num(r, "gamma"), count(r, "rho"),
                                   count(r, "m"), num(r, "delta")));
  }
  if (name == "stab_svm") {
    return to_json(stab_svm_bound(num_or(r, "remp_hinge", 0.0), num(r, "B"), num(r, "lambda"), count(r, "rho"),
                                  count(r, "m"), num(r, "delta")));
  }
  if (name == "er_rad_kernel") {
    return to_json(er_rad_kernel_bound(num_or(r, "remp_ramp", 0.0), num(r, "B"), num(r, "gamma"), count(r, "n"),
                                       count(r, "m"), num(r, "delta")));
  }
  nlohmann::ordered_json out;
  out["bound"] = name;
  if (name == "er_max_degree") {
    out["inputs"] = {{"n", count(r, "n")}, {"m", count(r, "m")}, {"delta", num(r, "delta")}};
    out["total"] = er_max_degree_bound(count(r, "n"), count(r, "m"), num(r, "delta"));
    return out;
  }
  if (name == "chromatic") {
    out["inputs"] = {{"rho", count(r, "rho")}};
    out["total"] = chromatic_bound(count(r, "rho"));
    return out;
  }
  if (name == "kernel_trace") {
    const TraceBound t = kernel_rademacher_trace_bound(num(r, "trace"), count(r, "m"), num(r, "gamma"), num(r, "B"));
    out["inputs"] = {{"trace", num(r, "trace")}, {"m", count(r, "m")}, {"gamma", num(r, "gamma")}, {"B", num(r, "B")}};
    out["trace_term"] = t.trace_term;
    out["relaxed"] = t.relaxed;
    return out;
  }
  throw Error(Errc::ConfigError, "unknown bound '" + name + "'");
}

nlohmann::ordered_json compute_bounds(const nlohmann::json& requests) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  if (requests.is_array()) {
    for (const auto& r : requests) out.push_back(compute_bound(r));
  } else {
    out.push_back(compute_bound(requests));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Defect study

DefectStudyConfig DefectStudyConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "kind", "regime", "n", "m", "k", "d", "distribution", "relation", "feature_mode", "lambda", "gamma",
      "delta", "trials", "mc_samples", "solver_iterations", "solver_checkpoints", "seed", "output_dir", "format"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) throw Error(Errc::ConfigError, "unknown defect-study key '" + it.key() + "'");
  }
  DefectStudyConfig c;
  try {
    c.regime = j.value("regime", c.regime);
    c.n = count_or(j, "n", c.n);
    c.m = count_or(j, "m", c.m);
    c.k = count_or(j, "k", c.k);
    c.d = count_or(j, "d", c.d);
    if (j.contains("distribution")) c.distribution = distribution_from_json(j["distribution"]);
    c.relation = j.value("relation", c.relation);
    if (j.contains("feature_mode")) c.mode = feature_mode_from_name(j["feature_mode"].get<std::string>());
    c.lambda = num_or(j, "lambda", c.lambda);
    c.gamma = num_or(j, "gamma", c.gamma);
    c.delta = num_or(j, "delta", c.delta);
    c.trials = count_or(j, "trials", c.trials);
    c.mc_samples = count_or(j, "mc_samples", c.mc_samples);
    c.solver.iterations = count_or(j, "solver_iterations", c.solver.iterations);
    c.solver.checkpoints = count_or(j, "solver_checkpoints", c.solver.checkpoints);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("defect-study: ") + e.what());
  }
  if (c.regime != "star" && c.regime != "regular" && c.regime != "er") {
    throw Error(Errc::ConfigError, "regime must be star, regular or er");
  }
  if (c.relation != "equivalence" && c.relation != "total-order") {
    throw Error(Errc::ConfigError, "relation must be equivalence or total-order");
  }
  if (c.trials == 0) throw Error(Errc::ConfigError, "trials must be positive");
  if (!(c.lambda > 0.0)) throw Error(Errc::ConfigError, "lambda must be positive");
  if (!(c.gamma > 0.0)) throw Error(Errc::ConfigError, "gamma must be positive");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw Error(Errc::ConfigError, "delta must lie in (0, 1)");
  return c;
}

nlohmann::json DefectStudyConfig::to_json() const {
  return {{"kind", "defect-study"},
          {"regime", regime},
          {"n", n},
          {"m", m},
          {"k", k},
          {"d", d},
          {"distribution", pairbounds::to_json(distribution)},
          {"relation", relation},
          {"feature_mode", feature_mode_name(mode)},
          {"lambda", lambda},
          {"gamma", gamma},
          {"delta", delta},
          {"trials", trials},
          {"mc_samples", mc_samples},
          {"solver_iterations", solver.iterations},
          {"solver_checkpoints", solver.checkpoints},
          {"seed", seed}};
}

const std::vector<std::string>& defect_study_columns() {
  static const std::vector<std::string> cols = {
      "trial",     "regime",      "n",       "m",          "rho",           "effective_size",
      "remp",      "remp_ramp",   "remp_hinge", "risk_mc",  "risk_mc_se",    "defect",
      "bound_rad_kernel", "bound_stab_svm", "bound_er_rad_kernel", "solver_gap"};
  return cols;
}

std::size_t DefectStudyResult::covered_stab_svm() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const DefectStudyRow& r) {
    return r.risk_mc - 3.0 * r.risk_mc_se <= r.bound_stab_svm;
  }));
}

std::size_t DefectStudyResult::covered_rad_kernel() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const DefectStudyRow& r) {
    return r.risk_mc - 3.0 * r.risk_mc_se <= r.bound_rad_kernel;
  }));
}

bool DefectStudyResult::rows_in_range() const {
  return std::all_of(rows.begin(), rows.end(), [](const DefectStudyRow& r) {
    return r.remp >= 0.0 && r.remp <= 1.0 && r.remp_ramp >= 0.0 && r.remp_ramp <= 1.0 && r.risk_mc >= 0.0 &&
           r.risk_mc <= 1.0;
  });
}

Table DefectStudyResult::table() const {
  Table t;
  t.columns = defect_study_columns();
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<std::int64_t>(r.trial), r.regime, static_cast<std::int64_t>(r.n),
                      static_cast<std::int64_t>(r.m), static_cast<std::int64_t>(r.rho), r.effective_size, r.remp,
                      r.remp_ramp, r.remp_hinge, r.risk_mc, r.risk_mc_se, r.defect, r.bound_rad_kernel,
                      r.bound_stab_svm, r.bound_er_rad_kernel ? Cell(*r.bound_er_rad_kernel) : Cell(std::monostate{}),
                      r.solver_gap});
  }
  return t;
}

TrainingGraph regime_graph(const DefectStudyConfig& c, std::uint64_t graph_seed) {
  if (c.regime == "star") return star_sample(c.n, c.m);
  if (c.regime == "regular") return regular_sample(c.n, c.k);
  return er_sample(c.n, c.m, graph_seed);
}

DefectStudyResult defect_study(const DefectStudyConfig& c) {
  DefectStudyResult out;
  out.config = c;
  const RelationSpec rel = c.relation == "equivalence"
                               ? RelationSpec::equivalence_for(c.distribution, c.d)
                               : RelationSpec::total_order(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(c.d), 0));
  const LossKind ramp = LossKind::ramp(c.gamma);
  for (std::size_t t = 0; t < c.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(c.seed, t);
    const InstanceSample X = sample_instances(c.distribution, c.n, c.d, derive_seed(trial_seed, 1));
    const TrainingGraph g = regime_graph(c, derive_seed(trial_seed, 2));
    if (g.num_edges() == 0) throw Error(Errc::ConfigError, "regime produced no examples");
    const PairDataset data = build_dataset(X.points, g, rel, c.mode);
    const SvmFit fit = train_svm(data, c.lambda, c.solver);
    const Hypothesis& h = fit.hypothesis;

    DefectStudyRow row;
    row.trial = t;
    row.regime = c.regime;
    row.n = c.n;
    row.m = g.num_edges();
    row.rho = max_instance_frequency(g);
    row.effective_size = effective_training_size(g).value;
    row.remp = empirical_risk(h, data, LossKind::zero_one()).value;
    row.remp_ramp = empirical_risk(h, data, ramp).value;
    row.remp_hinge = empirical_risk(h, data, LossKind::hinge()).value;
    const RiskEstimate risk =
        true_risk_mc(h, c.distribution, rel, c.mode, c.mc_samples, derive_seed(trial_seed, 3), LossKind::zero_one());
    row.risk_mc = risk.value;
    row.risk_mc_se = risk.standard_error;
    row.defect = row.risk_mc - row.remp;
    const double B = data.norm_bound;
    row.bound_rad_kernel = rad_kernel_bound(row.remp_ramp, B, c.gamma, row.rho, row.m, c.delta).total;
    row.bound_stab_svm = stab_svm_bound(row.remp_hinge, B, c.lambda, row.rho, row.m, c.delta).total;
    if (c.regime == "er" && 2 * row.m >= row.n) {
      row.bound_er_rad_kernel = er_rad_kernel_bound(row.remp_ramp, B, c.gamma, row.n, row.m, c.delta).total;
    }
    row.solver_gap = fit.objective_gap_bound;
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maximum-degree concentration

nlohmann::json MaxDegreeVerification::to_json() const {
  return {{"n", n},
          {"m", m},
          {"delta", delta},
          {"trials", trials},
          {"seed", seed},
          {"bound", bound},
          {"exceedances", exceedances},
          {"exceed_fraction", exceed_fraction},
          {"mean_max_degree", mean_max_degree},
          {"mean_degree", mean_degree},
          {"expected_degree", expected_degree},
          {"holds", holds()}};
}

MaxDegreeVerification verify_max_degree(std::size_t n, std::size_t m, double delta, std::size_t trials,
                                        std::uint64_t seed) {
  if (trials == 0) throw Error(Errc::BadParams, "trials must be positive");
  MaxDegreeVerification v;
  v.n = n;
  v.m = m;
  v.delta = delta;
  v.trials = trials;
  v.seed = seed;
  v.bound = er_max_degree_bound(n, m, delta);
  v.expected_degree = 2.0 * static_cast<double>(m) / static_cast<double>(n);
  double degree_sum = 0.0;
  double max_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const TrainingGraph g = er_sample(n, m, derive_seed(seed, t));
    const std::size_t delta_g = max_instance_frequency(g);
    if (static_cast<double>(delta_g) >= v.bound) ++v.exceedances;
    max_sum += static_cast<double>(delta_g);
    degree_sum += 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n);
  }
  v.exceed_fraction = static_cast<double>(v.exceedances) / static_cast<double>(trials);
  v.mean_max_degree = max_sum / static_cast<double>(trials);
  v.mean_degree = degree_sum / static_cast<double>(trials);
  return v;
}

// ---------------------------------------------------------------------------
// Dispatch

RunOutcome run(const ExperimentConfig& config) {
  const nlohmann::json& body = config.body;
  // Where artifacts land is not part of the experiment.
  nlohmann::json hashed = body;
  hashed.erase("output_dir");
  const Provenance prov = make_provenance(hashed, config.seed());
  const bool write = body.contains("output_dir");
  const std::string dir = config.output_dir();
  if (write) ensure_dir(dir);
  RunOutcome out;

  auto emit_json = [&](const std::string& name, nlohmann::json j) {
    j["provenance"] = prov.to_json();
    if (write) {
      const std::string path = (fs::path(dir) / name).string();
      write_json(path, j);
      out.artifacts.push_back(path);
    }
    out.summary = std::move(j);
  };

  if (config.kind == "analyze-graph") {
    if (!body.contains("edges")) throw Error(Errc::ConfigError, "analyze-graph needs 'edges'");
    const EdgeListFile file = read_edge_list(body["edges"].get<std::string>());
    const GraphAnalysis a = analyze_graph(TrainingGraph::from_edge_list(file.n, file.pairs));
    emit_json("analysis.json", a.to_json());
    out.exit_code = a.consistent() ? 0 : 1;
  } else if (config.kind == "sample-labeler") {
    if (!body.contains("spec")) throw Error(Errc::ConfigError, "sample-labeler needs 'spec'");
    const LabelerSpec spec = labeler_spec_from_json(body["spec"]);
    const TrainingGraph g = sample_pairs(spec);
    const std::string edges_path =
        body.value("out", write ? (fs::path(dir) / "edges.txt").string() : std::string());
    if (!edges_path.empty()) {
      write_edge_list(edges_path, g);
      out.artifacts.push_back(edges_path);
    }
    nlohmann::json summary = {{"spec", to_json(spec)},
                              {"n", g.num_vertices()},
                              {"m", g.num_edges()},
                              {"rho", max_instance_frequency(g)}};
    emit_json("labeler.json", std::move(summary));
  } else if (config.kind == "compute-bounds") {
    if (!body.contains("requests")) throw Error(Errc::ConfigError, "compute-bounds needs 'requests'");
    nlohmann::json j;
    j["reports"] = nlohmann::json::parse(compute_bounds(body["requests"]).dump());
    emit_json("bounds.json", std::move(j));
  } else if (config.kind == "defect-study") {
    const DefectStudyConfig c = DefectStudyConfig::from_json(body);
    const DefectStudyResult r = defect_study(c);
    const Table table = r.table();
    const ReportFormat format = report_format_from_name(body.value("format", std::string("csv")));
    if (write) {
      const std::string path =
          (fs::path(dir) / (format == ReportFormat::Csv ? "defect_study.csv" : "defect_study_rows.json")).string();
      emit_report(table, format, path, prov);
      out.artifacts.push_back(path);
    }
    const std::size_t need = static_cast<std::size_t>(std::ceil((1.0 - c.delta) * static_cast<double>(c.trials)));
    nlohmann::json summary = {{"config", c.to_json()},
                              {"trials", r.rows.size()},
                              {"covered_stab_svm", r.covered_stab_svm()},
                              {"covered_rad_kernel", r.covered_rad_kernel()},
                              {"coverage_required", need},
                              {"rows_in_range", r.rows_in_range()}};
    emit_json("defect_study.json", canonicalize_numbers(summary));
    out.exit_code = (r.rows_in_range() && r.covered_stab_svm() >= need && r.covered_rad_kernel() >= need) ? 0 : 1;
  } else if (config.kind == "verify-maxdeg") {
    const MaxDegreeVerification v = verify_max_degree(count(body, "n"), count(body, "m"), num(body, "delta"),
                                                      count(body, "trials"), config.seed());
    emit_json("verify_maxdeg.json", canonicalize_numbers(v.to_json()));
    out.exit_code = v.holds() ? 0 : 1;
  } else {
    throw Error(Errc::ConfigError, "unknown experiment kind '" + config.kind + "'");
  }
  return out;
}

}  // namespace pairbounds
