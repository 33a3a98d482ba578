#include "pairbounds/relations.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pairbounds {

std::string feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::SymmetricAbsDiff: return "symmetric-absdiff";
    case FeatureMode::SymmetricProduct: return "symmetric-product";
    case FeatureMode::AntisymmetricDiff: return "antisymmetric-diff";
  }
  return "unknown";
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "symmetric-absdiff") return FeatureMode::SymmetricAbsDiff;
  if (name == "symmetric-product") return FeatureMode::SymmetricProduct;
  if (name == "antisymmetric-diff") return FeatureMode::AntisymmetricDiff;
  throw Error(Errc::ConfigError, "unknown feature mode '" + name + "'");
}

// ---------------------------------------------------------------------------
// Distributions

void InstanceDistribution::validate(std::size_t d) const {
  if (d < 1) throw Error(Errc::BadParams, "dimension must be at least 1");
  if (kind == Kind::UniformCube) return;
  if (clusters < 1) throw Error(Errc::BadParams, "mixture needs at least one center");
  if (!(spread >= 0.0) || !std::isfinite(spread)) throw Error(Errc::BadParams, "spread must be finite and >= 0");
  if (!(center_radius >= 0.0 && center_radius <= 1.0)) {
    throw Error(Errc::BadParams, "center radius must lie in [0, 1]");
  }
  if (d == 1 && clusters > 2) throw Error(Errc::BadParams, "at most 2 distinct centers fit in one dimension");
}

Eigen::MatrixXd InstanceDistribution::centers(std::size_t d) const {
  validate(d);
  if (kind == Kind::UniformCube) return Eigen::MatrixXd(static_cast<Eigen::Index>(d), 0);
  const auto dd = static_cast<Eigen::Index>(d);
  const auto c = static_cast<Eigen::Index>(clusters);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dd, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(c);
    out(0, j) = center_radius * std::cos(angle);
    if (d >= 2) out(1, j) = center_radius * std::sin(angle);
  }
  // Exact ±radius on the first axis for the two-center case.
  if (c == 2) {
    out(0, 0) = center_radius;
    out(0, 1) = -center_radius;
    if (d >= 2) out(1, 0) = out(1, 1) = 0.0;
  }
  return out;
}

nlohmann::json to_json(const InstanceDistribution& dist) {
  nlohmann::json j;
  if (dist.kind == InstanceDistribution::Kind::UniformCube) {
    j["kind"] = "uniform-cube";
  } else {
    j["kind"] = "gaussian-mixture";
    j["clusters"] = dist.clusters;
    j["spread"] = dist.spread;
    j["center_radius"] = dist.center_radius;
  }
  return j;
}

InstanceDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform-cube") return InstanceDistribution::uniform_cube();
    if (kind != "gaussian-mixture") throw Error(Errc::ConfigError, "unknown distribution '" + kind + "'");
    return InstanceDistribution::gaussian_mixture(j.value("clusters", std::size_t{2}), j.value("spread", 0.1),
                                                  j.value("center_radius", 0.5));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("distribution: ") + e.what());
  }
}

Eigen::VectorXd draw_instance(const InstanceDistribution& dist, std::size_t d, Rng& rng, int* component) {
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::VectorXd x(dd);
  if (dist.kind == InstanceDistribution::Kind::UniformCube) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < dd; ++i) x(i) = scale * rng.uniform(-1.0, 1.0);
    if (component) *component = -1;
    return x;
  }
  const auto c = static_cast<int>(rng.uniform_index(dist.clusters));
  x = dist.centers(d).col(c);
  if (dist.spread > 0.0) {
    for (Eigen::Index i = 0; i < dd; ++i) x(i) += dist.spread * rng.normal();
  }
  const double norm = x.norm();
  if (norm > 1.0) x /= norm;
  if (component) *component = c;
  return x;
}

InstanceSample sample_instances(const InstanceDistribution& dist, std::size_t n, std::size_t d,
                                std::uint64_t seed) {
  if (n < 2) throw Error(Errc::BadParams, "need at least 2 instances");
  dist.validate(d);
  Rng rng(seed);
  InstanceSample out;
  out.points.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  out.component.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.points.col(static_cast<Eigen::Index>(i)) = draw_instance(dist, d, rng, &out.component[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relations

nlohmann::json to_json(const RelationSpec& rel) {
  nlohmann::json j;
  if (rel.kind == RelationSpec::Kind::Equivalence) {
    j["kind"] = "equivalence";
    nlohmann::json cs = nlohmann::json::array();
    for (Eigen::Index c = 0; c < rel.centers.cols(); ++c) {
      std::vector<double> v(rel.centers.col(c).data(), rel.centers.col(c).data() + rel.centers.rows());
      cs.push_back(v);
    }
    j["centers"] = std::move(cs);
  } else {
    j["kind"] = "total-order";
    j["direction"] = std::vector<double>(rel.direction.data(), rel.direction.data() + rel.direction.size());
  }
  return j;
}

RelationSpec relation_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "equivalence") {
      const auto& cs = j.at("centers");
      if (!cs.is_array() || cs.empty()) throw Error(Errc::ConfigError, "equivalence needs centers");
      const auto d = static_cast<Eigen::Index>(cs.at(0).size());
      Eigen::MatrixXd centers(d, static_cast<Eigen::Index>(cs.size()));
      for (std::size_t c = 0; c < cs.size(); ++c) {
        const auto v = cs[c].get<std::vector<double>>();
        if (static_cast<Eigen::Index>(v.size()) != d) throw Error(Errc::ConfigError, "ragged centers");
        centers.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXd>(v.data(), d);
      }
      return RelationSpec::equivalence(std::move(centers));
    }
    if (kind == "total-order") {
      const auto v = j.at("direction").get<std::vector<double>>();
      return RelationSpec::total_order(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    throw Error(Errc::ConfigError, "unknown relation kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("relation: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Datasets

PairDataset build_dataset(const Eigen::MatrixXd& X, const TrainingGraph& g, const RelationSpec& rel,
                          FeatureMode mode) {
  if (static_cast<std::size_t>(X.cols()) != g.num_vertices()) {
    throw Error(Errc::SizeMismatch, "graph has " + std::to_string(g.num_vertices()) + " vertices but " +
                                        std::to_string(X.cols()) + " instances were given");
  }
  if (static_cast<std::size_t>(X.rows()) != rel.dim()) {
    throw Error(Errc::DimMismatch, "relation dimension differs from instance dimension");
  }
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    if (!X.col(i).allFinite() || X.col(i).norm() > 1.0 + 1e-12) {
      throw Error(Errc::BadParams, "instance " + std::to_string(i) + " is not inside the unit ball");
    }
  }
  PairDataset out;
  out.instances = X;
  out.graph = g;
  out.relation = rel;
  out.mode = mode;
  out.norm_bound = feature_norm_bound(mode);
  const auto m = static_cast<Eigen::Index>(g.num_edges());
  out.features.resize(X.rows(), m);
  out.labels.resize(m);
  for (Eigen::Index e = 0; e < m; ++e) {
    const auto [a, b] = g.oriented(static_cast<EdgeId>(e));
    const auto xa = X.col(static_cast<Eigen::Index>(a));
    const auto xb = X.col(static_cast<Eigen::Index>(b));
    out.features.col(e) = pair_feature_map(xa, xb, mode);
    out.labels(e) = relation_label(rel, xa, xb);
  }
  return out;
}

PairDataset remove_example(const PairDataset& data, EdgeId e) {
  if (e >= data.size()) throw Error(Errc::IndexOutOfRange, "no example " + std::to_string(e));
  std::vector<EdgeId> keep;
  keep.reserve(data.size() - 1);
  for (EdgeId i = 0; i < data.size(); ++i) {
    if (i != e) keep.push_back(i);
  }
  PairDataset out;
  out.instances = data.instances;
  out.graph = data.graph.subgraph(keep);
  out.relation = data.relation;
  out.mode = data.mode;
  out.norm_bound = data.norm_bound;
  const auto m = static_cast<Eigen::Index>(keep.size());
  out.features.resize(data.features.rows(), m);
  out.labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.features.col(i) = data.features.col(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(i)]));
    out.labels(i) = data.labels(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(i)]));
  }
  return out;
}

void write_dataset(const std::string& dir, const PairDataset& data, const nlohmann::json& provenance) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir + ": " + ec.message());

  {
    std::ofstream csv(fs::path(dir) / "instances.csv");
    if (!csv) throw Error(Errc::IoError, "cannot write instances.csv in " + dir);
    char buf[32];
    for (Eigen::Index i = 0; i < data.instances.cols(); ++i) {
      for (Eigen::Index r = 0; r < data.instances.rows(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", data.instances(r, i));
        csv << (r ? "," : "") << buf;
      }
      csv << '\n';
    }
  }

  std::vector<int> labels(data.size());
  for (std::size_t e = 0; e < data.size(); ++e) labels[e] = static_cast<int>(data.labels(static_cast<Eigen::Index>(e)));
  write_edge_list((fs::path(dir) / "edges.txt").string(), data.graph, labels);

  nlohmann::json meta;
  meta["feature_mode"] = feature_mode_name(data.mode);
  meta["norm_bound"] = data.norm_bound;
  meta["relation"] = to_json(data.relation);
  meta["n"] = data.graph.num_vertices();
  meta["d"] = data.instances.rows();
  meta["m"] = data.size();
  nlohmann::json reversed = nlohmann::json::array();
  for (EdgeId e : sorted_edge_order(data.graph)) {
    if (data.graph.reversed(e)) reversed.push_back({data.graph.edge(e).u, data.graph.edge(e).v});
  }
  meta["reversed_edges"] = std::move(reversed);
  meta["provenance"] = provenance;
  std::ofstream out(fs::path(dir) / "meta.json");
  if (!out) throw Error(Errc::IoError, "cannot write meta.json in " + dir);
  out << meta.dump(2) << '\n';
}

PairDataset read_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream meta_in(fs::path(dir) / "meta.json");
  if (!meta_in) throw Error(Errc::IoError, "missing meta.json in " + dir);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::IoError, std::string("meta.json: ") + e.what());
  }

  std::ifstream csv(fs::path(dir) / "instances.csv");
  if (!csv) throw Error(Errc::IoError, "missing instances.csv in " + dir);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw Error(Errc::IoError, "ragged instances.csv");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(Errc::IoError, "empty instances.csv");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t r = 0; r < rows[i].size(); ++r) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = rows[i][r];
  }

  EdgeListFile edges = read_edge_list((fs::path(dir) / "edges.txt").string());
  std::vector<VertexPair> reversed;
  for (const auto& p : meta.value("reversed_edges", nlohmann::json::array())) {
    reversed.emplace_back(p.at(0).get<VertexId>(), p.at(1).get<VertexId>());
  }
  std::sort(reversed.begin(), reversed.end());
  for (auto& [i, j] : edges.pairs) {
    if (std::binary_search(reversed.begin(), reversed.end(), VertexPair{i, j})) std::swap(i, j);
  }
  const TrainingGraph g = TrainingGraph::from_edge_list(static_cast<std::size_t>(X.cols()), edges.pairs);
  PairDataset data = build_dataset(X, g, relation_from_json(meta.at("relation")),
                                   feature_mode_from_name(meta.at("feature_mode").get<std::string>()));
  if (!edges.labels.empty()) {
    for (std::size_t e = 0; e < data.size(); ++e) {
      if (edges.labels[e] != static_cast<int>(data.labels(static_cast<Eigen::Index>(e)))) {
        throw Error(Errc::InvariantViolation, "stored label of edge " + std::to_string(e) +
                                                  " disagrees with the relation");
      }
    }
  }
  return data;
}

}  // namespace pairbounds
