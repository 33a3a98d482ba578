#include "pairbounds/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "pairbounds/error.hpp"
#include "pairbounds/random.hpp"

namespace pairbounds {

VertexPair pair_unrank(std::uint64_t rank) noexcept {
  // Largest j with j(j-1)/2 <= rank; the floating estimate is corrected below.
  auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(rank))) / 2.0);
  while (j * (j - 1) / 2 > rank) --j;
  while ((j + 1) * j / 2 <= rank) ++j;
  return {static_cast<VertexId>(rank - j * (j - 1) / 2), static_cast<VertexId>(j)};
}

namespace {

TrainingGraph from_ranks(std::size_t n, const std::vector<std::uint64_t>& ranks) {
  std::vector<VertexPair> pairs;
  pairs.reserve(ranks.size());
  for (std::uint64_t r : ranks) pairs.push_back(pair_unrank(r));
  std::sort(pairs.begin(), pairs.end());
  return TrainingGraph::from_edge_list(n, pairs);
}

void require_vertices(std::size_t n) {
  if (n == 0) throw Error(Errc::BadParams, "labeler needs n >= 1");
}

}  // namespace

TrainingGraph complete_sample(std::size_t n) {
  require_vertices(n);
  std::vector<VertexPair> pairs;
  pairs.reserve(pair_count(n));
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return TrainingGraph::from_edge_list(n, pairs);
}

TrainingGraph er_sample(std::size_t n, std::size_t m, std::uint64_t seed) {
  require_vertices(n);
  const std::uint64_t total = pair_count(n);
  if (m > total) {
    throw Error(Errc::TooManyPairs, "m = " + std::to_string(m) + " exceeds C(n,2) = " + std::to_string(total));
  }
  Rng rng(seed);
  std::vector<std::uint64_t> ranks;
  ranks.reserve(m);
  if (total <= 4 * static_cast<std::uint64_t>(m)) {
    // Dense: partial Fisher–Yates over all pair ranks.
    std::vector<std::uint64_t> all(total);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::uint64_t j = i + rng.uniform_index(total - i);
      std::swap(all[i], all[j]);
    }
    ranks.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
  } else {
    // Sparse: Floyd's subset sampling, m draws regardless of collisions.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(2 * m);
    for (std::uint64_t j = total - m; j < total; ++j) {
      const std::uint64_t t = rng.uniform_index(j + 1);
      const std::uint64_t pick = chosen.contains(t) ? j : t;
      chosen.insert(pick);
      ranks.push_back(pick);
    }
  }
  return from_ranks(n, ranks);
}

TrainingGraph regular_sample(std::size_t n, std::size_t k) {
  require_vertices(n);
  if (k == 0) throw Error(Errc::BadParams, "k must be at least 1");
  if (k >= n) {
    throw Error(Errc::DegreeTooLarge, "k = " + std::to_string(k) + " needs k < n = " + std::to_string(n));
  }
  if ((n * k) % 2 != 0) {
    throw Error(Errc::ParityError, "n*k = " + std::to_string(n * k) + " is odd; no k-regular graph exists");
  }
  std::vector<VertexPair> pairs;
  pairs.reserve(n * k / 2);
  for (std::size_t offset = 1; offset <= k / 2; ++offset) {
    for (VertexId i = 0; i < n; ++i) {
      const VertexId j = (i + offset) % n;
      pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  if (k % 2 == 1) {
    for (VertexId i = 0; i < n / 2; ++i) pairs.emplace_back(i, i + n / 2);
  }
  std::sort(pairs.begin(), pairs.end());
  return TrainingGraph::from_edge_list(n, pairs);
}

TrainingGraph star_sample(std::size_t n, std::size_t m) {
  require_vertices(n);
  if (m > n - 1) {
    throw Error(Errc::TooManyPairs, "star on " + std::to_string(n) + " vertices has at most " +
                                        std::to_string(n - 1) + " edges");
  }
  std::vector<VertexPair> pairs;
  pairs.reserve(m);
  for (VertexId j = 1; j <= m; ++j) pairs.emplace_back(0, j);
  return TrainingGraph::from_edge_list(n, pairs);
}

TrainingGraph sample_pairs(const LabelerSpec& spec) {
  using V = LabelerSpec::Variant;
  const std::size_t n = spec.n;
  if (spec.m && *spec.m > pair_count(n)) {
    throw Error(Errc::TooManyPairs, "m exceeds C(n,2)");
  }
  switch (spec.variant) {
    case V::Complete:
      return complete_sample(n);
    case V::Star:
      require_vertices(n);
      return star_sample(n, spec.m.value_or(n - 1));
    case V::Regular:
      if (!spec.k) throw Error(Errc::BadParams, "regular labeler needs k");
      return regular_sample(n, *spec.k);
    case V::Uniform:
      if (!spec.m) throw Error(Errc::BadParams, "uniform labeler needs m");
      return er_sample(n, *spec.m, spec.seed.value_or(0));
    case V::Explicit:
      if (spec.edges.size() > pair_count(n)) throw Error(Errc::TooManyPairs, "more pairs than C(n,2)");
      return TrainingGraph::from_edge_list(n, spec.edges);
  }
  throw Error(Errc::BadParams, "unknown labeler variant");
}

std::string variant_name(LabelerSpec::Variant v) {
  switch (v) {
    case LabelerSpec::Variant::Complete: return "complete";
    case LabelerSpec::Variant::Star: return "star";
    case LabelerSpec::Variant::Regular: return "regular";
    case LabelerSpec::Variant::Uniform: return "uniform";
    case LabelerSpec::Variant::Explicit: return "explicit";
  }
  return "unknown";
}

nlohmann::json to_json(const LabelerSpec& spec) {
  nlohmann::json j;
  j["variant"] = variant_name(spec.variant);
  j["n"] = spec.n;
  if (spec.k) j["k"] = *spec.k;
  if (spec.m) j["m"] = *spec.m;
  if (spec.seed) j["seed"] = *spec.seed;
  if (spec.variant == LabelerSpec::Variant::Explicit) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : spec.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
  }
  return j;
}

LabelerSpec labeler_spec_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw Error(Errc::ConfigError, "labeler spec must be a JSON object");
    LabelerSpec spec;
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "complete") spec.variant = LabelerSpec::Variant::Complete;
    else if (variant == "star") spec.variant = LabelerSpec::Variant::Star;
    else if (variant == "regular") spec.variant = LabelerSpec::Variant::Regular;
    else if (variant == "uniform") spec.variant = LabelerSpec::Variant::Uniform;
    else if (variant == "explicit") spec.variant = LabelerSpec::Variant::Explicit;
    else throw Error(Errc::ConfigError, "unknown labeler variant '" + variant + "'");
    spec.n = j.at("n").get<std::size_t>();
    if (j.contains("k")) spec.k = j["k"].get<std::size_t>();
    if (j.contains("m")) spec.m = j["m"].get<std::size_t>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("edges")) {
      for (const auto& e : j["edges"]) spec.edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
    }
    using V = LabelerSpec::Variant;
    if (spec.variant == V::Regular && !spec.k) throw Error(Errc::ConfigError, "regular labeler needs 'k'");
    if (spec.variant == V::Uniform && (!spec.m || !spec.seed)) {
      throw Error(Errc::ConfigError, "uniform labeler needs 'm' and 'seed'");
    }
    if (spec.variant == V::Explicit && !j.contains("edges")) {
      throw Error(Errc::ConfigError, "explicit labeler needs 'edges'");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigError, std::string("labeler spec: ") + e.what());
  }
}

}  // namespace pairbounds
