#ifndef PAIRBOUNDS_LABELER_HPP
#define PAIRBOUNDS_LABELER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairbounds/pair_graph.hpp"

namespace pairbounds {

/// Number of unordered pairs of n instances.
constexpr std::uint64_t pair_count(std::uint64_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Colexicographic rank of the pair {i, j}, i < j: j(j-1)/2 + i. The rank
/// does not depend on n, so the same pair has the same rank in every file.
constexpr std::uint64_t pair_rank(VertexId i, VertexId j) noexcept {
  return static_cast<std::uint64_t>(j) * (j - 1) / 2 + i;
}

/// Inverse of pair_rank.
VertexPair pair_unrank(std::uint64_t rank) noexcept;

/// Which pairs a labeler chooses. The description only sees counts and a
/// seed; it never has access to instance values.
struct LabelerSpec {
  enum class Variant { Complete, Star, Regular, Uniform, Explicit };

  Variant variant = Variant::Complete;
  std::size_t n = 0;
  std::optional<std::size_t> k;         // Regular
  std::optional<std::size_t> m;         // Star (defaults to n-1), Uniform
  std::optional<std::uint64_t> seed;    // Uniform
  std::vector<VertexPair> edges;        // Explicit

  static LabelerSpec complete(std::size_t n) { return {Variant::Complete, n, {}, {}, {}, {}}; }
  static LabelerSpec star(std::size_t n, std::size_t m) { return {Variant::Star, n, {}, m, {}, {}}; }
  static LabelerSpec regular(std::size_t n, std::size_t k) { return {Variant::Regular, n, k, {}, {}, {}}; }
  static LabelerSpec uniform(std::size_t n, std::size_t m, std::uint64_t seed) {
    return {Variant::Uniform, n, {}, m, seed, {}};
  }
  static LabelerSpec explicit_pairs(std::size_t n, std::vector<VertexPair> edges) {
    return {Variant::Explicit, n, {}, {}, {}, std::move(edges)};
  }
};

std::string variant_name(LabelerSpec::Variant v);

/// JSON object {variant, n, k?, m?, seed?, edges?}. Throws ConfigError on a
/// malformed object.
nlohmann::json to_json(const LabelerSpec& spec);
LabelerSpec labeler_spec_from_json(const nlohmann::json& j);

/// Realizes the spec on spec.n instances. Deterministic given the spec.
TrainingGraph sample_pairs(const LabelerSpec& spec);

/// Uniform draw from G(n, m): all graphs on n vertices with exactly m edges
/// are equally likely. Throws TooManyPairs when m > C(n, 2).
TrainingGraph er_sample(std::size_t n, std::size_t m, std::uint64_t seed);

/// Circulant k-regular graph: i ~ i±1, ..., i±floor(k/2) (mod n), plus the
/// diameter chords i ~ i+n/2 when k is odd. Throws ParityError when n*k is
/// odd and DegreeTooLarge when k >= n.
TrainingGraph regular_sample(std::size_t n, std::size_t k);

/// Vertex 0 joined to 1..m. Throws TooManyPairs when m > n-1.
TrainingGraph star_sample(std::size_t n, std::size_t m);

TrainingGraph complete_sample(std::size_t n);

}  // namespace pairbounds

#endif  // PAIRBOUNDS_LABELER_HPP
