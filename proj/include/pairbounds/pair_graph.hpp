#ifndef PAIRBOUNDS_PAIR_GRAPH_HPP
#define PAIRBOUNDS_PAIR_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pairbounds {

using VertexId = std::size_t;
using EdgeId = std::size_t;
using VertexPair = std::pair<VertexId, VertexId>;

/// Undirected edge stored with u < v.
struct Edge {
  VertexId u;
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

/// Instances as vertices, labeled pairs as edges.
///
/// The graph is simple: no self-loops and at most one edge per unordered pair.
/// Edge ids follow the order of the input pairs. When a pair was supplied as
/// (j, i) with j > i the edge is stored as (i, j) and flagged as reversed, so
/// antisymmetric relations can recover which ordered pair was labeled.
class TrainingGraph {
 public:
  TrainingGraph() = default;

  /// Validates and normalizes `pairs`. Throws IndexOutOfRange, SelfLoop or
  /// DuplicateEdge; n == 0 is BadParams.
  static TrainingGraph from_edge_list(std::size_t n, std::span<const VertexPair> pairs);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  bool reversed(EdgeId e) const { return reversed_.at(e) != 0; }

  /// The ordered pair as it was labeled.
  VertexPair oriented(EdgeId e) const {
    const Edge& ed = edges_.at(e);
    return reversed(e) ? VertexPair{ed.v, ed.u} : VertexPair{ed.u, ed.v};
  }

  /// Incident edges of `x`, sorted by neighbor index.
  std::span<const Incidence> incident(VertexId x) const { return incidence_.at(x); }
  std::size_t degree(VertexId x) const { return incidence_.at(x).size(); }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  /// Subgraph on the same vertex set keeping the listed edges (orientation
  /// flags preserved, new ids follow the order of `keep`).
  TrainingGraph subgraph(std::span<const EdgeId> keep) const;

  /// Oriented pairs in edge-id order; from_edge_list(n, oriented_pairs())
  /// reproduces this graph exactly.
  std::vector<VertexPair> oriented_pairs() const;

  friend bool operator==(const TrainingGraph& a, const TrainingGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.reversed_ == b.reversed_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> reversed_;
  std::vector<std::vector<Incidence>> incidence_;
};

std::vector<std::size_t> degree_sequence(const TrainingGraph& g);

/// Largest number of examples that share one instance, i.e. the maximum
/// degree. Zero for an edgeless graph.
std::size_t max_instance_frequency(const TrainingGraph& g);

/// True when every vertex has the same degree.
bool is_regular(const TrainingGraph& g);

/// Dependency graph of the examples: one node per edge of the source graph,
/// two nodes adjacent iff their edges share an endpoint.
class LineGraph {
 public:
  /// Compressed rows: the neighbors of e are targets[offsets[e], offsets[e+1]),
  /// sorted ascending.
  /// `targets` holds offsets.back() entries.
  LineGraph(std::vector<std::size_t> offsets, std::unique_ptr<EdgeId[]> targets)
      : offsets_(std::move(offsets)), targets_(std::move(targets)) {}

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const EdgeId> neighbors(EdgeId e) const {
    check(e);
    return {targets_.get() + offsets_[e], offsets_[e + 1] - offsets_[e]};
  }
  std::size_t degree(EdgeId e) const {
    check(e);
    return offsets_[e + 1] - offsets_[e];
  }
  bool adjacent(EdgeId a, EdgeId b) const;
  std::size_t num_links() const noexcept { return offsets_.empty() ? 0 : offsets_.back() / 2; }

 private:
  void check(EdgeId e) const {
    if (e >= node_count()) throw std::out_of_range("line graph node " + std::to_string(e));
  }

  std::vector<std::size_t> offsets_;
  std::unique_ptr<EdgeId[]> targets_;  // filled exactly once, so never zeroed
};

/// Throws EmptyGraph when g has no edges.
LineGraph line_graph(const TrainingGraph& g);

/// Proper edge coloring of the training graph, equivalently a proper vertex
/// coloring of its line graph. Color ids are compact in [0, num_colors).
struct DependencyPartition {
  std::vector<std::size_t> color_of;
  std::size_t num_colors = 0;

  /// Edge ids grouped by color, each group sorted ascending.
  std::vector<std::vector<EdgeId>> classes() const;
  std::vector<std::size_t> class_sizes() const;
};

/// Misra–Gries edge coloring; uses at most Δ+1 colors. Ties are broken by
/// lowest index throughout, so the result is a pure function of g.
DependencyPartition edge_coloring(const TrainingGraph& g);

/// Color classes of edge_coloring(g). Every class is a matching of g.
std::vector<std::vector<EdgeId>> dependency_partition(const TrainingGraph& g);

/// Checks that `color_of` assigns a color to every edge and no two edges
/// sharing a vertex have the same color.
bool is_proper_edge_coloring(const TrainingGraph& g, std::span<const std::size_t> color_of);

bool is_matching(const TrainingGraph& g, std::span<const EdgeId> edges);

struct EffectiveTrainingSize {
  std::size_t numerator = 0;    // m
  std::size_t denominator = 0;  // ρ
  double value = 0.0;           // m / ρ
  std::size_t n = 0;
  double mean_degree = 0.0;
};

/// m/ρ. Throws EmptyGraph when m == 0.
EffectiveTrainingSize effective_training_size(const TrainingGraph& g);

/// Edge ids of a maximum-cardinality matching (Edmonds' blossom algorithm).
/// Sorted ascending.
std::vector<EdgeId> maximum_matching(const TrainingGraph& g);

struct PruneResult {
  TrainingGraph graph;  // same vertex indexing as the input
  std::vector<VertexId> surviving_vertices;
  std::vector<VertexId> isolated_vertices;
  std::vector<EdgeId> discarded_edges;  // ids in the input graph
  bool spanning = false;                // k-factor on all input vertices
  bool regular = false;                 // every surviving vertex has degree k
};

/// Discards examples to reach a k-regular subgraph on the surviving
/// vertices. k == 1 is solved exactly by maximum matching; k >= 2 peels
/// low-degree vertices and trims surplus edges, which is a heuristic.
/// Throws InfeasibleDegree when k exceeds the maximum degree, BadParams for
/// k == 0.
PruneResult prune_to_regular(const TrainingGraph& g, std::size_t k);

/// Contents of an edge-list file: "i j" or "i j y" per line, '#' comments.
struct EdgeListFile {
  std::size_t n = 0;
  std::vector<VertexPair> pairs;
  std::vector<int> labels;  // empty, or one ±1 label per pair
};

/// Parses the edge-list text format. A "# n <count>" comment fixes the
/// vertex count; otherwise it is one more than the largest index seen.
EdgeListFile parse_edge_list(std::istream& in);
EdgeListFile read_edge_list(const std::string& path);

/// Emits "# n <count>" followed by edges sorted by (i, j) with i < j. When
/// labels are given (one per edge id) each line carries its label.
void write_edge_list(std::ostream& out, const TrainingGraph& g, std::span<const int> labels = {});
void write_edge_list(const std::string& path, const TrainingGraph& g, std::span<const int> labels = {});

/// Edge ids of g sorted by (u, v).
std::vector<EdgeId> sorted_edge_order(const TrainingGraph& g);

}  // namespace pairbounds

#endif  // PAIRBOUNDS_PAIR_GRAPH_HPP
