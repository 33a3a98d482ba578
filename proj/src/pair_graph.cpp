#include "pairbounds/pair_graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "pairbounds/error.hpp"

namespace pairbounds {

TrainingGraph TrainingGraph::from_edge_list(std::size_t n, std::span<const VertexPair> pairs) {
  if (n == 0) throw Error(Errc::BadParams, "graph needs at least one vertex");
  TrainingGraph g;
  g.n_ = n;
  g.edges_.reserve(pairs.size());
  g.reversed_.reserve(pairs.size());
  g.incidence_.resize(n);

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(pairs.size() * 2);
  for (const auto& [i, j] : pairs) {
    if (i >= n || j >= n) {
      throw Error(Errc::IndexOutOfRange, "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                             ") outside [0, " + std::to_string(n) + ")");
    }
    if (i == j) throw Error(Errc::SelfLoop, "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    const VertexId u = std::min(i, j);
    const VertexId v = std::max(i, j);
    if (!seen.insert(static_cast<std::uint64_t>(u) * n + v).second) {
      throw Error(Errc::DuplicateEdge,
                  "pair {" + std::to_string(u) + ", " + std::to_string(v) + "} appears twice");
    }
    const EdgeId e = g.edges_.size();
    g.edges_.push_back({u, v});
    g.reversed_.push_back(i > j ? 1 : 0);
    g.incidence_[u].push_back({v, e});
    g.incidence_[v].push_back({u, e});
  }
  for (auto& inc : g.incidence_) {
    std::sort(inc.begin(), inc.end(),
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
  }
  return g;
}

std::optional<EdgeId> TrainingGraph::find_edge(VertexId a, VertexId b) const {
  if (a >= n_ || b >= n_) return std::nullopt;
  const auto& inc = incidence_[a];
  auto it = std::lower_bound(inc.begin(), inc.end(), b,
                             [](const Incidence& x, VertexId key) { return x.neighbor < key; });
  if (it != inc.end() && it->neighbor == b) return it->edge;
  return std::nullopt;
}

TrainingGraph TrainingGraph::subgraph(std::span<const EdgeId> keep) const {
  std::vector<VertexPair> pairs;
  pairs.reserve(keep.size());
  for (EdgeId e : keep) pairs.push_back(oriented(e));
  return from_edge_list(n_, pairs);
}

std::vector<VertexPair> TrainingGraph::oriented_pairs() const {
  std::vector<VertexPair> out;
  out.reserve(edges_.size());
  for (EdgeId e = 0; e < edges_.size(); ++e) out.push_back(oriented(e));
  return out;
}

std::vector<std::size_t> degree_sequence(const TrainingGraph& g) {
  std::vector<std::size_t> deg(g.num_vertices());
  for (VertexId x = 0; x < g.num_vertices(); ++x) deg[x] = g.degree(x);
  return deg;
}

std::size_t max_instance_frequency(const TrainingGraph& g) {
  std::size_t rho = 0;
  for (VertexId x = 0; x < g.num_vertices(); ++x) rho = std::max(rho, g.degree(x));
  return rho;
}

bool is_regular(const TrainingGraph& g) {
  for (VertexId x = 1; x < g.num_vertices(); ++x) {
    if (g.degree(x) != g.degree(0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Line graph

bool LineGraph::adjacent(EdgeId a, EdgeId b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

LineGraph line_graph(const TrainingGraph& g) {
  if (g.num_edges() == 0) throw Error(Errc::EmptyGraph, "line graph of an edgeless graph");
  const std::size_t m = g.num_edges();
  std::vector<std::size_t> offsets(m + 1, 0);
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    offsets[e + 1] = offsets[e] + g.degree(ed.u) + g.degree(ed.v) - 2;
  }
  auto targets = std::make_unique_for_overwrite<EdgeId[]>(offsets[m]);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  // Visiting f in increasing order appends it to each neighbor's row in
  // order, so rows come out sorted. In a simple graph two edges share at most
  // one endpoint, so nothing is appended twice.
  for (EdgeId f = 0; f < m; ++f) {
    const Edge& ed = g.edge(f);
    for (VertexId x : {ed.u, ed.v}) {
      for (const auto& inc : g.incident(x)) {
        if (inc.edge != f) targets[fill[inc.edge]++] = f;
      }
    }
  }
  return LineGraph(std::move(offsets), std::move(targets));
}

// ---------------------------------------------------------------------------
// Edge coloring

std::vector<std::vector<EdgeId>> DependencyPartition::classes() const {
  std::vector<std::vector<EdgeId>> out(num_colors);
  for (EdgeId e = 0; e < color_of.size(); ++e) out[color_of[e]].push_back(e);
  return out;
}

std::vector<std::size_t> DependencyPartition::class_sizes() const {
  std::vector<std::size_t> out(num_colors, 0);
  for (std::size_t c : color_of) ++out[c];
  return out;
}

namespace {

constexpr std::size_t kUncolored = static_cast<std::size_t>(-1);

/// Misra–Gries state: per-edge color plus, per vertex, a color -> edge map.
class MisraGries {
 public:
  explicit MisraGries(const TrainingGraph& g)
      : g_(g), color_(g.num_edges(), kUncolored), at_(g.num_vertices()) {}

  std::vector<std::size_t> run() {
    for (EdgeId e = 0; e < g_.num_edges(); ++e) color_edge(e);
    return std::move(color_);
  }

 private:
  bool is_free(VertexId x, std::size_t c) const { return !at_[x].contains(c); }

  std::size_t lowest_free(VertexId x) const {
    std::size_t c = 0;
    while (!is_free(x, c)) ++c;
    return c;
  }

  VertexId other(EdgeId e, VertexId x) const {
    const Edge& ed = g_.edge(e);
    return ed.u == x ? ed.v : ed.u;
  }

  void assign(EdgeId e, std::size_t c) {
    const Edge& ed = g_.edge(e);
    color_[e] = c;
    at_[ed.u][c] = e;
    at_[ed.v][c] = e;
  }

  void clear(EdgeId e) {
    const Edge& ed = g_.edge(e);
    at_[ed.u].erase(color_[e]);
    at_[ed.v].erase(color_[e]);
    color_[e] = kUncolored;
  }

  /// Shift colors down the fan prefix fan[0..last] and give (u, fan[last])
  /// color c.
  void rotate_and_color(const std::vector<EdgeId>& fan_edges, std::size_t last, std::size_t c) {
    std::vector<std::size_t> shifted(last + 1);
    for (std::size_t j = 1; j <= last; ++j) shifted[j - 1] = color_[fan_edges[j]];
    shifted[last] = c;
    for (std::size_t j = 1; j <= last; ++j) clear(fan_edges[j]);
    for (std::size_t j = 0; j <= last; ++j) assign(fan_edges[j], shifted[j]);
  }

  void color_edge(EdgeId e0) {
    const Edge& ed = g_.edge(e0);
    const VertexId u = ed.u;
    const std::size_t c = lowest_free(u);

    std::vector<VertexId> fan{ed.v};
    std::vector<EdgeId> fan_edges{e0};
    std::vector<char> in_fan(g_.num_vertices(), 0);
    in_fan[ed.v] = 1;

    for (;;) {
      const VertexId last = fan.back();
      if (is_free(last, c)) {
        rotate_and_color(fan_edges, fan.size() - 1, c);
        return;
      }
      bool extended = false;
      for (const auto& inc : g_.incident(u)) {
        if (in_fan[inc.neighbor] || color_[inc.edge] == kUncolored) continue;
        if (is_free(last, color_[inc.edge])) {
          fan.push_back(inc.neighbor);
          fan_edges.push_back(inc.edge);
          in_fan[inc.neighbor] = 1;
          extended = true;
          break;
        }
      }
      if (!extended) break;
    }

    const std::size_t d = lowest_free(fan.back());
    invert_path(u, c, d);

    for (std::size_t i = 0; i < fan.size(); ++i) {
      if (i >= 1 && !is_free(fan[i - 1], color_[fan_edges[i]])) break;
      if (is_free(fan[i], d)) {
        rotate_and_color(fan_edges, i, d);
        return;
      }
    }
    throw Error(Errc::InvariantViolation, "Misra-Gries found no fan vertex free on the path color");
  }

  /// Swap colors c and d along the maximal c/d path leaving u on a d edge.
  void invert_path(VertexId u, std::size_t c, std::size_t d) {
    if (c == d) return;
    std::vector<EdgeId> path;
    VertexId cur = u;
    std::size_t want = d;
    for (;;) {
      auto it = at_[cur].find(want);
      if (it == at_[cur].end()) break;
      path.push_back(it->second);
      cur = other(it->second, cur);
      want = (want == d) ? c : d;
    }
    std::vector<std::size_t> old(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
      old[i] = color_[path[i]];
      clear(path[i]);
    }
    for (std::size_t i = 0; i < path.size(); ++i) assign(path[i], old[i] == c ? d : c);
  }

  const TrainingGraph& g_;
  std::vector<std::size_t> color_;
  std::vector<std::unordered_map<std::size_t, EdgeId>> at_;
};

}  // namespace

DependencyPartition edge_coloring(const TrainingGraph& g) {
  if (g.num_edges() == 0) throw Error(Errc::EmptyGraph, "edge coloring of an edgeless graph");
  std::vector<std::size_t> raw = MisraGries(g).run();

  // Compact the palette, keeping the relative order of color ids.
  std::vector<std::size_t> palette(raw.begin(), raw.end());
  std::sort(palette.begin(), palette.end());
  palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
  DependencyPartition out;
  out.num_colors = palette.size();
  out.color_of.resize(raw.size());
  for (EdgeId e = 0; e < raw.size(); ++e) {
    out.color_of[e] = static_cast<std::size_t>(
        std::lower_bound(palette.begin(), palette.end(), raw[e]) - palette.begin());
  }
  if (!is_proper_edge_coloring(g, out.color_of)) {
    throw Error(Errc::InvariantViolation, "edge coloring is not proper");
  }
  return out;
}

std::vector<std::vector<EdgeId>> dependency_partition(const TrainingGraph& g) {
  return edge_coloring(g).classes();
}

bool is_proper_edge_coloring(const TrainingGraph& g, std::span<const std::size_t> color_of) {
  if (color_of.size() != g.num_edges()) return false;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    std::unordered_set<std::size_t> used;
    for (const auto& inc : g.incident(x)) {
      if (color_of[inc.edge] == kUncolored) return false;
      if (!used.insert(color_of[inc.edge]).second) return false;
    }
  }
  return true;
}

bool is_matching(const TrainingGraph& g, std::span<const EdgeId> edges) {
  std::vector<char> hit(g.num_vertices(), 0);
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    if (hit[ed.u] || hit[ed.v]) return false;
    hit[ed.u] = hit[ed.v] = 1;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Effective training size and pruning

EffectiveTrainingSize effective_training_size(const TrainingGraph& g) {
  if (g.num_edges() == 0) throw Error(Errc::EmptyGraph, "effective training size needs m >= 1");
  EffectiveTrainingSize out;
  out.numerator = g.num_edges();
  out.denominator = max_instance_frequency(g);
  out.value = static_cast<double>(out.numerator) / static_cast<double>(out.denominator);
  out.n = g.num_vertices();
  out.mean_degree = 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.num_vertices());
  return out;
}

namespace {

PruneResult finish_prune(const TrainingGraph& g, const std::vector<char>& keep, std::size_t k) {
  PruneResult out;
  std::vector<EdgeId> kept;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (keep[e]) kept.push_back(e);
    else out.discarded_edges.push_back(e);
  }
  out.graph = g.subgraph(kept);
  bool all_k = true;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    const std::size_t d = out.graph.degree(x);
    if (d == 0) {
      out.isolated_vertices.push_back(x);
    } else {
      out.surviving_vertices.push_back(x);
      if (d != k) all_k = false;
    }
  }
  out.regular = !out.surviving_vertices.empty() && all_k;
  out.spanning = out.regular && out.isolated_vertices.empty();
  return out;
}

}  // namespace

PruneResult prune_to_regular(const TrainingGraph& g, std::size_t k) {
  if (k == 0) throw Error(Errc::BadParams, "k must be at least 1");
  const std::size_t delta = max_instance_frequency(g);
  if (k > delta) {
    throw Error(Errc::InfeasibleDegree,
                "k = " + std::to_string(k) + " exceeds maximum degree " + std::to_string(delta));
  }

  std::vector<char> keep(g.num_edges(), 0);
  if (k == 1) {
    for (EdgeId e : maximum_matching(g)) keep[e] = 1;
    return finish_prune(g, keep, k);
  }

  std::fill(keep.begin(), keep.end(), 1);
  std::vector<std::size_t> deg = degree_sequence(g);
  const std::vector<EdgeId> order = sorted_edge_order(g);

  auto drop_edge = [&](EdgeId e) {
    if (!keep[e]) return;
    keep[e] = 0;
    --deg[g.edge(e).u];
    --deg[g.edge(e).v];
  };
  auto drop_vertex = [&](VertexId x) {
    for (const auto& inc : g.incident(x)) drop_edge(inc.edge);
  };

  for (;;) {
    // Peel vertices that cannot reach degree k, lowest degree first.
    for (;;) {
      VertexId pick = g.num_vertices();
      for (VertexId x = 0; x < g.num_vertices(); ++x) {
        if (deg[x] > 0 && deg[x] < k && (pick == g.num_vertices() || deg[x] < deg[pick])) pick = x;
      }
      if (pick == g.num_vertices()) break;
      drop_vertex(pick);
    }
    // Trim edges whose endpoints both have surplus degree.
    for (EdgeId e : order) {
      if (keep[e] && deg[g.edge(e).u] > k && deg[g.edge(e).v] > k) drop_edge(e);
    }
    VertexId surplus = g.num_vertices();
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
      if (deg[x] > k) {
        surplus = x;
        break;
      }
    }
    if (surplus == g.num_vertices()) break;
    // No edge can be trimmed without starving a neighbor; give up the vertex.
    drop_vertex(surplus);
  }
  return finish_prune(g, keep, k);
}

std::vector<EdgeId> sorted_edge_order(const TrainingGraph& g) {
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    const Edge& x = g.edge(a);
    const Edge& y = g.edge(b);
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  return order;
}

}  // namespace pairbounds
