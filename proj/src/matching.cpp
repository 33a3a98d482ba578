#include <algorithm>
#include <queue>

#include "pairbounds/pair_graph.hpp"

namespace pairbounds {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

/// Edmonds' blossom algorithm, O(n^3). Vertices and neighbors are scanned in
/// ascending order so the matching is deterministic.
class Blossom {
 public:
  explicit Blossom(const TrainingGraph& g)
      : g_(g), n_(g.num_vertices()), match_(n_, kNone), parent_(n_), base_(n_), used_(n_), blossom_(n_) {}

  std::vector<std::size_t> run() {
    // Greedy warm start in (u, v) order.
    for (EdgeId e : sorted_edge_order(g_)) {
      const Edge& ed = g_.edge(e);
      if (match_[ed.u] == kNone && match_[ed.v] == kNone) {
        match_[ed.u] = ed.v;
        match_[ed.v] = ed.u;
      }
    }
    for (VertexId root = 0; root < n_; ++root) {
      if (match_[root] != kNone) continue;
      VertexId v = find_path(root);
      while (v != kNone) {
        const VertexId pv = parent_[v];
        const VertexId ppv = match_[pv];
        match_[v] = pv;
        match_[pv] = v;
        v = ppv;
      }
    }
    return match_;
  }

 private:
  VertexId lca(VertexId a, VertexId b) {
    std::vector<char> seen(n_, 0);
    for (;;) {
      a = base_[a];
      seen[a] = 1;
      if (match_[a] == kNone) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(VertexId v, VertexId b, VertexId child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  VertexId find_path(VertexId root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), kNone);
    for (VertexId i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = 1;
    std::queue<VertexId> q;
    q.push(root);
    while (!q.empty()) {
      const VertexId v = q.front();
      q.pop();
      for (const auto& inc : g_.incident(v)) {
        const VertexId to = inc.neighbor;
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != kNone && parent_[match_[to]] != kNone)) {
          const VertexId cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (VertexId i = 0; i < n_; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] == kNone) {
          parent_[to] = v;
          if (match_[to] == kNone) return to;
          used_[match_[to]] = 1;
          q.push(match_[to]);
        }
      }
    }
    return kNone;
  }

  const TrainingGraph& g_;
  std::size_t n_;
  std::vector<std::size_t> match_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> base_;
  std::vector<char> used_;
  std::vector<char> blossom_;
};

}  // namespace

std::vector<EdgeId> maximum_matching(const TrainingGraph& g) {
  const std::vector<std::size_t> mate = Blossom(g).run();
  std::vector<EdgeId> out;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    if (mate[x] != kNone && x < mate[x]) out.push_back(*g.find_edge(x, mate[x]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pairbounds
