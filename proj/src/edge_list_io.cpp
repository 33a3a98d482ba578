#include <algorithm>
#include <fstream>
#include <sstream>

#include "pairbounds/error.hpp"
#include "pairbounds/pair_graph.hpp"

namespace pairbounds {

EdgeListFile parse_edge_list(std::istream& in) {
  EdgeListFile out;
  std::optional<std::size_t> declared_n;
  std::size_t max_index = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream directive(line.substr(hash + 1));
      std::string key;
      std::size_t value = 0;
      if (directive >> key && key == "n" && directive >> value) declared_n = value;
      line.erase(hash);
    }
    std::istringstream fields(line);
    long long i = 0, j = 0;
    if (!(fields >> i)) continue;  // blank or comment-only
    if (!(fields >> j) || i < 0 || j < 0) {
      throw Error(Errc::IoError, "line " + std::to_string(lineno) + ": expected 'i j [y]'");
    }
    long long y = 0;
    const bool has_label = static_cast<bool>(fields >> y);
    std::string rest;
    if (fields >> rest) throw Error(Errc::IoError, "line " + std::to_string(lineno) + ": trailing fields");
    if (has_label) {
      if (y != 1 && y != -1) {
        throw Error(Errc::IoError, "line " + std::to_string(lineno) + ": label must be -1 or +1");
      }
      if (out.labels.size() != out.pairs.size()) {
        throw Error(Errc::IoError, "line " + std::to_string(lineno) + ": labels must be all or nothing");
      }
      out.labels.push_back(static_cast<int>(y));
    } else if (!out.labels.empty()) {
      throw Error(Errc::IoError, "line " + std::to_string(lineno) + ": labels must be all or nothing");
    }
    out.pairs.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    max_index = std::max({max_index, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    any = true;
  }
  out.n = declared_n ? *declared_n : (any ? max_index + 1 : 1);
  return out;
}

EdgeListFile read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const TrainingGraph& g, std::span<const int> labels) {
  if (!labels.empty() && labels.size() != g.num_edges()) {
    throw Error(Errc::SizeMismatch, "one label per edge required");
  }
  out << "# n " << g.num_vertices() << '\n';
  for (EdgeId e : sorted_edge_order(g)) {
    out << g.edge(e).u << ' ' << g.edge(e).v;
    if (!labels.empty()) out << ' ' << labels[e];
    out << '\n';
  }
}

void write_edge_list(const std::string& path, const TrainingGraph& g, std::span<const int> labels) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  write_edge_list(out, g, labels);
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

}  // namespace pairbounds
