#ifndef ELIMDIST_IO_HPP
#define ELIMDIST_IO_HPP

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "elimdist/graph.hpp"

namespace elimdist {

// Edge-list text format, used by every CLI command:
//   - lines "u v" with whitespace-separated non-negative integers,
//   - "#" starts a comment line, blank lines are ignored,
//   - an optional header line "n <count>" declares the vertex count, which is
//     how isolated vertices are expressed.
// Vertex ids must be dense (0..n-1).  Without a header, the vertex count is
// one past the largest id mentioned.
inline Graph parse_edge_list(std::istream& in) {
  long declared = -1;
  long max_id = -1;
  std::vector<std::pair<long, long>> raw_edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t' || sv.front() == '\r'))
      sv.remove_prefix(1);
    if (sv.empty() || sv.front() == '#') continue;
    std::istringstream ls{std::string(sv)};
    if (sv.front() == 'n') {
      char tag;
      long count;
      ls >> tag >> count;
      if (!ls || count < 0)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad header");
      std::string rest;
      if (ls >> rest) throw std::invalid_argument("line " + std::to_string(line_no) + ": trailing tokens");
      declared = std::max(declared, count);
      continue;
    }
    long u, v;
    ls >> u >> v;
    if (!ls || u < 0 || v < 0)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'u v'");
    std::string rest;
    if (ls >> rest) throw std::invalid_argument("line " + std::to_string(line_no) + ": trailing tokens");
    if (u == v) throw std::invalid_argument("line " + std::to_string(line_no) + ": self-loop");
    raw_edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
  }
  long n = std::max(declared, max_id + 1);
  if (declared >= 0 && max_id >= declared)
    throw std::invalid_argument("vertex id " + std::to_string(max_id) + " exceeds declared count");
  if (n > 100000) throw std::invalid_argument("vertex count out of supported range");
  Graph g(static_cast<int>(n));
  for (auto [u, v] : raw_edges)
    if (!g.has_edge(static_cast<int>(u), static_cast<int>(v)))
      g.add_edge(static_cast<int>(u), static_cast<int>(v));
  return g;
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

inline std::string to_edge_list(const Graph& g) {
  std::string out = "n " + std::to_string(g.n) + "\n";
  for (auto [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return parse_edge_list(in);
}

inline void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << to_edge_list(g);
}

}  // namespace elimdist

#endif
