#ifndef ELIMDIST_OBSTRUCTIONS_HPP
#define ELIMDIST_OBSTRUCTIONS_HPP

#include <map>
#include <string>
#include <vector>

#include "elimdist/graph.hpp"

namespace elimdist {

// One representative per isomorphism class with exactly n vertices, sorted by
// canonical code.  Built by extending the (n-1)-classes with every possible
// neighborhood for a new vertex; every n-vertex class arises this way because
// deleting any vertex lands in some (n-1)-class.
inline std::vector<Graph> enumerate_graphs_exactly(int n) {
  if (n == 0) return {Graph(0)};
  std::vector<Graph> smaller = enumerate_graphs_exactly(n - 1);
  std::map<std::string, Graph> classes;
  for (const Graph& g : smaller) {
    for (std::uint64_t nbrs = 0; nbrs < (std::uint64_t{1} << (n - 1)); ++nbrs) {
      Graph ext(n);
      for (auto [u, v] : g.edges()) ext.add_edge(u, v);
      for (int u = 0; u < n - 1; ++u)
        if (nbrs & (std::uint64_t{1} << u)) ext.add_edge(u, n - 1);
      classes.emplace(canonical_form(ext).code, ext);
    }
  }
  std::vector<Graph> out;
  for (auto& [code, g] : classes) out.push_back(g);
  return out;
}

// All isomorphism classes with at most n_max vertices, including the empty
// graph, in deterministic order (vertex count, then canonical code).
inline std::vector<Graph> enumerate_graphs(int n_max) {
  std::vector<Graph> out;
  for (int n = 0; n <= n_max; ++n)
    for (Graph& g : enumerate_graphs_exactly(n)) out.push_back(std::move(g));
  return out;
}

}  // namespace elimdist

#endif
