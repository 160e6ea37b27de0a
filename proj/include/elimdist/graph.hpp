#ifndef ELIMDIST_GRAPH_HPP
#define ELIMDIST_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace elimdist {

// Simple undirected graph on dense vertex ids 0..n-1.  Adjacency rows are
// packed 64-bit words: cheap neighborhood operations for the small graphs in
// the hot paths, while still admitting wall instances with a few hundred
// vertices.  External (sparse) ids are mapped away at the I/O boundary.
struct Graph {
  int n = 0;
  int words = 0;                    // words per adjacency row
  std::vector<std::uint64_t> bits;  // row-major, n * words entries

  Graph() = default;

  explicit Graph(int vertex_count) {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    n = vertex_count;
    words = (n + 63) / 64;
    bits.assign(static_cast<std::size_t>(n) * words, 0);
  }

  bool valid_vertex(int v) const { return 0 <= v && v < n; }

  void require_vertex(int v) const {
    if (!valid_vertex(v)) throw std::invalid_argument("unknown vertex id " + std::to_string(v));
  }

  std::size_t row(int v) const { return static_cast<std::size_t>(v) * words; }

  bool has_edge(int u, int v) const {
    require_vertex(u);
    require_vertex(v);
    if (u == v) return false;
    return (bits[row(u) + v / 64] >> (v % 64)) & 1u;
  }

  void add_edge(int u, int v) {
    require_vertex(u);
    require_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop rejected");
    bits[row(u) + v / 64] |= std::uint64_t{1} << (v % 64);
    bits[row(v) + u / 64] |= std::uint64_t{1} << (u % 64);
  }

  void remove_edge(int u, int v) {
    if (!has_edge(u, v)) throw std::invalid_argument("edge not present");
    bits[row(u) + v / 64] &= ~(std::uint64_t{1} << (v % 64));
    bits[row(v) + u / 64] &= ~(std::uint64_t{1} << (u % 64));
  }

  int degree(int v) const {
    require_vertex(v);
    int d = 0;
    for (int w = 0; w < words; ++w) d += std::popcount(bits[row(v) + w]);
    return d;
  }

  std::vector<int> neighbors(int v) const {
    require_vertex(v);
    std::vector<int> out;
    for (int w = 0; w < words; ++w) {
      std::uint64_t word = bits[row(v) + w];
      while (word) {
        int b = std::countr_zero(word);
        out.push_back(w * 64 + b);
        word &= word - 1;
      }
    }
    return out;
  }

  int edge_count() const {
    int total = 0;
    for (int v = 0; v < n; ++v) total += degree(v);
    return total / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n; ++u)
      for (int v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n == b.n && a.bits == b.bits;
  }
};

// max(|V|, |E|); the size measure that bounds representative graphs.
inline int detail(const Graph& g) { return std::max(g.n, g.edge_count()); }

// Induced subgraph on `keep` (sorted, duplicate-free).  Vertex i of the
// result is keep[i], so relative order of surviving ids is preserved.
inline Graph induced_subgraph(const Graph& g, const std::vector<int>& keep) {
  for (std::size_t i = 0; i < keep.size(); ++i) {
    g.require_vertex(keep[i]);
    if (i > 0 && keep[i - 1] >= keep[i])
      throw std::invalid_argument("vertex list must be sorted and duplicate-free");
  }
  Graph out(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (g.has_edge(keep[i], keep[j])) out.add_edge(static_cast<int>(i), static_cast<int>(j));
  return out;
}

inline Graph delete_vertices(const Graph& g, const std::vector<int>& s) {
  std::vector<char> drop(g.n, 0);
  for (int v : s) {
    g.require_vertex(v);
    drop[v] = 1;
  }
  std::vector<int> keep;
  for (int v = 0; v < g.n; ++v)
    if (!drop[v]) keep.push_back(v);
  return induced_subgraph(g, keep);
}

// Contract edge uv.  The merged vertex keeps the smaller id's slot, picks up
// N(u) ∪ N(v), and the larger id is removed (remaining ids shift down by one).
inline Graph contract_edge(const Graph& g, int u, int v) {
  if (!g.has_edge(u, v)) throw std::invalid_argument("edge not present");
  int lo = std::min(u, v), hi = std::max(u, v);
  Graph tmp = g;
  for (int x : g.neighbors(hi))
    if (x != lo && !tmp.has_edge(lo, x)) tmp.add_edge(lo, x);
  return delete_vertices(tmp, {hi});
}

// Vertex sets of the connected components, each sorted, ordered by smallest
// member.
inline std::vector<std::vector<int>> component_vertex_sets(const Graph& g) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(g.n, 0);
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u : g.neighbors(v))
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline std::vector<Graph> connected_components(const Graph& g) {
  std::vector<Graph> out;
  for (const auto& comp : component_vertex_sets(g)) out.push_back(induced_subgraph(g, comp));
  return out;
}

inline bool is_connected(const Graph& g) { return component_vertex_sets(g).size() <= 1; }

// new_of_old[v] is the id of v in the result; must be a permutation of 0..n-1.
inline Graph apply_permutation(const Graph& g, const std::vector<int>& new_of_old) {
  if (static_cast<int>(new_of_old.size()) != g.n)
    throw std::invalid_argument("permutation size mismatch");
  std::vector<char> hit(g.n, 0);
  for (int v : new_of_old) {
    if (v < 0 || v >= g.n || hit[v]) throw std::invalid_argument("not a permutation");
    hit[v] = 1;
  }
  Graph out(g.n);
  for (auto [u, v] : g.edges()) out.add_edge(new_of_old[u], new_of_old[v]);
  return out;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph out(a.n + b.n);
  for (auto [u, v] : a.edges()) out.add_edge(u, v);
  for (auto [u, v] : b.edges()) out.add_edge(a.n + u, a.n + v);
  return out;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline Graph complete_bipartite(int a, int b) {
  Graph g(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
  return g;
}

// Canonical form: a byte string equal for two (colored) graphs iff they are
// isomorphic by a color-preserving map.  Computed by iterated color
// refinement plus individualization branching; the minimum encoding over all
// branches is taken, which is isomorphism-invariant because the branch set
// is.  Exponential on highly symmetric graphs, which is acceptable at the
// sizes this repo canonicalizes (representatives and obstruction candidates).
struct CanonicalForm {
  std::string code;
  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  auto operator<=>(const CanonicalForm&) const = default;
};

namespace detail_canon {

// One refinement pass: the new color of v is the rank of (old color, sorted
// multiset of neighbor colors).  Ranks are assigned in lexicographic order of
// that pair, so cell order is refined, never reshuffled.
inline std::vector<int> refine(const Graph& g, std::vector<int> col) {
  if (g.n == 0) return col;
  for (;;) {
    int old_count = 1 + (g.n ? *std::max_element(col.begin(), col.end()) : -1);
    std::vector<std::pair<std::pair<int, std::vector<int>>, int>> sig(g.n);
    for (int v = 0; v < g.n; ++v) {
      std::vector<int> around;
      for (int u : g.neighbors(v)) around.push_back(col[u]);
      std::sort(around.begin(), around.end());
      sig[v] = {{col[v], std::move(around)}, v};
    }
    std::sort(sig.begin(), sig.end());
    std::vector<int> next(g.n, 0);
    int c = 0;
    for (int i = 0; i < g.n; ++i) {
      if (i > 0 && sig[i].first != sig[i - 1].first) ++c;
      next[sig[i].second] = c;
    }
    if (c + 1 == old_count) return col;
    col = std::move(next);
  }
}

inline std::string encode(const Graph& g, const std::vector<int>& orig_colors,
                          const std::vector<int>& order) {
  std::string out = "n" + std::to_string(g.n) + ";c";
  for (int i = 0; i < g.n; ++i) {
    if (i) out += ',';
    out += std::to_string(orig_colors[order[i]]);
  }
  out += ";a";
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j) out += g.has_edge(order[i], order[j]) ? '1' : '0';
  return out;
}

inline void search(const Graph& g, const std::vector<int>& orig_colors, std::vector<int> col,
                   std::string& best, std::vector<int>& best_order, bool& found) {
  col = refine(g, col);
  int color_count = g.n ? 1 + *std::max_element(col.begin(), col.end()) : 0;
  if (color_count == g.n) {
    std::vector<int> order(g.n);
    for (int v = 0; v < g.n; ++v) order[col[v]] = v;
    std::string code = encode(g, orig_colors, order);
    if (!found || code < best) {
      best = std::move(code);
      best_order = std::move(order);
      found = true;
    }
    return;
  }
  // First non-singleton cell in color order; individualize each member.
  std::vector<int> count(color_count, 0);
  for (int v = 0; v < g.n; ++v) ++count[col[v]];
  int target = 0;
  while (count[target] < 2) ++target;
  for (int v = 0; v < g.n; ++v) {
    if (col[v] != target) continue;
    std::vector<int> branch = col;
    branch[v] = color_count;
    search(g, orig_colors, std::move(branch), best, best_order, found);
  }
}

}  // namespace detail_canon

// Canonical code plus one vertex order realizing it: the vertex at position i
// of `order` maps to canonical id i.
struct CanonicalLabeling {
  CanonicalForm form;
  std::vector<int> order;
};

inline CanonicalLabeling canonical_labeling(const Graph& g, const std::vector<int>& colors) {
  if (!colors.empty() && static_cast<int>(colors.size()) != g.n)
    throw std::invalid_argument("color vector size mismatch");
  std::vector<int> orig = colors.empty() ? std::vector<int>(g.n, 0) : colors;
  // Dense-rank the starting colors; original values still go into the code.
  std::vector<int> sorted_vals(orig.begin(), orig.end());
  std::sort(sorted_vals.begin(), sorted_vals.end());
  sorted_vals.erase(std::unique(sorted_vals.begin(), sorted_vals.end()), sorted_vals.end());
  std::vector<int> start(g.n);
  for (int v = 0; v < g.n; ++v)
    start[v] = static_cast<int>(std::lower_bound(sorted_vals.begin(), sorted_vals.end(), orig[v]) -
                                sorted_vals.begin());
  std::string best;
  std::vector<int> best_order;
  bool found = false;
  detail_canon::search(g, orig, std::move(start), best, best_order, found);
  if (!found) best = "n0;c;a";  // empty graph
  return CanonicalLabeling{CanonicalForm{std::move(best)}, std::move(best_order)};
}

inline CanonicalForm canonical_form(const Graph& g, const std::vector<int>& colors) {
  return canonical_labeling(g, colors).form;
}

inline CanonicalForm canonical_form(const Graph& g) { return canonical_form(g, {}); }

}  // namespace elimdist

#endif
