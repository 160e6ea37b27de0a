#ifndef ELIMDIST_MINORS_HPP
#define ELIMDIST_MINORS_HPP

#include <cstdint>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "elimdist/graph.hpp"
#include "elimdist/io.hpp"

namespace elimdist {

// Thrown when a configurable search budget runs out.  Callers get an error,
// never a wrong answer.
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr long long default_search_budget = 10'000'000;

// Explicit finite obstruction family F; exc(F) is the class of graphs with no
// member of F as a minor.
struct ObstructionFamily {
  std::vector<Graph> members;
  int s_f = 0;    // max vertex count over members
  int ell_f = 0;  // max detail over members
  bool trivial = false;  // some member has fewer than 2 vertices
};

inline ObstructionFamily make_family(std::vector<Graph> members) {
  if (members.empty()) throw std::invalid_argument("obstruction family must be non-empty");
  ObstructionFamily f;
  for (const Graph& m : members) {
    if (m.n == 0) throw std::invalid_argument("obstruction family members must be non-empty");
    f.s_f = std::max(f.s_f, m.n);
    f.ell_f = std::max(f.ell_f, detail(m));
    if (m.n < 2) f.trivial = true;
  }
  // s ≤ ℓ since detail ≥ |V|; the edge side caps ℓ at max(s, s(s-1)/2).  (The
  // plain s(s-1)/2 cap would be wrong for single-edge members: detail(K_2)=2.)
  if (!(f.s_f <= f.ell_f && f.ell_f <= std::max(f.s_f, f.s_f * (f.s_f - 1) / 2)))
    throw std::logic_error("obstruction family size bounds violated");
  f.members = std::move(members);
  return f;
}

// Presets named in the CLI contract; anything else is read as an edge-list
// file path, one file per member.
inline ObstructionFamily family_from_names(const std::vector<std::string>& items) {
  std::vector<Graph> members;
  for (const std::string& item : items) {
    if (item == "planar") {
      members.push_back(complete_graph(5));
      members.push_back(complete_bipartite(3, 3));
    } else if (item.size() == 2 && item[0] == 'K' && item[1] >= '1' && item[1] <= '5') {
      members.push_back(complete_graph(item[1] - '0'));
    } else {
      members.push_back(load_graph(item));
    }
  }
  return make_family(std::move(members));
}

// True when g is connected with at least three vertices and no cutvertex.
inline bool two_connected(const Graph& g) {
  if (g.n < 3 || !is_connected(g)) return false;
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> keep;
    keep.reserve(g.n - 1);
    for (int u = 0; u < g.n; ++u)
      if (u != v) keep.push_back(u);
    if (!is_connected(induced_subgraph(g, keep))) return false;
  }
  return true;
}

inline int min_degree(const Graph& g) {
  int d = g.n;
  for (int v = 0; v < g.n; ++v) d = std::min(d, static_cast<int>(g.neighbors(v).size()));
  return d;
}

// Deleting an interior vertex of degree at most one never changes whether a
// member embeds across the boundary, provided every member is 2-connected: a
// branch set may shed such a vertex without losing any external adjacency.
inline bool pendant_prune_safe(const ObstructionFamily& f) {
  for (const Graph& m : f.members)
    if (!two_connected(m)) return false;
  return true;
}

// Replacing an interior degree-2 vertex by a direct edge between its two
// non-adjacent neighbors preserves member containment when every member has
// minimum degree 3 (its models are subdivision-invariant) or is the triangle
// (containment means "has a cycle", which edge subdivision cannot change).
// Counterexample otherwise: suppressing one vertex of C_4 yields C_3, so a
// family containing C_4 would lose a genuine obstruction occurrence.
inline bool chain_suppress_safe(const ObstructionFamily& f) {
  const Graph triangle = complete_graph(3);
  for (const Graph& m : f.members) {
    if (min_degree(m) >= 3 && is_connected(m)) continue;
    if (canonical_form(m).code == canonical_form(triangle).code) continue;
    return false;
  }
  return true;
}

// Sorted member codes; identifies a family up to member isomorphism.
inline std::string family_code(const ObstructionFamily& f) {
  std::vector<std::string> codes;
  for (const Graph& m : f.members) codes.push_back(canonical_form(m).code);
  std::sort(codes.begin(), codes.end());
  std::string out;
  for (const std::string& c : codes) out += c + '&';
  return out;
}

namespace detail_minor {

// Branch-set search: grow disjoint connected sets, one per pattern vertex,
// until every pattern edge is realized by a host edge between the two sets.
// Hosts are capped at 64 vertices so sets fit in one word.
struct ModelSearch {
  const Graph& h;
  const Graph& g;
  int p;
  std::vector<std::uint64_t> row;       // host adjacency, one word per vertex
  std::vector<std::uint64_t> part;      // branch set per pattern vertex, 0 = not rooted
  std::vector<std::uint64_t> part_nbr;  // union of host rows over the set
  std::vector<std::uint64_t> forbidden;  // vertices committed to stay out of the part
  std::vector<int> root;
  std::vector<int> twin_class;  // -1 for singleton classes
  std::vector<int> order;       // rooting order: degree desc, id asc
  std::uint64_t free_mask;
  long long budget;

  ModelSearch(const Graph& h_, const Graph& g_, long long budget_)
      : h(h_), g(g_), p(h_.n), budget(budget_) {
    row.assign(g.n, 0);
    for (int v = 0; v < g.n; ++v)
      for (int u : g.neighbors(v)) row[v] |= std::uint64_t{1} << u;
    part.assign(p, 0);
    part_nbr.assign(p, 0);
    forbidden.assign(p, 0);
    root.assign(p, -1);
    free_mask = g.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n) - 1;
    order.resize(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (h.degree(a) != h.degree(b)) return h.degree(a) > h.degree(b);
      return a < b;
    });
    // Twins (equal neighborhoods apart from each other) make branch sets
    // interchangeable, so roots within a class may be forced ascending.
    std::vector<std::uint64_t> hrow(p, 0);
    for (int v = 0; v < p; ++v)
      for (int u : h.neighbors(v)) hrow[v] |= std::uint64_t{1} << u;
    std::vector<int> uf(p);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        std::uint64_t a = hrow[i] & ~(std::uint64_t{1} << j);
        std::uint64_t b = hrow[j] & ~(std::uint64_t{1} << i);
        if (a == b) uf[find(i)] = find(j);
      }
    twin_class.assign(p, -1);
    std::vector<int> size(p, 0);
    for (int i = 0; i < p; ++i) ++size[find(i)];
    for (int i = 0; i < p; ++i)
      if (size[find(i)] > 1) twin_class[i] = find(i);
  }

  // A pattern edge ij is realizable only if some path of still-free vertices
  // links the two branch sets (the path would be absorbed into them).
  bool edge_feasible(int i, int j) const {
    std::uint64_t usable = free_mask & ~(forbidden[i] & forbidden[j]);
    std::uint64_t reach = part[i];
    std::uint64_t nbr = part_nbr[i];
    for (;;) {
      if (nbr & part[j]) return true;
      std::uint64_t grow = nbr & usable & ~reach;
      if (!grow) return false;
      reach |= grow;
      while (grow) {
        int v = std::countr_zero(grow);
        grow &= grow - 1;
        nbr |= row[v];
      }
    }
  }

  bool solve() {
    if (--budget < 0) throw resource_limit_error("minor model search budget exhausted");
    int unrooted = 0;
    for (int i = 0; i < p; ++i)
      if (part[i] == 0) ++unrooted;
    if (std::popcount(free_mask) < unrooted) return false;
    for (auto [i, j] : h.edges())
      if (part[i] != 0 && part[j] != 0 && !(part_nbr[i] & part[j]) && !edge_feasible(i, j))
        return false;
    for (int idx : order) {
      if (part[idx] != 0) continue;
      // Root this part; twins are rooted in ascending order, and rejected
      // candidates are barred from the part in the remaining branches so
      // sibling branches explore disjoint models.
      int min_root = 0;
      if (twin_class[idx] >= 0)
        for (int j = 0; j < idx; ++j)
          if (twin_class[j] == twin_class[idx] && part[j] != 0)
            min_root = std::max(min_root, root[j] + 1);
      if (min_root >= 64) return false;
      std::uint64_t cand = free_mask & ~forbidden[idx] & ~((std::uint64_t{1} << min_root) - 1);
      std::uint64_t saved = forbidden[idx];
      while (cand) {
        int v = std::countr_zero(cand);
        cand &= cand - 1;
        place(idx, v, true);
        if (solve()) return true;
        unplace(idx, v, true);
        forbidden[idx] |= std::uint64_t{1} << v;
      }
      forbidden[idx] = saved;
      return false;
    }
    // All parts rooted: pick the unrealized pattern edge with the fewest
    // ways to grow either side.
    int best_i = -1, best_j = -1, best_count = -1;
    for (auto [i, j] : h.edges()) {
      if (part_nbr[i] & part[j]) continue;  // realized
      int count = std::popcount(part_nbr[i] & free_mask & ~forbidden[i]) +
                  std::popcount(part_nbr[j] & free_mask & ~forbidden[j]);
      if (count == 0) return false;
      if (best_count < 0 || count < best_count) {
        best_i = i;
        best_j = j;
        best_count = count;
      }
    }
    if (best_count < 0) return true;  // every pattern edge realized
    std::uint64_t saved_i = forbidden[best_i];
    std::uint64_t saved_j = forbidden[best_j];
    for (std::uint64_t c = part_nbr[best_i] & free_mask & ~forbidden[best_i]; c;) {
      int v = std::countr_zero(c);
      c &= c - 1;
      place(best_i, v, false);
      if (solve()) return true;
      unplace(best_i, v, false);
      forbidden[best_i] |= std::uint64_t{1} << v;
    }
    for (std::uint64_t c = part_nbr[best_j] & free_mask & ~forbidden[best_j]; c;) {
      int v = std::countr_zero(c);
      c &= c - 1;
      place(best_j, v, false);
      if (solve()) return true;
      unplace(best_j, v, false);
      forbidden[best_j] |= std::uint64_t{1} << v;
    }
    forbidden[best_i] = saved_i;
    forbidden[best_j] = saved_j;
    return false;
  }

  void place(int i, int v, bool as_root) {
    part[i] |= std::uint64_t{1} << v;
    part_nbr[i] |= row[v];
    free_mask &= ~(std::uint64_t{1} << v);
    if (as_root) root[i] = v;
  }

  void unplace(int i, int v, bool as_root) {
    part[i] &= ~(std::uint64_t{1} << v);
    part_nbr[i] = 0;
    for (std::uint64_t s = part[i]; s;) {
      int u = std::countr_zero(s);
      s &= s - 1;
      part_nbr[i] |= row[u];
    }
    free_mask |= std::uint64_t{1} << v;
    if (as_root) root[i] = -1;
  }
};

}  // namespace detail_minor

// Exact minor containment: true iff some model of h exists in g.  Decision
// engine is a branch-set search; see minor_by_reduction for the independent
// reduction-based route used in cross-checks.
inline bool is_minor(const Graph& h, const Graph& g, long long budget = default_search_budget) {
  if (h.n > g.n || h.edge_count() > g.edge_count()) return false;
  if (h.n == 0) return true;
  if (g.n > 64) throw resource_limit_error("minor host larger than 64 vertices unsupported");
  detail_minor::ModelSearch search(h, g, budget);
  return search.solve();
}

// Reduction route: branch on single host reductions (contract an edge, delete
// an edge, drop an isolated vertex) with results memoized by the canonical
// form of the shrunken host.  Exponential in general; used on small hosts and
// as a second opinion against is_minor.
namespace detail_minor {

struct ReductionMemo {
  std::mutex mu;
  std::unordered_map<std::string, bool> seen;  // key: pattern code | host code
};

inline ReductionMemo& reduction_memo() {
  static ReductionMemo memo;
  return memo;
}

inline bool reduction_search(const Graph& h, const std::string& h_code, int h_edges,
                             const Graph& g, long long& budget) {
  if (h.n > g.n || h_edges > g.edge_count()) return false;
  if (h.n == 0) return true;
  std::string g_code = canonical_form(g).code;
  std::string key = h_code + '|' + g_code;
  ReductionMemo& memo = reduction_memo();
  {
    std::lock_guard<std::mutex> lock(memo.mu);
    auto it = memo.seen.find(key);
    if (it != memo.seen.end()) return it->second;
  }
  if (--budget < 0) throw resource_limit_error("minor reduction search budget exhausted");
  bool ans = false;
  int g_edges = g.edge_count();
  if (g.n == h.n && g_edges == h_edges) {
    ans = (g_code == h_code);
  } else {
    if (g.n > h.n)
      for (auto [u, v] : g.edges())
        if (reduction_search(h, h_code, h_edges, contract_edge(g, u, v), budget)) {
          ans = true;
          break;
        }
    if (!ans && g.n > h.n)
      for (int v = 0; v < g.n; ++v)
        if (g.degree(v) == 0) {
          // all isolated vertices are interchangeable; one branch suffices
          ans = reduction_search(h, h_code, h_edges, delete_vertices(g, {v}), budget);
          break;
        }
    if (!ans && g_edges > h_edges)
      for (auto [u, v] : g.edges()) {
        Graph next = g;
        next.remove_edge(u, v);
        if (reduction_search(h, h_code, h_edges, next, budget)) {
          ans = true;
          break;
        }
      }
  }
  std::lock_guard<std::mutex> lock(memo.mu);
  memo.seen.emplace(std::move(key), ans);
  return ans;
}

}  // namespace detail_minor

inline bool minor_by_reduction(const Graph& h, const Graph& g,
                               long long budget = default_search_budget) {
  return detail_minor::reduction_search(h, canonical_form(h).code, h.edge_count(), g, budget);
}

inline bool in_exc(const Graph& g, const ObstructionFamily& f,
                   long long budget = default_search_budget) {
  for (const Graph& h : f.members)
    if (is_minor(h, g, budget)) return false;
  return true;
}

}  // namespace elimdist

#endif
