#ifndef ELIMDIST_TREEDECOMP_HPP
#define ELIMDIST_TREEDECOMP_HPP

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "elimdist/graph.hpp"
#include "elimdist/minors.hpp"

namespace elimdist {

// Rooted tree decomposition: node ids 0..N-1, parent[root] = -1, bags sorted.
struct TreeDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<int> parent;
  int root = -1;
};

inline int width(const TreeDecomposition& td) {
  int w = -1;
  for (const auto& b : td.bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

inline std::vector<std::vector<int>> children_lists(const std::vector<int>& parent) {
  std::vector<std::vector<int>> ch(parent.size());
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (parent[v] >= 0) ch[parent[v]].push_back(static_cast<int>(v));
  return ch;
}

struct ValidationReport {
  bool ok = true;
  std::string message;
};

// Checks the three tree-decomposition axioms and reports the first violation
// with its witness.
inline ValidationReport validate(const TreeDecomposition& td, const Graph& g) {
  auto fail = [](std::string m) { return ValidationReport{false, std::move(m)}; };
  int nodes = static_cast<int>(td.bags.size());
  if (static_cast<int>(td.parent.size()) != nodes) return fail("parent array size mismatch");
  if (nodes == 0) {
    if (g.n == 0) return {};
    return fail("vertex 0 not covered by any bag");
  }
  if (td.root < 0 || td.root >= nodes) return fail("root id out of range");
  if (td.parent[td.root] != -1) return fail("root must have parent -1");
  // single root, no cycles: walk each node to the root
  for (int v = 0; v < nodes; ++v) {
    int steps = 0, u = v;
    while (u != td.root) {
      if (td.parent[u] < 0 || td.parent[u] >= nodes || ++steps > nodes)
        return fail("node " + std::to_string(v) + " is not attached to the root");
      u = td.parent[u];
    }
  }
  for (int v = 0; v < nodes; ++v)
    for (std::size_t i = 0; i < td.bags[v].size(); ++i) {
      if (!g.valid_vertex(td.bags[v][i]))
        return fail("bag " + std::to_string(v) + " holds unknown vertex " +
                    std::to_string(td.bags[v][i]));
      if (i > 0 && td.bags[v][i - 1] >= td.bags[v][i])
        return fail("bag " + std::to_string(v) + " is not sorted");
    }
  std::vector<std::vector<int>> holding(g.n);
  for (int v = 0; v < nodes; ++v)
    for (int x : td.bags[v]) holding[x].push_back(v);
  for (int x = 0; x < g.n; ++x)
    if (holding[x].empty()) return fail("vertex " + std::to_string(x) + " not covered by any bag");
  for (auto [u, v] : g.edges()) {
    bool found = false;
    for (int node : holding[u]) {
      const auto& b = td.bags[node];
      if (std::binary_search(b.begin(), b.end(), v)) {
        found = true;
        break;
      }
    }
    if (!found)
      return fail("edge " + std::to_string(u) + "-" + std::to_string(v) +
                  " not contained in any bag");
  }
  // occurrence sets must induce connected subtrees: count, for each vertex,
  // the holding nodes whose parent also holds it; connected iff exactly
  // |holding|-1 such nodes
  for (int x = 0; x < g.n; ++x) {
    int linked = 0;
    for (int node : holding[x]) {
      int p = td.parent[node];
      if (p >= 0 && std::binary_search(td.bags[p].begin(), td.bags[p].end(), x)) ++linked;
    }
    if (linked != static_cast<int>(holding[x].size()) - 1)
      return fail("bags holding vertex " + std::to_string(x) + " are disconnected");
  }
  return {};
}

enum class NodeKind { Leaf, Introduce, Forget, Join };

struct NiceTreeDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<int> parent;
  std::vector<NodeKind> kind;
  std::vector<int> acted;  // introduced/forgotten vertex; -1 for leaf/join
  int root = -1;

  TreeDecomposition as_plain() const { return TreeDecomposition{bags, parent, root}; }
};

inline int width(const NiceTreeDecomposition& ntd) { return width(ntd.as_plain()); }

inline ValidationReport validate_nice(const NiceTreeDecomposition& ntd, const Graph& g) {
  auto fail = [](std::string m) { return ValidationReport{false, std::move(m)}; };
  ValidationReport base = validate(ntd.as_plain(), g);
  if (!base.ok) return base;
  auto ch = children_lists(ntd.parent);
  for (std::size_t v = 0; v < ntd.bags.size(); ++v) {
    const auto& bag = ntd.bags[v];
    const auto& kids = ch[v];
    auto has = [](const std::vector<int>& b, int x) {
      return std::binary_search(b.begin(), b.end(), x);
    };
    switch (ntd.kind[v]) {
      case NodeKind::Leaf:
        if (!kids.empty()) return fail("leaf node " + std::to_string(v) + " has children");
        if (bag.size() != 1) return fail("leaf node " + std::to_string(v) + " bag not singleton");
        break;
      case NodeKind::Introduce: {
        if (kids.size() != 1) return fail("introduce node " + std::to_string(v) + " needs one child");
        int x = ntd.acted[v];
        const auto& cb = ntd.bags[kids[0]];
        if (!has(bag, x) || has(cb, x) || bag.size() != cb.size() + 1)
          return fail("introduce node " + std::to_string(v) + " does not add exactly its vertex");
        for (int y : cb)
          if (!has(bag, y)) return fail("introduce node " + std::to_string(v) + " drops vertex");
        break;
      }
      case NodeKind::Forget: {
        if (kids.size() != 1) return fail("forget node " + std::to_string(v) + " needs one child");
        int x = ntd.acted[v];
        const auto& cb = ntd.bags[kids[0]];
        if (has(bag, x) || !has(cb, x) || bag.size() + 1 != cb.size())
          return fail("forget node " + std::to_string(v) + " does not drop exactly its vertex");
        for (int y : bag)
          if (!has(cb, y)) return fail("forget node " + std::to_string(v) + " adds vertex");
        break;
      }
      case NodeKind::Join:
        if (kids.size() != 2) return fail("join node " + std::to_string(v) + " needs two children");
        if (ntd.bags[kids[0]] != bag || ntd.bags[kids[1]] != bag)
          return fail("join node " + std::to_string(v) + " children bags differ");
        break;
    }
  }
  return {};
}

namespace detail_td {

struct NiceBuilder {
  NiceTreeDecomposition out;

  int add(NodeKind kind, int acted, std::vector<int> bag, const std::vector<int>& kids) {
    int id = static_cast<int>(out.bags.size());
    out.bags.push_back(std::move(bag));
    out.parent.push_back(-1);
    out.kind.push_back(kind);
    out.acted.push_back(acted);
    for (int c : kids) out.parent[c] = id;
    return id;
  }
};

inline std::uint64_t vertex_mask(const std::vector<int>& vs) {
  std::uint64_t m = 0;
  for (int v : vs) m |= std::uint64_t{1} << v;
  return m;
}

// Greedy order over `todo`: repeatedly take the smallest vertex adjacent (in
// g) to the growing set, falling back to the smallest remaining one.  Keeps
// subtree unions connected whenever the graph allows it.
inline std::vector<int> connect_order(const Graph& g, std::uint64_t start_union,
                                      std::vector<int> todo) {
  std::vector<int> order;
  std::uint64_t seen = start_union;
  auto adjacent = [&](int v) {
    for (int u : g.neighbors(v))
      if (seen & (std::uint64_t{1} << u)) return true;
    return false;
  };
  while (!todo.empty()) {
    int pick = -1;
    for (std::size_t i = 0; i < todo.size(); ++i)
      if (seen == 0 || adjacent(todo[i])) {
        pick = static_cast<int>(i);
        break;
      }
    if (pick < 0) pick = 0;
    int v = todo[pick];
    todo.erase(todo.begin() + pick);
    order.push_back(v);
    seen |= std::uint64_t{1} << v;
  }
  return order;
}

// Chain from `from_bag` to `to_bag` above node `below`: forget the vertices
// leaving, then introduce the vertices entering in connect order.
inline int adapt_bag(NiceBuilder& b, const Graph& g, int below, std::vector<int> from_bag,
                     const std::vector<int>& to_bag, std::uint64_t& sub_union) {
  int top = below;
  std::vector<int> leaving, entering;
  for (int v : from_bag)
    if (!std::binary_search(to_bag.begin(), to_bag.end(), v)) leaving.push_back(v);
  for (int v : to_bag)
    if (!std::binary_search(from_bag.begin(), from_bag.end(), v)) entering.push_back(v);
  std::vector<int> bag = from_bag;
  for (int v : leaving) {
    bag.erase(std::find(bag.begin(), bag.end(), v));
    top = b.add(NodeKind::Forget, v, bag, {top});
  }
  for (int v : connect_order(g, sub_union, entering)) {
    bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
    sub_union |= std::uint64_t{1} << v;
    top = b.add(NodeKind::Introduce, v, bag, {top});
  }
  return top;
}

}  // namespace detail_td

// Turns a valid decomposition into a nice one of the same width.  The root
// bag is preserved verbatim; leaf bags become singletons; multi-child nodes
// are binarized left to right.  Introduce chains use a connectivity-greedy
// vertex order (see nice_for_dp).
inline NiceTreeDecomposition make_nice(const TreeDecomposition& td_in, const Graph& g) {
  if (g.n == 0) throw std::invalid_argument("empty graph has no nice decomposition");
  if (g.n > 64) throw std::invalid_argument("make_nice supports up to 64 vertices");
  ValidationReport rep = validate(td_in, g);
  if (!rep.ok) throw std::invalid_argument("invalid tree decomposition: " + rep.message);

  // Normalize: drop empty leaf bags, absorb bags contained in a neighbor.
  std::vector<std::vector<int>> bags = td_in.bags;
  std::vector<int> parent = td_in.parent;
  int root = td_in.root;
  int nodes = static_cast<int>(bags.size());
  std::vector<char> alive(nodes, 1);
  auto subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < nodes; ++v) {
      if (!alive[v] || v == root) continue;
      int p = parent[v];
      while (p >= 0 && !alive[p]) p = parent[p];  // should not happen, guard
      if (p < 0) continue;
      bool leaf = true;
      for (int c = 0; c < nodes; ++c)
        if (alive[c] && parent[c] == v) leaf = false;
      if (leaf && bags[v].empty()) {
        alive[v] = 0;
        changed = true;
        continue;
      }
      if (subset(bags[v], bags[p])) {
        // child folds into parent
        for (int c = 0; c < nodes; ++c)
          if (alive[c] && parent[c] == v) parent[c] = p;
        alive[v] = 0;
        changed = true;
      } else if (subset(bags[p], bags[v]) && p != root) {
        // parent folds into this child
        for (int c = 0; c < nodes; ++c)
          if (alive[c] && c != v && parent[c] == p) parent[c] = v;
        parent[v] = parent[p];
        alive[p] = 0;
        changed = true;
      }
    }
  }
  std::vector<int> remap(nodes, -1);
  std::vector<std::vector<int>> nbags;
  std::vector<int> nparent;
  for (int v = 0; v < nodes; ++v)
    if (alive[v]) {
      remap[v] = static_cast<int>(nbags.size());
      nbags.push_back(bags[v]);
      nparent.push_back(parent[v]);
    }
  for (auto& p : nparent)
    if (p >= 0) p = remap[p];
  root = remap[root];
  if (root < 0) throw std::logic_error("normalization removed the root");

  auto ch = children_lists(nparent);
  detail_td::NiceBuilder b;
  // returns (top node id, subtree vertex union)
  auto rec = [&](auto&& self, int v) -> std::pair<int, std::uint64_t> {
    const std::vector<int>& bag = nbags[v];
    if (ch[v].empty()) {
      std::vector<int> order = detail_td::connect_order(g, 0, bag);
      std::uint64_t uni = std::uint64_t{1} << order[0];
      int top = b.add(NodeKind::Leaf, -1, {order[0]}, {});
      std::vector<int> cur{order[0]};
      for (std::size_t i = 1; i < order.size(); ++i) {
        cur.insert(std::upper_bound(cur.begin(), cur.end(), order[i]), order[i]);
        uni |= std::uint64_t{1} << order[i];
        top = b.add(NodeKind::Introduce, order[i], cur, {top});
      }
      return {top, uni};
    }
    int acc = -1;
    std::uint64_t acc_union = 0;
    for (int c : ch[v]) {
      auto [ctop, cuni] = self(self, c);
      int adapted = detail_td::adapt_bag(b, g, ctop, nbags[c], bag, cuni);
      if (acc < 0) {
        acc = adapted;
        acc_union = cuni;
      } else {
        acc = b.add(NodeKind::Join, -1, bag, {acc, adapted});
        acc_union |= cuni;
      }
    }
    return {acc, acc_union};
  };
  auto [top, uni] = rec(rec, root);
  (void)uni;
  b.out.root = top;
  return b.out;
}

// ---- exact treewidth by subset dynamic programming ----

namespace detail_td {

// Number of vertices outside S ∪ {v} reachable from v through S.
inline int q_value(const std::vector<std::uint32_t>& rows, int n, std::uint32_t s, int v) {
  std::uint32_t comp = std::uint32_t{1} << v;
  std::uint32_t nbr = rows[v];
  for (;;) {
    std::uint32_t grow = nbr & s & ~comp;
    if (!grow) break;
    comp |= grow;
    while (grow) {
      int u = std::countr_zero(grow);
      grow &= grow - 1;
      nbr |= rows[u];
    }
  }
  std::uint32_t full = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
  return std::popcount(nbr & full & ~s & ~(std::uint32_t{1} << v));
}

}  // namespace detail_td

// Exact treewidth with an optimal elimination order, by dynamic programming
// over vertex subsets (feasible to n ≈ 18).
inline int exact_treewidth(const Graph& g, std::vector<int>* order_out = nullptr) {
  int n = g.n;
  if (n > 18) throw std::invalid_argument("exact treewidth limited to 18 vertices");
  if (n == 0) {
    if (order_out) order_out->clear();
    return -1;
  }
  std::vector<std::uint32_t> rows(n, 0);
  for (int v = 0; v < n; ++v)
    for (int u : g.neighbors(v)) rows[v] |= std::uint32_t{1} << u;
  std::size_t total = std::size_t{1} << n;
  std::vector<std::int8_t> dp(total, 0), choice(total, -1);
  for (std::uint32_t s = 1; s < total; ++s) {
    int best = 127, pick = -1;
    for (std::uint32_t rest = s; rest;) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t prev = s & ~(std::uint32_t{1} << v);
      int cost = std::max<int>(dp[prev], detail_td::q_value(rows, n, prev, v));
      if (cost < best) {
        best = cost;
        pick = v;
      }
    }
    dp[s] = static_cast<std::int8_t>(best);
    choice[s] = static_cast<std::int8_t>(pick);
  }
  if (order_out) {
    order_out->assign(n, -1);
    std::uint32_t s = static_cast<std::uint32_t>(total - 1);
    for (int i = n - 1; i >= 0; --i) {
      int v = choice[s];
      (*order_out)[i] = v;
      s &= ~(std::uint32_t{1} << v);
    }
  }
  return dp[total - 1];
}

// Independent brute-force route: try every elimination order (n ≤ 9).
inline int treewidth_by_orderings(const Graph& g) {
  int n = g.n;
  if (n > 9) throw std::invalid_argument("ordering oracle limited to 9 vertices");
  if (n == 0) return -1;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  int best = n - 1;
  do {
    std::vector<std::uint32_t> rows(n, 0);
    for (int v = 0; v < n; ++v)
      for (int u : g.neighbors(v)) rows[v] |= std::uint32_t{1} << u;
    std::uint32_t gone = 0;
    int peak = -1;
    for (int v : perm) {
      std::uint32_t later = rows[v] & ~gone;
      peak = std::max(peak, std::popcount(later));
      for (std::uint32_t rest = later; rest;) {
        int a = std::countr_zero(rest);
        rest &= rest - 1;
        rows[a] |= later & ~(std::uint32_t{1} << a);
      }
      gone |= std::uint32_t{1} << v;
    }
    best = std::min(best, peak);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Decomposition from an elimination order: bag of v is {v} plus its later
// neighborhood in the fill-in graph; the bag hangs below the bag of the
// earliest-eliminated later neighbor.  Subtree unions come out connected,
// which nice_for_dp relies on.
inline TreeDecomposition td_from_elimination_order(const Graph& g, const std::vector<int>& order) {
  int n = g.n;
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("order size mismatch");
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  Graph fill = g;
  TreeDecomposition td;
  td.bags.resize(n);
  td.parent.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    std::vector<int> later;
    for (int u : fill.neighbors(v))
      if (pos[u] > i) later.push_back(u);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t bidx = a + 1; bidx < later.size(); ++bidx)
        if (!fill.has_edge(later[a], later[bidx])) fill.add_edge(later[a], later[bidx]);
    std::vector<int> bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags[i] = std::move(bag);
    if (!later.empty()) {
      int first = later[0];
      for (int u : later)
        if (pos[u] < pos[first]) first = u;
      td.parent[i] = pos[first];
    } else if (i + 1 < n) {
      td.parent[i] = i + 1;
    }
  }
  td.root = n - 1;
  return td;
}

struct DecomposeResult {
  std::optional<TreeDecomposition> td;
  bool exact = false;  // absent td + exact means tw(g) > budget; otherwise inconclusive
};

// Exact subset DP up to 18 vertices, min-fill heuristic beyond.
inline DecomposeResult decompose(const Graph& g, int width_budget) {
  if (g.n == 0) {
    TreeDecomposition td;
    td.bags.push_back({});
    td.parent.push_back(-1);
    td.root = 0;
    return {td, true};
  }
  if (g.n <= 18) {
    std::vector<int> order;
    int tw = exact_treewidth(g, &order);
    if (tw > width_budget) return {std::nullopt, true};
    return {td_from_elimination_order(g, order), true};
  }
  // min-fill greedy elimination
  Graph fill = g;
  std::vector<char> gone(g.n, 0);
  std::vector<int> order;
  for (int step = 0; step < g.n; ++step) {
    int best = -1;
    long best_fill = -1;
    int best_deg = -1;
    for (int v = 0; v < g.n; ++v) {
      if (gone[v]) continue;
      std::vector<int> nbr;
      for (int u : fill.neighbors(v))
        if (!gone[u]) nbr.push_back(u);
      long need = 0;
      for (std::size_t a = 0; a < nbr.size(); ++a)
        for (std::size_t bidx = a + 1; bidx < nbr.size(); ++bidx)
          if (!fill.has_edge(nbr[a], nbr[bidx])) ++need;
      if (best < 0 || need < best_fill ||
          (need == best_fill && static_cast<int>(nbr.size()) < best_deg)) {
        best = v;
        best_fill = need;
        best_deg = static_cast<int>(nbr.size());
      }
    }
    std::vector<int> nbr;
    for (int u : fill.neighbors(best))
      if (!gone[u]) nbr.push_back(u);
    for (std::size_t a = 0; a < nbr.size(); ++a)
      for (std::size_t bidx = a + 1; bidx < nbr.size(); ++bidx)
        if (!fill.has_edge(nbr[a], nbr[bidx])) fill.add_edge(nbr[a], nbr[bidx]);
    gone[best] = 1;
    order.push_back(best);
  }
  TreeDecomposition td = td_from_elimination_order(g, order);
  if (width(td) <= width_budget) return {td, false};
  return {std::nullopt, false};
}

// Smallest-width decomposition this module can certify (exact ≤ 18 vertices).
inline TreeDecomposition decompose_optimal(const Graph& g) {
  DecomposeResult r = decompose(g, g.n == 0 ? 0 : g.n - 1);
  if (!r.td) throw std::logic_error("full-width decomposition cannot fail");
  return *r.td;
}

// ---- connectivity-aware nice decompositions for the DP ----

// Vertex union of each subtree, as bitmasks (graphs up to 64 vertices).
inline std::vector<std::uint64_t> subtree_unions(const NiceTreeDecomposition& ntd) {
  std::vector<std::uint64_t> uni(ntd.bags.size(), 0);
  // parents are created after children by the builders, but be order-safe:
  // iterate until fixpoint over a topological pass
  std::vector<int> topo;
  topo.reserve(ntd.bags.size());
  std::vector<std::vector<int>> ch = children_lists(ntd.parent);
  std::vector<int> stack{ntd.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    topo.push_back(v);
    for (int c : ch[v]) stack.push_back(c);
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int v = *it;
    for (int x : ntd.bags[v]) uni[v] |= std::uint64_t{1} << x;
    for (int c : ch[v]) uni[v] |= uni[c];
  }
  return uni;
}

// True iff G[subtree union] is connected at every node; the DP requires this.
inline bool all_subtree_graphs_connected(const NiceTreeDecomposition& ntd, const Graph& g) {
  std::vector<std::uint64_t> rows(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    for (int u : g.neighbors(v)) rows[v] |= std::uint64_t{1} << u;
  for (std::uint64_t uni : subtree_unions(ntd)) {
    if (uni == 0) return false;
    std::uint64_t comp = uni & (~uni + 1);  // lowest set bit
    for (;;) {
      std::uint64_t nbr = 0;
      for (std::uint64_t s = comp; s;) {
        int v = std::countr_zero(s);
        s &= s - 1;
        nbr |= rows[v];
      }
      std::uint64_t grow = nbr & uni & ~comp;
      if (!grow) break;
      comp |= grow;
    }
    if (comp != uni) return false;
  }
  return true;
}

// Path-shaped nice decomposition that introduces vertices in a connected
// order and forgets a vertex as soon as its whole neighborhood is present.
// Always satisfies the connectivity requirement; width is the best boundary
// size over all start vertices.
inline NiceTreeDecomposition connected_chain_decomposition(const Graph& g) {
  if (g.n == 0 || g.n > 64 || !is_connected(g))
    throw std::invalid_argument("connected chain needs a connected graph on 1..64 vertices");
  auto order_from = [&](int start) {
    std::vector<int> order{start};
    std::uint64_t placed = std::uint64_t{1} << start;
    while (static_cast<int>(order.size()) < g.n) {
      int pick = -1, pick_boundary = g.n + 1;
      for (int v = 0; v < g.n; ++v) {
        if (placed & (std::uint64_t{1} << v)) continue;
        bool adj = false;
        for (int u : g.neighbors(v))
          if (placed & (std::uint64_t{1} << u)) adj = true;
        if (!adj) continue;
        std::uint64_t next = placed | (std::uint64_t{1} << v);
        int boundary = 0;
        for (int w = 0; w < g.n; ++w)
          if (next & (std::uint64_t{1} << w))
            for (int u : g.neighbors(w))
              if (!(next & (std::uint64_t{1} << u))) {
                ++boundary;
                break;
              }
        if (boundary < pick_boundary) {
          pick = v;
          pick_boundary = boundary;
        }
      }
      order.push_back(pick);
      placed |= std::uint64_t{1} << pick;
    }
    return order;
  };
  auto chain_width = [&](const std::vector<int>& order) {
    std::uint64_t placed = 0;
    int peak = 0;
    std::vector<int> bag;
    for (int v : order) {
      placed |= std::uint64_t{1} << v;
      bag.push_back(v);
      peak = std::max(peak, static_cast<int>(bag.size()));
      std::vector<int> keep;
      for (int x : bag) {
        bool done = x != order.back();
        for (int u : g.neighbors(x))
          if (!(placed & (std::uint64_t{1} << u))) done = false;
        if (!done) keep.push_back(x);
      }
      bag = std::move(keep);
    }
    return peak - 1;
  };
  std::vector<int> best_order;
  int best_width = g.n;
  for (int s = 0; s < g.n; ++s) {
    std::vector<int> order = order_from(s);
    int w = chain_width(order);
    if (w < best_width) {
      best_width = w;
      best_order = order;
    }
  }
  detail_td::NiceBuilder b;
  std::uint64_t placed = std::uint64_t{1} << best_order[0];
  std::vector<int> bag{best_order[0]};
  int top = b.add(NodeKind::Leaf, -1, bag, {});
  for (std::size_t i = 1; i < best_order.size(); ++i) {
    int v = best_order[i];
    placed |= std::uint64_t{1} << v;
    bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
    top = b.add(NodeKind::Introduce, v, bag, {top});
    // eager forgets, ascending; keep the final vertex as the root bag
    for (bool again = true; again;) {
      again = false;
      for (int x : bag) {
        if (x == best_order.back()) continue;
        bool done = true;
        for (int u : g.neighbors(x))
          if (!(placed & (std::uint64_t{1} << u))) done = false;
        if (done) {
          std::vector<int> nb = bag;
          nb.erase(std::find(nb.begin(), nb.end(), x));
          bag = std::move(nb);
          top = b.add(NodeKind::Forget, x, bag, {top});
          again = true;
          break;
        }
      }
    }
  }
  b.out.root = top;
  return b.out;
}

// Nice decomposition suitable for the elimination-distance DP: valid, nice,
// and with G[subtree union] connected at every node.  Tries the exact-width
// route first and falls back to the connected chain.
inline NiceTreeDecomposition nice_for_dp(const Graph& g) {
  if (!is_connected(g) || g.n == 0)
    throw std::invalid_argument("nice_for_dp needs a connected non-empty graph");
  NiceTreeDecomposition chain = connected_chain_decomposition(g);
  if (g.n <= 18) {
    NiceTreeDecomposition via_td = make_nice(decompose_optimal(g), g);
    bool bags_nonempty = std::all_of(via_td.bags.begin(), via_td.bags.end(),
                                     [](const std::vector<int>& b) { return !b.empty(); });
    if (bags_nonempty && all_subtree_graphs_connected(via_td, g) && width(via_td) < width(chain))
      return via_td;
  }
  if (!all_subtree_graphs_connected(chain, g))
    throw std::logic_error("connected chain lost connectivity");
  return chain;
}

// ---- PACE-style serialization (1-based ids) ----

inline std::string serialize_td(const TreeDecomposition& td, int n) {
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << width(td) + 1 << ' ' << n << '\n';
  for (std::size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << i + 1;
    for (int v : td.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (std::size_t i = 0; i < td.parent.size(); ++i)
    if (td.parent[i] >= 0) out << td.parent[i] + 1 << ' ' << i + 1 << '\n';
  out << "r " << td.root + 1 << '\n';
  return out.str();
}

inline const char* kind_token(NodeKind k) {
  switch (k) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Introduce: return "intr";
    case NodeKind::Forget: return "forget";
    default: return "join";
  }
}

inline std::string serialize_nice(const NiceTreeDecomposition& ntd, int n) {
  std::ostringstream out;
  out << "s ntd " << ntd.bags.size() << ' ' << width(ntd) + 1 << ' ' << n << '\n';
  for (std::size_t i = 0; i < ntd.bags.size(); ++i) {
    out << "b " << i + 1;
    for (int v : ntd.bags[i]) out << ' ' << v + 1;
    out << '\n';
  }
  for (std::size_t i = 0; i < ntd.parent.size(); ++i)
    if (ntd.parent[i] >= 0) out << ntd.parent[i] + 1 << ' ' << i + 1 << '\n';
  out << "r " << ntd.root + 1 << '\n';
  for (std::size_t i = 0; i < ntd.bags.size(); ++i) {
    out << "k " << i + 1 << ' ' << kind_token(ntd.kind[i]);
    if (ntd.acted[i] >= 0) out << ' ' << ntd.acted[i] + 1;
    out << '\n';
  }
  return out.str();
}

namespace detail_td {

struct ParsedTd {
  std::vector<std::vector<int>> bags;
  std::vector<std::pair<int, int>> edges;
  int root = -1;
  int declared_nodes = 0;
  std::vector<std::pair<int, std::string>> kinds;  // (node, token [vertex])
  bool nice = false;
};

inline ParsedTd parse_td_lines(const std::string& text) {
  ParsedTd p;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == '#') continue;
    auto bad = [&](const std::string& why) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + why);
    };
    if (tok == "s") {
      std::string kind_tok;
      int bags, w1, n;
      if (!(ls >> kind_tok >> bags >> w1 >> n) || (kind_tok != "td" && kind_tok != "ntd"))
        bad("bad header");
      p.declared_nodes = bags;
      p.nice = kind_tok == "ntd";
      p.bags.assign(bags, {});
      have_header = true;
    } else if (tok == "b") {
      if (!have_header) bad("bag before header");
      int id;
      if (!(ls >> id) || id < 1 || id > p.declared_nodes) bad("bag id out of range");
      int v;
      std::vector<int> bag;
      while (ls >> v) {
        if (v < 1) bad("vertex ids are 1-based");
        bag.push_back(v - 1);
      }
      std::sort(bag.begin(), bag.end());
      p.bags[id - 1] = std::move(bag);
    } else if (tok == "r") {
      int id;
      if (!(ls >> id) || id < 1 || id > p.declared_nodes) bad("root id out of range");
      p.root = id - 1;
    } else if (tok == "k") {
      int id;
      std::string kind_tok;
      if (!(ls >> id >> kind_tok) || id < 1 || id > p.declared_nodes) bad("bad kind line");
      int v = -1;
      ls >> v;
      p.kinds.emplace_back(id - 1, kind_tok + (v >= 1 ? " " + std::to_string(v - 1) : ""));
    } else {
      int a = -1, b = -1;
      try {
        a = std::stoi(tok);
      } catch (...) {
        bad("unknown line");
      }
      if (!(ls >> b)) bad("bad edge line");
      if (a < 1 || a > p.declared_nodes || b < 1 || b > p.declared_nodes) bad("edge id out of range");
      p.edges.emplace_back(a - 1, b - 1);
    }
  }
  if (!have_header) throw std::invalid_argument("missing s header");
  if (p.root < 0) p.root = 0;
  return p;
}

inline void orient_edges(const ParsedTd& p, std::vector<int>& parent) {
  int nodes = p.declared_nodes;
  std::vector<std::vector<int>> adj(nodes);
  for (auto [a, b] : p.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  parent.assign(nodes, -2);
  std::vector<int> stack{p.root};
  parent[p.root] = -1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : adj[v])
      if (parent[u] == -2) {
        parent[u] = v;
        stack.push_back(u);
      }
  }
  for (int v = 0; v < nodes; ++v)
    if (parent[v] == -2)
      throw std::invalid_argument("node " + std::to_string(v + 1) + " unreachable from root");
}

}  // namespace detail_td

inline TreeDecomposition parse_td(const std::string& text) {
  detail_td::ParsedTd p = detail_td::parse_td_lines(text);
  TreeDecomposition td;
  td.bags = p.bags;
  detail_td::orient_edges(p, td.parent);
  td.root = p.root;
  return td;
}

inline NiceTreeDecomposition parse_nice(const std::string& text) {
  detail_td::ParsedTd p = detail_td::parse_td_lines(text);
  NiceTreeDecomposition ntd;
  ntd.bags = p.bags;
  detail_td::orient_edges(p, ntd.parent);
  ntd.root = p.root;
  ntd.kind.assign(p.declared_nodes, NodeKind::Leaf);
  ntd.acted.assign(p.declared_nodes, -1);
  std::vector<char> seen(p.declared_nodes, 0);
  for (auto& [id, spec] : p.kinds) {
    std::istringstream ls(spec);
    std::string tok;
    ls >> tok;
    int v;
    if (!(ls >> v)) v = -1;
    seen[id] = 1;
    if (tok == "leaf") ntd.kind[id] = NodeKind::Leaf;
    else if (tok == "intr") ntd.kind[id] = NodeKind::Introduce;
    else if (tok == "forget") ntd.kind[id] = NodeKind::Forget;
    else if (tok == "join") ntd.kind[id] = NodeKind::Join;
    else throw std::invalid_argument("unknown node kind " + tok);
    ntd.acted[id] = v;
  }
  for (int i = 0; i < p.declared_nodes; ++i)
    if (!seen[i]) throw std::invalid_argument("node " + std::to_string(i + 1) + " missing kind line");
  return ntd;
}

}  // namespace elimdist

#endif
