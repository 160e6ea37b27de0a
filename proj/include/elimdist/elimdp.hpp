#ifndef ELIMDIST_ELIMDP_HPP
#define ELIMDIST_ELIMDP_HPP

// Dynamic program over a nice tree decomposition.  States are annotated
// trees grouped into characteristics; the forget, introduce, and join
// procedures move them from the children of a decomposition node to the
// node itself, and a height budget k caps the search.  On top of the
// recursion sit the exact elimination-distance computation, elimination
// forest extraction, and the annotated variant via gadget gluing.

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "annotated.hpp"
#include "oracles.hpp"
#include "treedecomp.hpp"

namespace elimdist {

struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared inputs of the recursion: the family, the height budget, the
// representative registry, the decomposition, and per node the boundary
// ordering rho (label i+1 is the i-th smallest bag vertex).
struct DpContext {
  ObstructionFamily fam;
  int k = 0;
  RepresentativeRegistry* registry = nullptr;
  NiceTreeDecomposition nice;
  std::vector<std::vector<int>> rho;
  long long budget = default_search_budget;
  bool parallel_join = false;
};

inline DpContext make_context(const Graph& g, const ObstructionFamily& fam, int k,
                              RepresentativeRegistry& registry,
                              long long budget = default_search_budget) {
  DpContext ctx;
  ctx.fam = fam;
  ctx.k = k;
  ctx.registry = &registry;
  ctx.nice = nice_for_dp(g);
  ctx.rho = ctx.nice.bags;
  ctx.budget = budget;
  return ctx;
}

// ---- forget ----

// Remove the largest label from the boundary.  Tree, heights, and the
// attachment graph stay as they are; the vertex merely stops being a
// boundary vertex.
inline AnnotatedTree forget_star(const AnnotatedTree& e) {
  if (e.t() == 0) throw std::invalid_argument("forget needs a labeled boundary");
  AnnotatedTree out = e;
  out.f.pop_back();
  out.r_graph.boundary.pop_back();
  return out;
}

// Forget over a characteristic: drop label t entrywise, re-crop (the node
// that held only the dropped label may no longer be needed), re-represent
// (a component that lost its last label is discarded), dedup.  Heights do
// not change, so no height filter is needed.
inline Characteristic forget_proc(const Characteristic& c, DpContext& ctx) {
  if (c.t <= 1) throw std::invalid_argument("forget would empty the boundary");
  Characteristic out;
  out.k = ctx.k;
  out.t = c.t - 1;
  std::set<std::string> seen;
  for (const AnnotatedTree& e : c.entries) {
    std::optional<AnnotatedTree> state =
        rep_op(crop(forget_star(e)), ctx.fam, *ctx.registry, ctx.budget);
    if (!state) continue;
    if (seen.insert(canonical_encode(*state).code).second)
      out.entries.push_back(std::move(*state));
  }
  return out;
}

// ---- introduce ----

// One way of inserting a new node into a tree: old nodes keep their ids,
// the new node gets id |V(T)|, and f gains the new label mapped to it.
struct TreePlacement {
  std::vector<int> parent;
  int root = -1;
  std::vector<int> f;
};

// All insertions of one new node u such that old ancestor relations survive
// and every node holding a label of i_labels is comparable with u.  At each
// position u becomes a child of p and adopts a subset of p's children: any
// child whose subtree reaches a labeled node is adopted (leaving it beside u
// would break comparability), the other children may go either way, and
// positions whose root path misses a labeled node that no adopted subtree
// supplies are skipped.  One more placement puts u above the old root when
// i_labels is non-empty; an isolated vertex never needs to sit above
// everything, so that placement is omitted for empty i_labels.
inline std::vector<TreePlacement> diamond_intr(const std::vector<int>& parent, int root,
                                               const std::vector<int>& f,
                                               const std::vector<int>& i_labels) {
  int n = static_cast<int>(parent.size());
  if (root < 0 || root >= n || parent[static_cast<std::size_t>(root)] != -1)
    throw std::invalid_argument("malformed rooted tree");
  std::vector<bool> marked(static_cast<std::size_t>(n), false);
  int total = 0;
  for (int label : i_labels) {
    if (label < 1 || label > static_cast<int>(f.size()))
      throw std::invalid_argument("label out of range");
    int node = f[static_cast<std::size_t>(label - 1)];
    if (!marked[static_cast<std::size_t>(node)]) {
      marked[static_cast<std::size_t>(node)] = true;
      ++total;
    }
  }
  std::vector<std::vector<int>> kids = children_lists(parent);
  std::vector<int> sub(static_cast<std::size_t>(n), 0);
  std::function<int(int)> count = [&](int v) -> int {
    int c = marked[static_cast<std::size_t>(v)] ? 1 : 0;
    for (int w : kids[static_cast<std::size_t>(v)]) c += count(w);
    return sub[static_cast<std::size_t>(v)] = c;
  };
  count(root);

  std::vector<TreePlacement> out;
  auto with_new_node = [&](int new_parent) {
    TreePlacement pl;
    pl.parent = parent;
    pl.parent.push_back(new_parent);
    pl.root = root;
    pl.f = f;
    pl.f.push_back(n);
    return pl;
  };
  for (int p = 0; p < n; ++p) {
    int on_path = 0;
    for (int a = p; a >= 0; a = parent[static_cast<std::size_t>(a)])
      if (marked[static_cast<std::size_t>(a)]) ++on_path;
    std::vector<int> required, loose;
    for (int c : kids[static_cast<std::size_t>(p)]) {
      if (sub[static_cast<std::size_t>(c)] > 0) {
        required.push_back(c);
        on_path += sub[static_cast<std::size_t>(c)];
      } else {
        loose.push_back(c);
      }
    }
    if (on_path != total) continue;
    if (loose.size() > 20) throw std::invalid_argument("introduce position has too many children");
    for (std::uint32_t pick = 0; pick < (std::uint32_t{1} << loose.size()); ++pick) {
      TreePlacement pl = with_new_node(p);
      for (int c : required) pl.parent[static_cast<std::size_t>(c)] = n;
      for (std::size_t b = 0; b < loose.size(); ++b)
        if (pick & (std::uint32_t{1} << b)) pl.parent[static_cast<std::size_t>(loose[b])] = n;
      out.push_back(std::move(pl));
    }
  }
  if (total > 0) {
    TreePlacement pl = with_new_node(-1);
    pl.parent[static_cast<std::size_t>(root)] = n;
    pl.root = n;
    out.push_back(std::move(pl));
  }
  return out;
}

// Recomputed heights: each node gets the maximum of its base value and one
// more than its highest child.  Callers put 0 in base for nodes without a
// stored height.
inline std::vector<int> update_heights(const std::vector<int>& parent, int root,
                                       const std::vector<int>& base) {
  std::vector<std::vector<int>> kids = children_lists(parent);
  std::vector<int> h(parent.size(), 0);
  std::function<int(int)> walk = [&](int v) -> int {
    int best = base[static_cast<std::size_t>(v)];
    for (int c : kids[static_cast<std::size_t>(v)]) best = std::max(best, 1 + walk(c));
    return h[static_cast<std::size_t>(v)] = best;
  };
  walk(root);
  return h;
}

// Complete introduce, two kinds of states.  Merges: the new vertex joins
// the attachment of a height-0 node whose root path covers every i_labels
// node, gaining edges to the i_labels boundary vertices sitting at that
// node; the tree is unchanged, the new label lands on the existing node,
// and the state is kept only if the new vertex's component stays in the
// class.  Insertions: for each placement whose parent is unlabeled, carries
// a single one-vertex attachment, or is absent (u roots the tree), the new
// vertex enters as an isolated attachment of the new node and heights are
// recomputed.  Merges come first, in node order.
inline std::vector<AnnotatedTree> intr_star(const AnnotatedTree& e,
                                            const std::vector<int>& i_labels,
                                            const ObstructionFamily& fam,
                                            long long budget = default_search_budget) {
  std::vector<std::vector<int>> comps = component_vertex_sets(e.r_graph.graph);
  std::vector<int> owner = component_owners(e, comps);
  std::vector<int> att_size(static_cast<std::size_t>(e.size()), 0);
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (owner[i] >= 0) att_size[static_cast<std::size_t>(owner[i])] += static_cast<int>(comps[i].size());
  std::vector<bool> labeled(static_cast<std::size_t>(e.size()), false);
  std::vector<bool> marked(static_cast<std::size_t>(e.size()), false);
  int total = 0;
  for (int node : e.f) labeled[static_cast<std::size_t>(node)] = true;
  for (int label : i_labels) {
    int node = e.f[static_cast<std::size_t>(label - 1)];
    if (!marked[static_cast<std::size_t>(node)]) {
      marked[static_cast<std::size_t>(node)] = true;
      ++total;
    }
  }

  std::vector<AnnotatedTree> out;
  for (int p = 0; p < e.size(); ++p) {
    if (e.h[static_cast<std::size_t>(p)] != 0) continue;
    int on_path = 0;
    for (int a = p; a >= 0; a = e.parent[static_cast<std::size_t>(a)])
      if (marked[static_cast<std::size_t>(a)]) ++on_path;
    if (on_path != total) continue;
    BoundariedGraph r = e.r_graph;
    int v = r.graph.n;
    r.graph = disjoint_union(r.graph, Graph(1));
    for (int label : i_labels)
      if (e.f[static_cast<std::size_t>(label - 1)] == p)
        r.graph.add_edge(v, r.boundary[static_cast<std::size_t>(label - 1)]);
    r.boundary.push_back(v);
    bool keep = true;
    for (const std::vector<int>& set : component_vertex_sets(r.graph))
      if (std::binary_search(set.begin(), set.end(), v))
        keep = in_exc(induced_subgraph(r.graph, set), fam, budget);
    if (!keep) continue;
    AnnotatedTree t;
    t.parent = e.parent;
    t.root = e.root;
    t.h = e.h;
    t.r_graph = std::move(r);
    t.f = e.f;
    t.f.push_back(p);
    out.push_back(std::move(t));
  }

  int u = e.size();
  for (const TreePlacement& pl : diamond_intr(e.parent, e.root, e.f, i_labels)) {
    int up = (pl.root == u) ? -1 : pl.parent[static_cast<std::size_t>(u)];
    if (up >= 0 && labeled[static_cast<std::size_t>(up)] && att_size[static_cast<std::size_t>(up)] != 1)
      continue;
    AnnotatedTree t;
    t.parent = pl.parent;
    t.root = pl.root;
    std::vector<int> base = e.h;
    base.push_back(0);
    t.h = update_heights(pl.parent, pl.root, base);
    t.r_graph = e.r_graph;
    int v = t.r_graph.graph.n;
    t.r_graph.graph = disjoint_union(t.r_graph.graph, Graph(1));
    t.r_graph.boundary.push_back(v);
    t.f = pl.f;
    out.push_back(std::move(t));
  }
  return out;
}

// Introduce over a characteristic: every placement of every entry, then
// represent, keep heights within the budget, dedup.  No crop: inserted
// nodes always lie on a path to a labeled node.
inline Characteristic introduce_proc(const Characteristic& c, const std::vector<int>& i_labels,
                                     DpContext& ctx) {
  Characteristic out;
  out.k = ctx.k;
  out.t = c.t + 1;
  std::set<std::string> seen;
  for (const AnnotatedTree& e : c.entries) {
    for (AnnotatedTree& raw : intr_star(e, i_labels, ctx.fam, ctx.budget)) {
      std::optional<AnnotatedTree> state = rep_op(raw, ctx.fam, *ctx.registry, ctx.budget);
      if (!state) continue;
      if (state->h[static_cast<std::size_t>(state->root)] > ctx.k) continue;
      if (seen.insert(canonical_encode(*state).code).second)
        out.entries.push_back(std::move(*state));
    }
  }
  return out;
}

// ---- join ----

// A tree over the union of two node sets that overlap exactly on the
// labeled nodes.
struct JoinedTree {
  std::vector<int> parent;
  int root = -1;
  std::vector<int> f;
};

namespace detail_dp {

// Label classes grouped by node, each sorted, ordered by smallest label.
inline std::vector<std::vector<int>> label_partition(const std::vector<int>& f) {
  std::map<int, std::vector<int>> by_node;
  for (std::size_t i = 0; i < f.size(); ++i) by_node[f[i]].push_back(static_cast<int>(i) + 1);
  std::vector<std::vector<int>> classes;
  classes.reserve(by_node.size());
  for (auto& [node, labels] : by_node) classes.push_back(std::move(labels));
  std::sort(classes.begin(), classes.end());
  return classes;
}

// Merged node set of a join: one node per label class, then the unlabeled
// nodes of each side.  sp1/sp2 give each node's parent within its side
// (-1 for a side root, -2 when the node is not on that side).
struct JoinUniverse {
  int m = 0;
  std::vector<int> sp1, sp2;
  std::vector<int> from1, from2;
  std::vector<int> f;
  std::vector<bool> shared;
};

inline JoinUniverse merge_universe(const std::vector<int>& parent1, const std::vector<int>& f1,
                                   const std::vector<int>& parent2, const std::vector<int>& f2) {
  std::vector<std::vector<int>> classes = label_partition(f1);
  int n1 = static_cast<int>(parent1.size());
  int n2 = static_cast<int>(parent2.size());
  std::vector<int> map1(static_cast<std::size_t>(n1), -1);
  std::vector<int> map2(static_cast<std::size_t>(n2), -1);
  JoinUniverse u;
  for (const std::vector<int>& cls : classes) {
    int id = u.m++;
    map1[static_cast<std::size_t>(f1[static_cast<std::size_t>(cls[0] - 1)])] = id;
    map2[static_cast<std::size_t>(f2[static_cast<std::size_t>(cls[0] - 1)])] = id;
  }
  for (int v = 0; v < n1; ++v)
    if (map1[static_cast<std::size_t>(v)] < 0) map1[static_cast<std::size_t>(v)] = u.m++;
  for (int v = 0; v < n2; ++v)
    if (map2[static_cast<std::size_t>(v)] < 0) map2[static_cast<std::size_t>(v)] = u.m++;
  u.sp1.assign(static_cast<std::size_t>(u.m), -2);
  u.sp2.assign(static_cast<std::size_t>(u.m), -2);
  u.from1.assign(static_cast<std::size_t>(u.m), -1);
  u.from2.assign(static_cast<std::size_t>(u.m), -1);
  u.shared.assign(static_cast<std::size_t>(u.m), false);
  for (int v = 0; v < n1; ++v) {
    int id = map1[static_cast<std::size_t>(v)];
    u.from1[static_cast<std::size_t>(id)] = v;
    int p = parent1[static_cast<std::size_t>(v)];
    u.sp1[static_cast<std::size_t>(id)] = (p < 0) ? -1 : map1[static_cast<std::size_t>(p)];
  }
  for (int v = 0; v < n2; ++v) {
    int id = map2[static_cast<std::size_t>(v)];
    u.from2[static_cast<std::size_t>(id)] = v;
    int p = parent2[static_cast<std::size_t>(v)];
    u.sp2[static_cast<std::size_t>(id)] = (p < 0) ? -1 : map2[static_cast<std::size_t>(p)];
  }
  for (int id = 0; id < u.m; ++id)
    u.shared[static_cast<std::size_t>(id)] =
        u.from1[static_cast<std::size_t>(id)] >= 0 && u.from2[static_cast<std::size_t>(id)] >= 0;
  u.f.reserve(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) u.f.push_back(map1[static_cast<std::size_t>(f1[i])]);
  return u;
}

// Every label-free stretch from a leaf upward must follow one side's parent
// steps exactly; once a labeled node is reached, longer stretches contain
// it and are exempt.
inline bool stretches_single_sided(const JoinUniverse& u, const std::vector<int>& parent) {
  std::vector<bool> has_child(parent.size(), false);
  for (int p : parent)
    if (p >= 0) has_child[static_cast<std::size_t>(p)] = true;
  for (int v = 0; v < u.m; ++v) {
    if (has_child[static_cast<std::size_t>(v)] || u.shared[static_cast<std::size_t>(v)]) continue;
    bool ok1 = u.from1[static_cast<std::size_t>(v)] >= 0;
    bool ok2 = u.from2[static_cast<std::size_t>(v)] >= 0;
    int prev = v;
    for (int w = parent[static_cast<std::size_t>(v)]; w >= 0;
         w = parent[static_cast<std::size_t>(w)]) {
      if (u.shared[static_cast<std::size_t>(w)]) break;
      ok1 = ok1 && u.sp1[static_cast<std::size_t>(prev)] == w;
      ok2 = ok2 && u.sp2[static_cast<std::size_t>(prev)] == w;
      if (!ok1 && !ok2) return false;
      prev = w;
    }
  }
  return true;
}

// Top-down enumeration of all trees on the merged universe that preserve
// both sides' ancestor relations.  A node may be placed once its side
// parents are placed, under any placed node whose ancestor closure covers
// them; partial shapes are deduplicated so insertion order does not
// multiply the work.  height_cap (when >= 0) drops partial trees whose
// depth plus stored height already exceeds the budget.
inline void enumerate_joins(const JoinUniverse& u, int height_cap, const std::vector<int>& base,
                            std::vector<JoinedTree>& out) {
  std::set<std::vector<int>> seen_partial;
  std::set<std::vector<int>> seen_final;
  std::vector<int> parent(static_cast<std::size_t>(u.m), -2);
  std::vector<int> depth(static_cast<std::size_t>(u.m), 0);
  std::function<void(int)> rec = [&](int placed) {
    if (!seen_partial.insert(parent).second) return;
    if (placed == u.m) {
      if (!stretches_single_sided(u, parent)) return;
      if (!seen_final.insert(parent).second) return;
      JoinedTree jt;
      jt.parent = parent;
      for (int v = 0; v < u.m; ++v)
        if (parent[static_cast<std::size_t>(v)] == -1) jt.root = v;
      jt.f = u.f;
      out.push_back(std::move(jt));
      return;
    }
    auto parents_placed = [&](int x) {
      int s1 = u.sp1[static_cast<std::size_t>(x)];
      int s2 = u.sp2[static_cast<std::size_t>(x)];
      if (s1 >= 0 && parent[static_cast<std::size_t>(s1)] == -2) return false;
      if (s2 >= 0 && parent[static_cast<std::size_t>(s2)] == -2) return false;
      return true;
    };
    for (int x = 0; x < u.m; ++x) {
      if (parent[static_cast<std::size_t>(x)] != -2 || !parents_placed(x)) continue;
      if (placed == 0) {
        if (u.sp1[static_cast<std::size_t>(x)] >= 0 || u.sp2[static_cast<std::size_t>(x)] >= 0)
          continue;
        if (height_cap >= 0 && base[static_cast<std::size_t>(x)] > height_cap) continue;
        parent[static_cast<std::size_t>(x)] = -1;
        depth[static_cast<std::size_t>(x)] = 0;
        rec(1);
        parent[static_cast<std::size_t>(x)] = -2;
        continue;
      }
      for (int p = 0; p < u.m; ++p) {
        if (parent[static_cast<std::size_t>(p)] == -2 || p == x) continue;
        int d = depth[static_cast<std::size_t>(p)] + 1;
        if (height_cap >= 0 && d + base[static_cast<std::size_t>(x)] > height_cap) continue;
        bool covers = true;
        for (int sp : {u.sp1[static_cast<std::size_t>(x)], u.sp2[static_cast<std::size_t>(x)]}) {
          if (sp < 0) continue;
          bool found = false;
          for (int a = p; a >= 0; a = parent[static_cast<std::size_t>(a)])
            if (a == sp) {
              found = true;
              break;
            }
          if (!found) covers = false;
        }
        if (!covers) continue;
        parent[static_cast<std::size_t>(x)] = p;
        depth[static_cast<std::size_t>(x)] = d;
        rec(placed + 1);
        parent[static_cast<std::size_t>(x)] = -2;
      }
    }
  };
  rec(0);
}

}  // namespace detail_dp

// All trees over the merged node sets that preserve both sides' ancestor
// relations and route every label-free leaf stretch through one side only.
inline std::vector<JoinedTree> diamond_join(const std::vector<int>& parent1, int root1,
                                            const std::vector<int>& f1,
                                            const std::vector<int>& parent2, int root2,
                                            const std::vector<int>& f2) {
  if (root1 < 0 || root1 >= static_cast<int>(parent1.size()) || root2 < 0 ||
      root2 >= static_cast<int>(parent2.size()))
    throw std::invalid_argument("malformed rooted tree");
  if (f1.size() != f2.size() ||
      detail_dp::label_partition(f1) != detail_dp::label_partition(f2))
    throw std::invalid_argument("incompatible label partitions");
  detail_dp::JoinUniverse u = detail_dp::merge_universe(parent1, f1, parent2, f2);
  std::vector<int> base(static_cast<std::size_t>(u.m), 0);
  std::vector<JoinedTree> out;
  detail_dp::enumerate_joins(u, -1, base, out);
  return out;
}

// Complete join of two states.  Requires equal label partitions and equal
// equal-height patterns over the labels (otherwise the result is empty),
// glues the attachments, drops the pair when a glued component leaves the
// class, and emits one state per joined tree with recomputed heights.
// Joined states that park a multi-vertex or multi-label attachment at a
// node of positive height are discarded: positive height means the node has
// children, visible or cropped away, and only single-vertex leaf bags may
// sit above other nodes.  The gates that prevent this shape at introduce
// time have no counterpart in the tree merge itself.
inline std::vector<AnnotatedTree> join_star(const AnnotatedTree& e1, const AnnotatedTree& e2,
                                            const ObstructionFamily& fam, int height_cap = -1,
                                            long long budget = default_search_budget) {
  if (e1.t() != e2.t()) return {};
  if (detail_dp::label_partition(e1.f) != detail_dp::label_partition(e2.f)) return {};
  int t = e1.t();
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) {
      bool same1 = e1.h[static_cast<std::size_t>(e1.f[static_cast<std::size_t>(i)])] ==
                   e1.h[static_cast<std::size_t>(e1.f[static_cast<std::size_t>(j)])];
      bool same2 = e2.h[static_cast<std::size_t>(e2.f[static_cast<std::size_t>(i)])] ==
                   e2.h[static_cast<std::size_t>(e2.f[static_cast<std::size_t>(j)])];
      if (same1 != same2) return {};
    }
  if (!compatible(e1.r_graph, e2.r_graph))
    throw std::logic_error("join states disagree on the boundary subgraph");
  BoundariedGraph glued = glue_boundaried(e1.r_graph, e2.r_graph);
  for (const std::vector<int>& set : component_vertex_sets(glued.graph))
    if (!in_exc(induced_subgraph(glued.graph, set), fam, budget)) return {};

  detail_dp::JoinUniverse u = detail_dp::merge_universe(e1.parent, e1.f, e2.parent, e2.f);
  std::vector<int> base(static_cast<std::size_t>(u.m), 0);
  for (int id = 0; id < u.m; ++id) {
    int b = 0;
    if (u.from1[static_cast<std::size_t>(id)] >= 0)
      b = std::max(b, e1.h[static_cast<std::size_t>(u.from1[static_cast<std::size_t>(id)])]);
    if (u.from2[static_cast<std::size_t>(id)] >= 0)
      b = std::max(b, e2.h[static_cast<std::size_t>(u.from2[static_cast<std::size_t>(id)])]);
    base[static_cast<std::size_t>(id)] = b;
  }
  std::vector<JoinedTree> trees;
  detail_dp::enumerate_joins(u, height_cap, base, trees);

  std::vector<bool> isolated(glued.boundary.size(), false);
  for (std::size_t i = 0; i < glued.boundary.size(); ++i)
    isolated[i] = glued.graph.degree(glued.boundary[i]) == 0;

  std::vector<AnnotatedTree> out;
  for (JoinedTree& jt : trees) {
    std::vector<int> h = update_heights(jt.parent, jt.root, base);
    bool ok = true;
    std::vector<int> label_count(jt.parent.size(), 0);
    for (std::size_t i = 0; i < jt.f.size() && ok; ++i) {
      int node = jt.f[i];
      if (h[static_cast<std::size_t>(node)] == 0) continue;
      if (++label_count[static_cast<std::size_t>(node)] > 1 || !isolated[i]) ok = false;
    }
    if (!ok) continue;
    AnnotatedTree state;
    state.parent = jt.parent;
    state.root = jt.root;
    state.h = std::move(h);
    state.r_graph = glued;
    state.f = jt.f;
    out.push_back(std::move(state));
  }
  return out;
}

// Join over two characteristics on the same boundary: all pairs, all joined
// trees, then represent, filter by the budget, dedup.  No crop: both inputs
// are cropped and the merge adds no removable leaves.
inline Characteristic join_proc(const Characteristic& c1, const Characteristic& c2,
                                DpContext& ctx) {
  if (c1.t != c2.t)
    throw std::invalid_argument("join needs characteristics over one boundary");
  Characteristic out;
  out.k = ctx.k;
  out.t = c1.t;
  std::set<std::string> seen;
  for (const AnnotatedTree& e1 : c1.entries)
    for (const AnnotatedTree& e2 : c2.entries)
      for (AnnotatedTree& raw : join_star(e1, e2, ctx.fam, ctx.k, ctx.budget)) {
        std::optional<AnnotatedTree> state = rep_op(raw, ctx.fam, *ctx.registry, ctx.budget);
        if (!state) continue;
        if (state->h[static_cast<std::size_t>(state->root)] > ctx.k) continue;
        if (seen.insert(canonical_encode(*state).code).second)
          out.entries.push_back(std::move(*state));
      }
  return out;
}

// ---- the recursion ----

// Characteristic of G restricted to the subtree of `node`, over the node's
// bag in ascending order.  The boundary of g must equal that bag; label
// permutations around introduce and forget nodes keep every intermediate
// characteristic on the ascending convention.
inline Characteristic rec_ed(const BoundariedGraph& g, DpContext& ctx, int node) {
  if (node < 0 || node >= static_cast<int>(ctx.nice.bags.size()))
    throw std::invalid_argument("decomposition node out of range");
  if (g.boundary != ctx.rho[static_cast<std::size_t>(node)])
    throw std::invalid_argument("boundary must equal the node's bag in ascending order");
  std::vector<int> children;
  for (std::size_t i = 0; i < ctx.nice.parent.size(); ++i)
    if (ctx.nice.parent[i] == node && static_cast<int>(i) != node)
      children.push_back(static_cast<int>(i));

  switch (ctx.nice.kind[static_cast<std::size_t>(node)]) {
    case NodeKind::Leaf:
      return Characteristic{{trivial_annotated()}, ctx.k, 1};
    case NodeKind::Forget: {
      if (children.size() != 1) throw std::logic_error("forget node needs one child");
      int c = children[0];
      Characteristic a = rec_ed(BoundariedGraph{g.graph, ctx.rho[static_cast<std::size_t>(c)]},
                                ctx, c);
      int x = ctx.nice.acted[static_cast<std::size_t>(node)];
      const std::vector<int>& cb = ctx.rho[static_cast<std::size_t>(c)];
      int tp = static_cast<int>(cb.size());
      int p = static_cast<int>(std::lower_bound(cb.begin(), cb.end(), x) - cb.begin());
      // move the forgotten vertex to the last label, close ranks below it
      std::vector<int> sigma(static_cast<std::size_t>(tp));
      for (int i = 0; i < tp; ++i)
        sigma[static_cast<std::size_t>(i)] = (i == p) ? tp - 1 : (i < p ? i : i - 1);
      Characteristic moved;
      moved.k = a.k;
      moved.t = a.t;
      moved.entries.reserve(a.entries.size());
      for (const AnnotatedTree& e : a.entries) moved.entries.push_back(permute(e, sigma));
      return forget_proc(moved, ctx);
    }
    case NodeKind::Introduce: {
      if (children.size() != 1) throw std::logic_error("introduce node needs one child");
      int c = children[0];
      Characteristic a = rec_ed(BoundariedGraph{g.graph, ctx.rho[static_cast<std::size_t>(c)]},
                                ctx, c);
      int x = ctx.nice.acted[static_cast<std::size_t>(node)];
      const std::vector<int>& cb = ctx.rho[static_cast<std::size_t>(c)];
      std::vector<int> i_labels;
      for (std::size_t i = 0; i < cb.size(); ++i)
        if (g.graph.has_edge(x, cb[i])) i_labels.push_back(static_cast<int>(i) + 1);
      Characteristic b = introduce_proc(a, i_labels, ctx);
      // child labels stay first with the new vertex last; fold the new
      // vertex into ascending order on this bag
      const std::vector<int>& vb = ctx.rho[static_cast<std::size_t>(node)];
      int t1 = static_cast<int>(vb.size());
      int p = static_cast<int>(std::lower_bound(vb.begin(), vb.end(), x) - vb.begin());
      std::vector<int> sigma(static_cast<std::size_t>(t1));
      for (int i = 0; i + 1 < t1; ++i) sigma[static_cast<std::size_t>(i)] = (i < p) ? i : i + 1;
      sigma[static_cast<std::size_t>(t1 - 1)] = p;
      Characteristic out;
      out.k = b.k;
      out.t = b.t;
      out.entries.reserve(b.entries.size());
      for (const AnnotatedTree& e : b.entries) out.entries.push_back(permute(e, sigma));
      return out;
    }
    case NodeKind::Join: {
      if (children.size() != 2) throw std::logic_error("join node needs two children");
      int c1 = children[0];
      int c2 = children[1];
      Characteristic a1, a2;
      if (ctx.parallel_join) {
        std::future<Characteristic> other = std::async(std::launch::async, [&ctx, &g, c2] {
          return rec_ed(BoundariedGraph{g.graph, ctx.rho[static_cast<std::size_t>(c2)]}, ctx, c2);
        });
        a1 = rec_ed(BoundariedGraph{g.graph, ctx.rho[static_cast<std::size_t>(c1)]}, ctx, c1);
        a2 = other.get();
      } else {
        a1 = rec_ed(BoundariedGraph{g.graph, ctx.rho[static_cast<std::size_t>(c1)]}, ctx, c1);
        a2 = rec_ed(BoundariedGraph{g.graph, ctx.rho[static_cast<std::size_t>(c2)]}, ctx, c2);
      }
      return join_proc(a1, a2, ctx);
    }
  }
  throw std::logic_error("unhandled decomposition node kind");
}

inline int min_root_height(const Characteristic& c) {
  int best = -1;
  for (const AnnotatedTree& e : c.entries) {
    int h = e.h[static_cast<std::size_t>(e.root)];
    if (best < 0 || h < best) best = h;
  }
  return best;
}

// Characteristic of a connected boundaried graph, over its own label order.
// The recursion runs on a chain decomposition that introduces everything in
// a connectivity-friendly order and then forgets the non-boundary vertices,
// so the root bag is exactly the boundary.
inline Characteristic characteristic_of(const BoundariedGraph& bg, const ObstructionFamily& fam,
                                        int k, RepresentativeRegistry& registry,
                                        long long budget = default_search_budget) {
  if (bg.t() == 0 || !is_connected(bg.graph))
    throw std::invalid_argument("characteristic needs a connected graph with a boundary");
  std::set<int> distinct;
  for (int v : bg.boundary) {
    bg.graph.require_vertex(v);
    if (!distinct.insert(v).second)
      throw std::invalid_argument("boundary vertices must be distinct");
  }
  std::vector<int> all(static_cast<std::size_t>(bg.graph.n));
  for (int v = 0; v < bg.graph.n; ++v) all[static_cast<std::size_t>(v)] = v;
  std::vector<int> order = detail_td::connect_order(bg.graph, 0, all);
  detail_td::NiceBuilder b;
  std::vector<int> bag{order[0]};
  int top = b.add(NodeKind::Leaf, -1, bag, {});
  for (std::size_t i = 1; i < order.size(); ++i) {
    int v = order[i];
    bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
    top = b.add(NodeKind::Introduce, v, bag, {top});
  }
  for (int v = 0; v < bg.graph.n; ++v) {
    if (distinct.count(v)) continue;
    bag.erase(std::find(bag.begin(), bag.end(), v));
    top = b.add(NodeKind::Forget, v, bag, {top});
  }
  b.out.root = top;

  DpContext ctx;
  ctx.fam = fam;
  ctx.k = k;
  ctx.registry = &registry;
  ctx.nice = std::move(b.out);
  ctx.rho = ctx.nice.bags;
  ctx.budget = budget;
  Characteristic a = rec_ed(
      BoundariedGraph{bg.graph, ctx.rho[static_cast<std::size_t>(ctx.nice.root)]}, ctx,
      ctx.nice.root);
  const std::vector<int>& sorted_x = ctx.rho[static_cast<std::size_t>(ctx.nice.root)];
  std::vector<int> sigma(sorted_x.size());
  for (std::size_t j = 0; j < sorted_x.size(); ++j)
    sigma[j] = static_cast<int>(std::find(bg.boundary.begin(), bg.boundary.end(), sorted_x[j]) -
                                bg.boundary.begin());
  Characteristic out;
  out.k = a.k;
  out.t = a.t;
  out.entries.reserve(a.entries.size());
  for (const AnnotatedTree& e : a.entries) out.entries.push_back(permute(e, sigma));
  return out;
}

// ---- exact elimination distance ----

namespace detail_dp {

inline std::mutex& dp_memo_mutex() {
  static std::mutex m;
  return m;
}

inline std::unordered_map<std::string, int>& dp_memo() {
  static std::unordered_map<std::string, int> memo;
  return memo;
}

// Representatives depend on the boundary size and the detail bound baked
// into their registry keys, not on the family, so one registry serves all
// computations.
inline RepresentativeRegistry& dp_registry() {
  static RepresentativeRegistry reg;
  return reg;
}

}  // namespace detail_dp

// Exact elimination distance by increasing height budget, or nothing when
// it exceeds k_max.  Disconnected inputs take the maximum over components.
// Trivial families (a member with at most one vertex) collapse the target
// class to the empty graph; that case is settled by the recursive treedepth
// oracle, a desk-scale-only path.
inline std::optional<int> compute_ed(const Graph& g, const ObstructionFamily& fam, int k_max,
                                     long long budget = default_search_budget,
                                     bool parallel_join = false) {
  if (k_max < 0) throw std::invalid_argument("height budget must be non-negative");
  if (g.n == 0) return 0;
  if (fam.trivial) {
    int value = td_oracle(g, g.n);
    return value <= k_max ? std::optional<int>(value) : std::nullopt;
  }
  std::vector<Graph> comps = connected_components(g);
  if (comps.size() > 1) {
    int best = 0;
    for (const Graph& c : comps) {
      std::optional<int> sub = compute_ed(c, fam, k_max, budget, parallel_join);
      if (!sub) return std::nullopt;
      best = std::max(best, *sub);
    }
    return best;
  }
  std::string key = family_code(fam) + "#" + canonical_form(g).code;
  {
    std::lock_guard<std::mutex> lock(detail_dp::dp_memo_mutex());
    auto it = detail_dp::dp_memo().find(key);
    if (it != detail_dp::dp_memo().end())
      return it->second <= k_max ? std::optional<int>(it->second) : std::nullopt;
  }
  DpContext ctx = make_context(g, fam, 0, detail_dp::dp_registry(), budget);
  ctx.parallel_join = parallel_join;
  for (int k = 0; k <= k_max; ++k) {
    ctx.k = k;
    Characteristic c = rec_ed(
        BoundariedGraph{g, ctx.rho[static_cast<std::size_t>(ctx.nice.root)]}, ctx, ctx.nice.root);
    if (c.entries.empty()) continue;
    int best = min_root_height(c);
    if (best != k)
      throw std::logic_error("first non-empty budget disagrees with the minimum height");
    std::lock_guard<std::mutex> lock(detail_dp::dp_memo_mutex());
    detail_dp::dp_memo().emplace(std::move(key), best);
    return best;
  }
  return std::nullopt;
}

// Elimination forest realizing the exact distance, by descending the
// definition: a connected part either lies in the class (one leaf holding
// it) or some vertex lowers the distance by one; the smallest such vertex
// becomes an internal node over the parts of the rest.
inline EliminationForest extract_forest(const Graph& g, const ObstructionFamily& fam, int k,
                                        long long budget = default_search_budget) {
  std::optional<int> total = compute_ed(g, fam, k, budget);
  if (!total) throw infeasible_error("elimination distance exceeds the height budget");
  EliminationForest out;
  std::function<void(const std::vector<int>&, int)> build = [&](const std::vector<int>& vertices,
                                                                int parent_node) {
    Graph c = induced_subgraph(g, vertices);
    int ed_c = *compute_ed(c, fam, k, budget);
    if (ed_c == 0) {
      out.parent.push_back(parent_node);
      out.chi.push_back(vertices);
      return;
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      Graph rest = delete_vertices(c, {static_cast<int>(i)});
      if (!compute_ed(rest, fam, ed_c - 1, budget)) continue;
      int node = static_cast<int>(out.parent.size());
      out.parent.push_back(parent_node);
      out.chi.push_back({vertices[i]});
      for (const std::vector<int>& comp : component_vertex_sets(rest)) {
        std::vector<int> mapped;
        mapped.reserve(comp.size());
        for (int local : comp)
          mapped.push_back(vertices[static_cast<std::size_t>(
              local < static_cast<int>(i) ? local : local + 1)]);
        build(mapped, node);
      }
      return;
    }
    throw std::logic_error("no vertex lowers the elimination distance");
  };
  for (const std::vector<int>& comp : component_vertex_sets(g)) build(comp, -1);
  return out;
}

// ---- annotated variant ----

namespace detail_dp {

inline bool outside_component_closure(const Graph& g, const ObstructionFamily& fam,
                                      long long budget) {
  for (const std::vector<int>& set : component_vertex_sets(g))
    if (!in_exc(induced_subgraph(g, set), fam, budget)) return true;
  return false;
}

// A usable gadget is connected, outside the class, and vertex-critical:
// deleting any one vertex lands every component back inside.
inline bool gadget_ok(const Graph& h, const ObstructionFamily& fam, long long budget) {
  if (h.n == 0 || !is_connected(h) || in_exc(h, fam, budget)) return false;
  for (int v = 0; v < h.n; ++v)
    if (outside_component_closure(delete_vertices(h, {v}), fam, budget)) return false;
  return true;
}

inline Graph canonical_copy(const Graph& g) {
  CanonicalLabeling lab = canonical_labeling(g, {});
  std::vector<int> new_of_old(static_cast<std::size_t>(g.n));
  for (int pos = 0; pos < g.n; ++pos)
    new_of_old[static_cast<std::size_t>(lab.order[static_cast<std::size_t>(pos)])] = pos;
  return apply_permutation(g, new_of_old);
}

// Deterministic gadget: the smallest connected member among the family's
// minor-minimal members, or such a member connected up by repeatedly adding
// the lexicographically smallest cross-component edge.  Non-minimal members
// are unusable: deleting a vertex can leave another member's minor behind,
// which would overcount the forced deletions.
inline Graph make_gadget(const ObstructionFamily& fam, long long budget) {
  std::vector<Graph> minimal;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < fam.members.size() && !drop; ++j) {
      if (j == i || !is_minor(fam.members[j], fam.members[i], budget)) continue;
      bool mutual = is_minor(fam.members[i], fam.members[j], budget);
      drop = !mutual || j < i;
    }
    if (!drop) minimal.push_back(fam.members[i]);
  }
  std::sort(minimal.begin(), minimal.end(), [](const Graph& a, const Graph& b) {
    return canonical_form(a).code < canonical_form(b).code;
  });
  for (const Graph& m : minimal) {
    if (!is_connected(m)) continue;
    Graph h = canonical_copy(m);
    if (gadget_ok(h, fam, budget)) return h;
  }
  if (!minimal.empty()) {
    Graph h = canonical_copy(minimal.front());
    while (!is_connected(h)) {
      std::vector<std::vector<int>> sets = component_vertex_sets(h);
      std::vector<int> comp_of(static_cast<std::size_t>(h.n), -1);
      for (std::size_t c = 0; c < sets.size(); ++c)
        for (int v : sets[c]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
      bool added = false;
      for (int a = 0; a < h.n && !added; ++a)
        for (int b = a + 1; b < h.n && !added; ++b)
          if (comp_of[static_cast<std::size_t>(a)] != comp_of[static_cast<std::size_t>(b)]) {
            h.add_edge(a, b);
            added = true;
          }
    }
    if (gadget_ok(h, fam, budget)) return h;
  }
  throw std::runtime_error("no connected obstruction available for this family");
}

}  // namespace detail_dp

// Minimum height over elimination forests whose internal vertices include
// s0: one gadget copy is glued at each anchor (its vertex 0 identified with
// the anchor), forcing the anchor out of every leaf, and the plain
// computation runs on the result.
inline std::optional<int> annotated_ed(const Graph& g, const std::vector<int>& s0,
                                       const ObstructionFamily& fam, int k,
                                       long long budget = default_search_budget) {
  for (int v : s0) g.require_vertex(v);
  std::vector<int> anchors = s0;
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  if (anchors.empty()) return compute_ed(g, fam, k, budget);
  Graph gadget = detail_dp::make_gadget(fam, budget);
  Graph glued = g;
  for (int s : anchors) {
    int offset = glued.n;
    glued = disjoint_union(glued, delete_vertices(gadget, {0}));
    for (auto [u, v] : gadget.edges()) {
      int mu = (u == 0) ? s : offset + u - 1;
      int mv = (v == 0) ? s : offset + v - 1;
      glued.add_edge(mu, mv);
    }
  }
  return compute_ed(glued, fam, k, budget);
}

}  // namespace elimdist

#endif
