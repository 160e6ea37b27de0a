#ifndef ELIMDIST_ANNOTATED_HPP
#define ELIMDIST_ANNOTATED_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "elimdist/boundaried.hpp"
#include "elimdist/graph.hpp"
#include "elimdist/minors.hpp"
#include "elimdist/treedecomp.hpp"

namespace elimdist {

// One state of the elimination-distance DP: a rooted tree skeleton with a
// height annotation per node, a boundaried graph r_graph holding the boundary
// vertices and the leaf components attached to them, and f mapping each label
// to the tree node where its boundary vertex lives. r_graph.boundary[i] is
// the vertex of r_graph labeled i + 1, and f[i] is the node carrying label
// i + 1.
struct AnnotatedTree {
  std::vector<int> parent;  // parent[v]; -1 at the root
  int root = 0;
  std::vector<int> h;       // height annotation per node
  BoundariedGraph r_graph;
  std::vector<int> f;

  int size() const { return static_cast<int>(parent.size()); }
  int t() const { return static_cast<int>(f.size()); }
  bool operator==(const AnnotatedTree& other) const = default;
};

// Single node of height 0 holding label 1, with a one-vertex attachment.
inline AnnotatedTree trivial_annotated() {
  return AnnotatedTree{{-1}, 0, {0}, trivial_boundaried(), {0}};
}

// Sorted labels (1-based) carried by a node.
inline std::vector<int> labels_at(const AnnotatedTree& t, int node) {
  std::vector<int> out;
  for (int i = 0; i < t.t(); ++i)
    if (t.f[static_cast<std::size_t>(i)] == node) out.push_back(i + 1);
  return out;
}

inline bool is_labeled(const AnnotatedTree& t, int node) {
  return std::find(t.f.begin(), t.f.end(), node) != t.f.end();
}

// For each component of r_graph, the tree node owning it, or -1 for a
// component without boundary vertices (only legal mid-pipeline, right after a
// forget dropped a component's last label; rep discards such components).
// A component whose boundary vertices live at two nodes is always malformed.
inline std::vector<int> component_owners(const AnnotatedTree& t,
                                         const std::vector<std::vector<int>>& comps,
                                         bool allow_unowned = false) {
  std::vector<int> owner(comps.size(), -1);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int i = 0; i < t.t(); ++i) {
      int b = t.r_graph.boundary[static_cast<std::size_t>(i)];
      if (!std::binary_search(comps[c].begin(), comps[c].end(), b)) continue;
      int node = t.f[static_cast<std::size_t>(i)];
      if (owner[c] >= 0 && owner[c] != node)
        throw std::invalid_argument("attachment component spans two labeled nodes");
      owner[c] = node;
    }
    if (owner[c] < 0 && !allow_unowned)
      throw std::invalid_argument("attachment component without a boundary vertex");
  }
  return owner;
}

// Union of the components attached to one node, with its labels as the
// boundary in ascending label order.
inline BoundariedGraph attachment(const AnnotatedTree& t, int node) {
  std::vector<std::vector<int>> comps = component_vertex_sets(t.r_graph.graph);
  std::vector<int> owner = component_owners(t, comps);
  std::vector<int> keep;
  for (std::size_t c = 0; c < comps.size(); ++c)
    if (owner[c] == node) keep.insert(keep.end(), comps[c].begin(), comps[c].end());
  std::sort(keep.begin(), keep.end());
  std::vector<int> boundary;
  for (int label : labels_at(t, node)) {
    int b = t.r_graph.boundary[static_cast<std::size_t>(label - 1)];
    boundary.push_back(static_cast<int>(std::lower_bound(keep.begin(), keep.end(), b) -
                                        keep.begin()));
  }
  return BoundariedGraph{induced_subgraph(t.r_graph.graph, keep), std::move(boundary)};
}

inline ValidationReport validate_annotated(const AnnotatedTree& t) {
  int n = t.size();
  if (n == 0) return {false, "empty tree"};
  if (static_cast<int>(t.h.size()) != n) return {false, "height array size mismatch"};
  if (t.root < 0 || t.root >= n) return {false, "root out of range"};
  if (t.parent[static_cast<std::size_t>(t.root)] != -1) return {false, "root has a parent"};
  for (int v = 0; v < n; ++v) {
    if (v == t.root) continue;
    int p = t.parent[static_cast<std::size_t>(v)];
    if (p < 0 || p >= n) return {false, "node " + std::to_string(v) + " has an invalid parent"};
  }
  // Every node must reach the root without cycles.
  for (int v = 0; v < n; ++v) {
    int cur = v;
    for (int steps = 0; cur != t.root; ++steps) {
      if (steps > n) return {false, "parent pointers contain a cycle"};
      cur = t.parent[static_cast<std::size_t>(cur)];
    }
  }
  for (int v = 0; v < n; ++v) {
    if (t.h[static_cast<std::size_t>(v)] < 0)
      return {false, "negative height at node " + std::to_string(v)};
    if (v == t.root) continue;
    int p = t.parent[static_cast<std::size_t>(v)];
    if (t.h[static_cast<std::size_t>(p)] < t.h[static_cast<std::size_t>(v)] + 1)
      return {false, "height not strictly increasing at node " + std::to_string(v)};
  }
  if (t.t() != t.r_graph.t()) return {false, "label count differs between f and r_graph"};
  for (int i = 0; i < t.t(); ++i) {
    int node = t.f[static_cast<std::size_t>(i)];
    if (node < 0 || node >= n)
      return {false, "label " + std::to_string(i + 1) + " mapped to an invalid node"};
    int b = t.r_graph.boundary[static_cast<std::size_t>(i)];
    if (b < 0 || b >= t.r_graph.graph.n)
      return {false, "label " + std::to_string(i + 1) + " has an invalid r_graph vertex"};
  }
  try {
    std::vector<std::vector<int>> comps = component_vertex_sets(t.r_graph.graph);
    component_owners(t, comps);
  } catch (const std::invalid_argument& e) {
    return {false, e.what()};
  }
  return {true, "ok"};
}

// Iteratively remove unlabeled leaves: a node survives exactly when its
// subtree contains a labeled node. Heights keep their recorded values.
inline AnnotatedTree crop(const AnnotatedTree& t) {
  if (t.t() == 0) throw std::invalid_argument("crop requires at least one labeled node");
  int n = t.size();
  std::vector<std::vector<int>> kids = children_lists(t.parent);
  std::vector<bool> keep(static_cast<std::size_t>(n), false);
  std::function<bool(int)> mark = [&](int v) {
    bool alive = is_labeled(t, v);
    for (int c : kids[static_cast<std::size_t>(v)]) alive = mark(c) || alive;
    keep[static_cast<std::size_t>(v)] = alive;
    return alive;
  };
  mark(t.root);
  std::vector<int> new_id(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (keep[static_cast<std::size_t>(v)]) new_id[static_cast<std::size_t>(v)] = next++;
  AnnotatedTree out;
  out.parent.resize(static_cast<std::size_t>(next));
  out.h.resize(static_cast<std::size_t>(next));
  for (int v = 0; v < n; ++v) {
    if (!keep[static_cast<std::size_t>(v)]) continue;
    int id = new_id[static_cast<std::size_t>(v)];
    int p = t.parent[static_cast<std::size_t>(v)];
    out.parent[static_cast<std::size_t>(id)] = (p < 0) ? -1 : new_id[static_cast<std::size_t>(p)];
    out.h[static_cast<std::size_t>(id)] = t.h[static_cast<std::size_t>(v)];
  }
  out.root = new_id[static_cast<std::size_t>(t.root)];
  out.r_graph = t.r_graph;
  out.f.reserve(t.f.size());
  for (int node : t.f) out.f.push_back(new_id[static_cast<std::size_t>(node)]);
  return out;
}

// Family-aware attachment compression, applied before representative lookup.
// Each rewrite preserves, for every compatible glue partner, whether the
// glued graph contains a family member, and each only removes interior
// vertices, so glue compatibility and the boundary subgraph are untouched.
// Pendant pruning drops interior vertices of degree at most one; it is safe
// when every member is 2-connected, because a branch set can shed such a
// vertex without losing any external adjacency and no branch set may consist
// of it alone. Chain suppression contracts an interior degree-2 vertex into
// one of its two non-adjacent neighbors; it is safe when every member is
// subdivision-invariant (minimum degree 3, or the triangle, whose presence
// just means "has a cycle"). The degree-2 vertex is kept when both neighbors
// are boundary vertices, since contracting it would add a direct boundary
// edge and change what glue partners see.
inline BoundariedGraph compress_attachment(BoundariedGraph bg, const ObstructionFamily& fam) {
  const bool prune = pendant_prune_safe(fam);
  const bool suppress = chain_suppress_safe(fam);
  if (!prune && !suppress) return bg;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<char> is_b(static_cast<std::size_t>(bg.graph.n), 0);
    for (int b : bg.boundary) is_b[static_cast<std::size_t>(b)] = 1;
    if (prune) {
      for (int v = 0; v < bg.graph.n && !changed; ++v) {
        if (is_b[static_cast<std::size_t>(v)]) continue;
        if (bg.graph.neighbors(v).size() <= 1) {
          bg = detail_bnd::delete_interior_vertex(bg, v);
          changed = true;
        }
      }
      if (changed) continue;
    }
    if (suppress) {
      for (int v = 0; v < bg.graph.n && !changed; ++v) {
        if (is_b[static_cast<std::size_t>(v)]) continue;
        const auto& nb = bg.graph.neighbors(v);
        if (nb.size() != 2) continue;
        int a = nb[0];
        int b = nb[1];
        if (is_b[static_cast<std::size_t>(a)] && is_b[static_cast<std::size_t>(b)]) continue;
        if (bg.graph.has_edge(a, b)) continue;
        bg = detail_bnd::contract_boundaried(bg, v, a);
        changed = true;
      }
    }
  }
  return bg;
}

// Replace each node's attachment by its registry representative at detail
// ell_f. States whose attachment has an F-minor are discarded (the DP rejects
// them at the next join or introduce anyway, so no sentinel is carried).
// Components without boundary vertices are dropped: the result keeps exactly
// the per-node attachment unions, which is what makes forget sound.
inline std::optional<AnnotatedTree> rep_op(const AnnotatedTree& t, const ObstructionFamily& fam,
                                           RepresentativeRegistry& reg,
                                           long long budget = default_search_budget) {
  std::vector<std::vector<int>> comps = component_vertex_sets(t.r_graph.graph);
  std::vector<int> owner = component_owners(t, comps, /*allow_unowned=*/true);
  std::vector<int> nodes;  // labeled nodes, ascending
  for (int node : t.f)
    if (std::find(nodes.begin(), nodes.end(), node) == nodes.end()) nodes.push_back(node);
  std::sort(nodes.begin(), nodes.end());

  Graph merged(0);
  std::vector<int> boundary(t.f.size(), -1);
  for (int node : nodes) {
    std::vector<int> keep;
    for (std::size_t c = 0; c < comps.size(); ++c)
      if (owner[c] == node) keep.insert(keep.end(), comps[c].begin(), comps[c].end());
    std::sort(keep.begin(), keep.end());
    std::vector<int> labels = labels_at(t, node);
    std::vector<int> local_boundary;
    for (int label : labels) {
      int b = t.r_graph.boundary[static_cast<std::size_t>(label - 1)];
      local_boundary.push_back(static_cast<int>(
          std::lower_bound(keep.begin(), keep.end(), b) - keep.begin()));
    }
    BoundariedGraph att{induced_subgraph(t.r_graph.graph, keep), std::move(local_boundary)};
    if (!in_exc(att.graph, fam, budget)) return std::nullopt;
    BoundariedGraph rep =
        reduce_to_representative(compress_attachment(std::move(att), fam), fam.ell_f, reg, budget);
    int offset = merged.n;
    merged = disjoint_union(merged, rep.graph);
    for (std::size_t i = 0; i < labels.size(); ++i)
      boundary[static_cast<std::size_t>(labels[i] - 1)] = offset + rep.boundary[i];
  }
  AnnotatedTree out = t;
  out.r_graph = BoundariedGraph{std::move(merged), std::move(boundary)};
  return out;
}

// Keep the entries whose root height stays within the budget.
inline std::vector<AnnotatedTree> filter_k(const std::vector<AnnotatedTree>& entries, int k) {
  if (k < 0) throw std::invalid_argument("height budget must be non-negative");
  std::vector<AnnotatedTree> out;
  for (const AnnotatedTree& e : entries)
    if (e.h[static_cast<std::size_t>(e.root)] <= k) out.push_back(e);
  return out;
}

// Dedup key: rooted-tree shape with (height, labels) node attributes, plus the
// label-colored canonical form of r_graph. Labels are concrete, so equal codes
// mean label-respecting isomorphism of the whole state.
inline CanonicalForm canonical_encode(const AnnotatedTree& t) {
  std::vector<std::vector<int>> kids = children_lists(t.parent);
  std::function<std::string(int)> enc = [&](int v) -> std::string {
    std::string code = "(" + std::to_string(t.h[static_cast<std::size_t>(v)]) + ";";
    std::vector<int> labels = labels_at(t, v);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) code += ',';
      code += std::to_string(labels[i]);
    }
    std::vector<std::string> child_codes;
    for (int c : kids[static_cast<std::size_t>(v)]) child_codes.push_back(enc(c));
    std::sort(child_codes.begin(), child_codes.end());
    for (const std::string& cc : child_codes) code += cc;
    code += ')';
    return code;
  };
  return CanonicalForm{"T" + enc(t.root) + "|R" + boundaried_code(t.r_graph)};
}

// Relabel: label i+1 becomes sigma[i]+1 in both the label map and f.
inline AnnotatedTree permute(const AnnotatedTree& t, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != t.t())
    throw std::invalid_argument("permutation arity does not match the label count");
  std::vector<bool> hit(sigma.size(), false);
  for (int img : sigma) {
    if (img < 0 || img >= static_cast<int>(sigma.size()) || hit[static_cast<std::size_t>(img)])
      throw std::invalid_argument("not a permutation of the labels");
    hit[static_cast<std::size_t>(img)] = true;
  }
  AnnotatedTree out = t;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    out.f[static_cast<std::size_t>(sigma[i])] = t.f[i];
    out.r_graph.boundary[static_cast<std::size_t>(sigma[i])] = t.r_graph.boundary[i];
  }
  return out;
}

// A deduplicated set of DP states over one boundary, bounded by height k.
struct Characteristic {
  std::vector<AnnotatedTree> entries;  // first-constructed entry per class
  int k = 0;
  int t = 0;
};

inline std::vector<std::string> characteristic_codes(const Characteristic& c) {
  std::vector<std::string> codes;
  codes.reserve(c.entries.size());
  for (const AnnotatedTree& e : c.entries) codes.push_back(canonical_encode(e).code);
  std::sort(codes.begin(), codes.end());
  return codes;
}

inline bool characteristics_equal(const Characteristic& a, const Characteristic& b) {
  return a.k == b.k && a.t == b.t && characteristic_codes(a) == characteristic_codes(b);
}

// The normative state compression: crop, then represent, then filter, then
// dedup by canonical code, keeping the first-constructed entry per class.
inline Characteristic m_k(const std::vector<AnnotatedTree>& entries, int k, int t,
                          const ObstructionFamily& fam, RepresentativeRegistry& reg,
                          long long budget = default_search_budget) {
  if (k < 0) throw std::invalid_argument("height budget must be non-negative");
  Characteristic out;
  out.k = k;
  out.t = t;
  std::set<std::string> seen;
  for (const AnnotatedTree& e : entries) {
    std::optional<AnnotatedTree> state = rep_op(crop(e), fam, reg, budget);
    if (!state) continue;
    if (state->h[static_cast<std::size_t>(state->root)] > k) continue;
    if (seen.insert(canonical_encode(*state).code).second) out.entries.push_back(std::move(*state));
  }
  return out;
}

inline Characteristic m_k(const Characteristic& c, const ObstructionFamily& fam,
                          RepresentativeRegistry& reg,
                          long long budget = default_search_budget) {
  return m_k(c.entries, c.k, c.t, fam, reg, budget);
}

// Debug view: per entry the tree as a parent array, the height array, f as
// label -> node, and r_graph as an edge list plus boundary labels.
inline std::string characteristic_to_json(const Characteristic& c) {
  nlohmann::json out;
  out["k"] = c.k;
  out["t"] = c.t;
  nlohmann::json arr = nlohmann::json::array();
  for (const AnnotatedTree& e : c.entries) {
    nlohmann::json f_map = nlohmann::json::object();
    for (int i = 0; i < e.t(); ++i)
      f_map[std::to_string(i + 1)] = e.f[static_cast<std::size_t>(i)];
    nlohmann::json edges = nlohmann::json::array();
    for (auto [u, v] : e.r_graph.graph.edges()) edges.push_back({u, v});
    arr.push_back({{"parent", e.parent},
                   {"root", e.root},
                   {"h", e.h},
                   {"f", f_map},
                   {"r_edges", edges},
                   {"r_boundary", e.r_graph.boundary}});
  }
  out["entries"] = arr;
  return out.dump(2);
}

}  // namespace elimdist

#endif
