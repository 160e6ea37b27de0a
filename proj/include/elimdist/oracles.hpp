#ifndef ELIMDIST_ORACLES_HPP
#define ELIMDIST_ORACLES_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "elimdist/annotated.hpp"
#include "elimdist/boundaried.hpp"
#include "elimdist/graph.hpp"
#include "elimdist/minors.hpp"
#include "elimdist/treedecomp.hpp"

namespace elimdist {

// Rooted forest over vertex sets: parent[i] = -1 marks a root, chi[i] is the
// (sorted) set of graph vertices placed at node i. Internal nodes carry
// singletons; leaves carry whole components that already avoid the family.
struct EliminationForest {
  std::vector<int> parent;
  std::vector<std::vector<int>> chi;

  int size() const { return static_cast<int>(parent.size()); }
};

// Height with leaves at level 0: the deepest edge count from a root down.
inline int forest_height(const EliminationForest& ef) {
  int n = ef.size();
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  std::function<int(int)> depth_of = [&](int v) -> int {
    int& d = depth[static_cast<std::size_t>(v)];
    if (d >= 0) return d;
    int p = ef.parent[static_cast<std::size_t>(v)];
    return d = (p < 0) ? 0 : depth_of(p) + 1;
  };
  int height = 0;
  for (int v = 0; v < n; ++v) height = std::max(height, depth_of(v));
  return height;
}

namespace detail_oracle {

inline std::vector<int> subtree_union(const EliminationForest& ef,
                                      const std::vector<std::vector<int>>& kids, int node) {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int v) {
    out.insert(out.end(), ef.chi[static_cast<std::size_t>(v)].begin(),
               ef.chi[static_cast<std::size_t>(v)].end());
    for (int c : kids[static_cast<std::size_t>(v)]) walk(c);
  };
  walk(node);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail_oracle

// The five axioms, checked in order; reports the first violation.
inline ValidationReport validate_forest(const Graph& g, const ObstructionFamily& fam,
                                        const EliminationForest& ef,
                                        long long budget = default_search_budget) {
  int n = ef.size();
  if (n == 0) return {g.n == 0, g.n == 0 ? "ok" : "empty forest for a non-empty graph"};
  for (int v = 0; v < n; ++v) {
    int p = ef.parent[static_cast<std::size_t>(v)];
    if (p < -1 || p >= n) return {false, "node " + std::to_string(v) + " has an invalid parent"};
  }
  for (int v = 0; v < n; ++v) {
    int cur = v;
    for (int steps = 0; cur >= 0; ++steps) {
      if (steps > n) return {false, "parent pointers contain a cycle"};
      cur = ef.parent[static_cast<std::size_t>(cur)];
    }
  }
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    int p = ef.parent[static_cast<std::size_t>(v)];
    if (p >= 0) kids[static_cast<std::size_t>(p)].push_back(v);
  }
  // Axiom 1: internal nodes hold exactly one vertex.
  for (int v = 0; v < n; ++v)
    if (!kids[static_cast<std::size_t>(v)].empty() && ef.chi[static_cast<std::size_t>(v)].size() != 1)
      return {false, "internal node " + std::to_string(v) + " does not hold a single vertex"};
  // Axiom 2: the chi sets partition the vertex set.
  std::vector<int> owner(static_cast<std::size_t>(g.n), -1);
  for (int v = 0; v < n; ++v)
    for (int x : ef.chi[static_cast<std::size_t>(v)]) {
      if (x < 0 || x >= g.n)
        return {false, "node " + std::to_string(v) + " mentions unknown vertex " + std::to_string(x)};
      if (owner[static_cast<std::size_t>(x)] >= 0)
        return {false, "vertex " + std::to_string(x) + " appears at two nodes"};
      owner[static_cast<std::size_t>(x)] = v;
    }
  for (int x = 0; x < g.n; ++x)
    if (owner[static_cast<std::size_t>(x)] < 0)
      return {false, "vertex " + std::to_string(x) + " is not placed"};
  // Axiom 3: edges join ancestor and descendant sets.
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  std::function<int(int)> depth_of = [&](int v) -> int {
    int& d = depth[static_cast<std::size_t>(v)];
    if (d >= 0) return d;
    int p = ef.parent[static_cast<std::size_t>(v)];
    return d = (p < 0) ? 0 : depth_of(p) + 1;
  };
  auto related = [&](int a, int b) {
    int x = a;
    int y = b;
    while (depth_of(x) > depth_of(y)) x = ef.parent[static_cast<std::size_t>(x)];
    while (depth_of(y) > depth_of(x)) y = ef.parent[static_cast<std::size_t>(y)];
    return x == y;
  };
  for (auto [u, v] : g.edges()) {
    int a = owner[static_cast<std::size_t>(u)];
    int b = owner[static_cast<std::size_t>(v)];
    if (!related(a, b))
      return {false, "edge " + std::to_string(u) + "-" + std::to_string(v) +
                         " joins incomparable nodes"};
  }
  // Axiom 4: leaf graphs avoid the family.
  for (int v = 0; v < n; ++v) {
    if (!kids[static_cast<std::size_t>(v)].empty()) continue;
    Graph leaf = induced_subgraph(g, ef.chi[static_cast<std::size_t>(v)]);
    if (!in_exc(leaf, fam, budget))
      return {false, "leaf node " + std::to_string(v) + " induces a family minor"};
  }
  // Axiom 5: every subtree's vertex union induces a connected graph.
  for (int v = 0; v < n; ++v) {
    std::vector<int> un = detail_oracle::subtree_union(ef, kids, v);
    if (un.size() > 1 && !is_connected(induced_subgraph(g, un)))
      return {false, "subtree of node " + std::to_string(v) + " induces a disconnected graph"};
  }
  return {true, "ok"};
}

// Plain-text forest format: header `s ef <#nodes> <n>`, then one line per
// node: `t <id> <parent|-1> <chi vertices...>`.
inline std::string serialize_forest(const EliminationForest& ef, int n) {
  std::ostringstream out;
  out << "s ef " << ef.size() << ' ' << n << '\n';
  for (int v = 0; v < ef.size(); ++v) {
    out << "t " << v << ' ' << ef.parent[static_cast<std::size_t>(v)];
    for (int x : ef.chi[static_cast<std::size_t>(v)]) out << ' ' << x;
    out << '\n';
  }
  return out.str();
}

inline EliminationForest parse_forest(std::istream& in) {
  std::string line;
  int nodes = -1;
  EliminationForest ef;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "s") {
      std::string kind;
      int n = 0;
      if (!(ls >> kind >> nodes >> n) || kind != "ef" || nodes < 0)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad forest header");
      ef.parent.assign(static_cast<std::size_t>(nodes), -1);
      ef.chi.assign(static_cast<std::size_t>(nodes), {});
    } else if (tag == "t") {
      int id = -1;
      int par = -2;
      if (nodes < 0 || !(ls >> id >> par) || id < 0 || id >= nodes || par < -1 || par >= nodes)
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad forest node line");
      ef.parent[static_cast<std::size_t>(id)] = par;
      int x = 0;
      while (ls >> x) ef.chi[static_cast<std::size_t>(id)].push_back(x);
      std::sort(ef.chi[static_cast<std::size_t>(id)].begin(),
                ef.chi[static_cast<std::size_t>(id)].end());
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown forest line");
    }
  }
  if (nodes < 0) throw std::invalid_argument("missing forest header");
  return ef;
}

inline EliminationForest parse_forest(const std::string& text) {
  std::istringstream in(text);
  return parse_forest(in);
}

namespace detail_oracle {

inline std::mutex& memo_mutex() {
  static std::mutex m;
  return m;
}

inline std::unordered_map<std::string, int>& ed_memo() {
  static std::unordered_map<std::string, int> memo;
  return memo;
}

inline std::unordered_map<std::string, int>& td_memo() {
  static std::unordered_map<std::string, int> memo;
  return memo;
}

inline std::optional<int> memo_lookup(std::unordered_map<std::string, int>& memo,
                                      const std::string& key) {
  std::lock_guard<std::mutex> lock(memo_mutex());
  auto it = memo.find(key);
  if (it == memo.end()) return std::nullopt;
  return it->second;
}

inline void memo_store(std::unordered_map<std::string, int>& memo, const std::string& key,
                       int value) {
  std::lock_guard<std::mutex> lock(memo_mutex());
  memo.emplace(key, value);
}

}  // namespace detail_oracle

// Elimination distance by its defining recursion: 0 for members, the
// component maximum when disconnected, otherwise one more than the best
// single-vertex deletion. Memoized on canonical forms per family.
inline int ed_oracle(const Graph& g, const ObstructionFamily& fam, int cap = 10,
                     long long budget = default_search_budget) {
  if (g.n > cap)
    throw resource_limit_error("ed oracle cap exceeded: " + std::to_string(g.n) + " vertices");
  if (g.n == 0) return 0;
  std::vector<Graph> comps = connected_components(g);
  if (comps.size() > 1) {
    int best = 0;
    for (const Graph& c : comps) best = std::max(best, ed_oracle(c, fam, cap, budget));
    return best;
  }
  std::string key = family_code(fam) + "#" + canonical_form(g).code;
  if (std::optional<int> hit = detail_oracle::memo_lookup(detail_oracle::ed_memo(), key))
    return *hit;
  int value;
  if (in_exc(g, fam, budget)) {
    value = 0;
  } else {
    value = -1;
    for (int v = 0; v < g.n; ++v) {
      int sub = ed_oracle(delete_vertices(g, {v}), fam, cap, budget);
      if (value < 0 || sub < value) value = sub;
    }
    value += 1;
  }
  detail_oracle::memo_store(detail_oracle::ed_memo(), key, value);
  return value;
}

// Treedepth under the same height convention (single vertex has depth 1):
// elimination distance to the class containing only the empty graph.
inline int td_oracle(const Graph& g, int cap = 10) {
  if (g.n > cap)
    throw resource_limit_error("treedepth oracle cap exceeded: " + std::to_string(g.n) +
                               " vertices");
  if (g.n == 0) return 0;
  std::vector<Graph> comps = connected_components(g);
  if (comps.size() > 1) {
    int best = 0;
    for (const Graph& c : comps) best = std::max(best, td_oracle(c, cap));
    return best;
  }
  std::string key = canonical_form(g).code;
  if (std::optional<int> hit = detail_oracle::memo_lookup(detail_oracle::td_memo(), key))
    return *hit;
  int value = -1;
  for (int v = 0; v < g.n; ++v) {
    int sub = td_oracle(delete_vertices(g, {v}), cap);
    if (value < 0 || sub < value) value = sub;
  }
  value += 1;
  detail_oracle::memo_store(detail_oracle::td_memo(), key, value);
  return value;
}

// Minimum elimination-forest height over forests whose internal vertices
// include every vertex of s0. Brute-force recursion, used as ground truth for
// the gadget-based route.
inline int annotated_ed_oracle(const Graph& g, const std::vector<int>& s0,
                               const ObstructionFamily& fam, int cap = 10,
                               long long budget = default_search_budget) {
  if (g.n > cap)
    throw resource_limit_error("annotated oracle cap exceeded: " + std::to_string(g.n) +
                               " vertices");
  for (int v : s0) g.require_vertex(v);
  if (g.n == 0) return 0;
  std::vector<std::vector<int>> comp_sets = component_vertex_sets(g);
  if (comp_sets.size() > 1) {
    int best = 0;
    for (const std::vector<int>& set : comp_sets) {
      std::vector<int> sub_s0;
      std::vector<int> relabel(static_cast<std::size_t>(g.n), -1);
      for (std::size_t i = 0; i < set.size(); ++i)
        relabel[static_cast<std::size_t>(set[i])] = static_cast<int>(i);
      for (int v : s0)
        if (relabel[static_cast<std::size_t>(v)] >= 0)
          sub_s0.push_back(relabel[static_cast<std::size_t>(v)]);
      best = std::max(best,
                      annotated_ed_oracle(induced_subgraph(g, set), sub_s0, fam, cap, budget));
    }
    return best;
  }
  if (s0.empty() && in_exc(g, fam, budget)) return 0;
  int best = -1;
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> rest;
    for (int x : s0)
      if (x != v) rest.push_back(x > v ? x - 1 : x);
    int sub = annotated_ed_oracle(delete_vertices(g, {v}), rest, fam, cap, budget);
    if (best < 0 || sub < best) best = sub;
  }
  return best + 1;
}

// Independent minor test by exhaustive assignment of host vertices to branch
// sets (or none): exact, slow, only for cross-checks.
inline bool minor_oracle(const Graph& h, const Graph& g) {
  if (g.n > 8 || h.n > 5)
    throw resource_limit_error("minor oracle caps exceeded (host 8, pattern 5)");
  if (h.n == 0) return true;
  if (h.n > g.n || h.edge_count() > g.edge_count()) return false;
  std::vector<int> slot(static_cast<std::size_t>(g.n), 0);  // 0 = unused, i = branch set i-1
  std::vector<std::pair<int, int>> h_edges = h.edges();
  auto feasible = [&]() {
    for (int i = 1; i <= h.n; ++i) {
      std::vector<int> part;
      for (int v = 0; v < g.n; ++v)
        if (slot[static_cast<std::size_t>(v)] == i) part.push_back(v);
      if (part.empty()) return false;
      if (!is_connected(induced_subgraph(g, part))) return false;
    }
    for (auto [a, b] : h_edges) {
      bool hit = false;
      for (int u = 0; u < g.n && !hit; ++u)
        for (int v = 0; v < g.n && !hit; ++v)
          if (slot[static_cast<std::size_t>(u)] == a + 1 &&
              slot[static_cast<std::size_t>(v)] == b + 1 && g.has_edge(u, v))
            hit = true;
      if (!hit) return false;
    }
    return true;
  };
  std::function<bool(int)> assign = [&](int v) -> bool {
    if (v == g.n) return feasible();
    for (int s = 0; s <= h.n; ++s) {
      slot[static_cast<std::size_t>(v)] = s;
      if (assign(v + 1)) return true;
    }
    slot[static_cast<std::size_t>(v)] = 0;
    return false;
  };
  return assign(0);
}

namespace detail_oracle {

// All rooted partition trees over ids whose height stays within the cap:
// internal nodes hold single vertices, leaves hold the remaining vertices
// with every component of a leaf bag inside the class, and each tree edge
// separates vertex sets with no graph edges across sibling subtrees.  A
// tree is either one leaf holding all of ids, or a singleton root over
// subtrees covering any grouping of the remaining components; components
// in one group may end up in a common leaf bag or stacked under deeper
// singletons, which is what states mid-recursion need when later vertices
// connect them.  Results are single-rooted forests over original ids.
inline void enum_partition_trees(const Graph& g, const std::vector<int>& ids,
                                 const ObstructionFamily& fam, int height_cap, long long& budget,
                                 std::vector<EliminationForest>& out) {
  if (--budget < 0) throw resource_limit_error("partition tree enumeration budget exhausted");
  Graph local = induced_subgraph(g, ids);
  bool leaf_ok = true;
  for (const std::vector<int>& set : component_vertex_sets(local))
    if (!in_exc(induced_subgraph(local, set), fam)) {
      leaf_ok = false;
      break;
    }
  if (leaf_ok) {
    EliminationForest leaf;
    leaf.parent = {-1};
    leaf.chi = {ids};
    out.push_back(std::move(leaf));
  }
  if (height_cap == 0 || ids.size() < 2) return;
  for (std::size_t pick = 0; pick < ids.size(); ++pick) {
    std::vector<int> rest = ids;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    Graph remainder = induced_subgraph(g, rest);
    std::vector<std::vector<int>> comp_sets = component_vertex_sets(remainder);
    // Back to original ids.
    for (std::vector<int>& set : comp_sets)
      for (int& v : set) v = rest[static_cast<std::size_t>(v)];
    // Every grouping of the components, in restricted-growth order.
    std::vector<int> block(comp_sets.size(), 0);
    std::function<void(std::size_t, int)> grouped = [&](std::size_t i, int blocks) {
      if (i < comp_sets.size()) {
        for (int b = 0; b <= blocks; ++b) {
          block[i] = b;
          grouped(i + 1, std::max(blocks, b + 1));
        }
        return;
      }
      std::vector<std::vector<EliminationForest>> options;
      for (int b = 0; b < blocks; ++b) {
        std::vector<int> group;
        for (std::size_t c = 0; c < comp_sets.size(); ++c)
          if (block[c] == b) group.insert(group.end(), comp_sets[c].begin(), comp_sets[c].end());
        std::sort(group.begin(), group.end());
        std::vector<EliminationForest> trees;
        enum_partition_trees(g, group, fam, height_cap - 1, budget, trees);
        if (trees.empty()) break;
        options.push_back(std::move(trees));
      }
      if (static_cast<int>(options.size()) != blocks) return;
      // Cartesian product of group choices under a root holding the picked vertex.
      std::vector<std::size_t> choice(options.size(), 0);
      while (true) {
        EliminationForest tree;
        tree.parent = {-1};
        tree.chi = {{ids[pick]}};
        for (std::size_t c = 0; c < options.size(); ++c) {
          const EliminationForest& sub = options[c][choice[c]];
          int offset = tree.size();
          for (int v = 0; v < sub.size(); ++v) {
            int p = sub.parent[static_cast<std::size_t>(v)];
            tree.parent.push_back(p < 0 ? 0 : p + offset);
            tree.chi.push_back(sub.chi[static_cast<std::size_t>(v)]);
          }
        }
        out.push_back(std::move(tree));
        std::size_t bump = 0;
        while (bump < choice.size() && ++choice[bump] == options[bump].size()) {
          choice[bump] = 0;
          ++bump;
        }
        if (bump == choice.size()) break;
      }
    };
    grouped(0, 0);
  }
}

}  // namespace detail_oracle

// Read an annotated tree off an elimination tree: keep the root-to-boundary
// skeleton with elimination-tree heights, and collect boundary leaf components
// (internal boundary vertices stay isolated) into the attachment graph.
inline AnnotatedTree annotate_elim_tree(const EliminationForest& tree, const BoundariedGraph& bg) {
  if (bg.t() == 0) throw std::invalid_argument("annotation requires a non-empty boundary");
  int n = tree.size();
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
  int root = -1;
  for (int v = 0; v < n; ++v) {
    int p = tree.parent[static_cast<std::size_t>(v)];
    if (p < 0)
      root = v;
    else
      kids[static_cast<std::size_t>(p)].push_back(v);
  }
  std::vector<int> height(static_cast<std::size_t>(n), 0);
  std::function<int(int)> height_of = [&](int v) -> int {
    int best = -1;
    for (int c : kids[static_cast<std::size_t>(v)]) best = std::max(best, height_of(c));
    return height[static_cast<std::size_t>(v)] = best + 1;
  };
  height_of(root);
  std::vector<int> node_of(bg.boundary.size(), -1);
  for (int v = 0; v < n; ++v)
    for (int x : tree.chi[static_cast<std::size_t>(v)])
      for (std::size_t i = 0; i < bg.boundary.size(); ++i)
        if (bg.boundary[i] == x) node_of[i] = v;
  std::vector<bool> keep(static_cast<std::size_t>(n), false);
  for (int v : node_of) {
    if (v < 0) throw std::invalid_argument("boundary vertex missing from the tree");
    for (int cur = v; cur >= 0; cur = tree.parent[static_cast<std::size_t>(cur)])
      keep[static_cast<std::size_t>(cur)] = true;
  }
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
    int p = tree.parent[static_cast<std::size_t>(v)];
    out.parent[static_cast<std::size_t>(id)] = (p < 0) ? -1 : new_id[static_cast<std::size_t>(p)];
    out.h[static_cast<std::size_t>(id)] = height[static_cast<std::size_t>(v)];
  }
  out.root = new_id[static_cast<std::size_t>(root)];
  // Attachment: per leaf holding boundary vertices, the components of the
  // leaf bag that contain one (a component without any would be discarded
  // by the representative step anyway), plus an isolated vertex per boundary
  // vertex sitting at an internal node.
  std::vector<int> r_vertices;
  for (int v = 0; v < n; ++v) {
    bool is_leaf = kids[static_cast<std::size_t>(v)].empty();
    const std::vector<int>& set = tree.chi[static_cast<std::size_t>(v)];
    bool holds_boundary = false;
    for (std::size_t i = 0; i < bg.boundary.size(); ++i)
      if (node_of[i] == v) holds_boundary = true;
    if (!holds_boundary) continue;
    if (is_leaf) {
      Graph local = induced_subgraph(bg.graph, set);
      for (const std::vector<int>& comp : component_vertex_sets(local)) {
        bool owned = false;
        for (int ci : comp)
          for (std::size_t i = 0; i < bg.boundary.size() && !owned; ++i)
            if (node_of[i] == v && bg.boundary[i] == set[static_cast<std::size_t>(ci)]) owned = true;
        if (!owned) continue;
        for (int ci : comp) r_vertices.push_back(set[static_cast<std::size_t>(ci)]);
      }
    } else {
      r_vertices.push_back(set.front());
    }
  }
  std::sort(r_vertices.begin(), r_vertices.end());
  Graph r(static_cast<int>(r_vertices.size()));
  auto r_kept = [&](int x) {
    return std::binary_search(r_vertices.begin(), r_vertices.end(), x);
  };
  auto r_index = [&](int x) {
    return static_cast<int>(std::lower_bound(r_vertices.begin(), r_vertices.end(), x) -
                            r_vertices.begin());
  };
  for (int v = 0; v < n; ++v) {
    if (!kids[static_cast<std::size_t>(v)].empty()) continue;
    const std::vector<int>& set = tree.chi[static_cast<std::size_t>(v)];
    bool holds_boundary = false;
    for (std::size_t i = 0; i < bg.boundary.size(); ++i)
      if (node_of[i] == v) holds_boundary = true;
    if (!holds_boundary) continue;
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = a + 1; b < set.size(); ++b)
        if (r_kept(set[a]) && r_kept(set[b]) && bg.graph.has_edge(set[a], set[b]))
          r.add_edge(r_index(set[a]), r_index(set[b]));
  }
  std::vector<int> boundary;
  for (std::size_t i = 0; i < bg.boundary.size(); ++i) boundary.push_back(r_index(bg.boundary[i]));
  out.r_graph = BoundariedGraph{std::move(r), std::move(boundary)};
  out.f.reserve(node_of.size());
  for (int v : node_of) out.f.push_back(new_id[static_cast<std::size_t>(v)]);
  return out;
}

// The full state set by exhaustive enumeration: every partition tree of the
// connected boundaried graph with height at most k, read off as an annotated
// tree.  Partition trees with disconnected leaf bags or subtree sets must be
// included: they are the states a recursion holds while later vertices still
// have to arrive, and for a connected graph their minimum root height still
// equals the elimination distance (splitting disconnected bags and subtrees
// into siblings never raises the height).  Entries are raw (not yet
// compressed); feed them to m_k for comparisons.
inline std::vector<AnnotatedTree> charstar_oracle(const BoundariedGraph& bg,
                                                  const ObstructionFamily& fam, int k, int cap = 6,
                                                  long long budget = default_search_budget) {
  if (bg.graph.n > cap)
    throw resource_limit_error("char* cap exceeded: " + std::to_string(bg.graph.n) + " vertices");
  if (bg.t() == 0 || !is_connected(bg.graph))
    throw std::invalid_argument("char* requires a connected graph with a non-empty boundary");
  std::vector<int> ids(static_cast<std::size_t>(bg.graph.n));
  for (int v = 0; v < bg.graph.n; ++v) ids[static_cast<std::size_t>(v)] = v;
  std::vector<EliminationForest> trees;
  detail_oracle::enum_partition_trees(bg.graph, ids, fam, k, budget, trees);
  std::vector<AnnotatedTree> out;
  out.reserve(trees.size());
  for (const EliminationForest& tree : trees) out.push_back(annotate_elim_tree(tree, bg));
  return out;
}

}  // namespace elimdist

#endif
