#ifndef ELIMDIST_BOUNDARIED_HPP
#define ELIMDIST_BOUNDARIED_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "elimdist/graph.hpp"
#include "elimdist/minors.hpp"

namespace elimdist {

// A graph with an ordered boundary: boundary[i] is the vertex carrying label
// i + 1. The label map is implicit in the ordering, so two boundaried graphs
// agree on labels exactly when the arrays line up.
struct BoundariedGraph {
  Graph graph;
  std::vector<int> boundary;

  int t() const { return static_cast<int>(boundary.size()); }
  bool operator==(const BoundariedGraph& other) const = default;
};

inline BoundariedGraph make_boundaried(Graph g, std::vector<int> boundary) {
  std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
  for (int v : boundary) {
    g.require_vertex(v);
    if (seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("duplicate boundary vertex " + std::to_string(v));
    seen[static_cast<std::size_t>(v)] = true;
  }
  return BoundariedGraph{std::move(g), std::move(boundary)};
}

// The single-boundary-vertex graph: one vertex, labeled 1.
inline BoundariedGraph trivial_boundaried() { return BoundariedGraph{Graph(1), {0}}; }

inline bool is_boundary_vertex(const BoundariedGraph& bg, int v) {
  return std::find(bg.boundary.begin(), bg.boundary.end(), v) != bg.boundary.end();
}

// Colors for canonical forms: 0 for interior vertices, label for boundary ones.
inline std::vector<int> boundary_colors(const BoundariedGraph& bg) {
  std::vector<int> colors(static_cast<std::size_t>(bg.graph.n), 0);
  for (int i = 0; i < bg.t(); ++i) colors[static_cast<std::size_t>(bg.boundary[i])] = i + 1;
  return colors;
}

// Canonical code up to label-respecting isomorphism.
inline std::string boundaried_code(const BoundariedGraph& bg) {
  return canonical_form(bg.graph, boundary_colors(bg)).code;
}

// Relabel vertices into canonical order so equal classes become byte-equal
// values. Idempotent: the result decodes from the canonical code alone.
inline BoundariedGraph canonical_copy(const BoundariedGraph& bg) {
  CanonicalLabeling lab = canonical_labeling(bg.graph, boundary_colors(bg));
  std::vector<int> new_of_old(static_cast<std::size_t>(bg.graph.n));
  for (int pos = 0; pos < bg.graph.n; ++pos)
    new_of_old[static_cast<std::size_t>(lab.order[static_cast<std::size_t>(pos)])] = pos;
  BoundariedGraph out;
  out.graph = apply_permutation(bg.graph, new_of_old);
  out.boundary.reserve(bg.boundary.size());
  for (int b : bg.boundary) out.boundary.push_back(new_of_old[static_cast<std::size_t>(b)]);
  return out;
}

// Compatibility: the label map is an isomorphism between the boundary-induced
// subgraphs, i.e. edges between equal labels agree on both sides.
inline bool compatible(const BoundariedGraph& a, const BoundariedGraph& b) {
  if (a.t() != b.t()) return false;
  for (int i = 0; i < a.t(); ++i)
    for (int j = i + 1; j < a.t(); ++j)
      if (a.graph.has_edge(a.boundary[i], a.boundary[j]) !=
          b.graph.has_edge(b.boundary[i], b.boundary[j]))
        return false;
  return true;
}

// Glue along equal labels, keeping the identified vertices as the boundary of
// the result. Side-1 vertices keep their ids; interior side-2 vertices are
// appended in ascending id order.
inline BoundariedGraph glue_boundaried(const BoundariedGraph& a, const BoundariedGraph& b) {
  if (!compatible(a, b)) throw std::invalid_argument("incompatible boundaries");
  std::vector<int> map_b(static_cast<std::size_t>(b.graph.n), -1);
  for (int i = 0; i < b.t(); ++i) map_b[static_cast<std::size_t>(b.boundary[i])] = a.boundary[i];
  int next = a.graph.n;
  for (int v = 0; v < b.graph.n; ++v)
    if (map_b[static_cast<std::size_t>(v)] < 0) map_b[static_cast<std::size_t>(v)] = next++;
  Graph g(next);
  for (auto [u, v] : a.graph.edges()) g.add_edge(u, v);
  for (auto [u, v] : b.graph.edges())
    g.add_edge(map_b[static_cast<std::size_t>(u)], map_b[static_cast<std::size_t>(v)]);
  return BoundariedGraph{std::move(g), a.boundary};
}

inline Graph glue(const BoundariedGraph& a, const BoundariedGraph& b) {
  return glue_boundaried(a, b).graph;
}

namespace detail_bnd {

inline BoundariedGraph delete_interior_vertex(const BoundariedGraph& bg, int v) {
  BoundariedGraph out;
  out.graph = delete_vertices(bg.graph, {v});
  out.boundary.reserve(bg.boundary.size());
  for (int b : bg.boundary) out.boundary.push_back(b > v ? b - 1 : b);
  return out;
}

inline BoundariedGraph delete_one_edge(const BoundariedGraph& bg, int u, int v) {
  BoundariedGraph out = bg;
  out.graph.remove_edge(u, v);
  return out;
}

// Contract edge {u, v}; a boundary endpoint prevails and keeps its label. The
// merged vertex sits in the smaller id slot, so only the boundary array needs
// redirecting when the boundary endpoint had the larger id.
inline BoundariedGraph contract_boundaried(const BoundariedGraph& bg, int u, int v) {
  int lo = std::min(u, v);
  int hi = std::max(u, v);
  BoundariedGraph out;
  out.graph = contract_edge(bg.graph, u, v);
  out.boundary.reserve(bg.boundary.size());
  for (int b : bg.boundary) {
    int x = (b == hi) ? lo : b;
    if (x > hi) --x;
    out.boundary.push_back(x);
  }
  return out;
}

// All one-step boundaried reductions, in a fixed deterministic order.
inline std::vector<BoundariedGraph> one_step_reductions(const BoundariedGraph& bg) {
  std::vector<BoundariedGraph> out;
  for (int v = 0; v < bg.graph.n; ++v)
    if (!is_boundary_vertex(bg, v)) out.push_back(delete_interior_vertex(bg, v));
  for (auto [u, v] : bg.graph.edges()) out.push_back(delete_one_edge(bg, u, v));
  for (auto [u, v] : bg.graph.edges())
    if (!(is_boundary_vertex(bg, u) && is_boundary_vertex(bg, v)))
      out.push_back(contract_boundaried(bg, u, v));
  return out;
}

}  // namespace detail_bnd

// Exhaustive reduction search for the boundaried minor relation: boundary
// vertices are never deleted and contractions keep the boundary endpoint, so
// labels survive every move.
inline bool boundaried_is_minor(const BoundariedGraph& h, const BoundariedGraph& g,
                                long long budget = default_search_budget) {
  if (h.t() != g.t())
    throw std::invalid_argument("boundaried minor test requires equal boundary sizes");
  const std::string target = boundaried_code(h);
  const int hn = h.graph.n;
  const std::size_t hm = h.graph.edge_count();
  std::set<std::string> visited;
  std::deque<BoundariedGraph> queue;
  auto push = [&](const BoundariedGraph& bg) {
    if (bg.graph.n < hn || bg.graph.edge_count() < hm) return;
    if (visited.insert(boundaried_code(bg)).second) queue.push_back(bg);
  };
  push(g);
  while (!queue.empty()) {
    if (--budget < 0) throw resource_limit_error("boundaried minor search budget exhausted");
    BoundariedGraph cur = std::move(queue.front());
    queue.pop_front();
    if (boundaried_code(cur) == target) return true;
    for (const BoundariedGraph& next : detail_bnd::one_step_reductions(cur)) push(next);
  }
  return false;
}

// Edges between boundary vertices, written as label pairs. Gluing identifies
// vertices by label, so this is the part of the graph a glue partner can see
// directly.
inline std::string boundary_edge_code(const BoundariedGraph& bg) {
  std::string out;
  for (int i = 0; i < bg.t(); ++i)
    for (int j = i + 1; j < bg.t(); ++j)
      if (bg.graph.has_edge(bg.boundary[i], bg.boundary[j])) {
        out += std::to_string(i) + '-' + std::to_string(j) + ';';
      }
  return out;
}

// The set of boundaried minors of bounded detail, as sorted canonical codes,
// plus the boundary-induced edge set. Byte equality of two signatures is
// equality of both. The boundary edges are carried separately because glue
// partners see exactly the direct edges, so classes must never merge across
// different boundary subgraphs.
struct FolioSignature {
  int detail_bound = 0;
  std::string boundary_code;
  std::vector<std::string> minors;

  bool operator==(const FolioSignature& other) const = default;

  std::string key() const {
    std::string out = "h" + std::to_string(detail_bound) + ";B" + boundary_code;
    for (const std::string& code : minors) {
      out += '|';
      out += code;
    }
    return out;
  }
};

// Collection bound for the minor set of a signature with t boundary labels
// and base detail bound h. Reductions never delete boundary vertices, so
// every collected minor keeps all t labels; a flat bound of h would leave the
// minor set empty as soon as t exceeds h, the signature would degenerate to
// the boundary edge code, and a reduction could then erase interior structure
// (a path linking two labels, say) that some glue partner needs to complete a
// member occurrence. The slack covers the footprint any occurrence of a graph
// with detail at most h leaves on this side of a glue: at most h branch sets
// lying wholly in the interior, a contracted Steiner tree linking the labels
// of each branch set that spans several of them (at most t-2 interior branch
// vertices and 2t edges in total), at most two interior witness vertices and
// three edges for each of the at most h realized pattern edges, plus every
// direct boundary edge. Any occurrence in any glued graph therefore restricts
// to a minor within this bound, so byte-equal signatures behave identically
// under every compatible glue, for every pattern of detail at most h.
inline int effective_detail_bound(int h, int t) {
  return 4 * h + 2 * t + t * (t - 1) / 2;
}

// Closure of g under one-step boundaried reductions, collecting every class
// whose detail (max of vertex and edge count) is within the effective bound.
// Reductions never increase the detail, so the closure reaches every such
// minor.
inline FolioSignature folio_signature(const BoundariedGraph& g, int h,
                                      long long budget = default_search_budget) {
  if (h < 1) throw std::invalid_argument("folio detail bound must be at least 1");
  const int h_eff = effective_detail_bound(h, g.t());
  std::set<std::string> visited;
  std::set<std::string> collected;
  std::deque<BoundariedGraph> queue;
  auto push = [&](const BoundariedGraph& bg) {
    if (visited.insert(boundaried_code(bg)).second) queue.push_back(bg);
  };
  push(g);
  while (!queue.empty()) {
    if (--budget < 0) throw resource_limit_error("folio signature budget exhausted");
    BoundariedGraph cur = std::move(queue.front());
    queue.pop_front();
    if (detail(cur.graph) <= h_eff) collected.insert(boundaried_code(cur));
    for (const BoundariedGraph& next : detail_bnd::one_step_reductions(cur)) push(next);
  }
  FolioSignature sig;
  sig.detail_bound = h;
  sig.boundary_code = boundary_edge_code(g);
  sig.minors.assign(collected.begin(), collected.end());
  return sig;
}

// One representative per (boundary size, detail bound, signature) class.
// Shared across threads within a single run; the first writer wins, so every
// caller sees the same representative for a class. Never persisted: which
// minimal graph stands for a class may vary between runs, only intra-run
// consistency matters.
class RepresentativeRegistry {
 public:
  BoundariedGraph get_or_insert(int t, int h, const FolioSignature& sig,
                                const BoundariedGraph& candidate) {
    std::string key = make_key(t, h, sig);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = entries_.try_emplace(std::move(key), Entry{t, h, sig, candidate});
    (void)inserted;
    return it->second.rep;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
  }

  // Memo for finished reductions, keyed by detail bound and the input's
  // canonical code. The reduction result depends on its input only up to
  // label-preserving isomorphism, so a hit hands every later caller the exact
  // graph the first caller got.
  std::optional<BoundariedGraph> lookup_reduced(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = reduced_.find(key);
    if (it == reduced_.end()) return std::nullopt;
    return it->second;
  }

  void store_reduced(const std::string& key, const BoundariedGraph& rep) {
    std::lock_guard<std::mutex> lock(mu_);
    reduced_.emplace(key, rep);
  }

  // Debug view: one object per entry, in deterministic key order.
  std::string to_json() const {
    std::lock_guard<std::mutex> lock(mu_);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [key, entry] : entries_) {
      nlohmann::json edges = nlohmann::json::array();
      for (auto [u, v] : entry.rep.graph.edges()) edges.push_back({u, v});
      std::ostringstream hash;
      hash << std::hex << std::hash<std::string>{}(key);
      arr.push_back({{"t", entry.t},
                     {"h", entry.h},
                     {"signature_hash", hash.str()},
                     {"representative_edges", edges},
                     {"boundary_labels", entry.rep.boundary}});
    }
    return arr.dump(2);
  }

 private:
  struct Entry {
    int t;
    int h;
    FolioSignature sig;
    BoundariedGraph rep;
  };

  static std::string make_key(int t, int h, const FolioSignature& sig) {
    return "t" + std::to_string(t) + ";" + std::to_string(h) + ";" + sig.key();
  }

  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, BoundariedGraph> reduced_;
};

// Signature computation walks the full reduction closure, so it is only
// affordable for small graphs. Larger graphs skip the signature entirely and
// stand as their own class, keyed by canonical code; that forgoes merging
// across isomorphism classes but is always sound.
inline constexpr int signature_reduction_cap = 7;

// Greedy signature-preserving reduction: repeatedly take the move (interior
// vertex deletion, edge deletion, boundary-respecting contraction) that keeps
// the folio signature intact, preferring smaller results and breaking ties by
// canonical code. At the local minimum the result is canonicalized and looked
// up in the registry, so all graphs of one class share one representative.
inline BoundariedGraph reduce_to_representative(const BoundariedGraph& g, int h,
                                                RepresentativeRegistry& reg,
                                                long long budget = default_search_budget) {
  const BoundariedGraph canon = canonical_copy(g);
  const std::string memo_key = std::to_string(h) + '|' + boundaried_code(canon);
  if (auto hit = reg.lookup_reduced(memo_key)) return *hit;
  BoundariedGraph out;
  if (g.graph.n > signature_reduction_cap) {
    FolioSignature opaque;
    opaque.detail_bound = h;
    opaque.boundary_code = boundary_edge_code(g);
    opaque.minors = {"whole:" + boundaried_code(canon)};
    out = reg.get_or_insert(g.t(), h, opaque, canon);
  } else {
    const FolioSignature target = folio_signature(g, h, budget);
    BoundariedGraph cur = g;
    bool improved = true;
    while (improved) {
      improved = false;
      BoundariedGraph best;
      std::tuple<int, std::size_t, std::string> best_rank;
      for (const BoundariedGraph& cand : detail_bnd::one_step_reductions(cur)) {
        if (folio_signature(cand, h, budget) != target) continue;
        std::tuple<int, std::size_t, std::string> rank{cand.graph.n, cand.graph.edge_count(),
                                                       boundaried_code(cand)};
        if (!improved || rank < best_rank) {
          best = cand;
          best_rank = std::move(rank);
          improved = true;
        }
      }
      if (improved) cur = std::move(best);
    }
    out = reg.get_or_insert(g.t(), h, target, canonical_copy(cur));
  }
  reg.store_reduced(memo_key, out);
  return out;
}

}  // namespace elimdist

#endif
