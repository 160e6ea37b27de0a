#ifndef ELIMDIST_WALLS_HPP
#define ELIMDIST_WALLS_HPP

// Wall test instances and the combinatorics built on them: elementary wall
// generation, central subwalls, canonical partitions, bidimensionality
// counts, and subwall selection avoiding a vertex set.  An elementary wall
// of odd height r comes from a (2r x r)-grid by deleting every vertical
// edge whose column plus row is odd and pruning the two degree-one corners
// that this leaves; the result is planar and subcubic with 2r^2-2 vertices,
// 8r-10 of them on the perimeter.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace elimdist {

// A wall of odd height r.  Horizontal paths are the rows, bottom first;
// vertical paths are the column-pair zigzags, left to right, each listed in
// path order from its bottom endpoint.  Pegs are the degree-two perimeter
// vertices and corners the four endpoints of the two outermost vertical
// paths.  coords records each vertex's grid cell (column, row), columns in
// [1, 2r] and rows in [1, r]; subwall extraction renormalizes the frame, so
// a wall's own cell parity may mirror the generator's.
struct Wall {
  Graph graph;
  int r = 0;
  std::vector<std::vector<int>> horizontal_paths;
  std::vector<std::vector<int>> vertical_paths;
  std::vector<int> pegs;
  std::vector<int> corners;
  std::vector<std::pair<int, int>> coords;
};

// Grid-aligned partition of a wall's vertices: one two-vertex bag where
// vertical path i crosses horizontal path j, for i and j strictly inside
// the frame, and one external bag holding the rest (the perimeter).
struct CanonicalPartition {
  std::map<std::pair<int, int>, std::vector<int>> internal_bags;
  std::vector<int> external_bag;
};

namespace detail_walls {

// Assemble a Wall of height h from grid cells with a given adjacency rule.
// Cells are (column, row) pairs covering columns [1, 2h] and rows [1, h];
// the rule answers whether two grid-adjacent cells are joined.  Degree-one
// cells are pruned iteratively, survivors are numbered in column-major
// order, and the path structure is rebuilt by walking the edges.
template <typename EdgeRule>
Wall assemble(int h, std::set<std::pair<int, int>> cells, EdgeRule joined) {
  auto cell_neighbors = [&](std::pair<int, int> c) {
    std::vector<std::pair<int, int>> out;
    int x = c.first, y = c.second;
    for (std::pair<int, int> d : {std::pair<int, int>{x - 1, y},
                                  {x + 1, y},
                                  {x, y - 1},
                                  {x, y + 1}})
      if (cells.count(d) && joined(c, d)) out.push_back(d);
    return out;
  };
  for (bool pruned = true; pruned;) {
    pruned = false;
    for (auto it = cells.begin(); it != cells.end();) {
      if (cell_neighbors(*it).size() <= 1) {
        it = cells.erase(it);
        pruned = true;
      } else {
        ++it;
      }
    }
  }
  if (cells.empty()) throw std::logic_error("wall assembly pruned every cell");

  Wall w;
  w.r = h;
  std::map<std::pair<int, int>, int> id;
  for (const std::pair<int, int>& c : cells) {
    id[c] = static_cast<int>(w.coords.size());
    w.coords.push_back(c);
  }
  w.graph = Graph(static_cast<int>(cells.size()));
  for (const std::pair<int, int>& c : cells)
    for (const std::pair<int, int>& d : cell_neighbors(c))
      if (c < d) w.graph.add_edge(id[c], id[d]);

  for (int y = 1; y <= h; ++y) {
    std::vector<int> row;
    for (int x = 1; x <= 2 * h; ++x)
      if (id.count({x, y})) row.push_back(id[{x, y}]);
    w.horizontal_paths.push_back(std::move(row));
  }
  for (int p = 0; p < h; ++p) {
    int a = 2 * p + 1, b = 2 * p + 2;
    int y_low = 0, y_top = 0;
    for (int y = 1; y <= h; ++y)
      if (id.count({a, y}) || id.count({b, y})) {
        if (y_low == 0) y_low = y;
        y_top = y;
      }
    auto rises = [&](int c, int y) {
      return id.count({c, y}) && id.count({c, y + 1}) &&
             joined({c, y}, {c, y + 1});
    };
    int c = rises(a, y_low) ? a : b;
    if (!rises(c, y_low)) throw std::logic_error("wall column pair has no upward start");
    int y = y_low;
    std::vector<int> zig{id[{c, y}]};
    while (y < y_top) {
      if (rises(c, y)) {
        ++y;
      } else {
        c = (c == a) ? b : a;
      }
      zig.push_back(id[{c, y}]);
    }
    w.vertical_paths.push_back(std::move(zig));
  }

  std::set<int> boundary(w.horizontal_paths.front().begin(), w.horizontal_paths.front().end());
  boundary.insert(w.horizontal_paths.back().begin(), w.horizontal_paths.back().end());
  boundary.insert(w.vertical_paths.front().begin(), w.vertical_paths.front().end());
  boundary.insert(w.vertical_paths.back().begin(), w.vertical_paths.back().end());
  for (int v : boundary)
    if (w.graph.degree(v) == 2) w.pegs.push_back(v);
  w.corners = {w.vertical_paths.front().front(), w.vertical_paths.front().back(),
               w.vertical_paths.back().front(), w.vertical_paths.back().back()};
  return w;
}

// Extract the elementary h-subwall spanning h consecutive rows starting at
// row index row_lo and h consecutive column pairs starting at pair index
// pair_lo (both zero-based), renormalized to its own frame.
inline Wall window(const Wall& w, int row_lo, int pair_lo, int h) {
  std::set<std::pair<int, int>> cells;
  std::map<std::pair<int, int>, int> old_id;
  for (int v = 0; v < w.graph.n; ++v) {
    auto [x, y] = w.coords[static_cast<std::size_t>(v)];
    int nx = x - 2 * pair_lo, ny = y - row_lo;
    if (1 <= nx && nx <= 2 * h && 1 <= ny && ny <= h) {
      cells.insert({nx, ny});
      old_id[{nx, ny}] = v;
    }
  }
  auto joined = [&](std::pair<int, int> c, std::pair<int, int> d) {
    return w.graph.has_edge(old_id.at(c), old_id.at(d));
  };
  return assemble(h, std::move(cells), joined);
}

}  // namespace detail_walls

// The elementary wall of odd height r: 2r^2-2 vertices, subcubic, planar,
// every finite face bounded by six edges.
inline Wall elementary_wall(int r) {
  if (r < 3 || r % 2 == 0)
    throw std::invalid_argument("wall height must be an odd integer of at least 3");
  std::set<std::pair<int, int>> cells;
  for (int x = 1; x <= 2 * r; ++x)
    for (int y = 1; y <= r; ++y) cells.insert({x, y});
  auto joined = [](std::pair<int, int> c, std::pair<int, int> d) {
    if (c.second == d.second) return true;               // horizontal edges all survive
    return (c.first + std::min(c.second, d.second)) % 2 == 0;  // vertical edges by parity
  };
  return detail_walls::assemble(r, std::move(cells), joined);
}

// Vertices of the cycle bounding the wall's infinite face: the top and
// bottom rows together with the two outermost zigzags.  Sorted.
inline std::vector<int> wall_perimeter(const Wall& w) {
  std::set<int> out(w.horizontal_paths.front().begin(), w.horizontal_paths.front().end());
  out.insert(w.horizontal_paths.back().begin(), w.horizontal_paths.back().end());
  out.insert(w.vertical_paths.front().begin(), w.vertical_paths.front().end());
  out.insert(w.vertical_paths.back().begin(), w.vertical_paths.back().end());
  return {out.begin(), out.end()};
}

// The central q-subwall: peel (r-q)/2 layers off the outside, pruning the
// degree-one stubs each peel leaves, which lands on the centered window of
// q rows and q column pairs.
inline Wall central_subwall(const Wall& w, int q) {
  if (q < 3 || q % 2 == 0 || q > w.r)
    throw std::invalid_argument("central subwall height must be odd, at least 3, at most the wall height");
  int d = (w.r - q) / 2;
  return detail_walls::window(w, d, d, q);
}

// The canonical partition: internal bag (i, j), for i, j in [2, r-1], is
// the crossing of vertical path i with horizontal path j (two horizontally
// adjacent vertices in an elementary wall), and the external bag is
// everything else, which is exactly the perimeter.
inline CanonicalPartition canonical_partition(const Wall& w) {
  CanonicalPartition out;
  std::set<int> used;
  for (int i = 2; i <= w.r - 1; ++i) {
    std::set<int> column(w.vertical_paths[static_cast<std::size_t>(i - 1)].begin(),
                         w.vertical_paths[static_cast<std::size_t>(i - 1)].end());
    for (int j = 2; j <= w.r - 1; ++j) {
      std::vector<int> bag;
      for (int v : w.horizontal_paths[static_cast<std::size_t>(j - 1)])
        if (column.count(v)) bag.push_back(v);
      used.insert(bag.begin(), bag.end());
      out.internal_bags[{i, j}] = std::move(bag);
    }
  }
  for (int v = 0; v < w.graph.n; ++v)
    if (!used.count(v)) out.external_bag.push_back(v);
  return out;
}

// Number of internal bags that the vertex set meets.
inline int bidimensionality(const CanonicalPartition& partition, const std::vector<int>& x) {
  std::set<int> marks(x.begin(), x.end());
  int count = 0;
  for (const auto& [cell, bag] : partition.internal_bags)
    for (int v : bag)
      if (marks.count(v)) {
        ++count;
        break;
      }
  return count;
}

// Largest odd subwall whose row-and-column-pair window misses s entirely:
// heights are tried from r downward and windows bottom-left first, so the
// result is deterministic.  Returns nothing when every 3x3 window is hit.
// This is a simpler sufficient construction than iterated single-path
// removal: it can miss subwalls that survive as subdivisions across dropped
// rows, which the elementary-only representation cannot express.
inline std::optional<Wall> subwall_avoiding(const Wall& w, const std::vector<int>& s) {
  std::set<std::pair<int, int>> hit;
  for (int v : s) {
    w.graph.require_vertex(v);
    hit.insert(w.coords[static_cast<std::size_t>(v)]);
  }
  if (hit.empty()) return w;
  for (int h = w.r; h >= 3; h -= 2) {
    for (int row_lo = 0; row_lo + h <= w.r; ++row_lo) {
      for (int pair_lo = 0; pair_lo + h <= w.r; ++pair_lo) {
        bool clean = true;
        for (const std::pair<int, int>& c : hit) {
          int nx = c.first - 2 * pair_lo, ny = c.second - row_lo;
          if (1 <= nx && nx <= 2 * h && 1 <= ny && ny <= h) {
            clean = false;
            break;
          }
        }
        if (clean) return detail_walls::window(w, row_lo, pair_lo, h);
      }
    }
  }
  return std::nullopt;
}

}  // namespace elimdist

#endif
