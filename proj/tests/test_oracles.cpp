#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "elimdist/annotated.hpp"
#include "elimdist/boundaried.hpp"
#include "elimdist/graph.hpp"
#include "elimdist/minors.hpp"
#include "elimdist/oracles.hpp"

using namespace elimdist;

namespace {

Graph random_graph(int n, double p, std::mt19937& rng) {
  Graph g(n);
  std::bernoulli_distribution coin(p);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

std::vector<Graph> iso_classes_up_to(int n_max) {
  std::map<std::string, Graph> by_code;
  for (int n = 1; n <= n_max; ++n) {
    int pairs = n * (n - 1) / 2;
    for (long long mask = 0; mask < (1LL << pairs); ++mask) {
      Graph g(n);
      int bit = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
          if (mask >> bit & 1) g.add_edge(u, v);
      by_code.emplace(canonical_form(g).code, g);
    }
  }
  std::vector<Graph> out;
  for (auto& [code, g] : by_code) out.push_back(g);
  return out;
}

// Valid elimination forest for K_3: one internal root, the rest one leaf.
EliminationForest k3_forest() {
  EliminationForest ef;
  ef.parent = {-1, 0};
  ef.chi = {{0}, {1, 2}};
  return ef;
}

}  // namespace

TEST_CASE("elimination distance oracle") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  SECTION("members have distance zero") {
    CHECK(ed_oracle(path_graph(6), k3) == 0);
    CHECK(ed_oracle(Graph(4), k3) == 0);
  }
  SECTION("pinned small values") {
    CHECK(ed_oracle(complete_graph(3), k3) == 1);
    CHECK(ed_oracle(cycle_graph(4), k3) == 1);
    CHECK(ed_oracle(complete_graph(4), k3) == 2);
    CHECK(ed_oracle(complete_graph(5), k3) == 3);
  }
  SECTION("disconnected graphs take the component maximum") {
    Graph g = disjoint_union(complete_graph(4), cycle_graph(4));
    CHECK(ed_oracle(g, k3) == 2);
    CHECK(ed_oracle(disjoint_union(complete_graph(4), complete_graph(3)), k3) == 2);
  }
  SECTION("isomorphism invariance") {
    std::mt19937 rng(20240831);
    for (int trial = 0; trial < 25; ++trial) {
      Graph g = random_graph(7, 0.4, rng);
      std::vector<int> perm(7);
      for (int v = 0; v < 7; ++v) perm[v] = v;
      std::shuffle(perm.begin(), perm.end(), rng);
      CHECK(ed_oracle(g, k3) == ed_oracle(apply_permutation(g, perm), k3));
    }
  }
  SECTION("deleting a vertex lowers the distance by at most one") {
    std::mt19937 rng(20240832);
    for (int trial = 0; trial < 15; ++trial) {
      Graph g = random_graph(6, 0.45, rng);
      int base = ed_oracle(g, k3);
      for (int v = 0; v < g.n; ++v) {
        int sub = ed_oracle(delete_vertices(g, {v}), k3);
        CHECK(sub <= base);
        CHECK(base <= sub + 1);
      }
    }
  }
  SECTION("cap is enforced") {
    CHECK_THROWS_AS(ed_oracle(Graph(11), k3), resource_limit_error);
    CHECK_NOTHROW(ed_oracle(Graph(11), k3, 12));
  }
}

TEST_CASE("treedepth oracle") {
  CHECK(td_oracle(Graph(0)) == 0);
  CHECK(td_oracle(Graph(1)) == 1);
  CHECK(td_oracle(path_graph(4)) == 3);
  CHECK(td_oracle(path_graph(7)) == 3);
  CHECK(td_oracle(path_graph(8)) == 4);
  CHECK(td_oracle(complete_graph(5)) == 5);
  CHECK(td_oracle(Graph(6)) == 1);
  SECTION("upper-bounds every family elimination distance") {
    ObstructionFamily k3 = make_family({complete_graph(3)});
    ObstructionFamily k4 = make_family({complete_graph(4)});
    std::mt19937 rng(20240833);
    for (int trial = 0; trial < 20; ++trial) {
      Graph g = random_graph(6, 0.4, rng);
      int td = td_oracle(g);
      CHECK(ed_oracle(g, k3) <= td);
      CHECK(ed_oracle(g, k4) <= td);
    }
  }
}

TEST_CASE("annotated elimination distance oracle") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  SECTION("empty annotation set reduces to the plain distance") {
    std::mt19937 rng(20240834);
    for (int trial = 0; trial < 15; ++trial) {
      Graph g = random_graph(6, 0.4, rng);
      CHECK(annotated_ed_oracle(g, {}, k3) == ed_oracle(g, k3));
    }
  }
  SECTION("annotated vertices must become internal") {
    CHECK(annotated_ed_oracle(complete_graph(2), {0}, k3) == 1);
    CHECK(annotated_ed_oracle(complete_graph(2), {0, 1}, k3) == 2);
    CHECK(annotated_ed_oracle(path_graph(3), {1}, k3) == 1);
    // A member of the class with one annotated vertex needs one deletion.
    CHECK(annotated_ed_oracle(path_graph(5), {2}, k3) == 1);
  }
  SECTION("annotation only ever raises the value") {
    std::mt19937 rng(20240835);
    for (int trial = 0; trial < 15; ++trial) {
      Graph g = random_graph(5, 0.4, rng);
      std::uniform_int_distribution<int> pick(0, 4);
      std::vector<int> s0{pick(rng)};
      CHECK(annotated_ed_oracle(g, s0, k3) >= ed_oracle(g, k3));
    }
  }
}

TEST_CASE("forest validation") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  Graph tri = complete_graph(3);
  SECTION("valid instance") { CHECK(validate_forest(tri, k3, k3_forest()).ok); }
  SECTION("leaf holding a family minor") {
    EliminationForest flat;
    flat.parent = {-1};
    flat.chi = {{0, 1, 2}};
    ValidationReport report = validate_forest(tri, k3, flat);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("family minor") != std::string::npos);
  }
  SECTION("edge between incomparable nodes") {
    Graph p3 = path_graph(3);
    EliminationForest ef;
    ef.parent = {-1, 0, 0};
    ef.chi = {{1}, {0}, {2}};
    CHECK(validate_forest(p3, k3, ef).ok);
    EliminationForest bad;
    bad.parent = {-1, 0, 0};
    bad.chi = {{0}, {1}, {2}};  // edge 1-2 crosses the two leaves
    ValidationReport report = validate_forest(p3, k3, bad);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("incomparable") != std::string::npos);
  }
  SECTION("partition violations") {
    EliminationForest dup = k3_forest();
    dup.chi[1] = {0, 1};
    CHECK_FALSE(validate_forest(tri, k3, dup).ok);
    EliminationForest missing = k3_forest();
    missing.chi[1] = {1};
    CHECK_FALSE(validate_forest(tri, k3, missing).ok);
  }
  SECTION("internal node with a large set") {
    Graph p4 = path_graph(4);
    EliminationForest ef;
    ef.parent = {-1, 0};
    ef.chi = {{0, 1}, {2, 3}};
    ValidationReport report = validate_forest(p4, k3, ef);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("single vertex") != std::string::npos);
  }
  SECTION("disconnected subtree") {
    // P_3 = 0-1-2 rooted at vertex 1 with one leaf {0, 2}: both edges join
    // ancestor and descendant, but the leaf's own set is disconnected.
    Graph p3 = path_graph(3);
    EliminationForest ef;
    ef.parent = {-1, 0};
    ef.chi = {{1}, {0, 2}};
    ValidationReport report = validate_forest(p3, k3, ef);
    CHECK_FALSE(report.ok);
    CHECK(report.message.find("disconnected") != std::string::npos);
  }
}

TEST_CASE("forest height and serialization") {
  CHECK(forest_height(k3_forest()) == 1);
  EliminationForest leaves;
  leaves.parent = {-1, -1};
  leaves.chi = {{0}, {1, 2}};
  CHECK(forest_height(leaves) == 0);
  SECTION("round trip") {
    EliminationForest ef = k3_forest();
    EliminationForest back = parse_forest(serialize_forest(ef, 3));
    CHECK(back.parent == ef.parent);
    CHECK(back.chi == ef.chi);
  }
  SECTION("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_forest("t 0 -1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_forest("s ef 1 3\nt 5 -1 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_forest("s ef 1 3\nx 0\n"), std::invalid_argument);
  }
}

TEST_CASE("partition-based minor oracle") {
  CHECK(minor_oracle(complete_graph(2), complete_graph(2)));
  CHECK_FALSE(minor_oracle(complete_graph(3), complete_bipartite(1, 3)));
  CHECK(minor_oracle(complete_graph(3), cycle_graph(5)));
  CHECK_THROWS_AS(minor_oracle(complete_graph(3), Graph(9)), resource_limit_error);
  CHECK_THROWS_AS(minor_oracle(complete_graph(6), Graph(6)), resource_limit_error);
  SECTION("agrees with the search engine on exhaustive small pairs") {
    std::vector<Graph> patterns = iso_classes_up_to(4);
    std::vector<Graph> hosts = iso_classes_up_to(5);
    for (const Graph& h : patterns)
      for (const Graph& g : hosts) REQUIRE(minor_oracle(h, g) == is_minor(h, g));
  }
  SECTION("agrees on a sample of larger hosts") {
    std::mt19937 rng(20240836);
    for (int trial = 0; trial < 10; ++trial) {
      Graph h = random_graph(4, 0.5, rng);
      Graph g = random_graph(7, 0.35, rng);
      REQUIRE(minor_oracle(h, g) == is_minor(h, g));
    }
  }
}

TEST_CASE("exhaustive characteristic enumeration") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  SECTION("trivial boundaried graph yields the trivial state") {
    std::vector<AnnotatedTree> raw = charstar_oracle(trivial_boundaried(), k3, 2);
    bool found = false;
    for (const AnnotatedTree& e : raw) {
      CHECK(validate_annotated(e).ok);
      if (canonical_encode(e) == canonical_encode(trivial_annotated())) found = true;
    }
    CHECK(found);
  }
  SECTION("fully labeled edge keeps the one-leaf state") {
    BoundariedGraph k2 = make_boundaried(complete_graph(2), {0, 1});
    std::vector<AnnotatedTree> raw = charstar_oracle(k2, k3, 2);
    AnnotatedTree one_leaf;
    one_leaf.parent = {-1};
    one_leaf.root = 0;
    one_leaf.h = {0};
    one_leaf.r_graph = k2;
    one_leaf.f = {0, 0};
    std::string want = canonical_encode(one_leaf).code;
    bool found = false;
    for (const AnnotatedTree& e : raw)
      if (canonical_encode(e).code == want) found = true;
    CHECK(found);
  }
  SECTION("minimum entry height is the elimination distance") {
    std::vector<BoundariedGraph> corpus = {
        make_boundaried(path_graph(4), {0}),
        make_boundaried(cycle_graph(4), {1}),
        make_boundaried(complete_graph(3), {0, 1}),
        make_boundaried(complete_graph(4), {0}),
    };
    for (const BoundariedGraph& bg : corpus) {
      int k = 4;
      std::vector<AnnotatedTree> raw = charstar_oracle(bg, k3, k);
      REQUIRE_FALSE(raw.empty());
      int best = k + 1;
      for (const AnnotatedTree& e : raw) {
        REQUIRE(validate_annotated(e).ok);
        best = std::min(best, e.h[static_cast<std::size_t>(e.root)]);
      }
      CHECK(best == ed_oracle(bg.graph, k3));
    }
  }
  SECTION("precondition checks") {
    CHECK_THROWS_AS(charstar_oracle(BoundariedGraph{Graph(2), {0}}, k3, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(charstar_oracle(BoundariedGraph{complete_graph(2), {}}, k3, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(charstar_oracle(make_boundaried(complete_graph(7), {0}), k3, 2),
                    resource_limit_error);
  }
}

TEST_CASE("compression pipeline is order-insensitive on real states") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  int k = 3;
  std::vector<BoundariedGraph> corpus = {
      make_boundaried(path_graph(4), {0, 3}),
      make_boundaried(cycle_graph(4), {0}),
      make_boundaried(complete_graph(4), {0, 1}),
  };
  for (const BoundariedGraph& bg : corpus) {
    std::vector<AnnotatedTree> raw = charstar_oracle(bg, k3, k);
    // Decorate with an unlabeled leaf under each root whose height allows it,
    // so the crop step has work to do.
    std::vector<AnnotatedTree> inputs = raw;
    for (const AnnotatedTree& e : raw) {
      if (e.h[static_cast<std::size_t>(e.root)] < 1) continue;
      AnnotatedTree decorated = e;
      decorated.parent.push_back(e.root);
      decorated.h.push_back(0);
      inputs.push_back(decorated);
    }
    RepresentativeRegistry reg;
    auto dedup_codes = [](const std::vector<AnnotatedTree>& entries) {
      std::set<std::string> codes;
      for (const AnnotatedTree& e : entries) codes.insert(canonical_encode(e).code);
      return codes;
    };
    // The three stages in each of the six orders; crop requires labels, which
    // every input has, and filter/rep never remove them.
    auto run = [&](int order) {
      std::vector<AnnotatedTree> cur = inputs;
      auto apply_crop = [&]() {
        for (AnnotatedTree& e : cur) e = crop(e);
      };
      auto apply_rep = [&]() {
        std::vector<AnnotatedTree> next;
        for (const AnnotatedTree& e : cur)
          if (std::optional<AnnotatedTree> r = rep_op(e, k3, reg)) next.push_back(*r);
        cur = std::move(next);
      };
      auto apply_filter = [&]() { cur = filter_k(cur, k); };
      switch (order) {
        case 0: apply_crop(); apply_rep(); apply_filter(); break;
        case 1: apply_crop(); apply_filter(); apply_rep(); break;
        case 2: apply_rep(); apply_crop(); apply_filter(); break;
        case 3: apply_rep(); apply_filter(); apply_crop(); break;
        case 4: apply_filter(); apply_crop(); apply_rep(); break;
        case 5: apply_filter(); apply_rep(); apply_crop(); break;
      }
      return dedup_codes(cur);
    };
    std::set<std::string> base = run(0);
    for (int order = 1; order < 6; ++order) CHECK(run(order) == base);
  }
}

TEST_CASE("equal representatives imply equal glued distances") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  std::mt19937 rng(20240837);
  auto random_member = [&](int n, int t) {
    while (true) {
      Graph g = random_graph(n, 0.35, rng);
      if (!in_exc(g, k3)) continue;
      std::vector<int> ids(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) ids[static_cast<std::size_t>(v)] = v;
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(static_cast<std::size_t>(t));
      return make_boundaried(std::move(g), std::move(ids));
    }
  };
  int collisions = 0;
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int t = 1 + static_cast<int>(rng() % 2);
    BoundariedGraph g1 = random_member(3 + static_cast<int>(rng() % 2), t);
    BoundariedGraph g1p = random_member(3 + static_cast<int>(rng() % 2), t);
    BoundariedGraph g2 = random_member(3, t);
    // Align boundary-induced edges so gluing is defined for both pairs.
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j) {
        bool want = g1.graph.has_edge(g1.boundary[i], g1.boundary[j]);
        for (BoundariedGraph* other : {&g1p, &g2}) {
          bool has = other->graph.has_edge(other->boundary[i], other->boundary[j]);
          if (has == want) continue;
          if (want)
            other->graph.add_edge(other->boundary[i], other->boundary[j]);
          else
            other->graph.remove_edge(other->boundary[i], other->boundary[j]);
        }
      }
    if (!in_exc(g1.graph, k3) || !in_exc(g1p.graph, k3)) continue;
    ++checked;
    RepresentativeRegistry reg;
    if (!(reduce_to_representative(g1, k3.ell_f, reg) ==
          reduce_to_representative(g1p, k3.ell_f, reg)))
      continue;
    ++collisions;
    REQUIRE(ed_oracle(glue(g1, g2), k3) == ed_oracle(glue(g1p, g2), k3));
  }
  INFO("checked " << checked << " triples, " << collisions << " collisions");
  CHECK(collisions >= 50);
}
