#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "elimdist/annotated.hpp"
#include "elimdist/boundaried.hpp"
#include "elimdist/graph.hpp"
#include "elimdist/minors.hpp"

using namespace elimdist;

namespace {

// Single node of height h0 whose attachment is the given boundaried graph,
// with every label living at that node.
AnnotatedTree single_node(int h0, BoundariedGraph r) {
  AnnotatedTree t;
  t.parent = {-1};
  t.root = 0;
  t.h = {h0};
  t.f.assign(r.boundary.size(), 0);
  t.r_graph = std::move(r);
  return t;
}

}  // namespace

TEST_CASE("trivial annotated tree") {
  AnnotatedTree one = trivial_annotated();
  CHECK(validate_annotated(one).ok);
  CHECK(crop(one) == one);
  CHECK(canonical_encode(one) == canonical_encode(trivial_annotated()));
  CHECK(labels_at(one, 0) == std::vector<int>{1});
}

TEST_CASE("crop removes exactly the label-free subtrees") {
  SECTION("one unlabeled leaf child of a labeled root") {
    AnnotatedTree t;
    t.parent = {-1, 0};
    t.root = 0;
    t.h = {1, 0};
    t.r_graph = trivial_boundaried();
    t.f = {0};
    AnnotatedTree c = crop(t);
    CHECK(c.size() == 1);
    CHECK(c.h == std::vector<int>{1});
    CHECK(c.f == std::vector<int>{0});
    CHECK(crop(c) == c);
  }
  SECTION("fourteen-node tree with six labeled leaves keeps nine nodes") {
    // Root 0 with inner nodes 1, 2; labels 1..3 at leaves 3..5 under node 1,
    // labels 4..6 at leaves 6..8 under node 2. Five unlabeled extras: leaf 9
    // under the root, chain 10-11 under node 1 with leaf 13 below, leaf 12
    // under node 2.
    AnnotatedTree t;
    t.parent = {-1, 0, 0, 1, 1, 1, 2, 2, 2, 0, 1, 10, 2, 11};
    t.root = 0;
    t.h = {4, 3, 1, 0, 0, 0, 0, 0, 0, 0, 2, 1, 0, 0};
    Graph r(6);
    t.r_graph = make_boundaried(r, {0, 1, 2, 3, 4, 5});
    t.f = {3, 4, 5, 6, 7, 8};
    REQUIRE(validate_annotated(t).ok);
    AnnotatedTree c = crop(t);
    REQUIRE(c.size() == 9);
    CHECK(validate_annotated(c).ok);
    // Survivors in old-id order are 0,1,2,3,...,8; heights are retained.
    CHECK(c.h == std::vector<int>{4, 3, 1, 0, 0, 0, 0, 0, 0});
    CHECK(c.parent == std::vector<int>{-1, 0, 0, 1, 1, 1, 2, 2, 2});
    CHECK(c.f == std::vector<int>{3, 4, 5, 6, 7, 8});
    CHECK(crop(c) == c);
  }
  SECTION("unlabeled state is rejected") {
    AnnotatedTree t;
    t.parent = {-1};
    t.root = 0;
    t.h = {0};
    t.r_graph = BoundariedGraph{Graph(0), {}};
    CHECK_THROWS_AS(crop(t), std::invalid_argument);
  }
}

TEST_CASE("representation replaces attachments per labeled node") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  SECTION("trivial tree is untouched") {
    RepresentativeRegistry reg;
    std::optional<AnnotatedTree> r = rep_op(trivial_annotated(), k3, reg);
    REQUIRE(r.has_value());
    CHECK(*r == trivial_annotated());
  }
  SECTION("a long labeled path shrinks to its representative") {
    RepresentativeRegistry reg;
    AnnotatedTree t = single_node(0, make_boundaried(path_graph(5), {0}));
    std::optional<AnnotatedTree> r = rep_op(t, k3, reg);
    REQUIRE(r.has_value());
    CHECK(r->parent == t.parent);
    CHECK(r->h == t.h);
    CHECK(r->f == t.f);
    // The triangle is 2-connected, so the whole pendant path is pruned away.
    CHECK(r->r_graph.graph.n == 1);
    // Replacement preserves member containment under every glue partner.
    for (int plen : {1, 2}) {
      BoundariedGraph partner = make_boundaried(path_graph(plen + 1), {0});
      CHECK(in_exc(glue(r->r_graph, partner), k3) == in_exc(glue(t.r_graph, partner), k3));
    }
    BoundariedGraph tri = make_boundaried(complete_graph(3), {0});
    CHECK(in_exc(glue(r->r_graph, tri), k3) == in_exc(glue(t.r_graph, tri), k3));
    // Running the pipeline again lands on the registered representative.
    std::optional<AnnotatedTree> again = rep_op(*r, k3, reg);
    REQUIRE(again.has_value());
    CHECK(*again == *r);
  }
  SECTION("an attachment containing a family member discards the state") {
    RepresentativeRegistry reg;
    AnnotatedTree t = single_node(0, make_boundaried(complete_graph(3), {0}));
    CHECK_FALSE(rep_op(t, k3, reg).has_value());
  }
  SECTION("attachments of distinct nodes stay separate") {
    RepresentativeRegistry reg;
    AnnotatedTree t;
    t.parent = {-1, 0};
    t.root = 0;
    t.h = {1, 0};
    // Label 1 at the internal root as an isolated vertex, label 2 at the leaf
    // with a pendant path.
    Graph r(4);
    r.add_edge(1, 2);
    r.add_edge(2, 3);
    t.r_graph = make_boundaried(r, {0, 1});
    t.f = {0, 1};
    REQUIRE(validate_annotated(t).ok);
    std::optional<AnnotatedTree> out = rep_op(t, k3, reg);
    REQUIRE(out.has_value());
    CHECK(validate_annotated(*out).ok);
    CHECK(out->parent == t.parent);
    CHECK(attachment(*out, 0).graph.n == 1);
    // The pendant path at the leaf label prunes away; the isolated root label
    // is untouched. Each node keeps its own attachment.
    CHECK(attachment(*out, 1).graph.n == 1);
    CHECK(attachment(*out, 1).t() == 1);
  }
}

TEST_CASE("height filter") {
  std::vector<AnnotatedTree> entries;
  for (int height : {0, 1, 4}) {
    AnnotatedTree t = trivial_annotated();
    t.h = {height};
    entries.push_back(t);
  }
  CHECK(filter_k(entries, 1).size() == 2);
  CHECK(filter_k(entries, 0).size() == 1);
  CHECK(filter_k(entries, 4).size() == 3);
  CHECK_THROWS_AS(filter_k(entries, -1), std::invalid_argument);
}

TEST_CASE("state compression pipeline") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  SECTION("trivial singleton is a fixed point") {
    RepresentativeRegistry reg;
    Characteristic c = m_k({trivial_annotated()}, 0, 1, k3, reg);
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries[0] == trivial_annotated());
    CHECK(characteristics_equal(c, m_k(c, k3, reg)));
  }
  SECTION("relabeled-isomorphic entries collapse to one") {
    AnnotatedTree a = single_node(0, make_boundaried(path_graph(3), {0}));
    // Same state with the attachment's vertices renumbered.
    Graph g(3);
    g.add_edge(2, 1);
    g.add_edge(1, 0);
    AnnotatedTree b = single_node(0, make_boundaried(g, {2}));
    RepresentativeRegistry reg;
    Characteristic c = m_k({a, b}, 2, 1, k3, reg);
    CHECK(c.entries.size() == 1);
  }
  SECTION("idempotent on mixed entries") {
    RepresentativeRegistry reg;
    std::vector<AnnotatedTree> entries;
    entries.push_back(single_node(0, make_boundaried(path_graph(4), {0})));
    entries.push_back(trivial_annotated());
    AnnotatedTree tall = trivial_annotated();
    tall.h = {3};
    entries.push_back(tall);
    Characteristic once = m_k(entries, 2, 1, k3, reg);
    CHECK(characteristics_equal(once, m_k(once, k3, reg)));
    // The height-3 entry fell to the filter.
    for (const AnnotatedTree& e : once.entries) CHECK(e.h[e.root] <= 2);
  }
}

TEST_CASE("label permutation") {
  // Two labels: 1 at an internal root, 2 at its leaf child.
  AnnotatedTree t;
  t.parent = {-1, 0};
  t.root = 0;
  t.h = {1, 0};
  Graph r(3);
  r.add_edge(1, 2);
  t.r_graph = make_boundaried(r, {0, 1});
  t.f = {0, 1};
  REQUIRE(validate_annotated(t).ok);

  SECTION("identity") { CHECK(permute(t, {0, 1}) == t); }
  SECTION("transposition swaps f and the label map") {
    AnnotatedTree s = permute(t, {1, 0});
    CHECK(s.f == std::vector<int>{1, 0});
    CHECK(s.r_graph.boundary == std::vector<int>{1, 0});
    CHECK(permute(s, {1, 0}) == t);
  }
  SECTION("matches a manually relabeled tree") {
    AnnotatedTree manual = t;
    manual.f = {1, 0};
    manual.r_graph.boundary = {1, 0};
    CHECK(canonical_encode(permute(t, {1, 0})) == canonical_encode(manual));
    CHECK(canonical_encode(permute(t, {1, 0})).code != canonical_encode(t).code);
  }
  SECTION("arity and bijection errors") {
    CHECK_THROWS_AS(permute(t, {0}), std::invalid_argument);
    CHECK_THROWS_AS(permute(t, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(permute(t, {0, 2}), std::invalid_argument);
  }
}

TEST_CASE("canonical encoding separates states") {
  AnnotatedTree base = trivial_annotated();
  SECTION("height changes the code") {
    AnnotatedTree taller = base;
    taller.h = {1};
    CHECK(canonical_encode(base).code != canonical_encode(taller).code);
  }
  SECTION("isomorphic attachment relabel keeps the code") {
    AnnotatedTree a = single_node(0, make_boundaried(path_graph(3), {1}));
    Graph g(3);
    g.add_edge(0, 2);
    g.add_edge(2, 1);
    AnnotatedTree b = single_node(0, make_boundaried(g, {2}));
    CHECK(canonical_encode(a) == canonical_encode(b));
  }
  SECTION("label placement changes the code") {
    AnnotatedTree two_chain;
    two_chain.parent = {-1, 0};
    two_chain.root = 0;
    two_chain.h = {1, 0};
    Graph r(2);
    two_chain.r_graph = make_boundaried(r, {0, 1});
    two_chain.f = {0, 1};
    AnnotatedTree swapped = permute(two_chain, {1, 0});
    CHECK(canonical_encode(two_chain).code != canonical_encode(swapped).code);
  }
  SECTION("tree shape changes the code") {
    AnnotatedTree chain;
    chain.parent = {-1, 0, 1};
    chain.root = 0;
    chain.h = {2, 1, 0};
    Graph r(2);
    chain.r_graph = make_boundaried(r, {0, 1});
    chain.f = {1, 2};
    AnnotatedTree fork;
    fork.parent = {-1, 0, 0};
    fork.root = 0;
    fork.h = {2, 1, 0};
    fork.r_graph = chain.r_graph;
    fork.f = {1, 2};
    CHECK(canonical_encode(chain).code != canonical_encode(fork).code);
  }
}

TEST_CASE("state validation flags malformed trees") {
  SECTION("non-monotone heights") {
    AnnotatedTree t;
    t.parent = {-1, 0};
    t.root = 0;
    t.h = {0, 0};
    Graph r(1);
    t.r_graph = make_boundaried(r, {0});
    t.f = {1};
    CHECK_FALSE(validate_annotated(t).ok);
  }
  SECTION("label mapped outside the tree") {
    AnnotatedTree t = trivial_annotated();
    t.f = {5};
    CHECK_FALSE(validate_annotated(t).ok);
  }
  SECTION("attachment component without boundary") {
    AnnotatedTree t = trivial_annotated();
    t.r_graph = BoundariedGraph{Graph(2), {0}};
    CHECK_FALSE(validate_annotated(t).ok);
  }
  SECTION("attachment component spanning two labeled nodes") {
    AnnotatedTree t;
    t.parent = {-1, 0};
    t.root = 0;
    t.h = {1, 0};
    Graph r(2);
    r.add_edge(0, 1);
    t.r_graph = make_boundaried(r, {0, 1});
    t.f = {0, 1};
    CHECK_FALSE(validate_annotated(t).ok);
  }
}

TEST_CASE("characteristic JSON dump") {
  ObstructionFamily k3 = make_family({complete_graph(3)});
  RepresentativeRegistry reg;
  Characteristic c =
      m_k({trivial_annotated(), single_node(0, make_boundaried(path_graph(3), {0}))}, 1, 1, k3,
          reg);
  nlohmann::json dump = nlohmann::json::parse(characteristic_to_json(c));
  CHECK(dump["k"] == 1);
  CHECK(dump["t"] == 1);
  REQUIRE(dump["entries"].is_array());
  REQUIRE(dump["entries"].size() == c.entries.size());
  for (const auto& entry : dump["entries"]) {
    CHECK(entry.contains("parent"));
    CHECK(entry.contains("h"));
    CHECK(entry.contains("f"));
    CHECK(entry.contains("r_edges"));
    CHECK(entry.contains("r_boundary"));
  }
}
