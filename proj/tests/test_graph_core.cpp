#include <algorithm>

#include "doctest.h"
#include "septree/action.hpp"
#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/graph.hpp"

using namespace septree;

namespace {
VertexId lv(std::int64_t x) { return VertexId(x); }  // line/finite vertex
VertexId gv(std::int64_t x, std::int64_t y) { return VertexId({x, y}); }
}  // namespace

TEST_CASE("ball on the line") {
  Graph g = line_graph();
  Ball b = ball(g, {lv(0)}, 2);
  CHECK(b.vertices == VertexList{lv(-2), lv(-1), lv(0), lv(1), lv(2)});
  CHECK(b.edges.size() == 4);
  CHECK(b.boundary == VertexList{lv(-2), lv(2)});

  Ball b0 = ball(g, {lv(0)}, 0);
  CHECK(b0.vertices == VertexList{lv(0)});
  CHECK(b0.edges.empty());
}

TEST_CASE("ball on the 3-regular tree counts by growth") {
  Graph g = regular_tree_graph(3);
  Ball b = ball(g, {g.root()}, 2);
  CHECK(b.vertices.size() == 10);  // 1 + 3 + 6
  CHECK(b.boundary.size() == 6);
}

TEST_CASE("ball is monotone under radius") {
  for (const auto& name : {std::string("line"), std::string("grid2d"), std::string("tree(3)")}) {
    Graph g = builtin_graph(name);
    Ball small = ball(g, {g.root()}, 2);
    Ball big = ball(g, {g.root()}, 3);
    VertexList restricted;
    for (const auto& [v, d] : big.distances)
      if (d <= 2) restricted.push_back(v);
    CHECK(sorted_unique(restricted) == small.vertices);
  }
}

TEST_CASE("ball rejects invalid input") {
  Graph g = line_graph();
  CHECK_THROWS_AS(ball(g, {gv(0, 0)}, 1), DomainError);
  CHECK_THROWS_AS(ball(g, {}, 1), DomainError);
  CHECK_THROWS_AS(ball(g, {lv(0)}, -1), DomainError);
}

TEST_CASE("components_minus on the line") {
  Graph g = line_graph();
  auto comps = components_minus(g, {lv(0)});
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].verdict.is_infinite());
  CHECK(comps[1].verdict.is_infinite());
  CHECK(comps[0].seed == lv(-1));
  CHECK(comps[1].seed == lv(1));

  auto gap = components_minus(g, {lv(0), lv(4)});
  REQUIRE(gap.size() == 3);
  CHECK(gap[1].verdict.is_finite());
  CHECK(gap[1].verdict.bound == 3);
  CHECK(gap[1].ports == VertexList{lv(1), lv(3)});
}

TEST_CASE("components_minus on a finite path") {
  Graph g = make_path(3);
  auto comps = components_minus(g, {lv(1)});
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].verdict.is_finite());
  CHECK(comps[0].verdict.bound == 1);
  CHECK(comps[1].verdict.bound == 1);
  CHECK(comps[0].members == VertexList{lv(0)});
}

TEST_CASE("components_minus on the grid") {
  Graph g = grid2d_graph();
  auto comps = components_minus(g, {gv(0, 0)});
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].verdict.is_infinite());

  // a 3x3 box around the origin traps the center
  VertexList ring;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      if (x || y) ring.push_back(gv(x, y));
  auto trapped = components_minus(g, ring);
  REQUIRE(trapped.size() == 2);
  CHECK(trapped[0].verdict.is_infinite());  // outside, least seed (-2,0)
  CHECK(trapped[1].verdict.is_finite());
  CHECK(trapped[1].members == VertexList{gv(0, 0)});
}

TEST_CASE("components_minus with empty separator returns the root component") {
  auto comps = components_minus(line_graph(), {});
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].verdict.is_infinite());
  CHECK(comps[0].seed == lv(0));

  auto fin = components_minus(make_path(3), {});
  REQUIRE(fin.size() == 1);
  CHECK(fin[0].verdict.bound == 3);
}

TEST_CASE("component count bound by separator degrees") {
  for (const auto& name : builtin_names()) {
    Graph g = builtin_graph(name);
    VertexList s{g.root()};
    for (const auto& u : g.neighbors(g.root())) {
      s.push_back(u);
      break;
    }
    auto comps = components_minus(g, s);
    std::size_t degsum = 0;
    for (const auto& v : s) degsum += g.neighbors(v).size();
    CHECK(comps.size() <= degsum);
  }
}

TEST_CASE("family finiteness oracles agree with brute-force escape probes") {
  struct Probe {
    Graph g;
    VertexList s;
  };
  std::vector<Probe> probes = {
      {line_graph(), {lv(-2), lv(0), lv(5)}},
      {line_graph(), {lv(3)}},
      {grid2d_graph(), {gv(0, 0), gv(1, 0), gv(0, 1)}},
      {grid2d_graph(), {gv(-1, -1), gv(2, 3)}},
  };
  for (const auto& pr : probes) {
    int spread = 0;
    for (const auto& a : pr.s)
      for (const auto& b : pr.s)
        for (std::size_t i = 0; i < a.token().size(); ++i)
          spread = std::max<int>(spread, static_cast<int>(std::llabs(a.token()[i] - b.token()[i])));
    int radius = static_cast<int>(pr.s.size()) * spread + 20;
    for (const auto& c : components_minus(pr.g, pr.s)) {
      Finiteness probe = exhaustive_escape_probe(pr.g, pr.s, c.seed, radius);
      CHECK(c.verdict.kind == probe.kind);
      if (c.verdict.is_finite()) CHECK(c.verdict.bound == probe.bound);
    }
  }

  // regular tree: ball growth is exponential, keep the probe shallow
  Graph t3 = regular_tree_graph(3);
  VertexList s3{VertexId(std::vector<std::int64_t>{0}), VertexId(std::vector<std::int64_t>{1, 2})};
  for (const auto& c : components_minus(t3, s3)) {
    Finiteness probe = exhaustive_escape_probe(t3, s3, c.seed, 12);
    CHECK(c.verdict.kind == probe.kind);
    if (c.verdict.is_finite()) CHECK(c.verdict.bound == probe.bound);
  }
}

TEST_CASE("orbits on a line ball under translations collapse to one class") {
  Graph g = line_graph();
  Ball b = ball(g, {lv(0)}, 3);
  auto classes = orbits_on_ball(g, line_action(), b, 6);
  CHECK(classes.size() == 1);
}

TEST_CASE("trivial action gives singleton classes") {
  Graph g = make_path(3);
  Ball b = ball(g, {lv(0)}, 5);
  auto classes = orbits_on_ball(g, GroupAction(), b);
  CHECK(classes.size() == 3);
}

TEST_CASE("rotation acts transitively on C4") {
  Graph g = make_cycle(4);
  GroupAction rot = finite_action(g, {{"rot", {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}});
  Ball b = ball(g, {lv(0)}, 4);
  auto classes = orbits_on_ball(g, rot, b);
  CHECK(classes.size() == 1);
}

TEST_CASE("finite_action rejects non-automorphisms") {
  Graph g = make_path(3);  // 0-1-2
  CHECK_THROWS_AS(finite_action(g, {{"bad", {{0, 0}, {1, 2}, {2, 1}}}}), DomainError);
}

TEST_CASE("morphism inverse words compose to the identity on balls") {
  Graph g = line_graph();
  GroupAction a = line_action();
  Ball b = ball(g, {lv(0)}, 4);
  Morphism t(a, {0});
  Morphism comp(a, {0, a.inverse_index(0)});
  for (const auto& v : b.vertices) {
    CHECK(comp(v) == v);
    CHECK(t.inverse(a)(t(v)) == v);
  }
}

TEST_CASE("tree action generators are tree automorphisms on a ball") {
  Graph g = regular_tree_graph(3);
  GroupAction a = regular_tree_action(3);
  Ball b = ball(g, {g.root()}, 3);
  for (std::size_t gi = 0; gi < a.size(); ++gi) {
    Morphism m(a, {static_cast<int>(gi)});
    for (const auto& e : b.edges) {
      VertexId x = m(e.first), y = m(e.second);
      CHECK(contains(g.neighbors(x), y));
    }
  }
}
