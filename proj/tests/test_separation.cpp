#include <set>

#include "doctest.h"
#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/separation.hpp"
#include "support/brute.hpp"

using namespace septree;

namespace {

VertexId lv(std::int64_t x) { return VertexId(x); }

// ((-inf, i], [i, inf)) on the line
Separation line_left(std::int64_t i) {
  return make_separation_seeds(line_graph(), {lv(i)}, {lv(i - 1)});
}
// ([i, inf), (-inf, i])
Separation line_right(std::int64_t i) {
  return make_separation_seeds(line_graph(), {lv(i)}, {lv(i + 1)});
}

}  // namespace

TEST_CASE("make_separation on the line satisfies the separation axiom on a ball") {
  Graph g = line_graph();
  Separation s = line_left(0);
  CHECK(s.order() == 1);
  Ball b = ball(g, {lv(0)}, 10);
  for (const auto& [u, v] : b.edges) {
    if (contains(s.separator(), u) || contains(s.separator(), v)) continue;
    CHECK(s.side_of(u) == s.side_of(v));  // no edge between the open sides
  }
}

TEST_CASE("neutral separations") {
  Graph g = line_graph();
  CHECK(plus_neutral(g).is_plus_neutral());
  CHECK(times_neutral(g).is_times_neutral());
  CHECK_FALSE(plus_neutral(g).is_times_neutral());
  Separation v_empty = make_separation(g, {}, [](const ComponentHandle&) { return Side::A; });
  CHECK(v_empty == plus_neutral(g));
}

TEST_CASE("plus on the line") {
  Separation l0 = line_left(0), l5 = line_left(5);
  CHECK(plus(l0, l5) == l0);
  CHECK(plus(l0, plus_neutral(line_graph())) == l0);
  CHECK(plus(l0, l0) == l0);
}

TEST_CASE("times on the line") {
  Separation l0 = line_left(0), l5 = line_left(5);
  CHECK(times(l0, l5) == l5);
  CHECK(times(l0, times_neutral(line_graph())) == l0);
  CHECK(times(l0, l0) == l0);
}

TEST_CASE("plus rejects mismatched graphs") {
  Separation x = line_left(0);
  Separation y = make_separation_seeds(make_path(3), {lv(1)}, {lv(0)});
  CHECK_THROWS_AS(plus(x, y), DomainError);
}

TEST_CASE("tightness") {
  Graph g = line_graph();
  CHECK(is_tight(line_left(0)));

  // (V, {0}): everything on side A
  Separation va = make_separation(g, {lv(0)}, [](const ComponentHandle&) { return Side::A; });
  CHECK_FALSE(is_tight(va));

  // separator {0,5}, both rays A, middle B: no single A component meets 0 and 5
  Separation split = make_separation(g, {lv(0), lv(5)}, [](const ComponentHandle& c) {
    return c.has_port(lv(1)) ? Side::B : Side::A;
  });
  CHECK_FALSE(is_tight(split));
}

TEST_CASE("elementary separations") {
  CHECK(elementary(line_graph(), lv(0)).order() == 2);
  CHECK(elementary(make_complete(3), lv(0)).order() == 2);
  Graph t3 = regular_tree_graph(3);
  CHECK(elementary(t3, t3.root()).order() == 3);
}

TEST_CASE("enumerate_tight on the line finds the two orientations") {
  auto ts = enumerate_tight(line_graph(), lv(0), 1, 5);
  REQUIRE(ts.size() == 2);
  CHECK(((ts[0] == line_left(0) && ts[1] == line_right(0)) ||
         (ts[0] == line_right(0) && ts[1] == line_left(0))));
}

TEST_CASE("enumerate_tight at the root of the 3-regular tree") {
  Graph t3 = regular_tree_graph(3);
  auto ts = enumerate_tight(t3, t3.root(), 1, 4);
  CHECK(ts.size() == 6);  // 2^3 - 2 side assignments of the three branches
}

TEST_CASE("enumerate_tight matches the exhaustive oracle on small graphs") {
  for (Graph g : {make_path(3), make_path(5), make_cycle(4), make_cycle(5), make_star(3)}) {
    auto oracle = brute::all_tight_separations(g, 3);
    std::set<Separation> got;
    for (const auto& v : g.all_vertices())
      for (const auto& t : enumerate_tight(g, v, 3, static_cast<int>(*g.vertex_count())))
        got.insert(t);
    std::set<Separation> want(oracle.begin(), oracle.end());
    CHECK(got == want);
  }
  // end vertex of P3 at order 1
  Graph p3 = make_path(3);
  auto ts = enumerate_tight(p3, lv(0), 1, 3);
  std::vector<Separation> oracle;
  for (const auto& t : brute::all_tight_separations(p3, 1))
    if (contains(t.separator(), lv(0))) oracle.push_back(t);
  CHECK(ts == oracle);
}

TEST_CASE("decompose_into_tight: tight input is a single leaf") {
  auto e = decompose_into_tight(line_left(0));
  CHECK(e.kind() == SeparationExpression::Kind::Leaf);
  CHECK(e.leaf_value() == line_left(0));
}

TEST_CASE("decompose_into_tight: two-ray separator on the line") {
  Graph g = line_graph();
  Separation x = make_separation(g, {lv(0), lv(5)}, [](const ComponentHandle& c) {
    return c.has_port(lv(1)) ? Side::B : Side::A;
  });
  auto e = decompose_into_tight(x);
  CHECK(e.kind() == SeparationExpression::Kind::Times);
  CHECK(evaluate(e) == x);
  int tight_leaves = 0, neutral_leaves = 0;
  for (const auto* leaf : e.leaves()) {
    CHECK(leaf->order() <= x.order());
    if (is_tight(*leaf)) {
      ++tight_leaves;
      CHECK(leaf->order() == 1);
    } else {
      CHECK((leaf->is_plus_neutral() || leaf->is_times_neutral()));
      ++neutral_leaves;
    }
  }
  CHECK(tight_leaves == 2);
  CHECK(neutral_leaves == 1);
}

TEST_CASE("decompose_into_tight: elementary separation on the line") {
  Graph g = line_graph();
  Separation x = elementary(g, lv(0));
  auto e = decompose_into_tight(x);
  CHECK(e.kind() == SeparationExpression::Kind::Plus);
  CHECK(evaluate(e) == x);
  int tight_leaves = 0, plus_neutrals = 0;
  for (const auto* leaf : e.leaves()) {
    if (is_tight(*leaf)) {
      ++tight_leaves;
      CHECK(leaf->order() == 1);
    } else if (leaf->is_plus_neutral()) {
      ++plus_neutrals;
    }
  }
  CHECK(tight_leaves == 2);
  CHECK(plus_neutrals == 1);
}

TEST_CASE("decompose_into_tight: corner separation detour on the line") {
  Graph g = line_graph();
  Separation x = make_separation(g, {lv(0)}, [](const ComponentHandle&) { return Side::B; });
  auto e = decompose_into_tight(x);  // ({0}, Z)
  CHECK(evaluate(e) == x);
  for (const auto* leaf : e.leaves())
    CHECK((is_tight(*leaf) || leaf->is_plus_neutral() || leaf->is_times_neutral()));
}

TEST_CASE("decompose_into_tight: ungeneratable corner separations are rejected") {
  // ({0}, V) on P3 lies outside the subsemiring generated by the tight
  // separations of order <= 1; the closure oracle certifies that.
  Graph p3 = make_path(3);
  Separation bad = make_separation(p3, {lv(0)}, [](const ComponentHandle&) { return Side::B; });
  CHECK_THROWS_AS(decompose_into_tight(bad), DomainError);
  auto closure = brute::tight_closure(p3, 1);
  CHECK_FALSE(closure.count(bad));

  Graph c4 = make_cycle(4);
  Separation bad4 = make_separation(c4, {lv(0)}, [](const ComponentHandle&) { return Side::B; });
  CHECK_THROWS_AS(decompose_into_tight(bad4), DomainError);
  auto closure4 = brute::tight_closure(c4, 1);
  CHECK_FALSE(closure4.count(bad4));
}

TEST_CASE("evaluate basics") {
  Separation x = line_left(0);
  CHECK(evaluate(SeparationExpression::leaf(x)) == x);
  auto e = SeparationExpression::plus(SeparationExpression::leaf(x),
                                      SeparationExpression::leaf(plus_neutral(line_graph())));
  CHECK(evaluate(e) == x);
}

TEST_CASE("decomposition agrees exactly with the per-order closure oracle") {
  for (Graph g : {make_path(4), make_cycle(5), make_star(3)}) {
    std::vector<std::set<Separation>> closure_at;
    for (int k = 0; k <= 3; ++k) closure_at.push_back(brute::tight_closure(g, k));
    for (const auto& x : brute::all_separations(g, 3)) {
      bool generatable = closure_at[x.order()].count(x) > 0;
      try {
        auto e = decompose_into_tight(x);
        CHECK(generatable);
        CHECK(evaluate(e) == x);
        for (const auto* leaf : e.leaves()) {
          CHECK(leaf->order() <= x.order());
          CHECK((is_tight(*leaf) || leaf->is_plus_neutral() || leaf->is_times_neutral()));
        }
      } catch (const DomainError&) {
        CHECK_FALSE(generatable);
      }
    }
  }
}

TEST_CASE("end proxies") {
  CHECK(end_proxies(line_graph(), 3).proxies.size() == 2);
  CHECK(end_proxies(grid2d_graph(), 3).proxies.size() == 1);
  CHECK(end_proxies(make_path(5), 2).proxies.empty());
}

TEST_CASE("distinguishes") {
  Graph g = line_graph();
  auto ps = end_proxies(g, 4).proxies;
  REQUIRE(ps.size() == 2);
  CHECK(distinguishes(line_left(0), ps[0], ps[1]));
  CHECK_FALSE(distinguishes(plus_neutral(g), ps[0], ps[1]));
  CHECK_FALSE(distinguishes(line_left(0), ps[0], ps[0]));
  Separation far = line_left(30);
  CHECK_THROWS_AS(distinguishes(far, ps[0], ps[1]), ResolutionError);
}

TEST_CASE("sums and products never create new end distinctions") {
  Graph g = line_graph();
  auto ps = end_proxies(g, 6).proxies;
  REQUIRE(ps.size() == 2);
  std::vector<Separation> xs = {line_left(0),    line_right(0),    line_left(2),
                                line_right(-3),  plus_neutral(g),  times_neutral(g)};
  for (const auto& x : xs)
    for (const auto& y : xs) {
      bool dx = distinguishes(x, ps[0], ps[1]);
      bool dy = distinguishes(y, ps[0], ps[1]);
      if (dx || dy) continue;
      CHECK_FALSE(distinguishes(plus(x, y), ps[0], ps[1]));
      CHECK_FALSE(distinguishes(times(x, y), ps[0], ps[1]));
    }
}

TEST_CASE("order is subadditive under plus and times") {
  brute::Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = brute::random_connected_graph(rng, 6 + rng.below(3), rng.below(5));
    Separation x = brute::random_separation(rng, g, 3);
    Separation y = brute::random_separation(rng, g, 3);
    CHECK(plus(x, y).order() <= x.order() + y.order());
    CHECK(times(x, y).order() <= x.order() + y.order());
  }
}

TEST_CASE("semiring axioms on sampled separations") {
  brute::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = brute::random_connected_graph(rng, 5 + rng.below(4), rng.below(6));
    Separation x = brute::random_separation(rng, g, 2);
    Separation y = brute::random_separation(rng, g, 2);
    Separation z = brute::random_separation(rng, g, 2);
    CHECK(plus(x, y) == plus(y, x));
    CHECK(times(x, y) == times(y, x));
    CHECK(plus(plus(x, y), z) == plus(x, plus(y, z)));
    CHECK(times(times(x, y), z) == times(x, times(y, z)));
    CHECK(times(x, plus(y, z)) == plus(times(x, y), times(x, z)));
    CHECK(plus(x, plus_neutral(g)) == x);
    CHECK(times(x, times_neutral(g)) == x);
  }
}

TEST_CASE("tight orbit catalog on the line has a single class") {
  auto cat = tight_orbit_catalog(line_graph(), line_action(), 1, 5, 12);
  CHECK(cat.representatives.size() == 1);
}

TEST_CASE("tight orbit catalog under the trivial action keeps classes apart") {
  Graph p3 = make_path(3);
  auto cat = tight_orbit_catalog(p3, GroupAction(), 1, 3, 4);
  CHECK(cat.representatives.size() == 2);  // the two orientations at the middle vertex
}

TEST_CASE("tight orbit catalog on the grid is empty at order 1") {
  auto cat = tight_orbit_catalog(grid2d_graph(), grid2d_action(), 1, 4, 4);
  CHECK(cat.representatives.empty());
}

TEST_CASE("apply_morphism translates line separations") {
  GroupAction a = line_action();
  Morphism t(a, {0});  // x -> x+1
  CHECK(apply_morphism(line_left(0), t, a) == line_left(1));
  Morphism r(a, {2});  // x -> -x
  CHECK(apply_morphism(line_left(2), r, a) == line_right(-2));
}
