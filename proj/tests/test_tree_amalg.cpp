#include "doctest.h"
#include "septree/catalog.hpp"
#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/separation.hpp"
#include "septree/tree_amalg.hpp"
#include "support/brute.hpp"

using namespace septree;

namespace {

VertexId lv(std::int64_t x) { return VertexId(x); }

// rooted ball isomorphism by backtracking with degree/distance classes
bool balls_isomorphic(const Ball& x, const Ball& y) {
  if (x.vertices.size() != y.vertices.size() || x.edges.size() != y.edges.size()) return false;
  if (x.centers.size() != 1 || y.centers.size() != 1) return false;
  std::map<VertexId, VertexList> ax, ay;
  for (const auto& [u, v] : x.edges) {
    ax[u].push_back(v);
    ax[v].push_back(u);
  }
  for (const auto& [u, v] : y.edges) {
    ay[u].push_back(v);
    ay[v].push_back(u);
  }
  std::map<VertexId, VertexId> fwd, bwd;
  std::function<bool(std::size_t)> extend = [&](std::size_t idx) -> bool {
    if (idx == x.vertices.size()) return true;
    VertexId v = x.vertices[idx];
    if (fwd.count(v)) return extend(idx + 1);
    for (const auto& w : y.vertices) {
      if (bwd.count(w)) continue;
      if (x.distance_of(v) != y.distance_of(w)) continue;
      if (ax[v].size() != ay[w].size()) continue;
      bool compatible = true;
      for (const auto& u : ax[v])
        if (fwd.count(u) && !contains(ay[w], fwd[u])) compatible = false;
      for (const auto& u : ay[w])
        if (bwd.count(u) && !contains(ax[v], bwd[u])) compatible = false;
      if (!compatible) continue;
      fwd[v] = w;
      bwd[w] = v;
      if (extend(idx + 1)) return true;
      fwd.erase(v);
      bwd.erase(w);
    }
    return false;
  };
  fwd[x.centers.front()] = y.centers.front();
  bwd[y.centers.front()] = x.centers.front();
  return extend(0);
}

}  // namespace

TEST_CASE("double-ray amalgam is ball-isomorphic to the line") {
  AmalgamGraph a = construct_amalgam(catalog::double_ray());
  for (int r : {1, 2, 4, 8, 12}) {
    Ball mine = ball(a.graph(), {a.graph().root()}, r);
    Ball line = ball(line_graph(), {lv(0)}, r);
    CHECK(mine.vertices.size() == line.vertices.size());
    CHECK(mine.edges.size() == line.edges.size());
    CHECK(balls_isomorphic(mine, line));
  }
}

TEST_CASE("self-amalgamated double ray matches the line as well") {
  AmalgamGraph a = construct_amalgam(catalog::double_ray_swap());
  Ball mine = ball(a.graph(), {a.graph().root()}, 6);
  Ball line = ball(line_graph(), {lv(0)}, 6);
  CHECK(balls_isomorphic(mine, line));
}

TEST_CASE("full-adhesion single-label amalgam reproduces its first factor") {
  AmalgamSpec spec = catalog::trivial_full_adhesion();
  AmalgamGraph a = construct_amalgam(spec);
  REQUIRE(a.graph().is_finite());
  Ball mine = ball(a.graph(), {a.graph().root()}, 4);
  Ball factor = ball(spec.g1, {spec.g1.root()}, 4);
  CHECK(balls_isomorphic(mine, factor));
}

TEST_CASE("two claws glued along their leaves subdivide the 3-regular tree") {
  AmalgamGraph a = construct_amalgam(catalog::subdivided_tree3());
  Ball b = ball(a.graph(), {a.graph().root()}, 3);
  std::map<VertexId, int> deg;
  for (const auto& [u, v] : b.edges) {
    deg[u]++;
    deg[v]++;
  }
  int threes = 0, twos = 0;
  for (const auto& v : b.vertices) {
    if (b.distance_of(v) == 3) continue;  // boundary degrees are truncated
    if (deg[v] == 3)
      ++threes;
    else if (deg[v] == 2)
      ++twos;
    else
      CHECK(false);
  }
  CHECK(threes > 0);  // claw centers
  CHECK(twos > 0);    // merged leaf pairs
}

TEST_CASE("claw and point glue to the 3-regular tree") {
  AmalgamGraph a = construct_amalgam(catalog::claw_point_tree3());
  for (int r : {2, 4, 6}) {
    Ball mine = ball(a.graph(), {a.graph().root()}, r);
    Graph t3 = regular_tree_graph(3);
    Ball target = ball(t3, {t3.root()}, r);
    CHECK(mine.vertices.size() == target.vertices.size());
    CHECK(balls_isomorphic(mine, target));
  }
}

TEST_CASE("ladder amalgam matches the ladder family") {
  AmalgamGraph a = construct_amalgam(catalog::ladder_squares());
  for (int r : {2, 4, 8}) {
    Ball mine = ball(a.graph(), {a.graph().root()}, r);
    Ball target = ball(ladder_graph(), {ladder_graph().root()}, r);
    CHECK(balls_isomorphic(mine, target));
  }
}

TEST_CASE("identification sizes") {
  AmalgamGraph a = construct_amalgam(catalog::double_ray());
  Ball b = ball(a.graph(), {a.graph().root()}, 3);
  for (const auto& v : b.vertices) {
    auto rec = identification(a, v);
    CHECK(rec.size() == 2);  // every double-ray vertex is a glued adhesion pair
  }
  CHECK(has_finite_identification(a, 2, 4));
  CHECK_FALSE(has_finite_identification(a, 1, 4));

  AmalgamGraph lad = construct_amalgam(catalog::ladder_squares());
  bool saw_single = false, saw_double = false;
  for (const auto& v : ball(lad.graph(), {lad.graph().root()}, 2).vertices) {
    auto rec = identification(lad, v);
    if (rec.size() == 1) saw_single = true;
    if (rec.size() == 2) saw_double = true;
  }
  CHECK(saw_double);
  CHECK_FALSE(saw_single);  // every square vertex lies in a rung

  AmalgamGraph sub = construct_amalgam(catalog::subdivided_tree3());
  bool center_single = false;
  for (const auto& v : ball(sub.graph(), {sub.graph().root()}, 1).vertices)
    if (identification(sub, v).size() == 1) center_single = true;
  CHECK(center_single);  // claw centers are never glued
}

TEST_CASE("triviality detection") {
  CHECK(is_trivial(catalog::trivial_full_adhesion()));
  CHECK_FALSE(is_trivial(catalog::double_ray()));
  CHECK_FALSE(is_trivial(catalog::subdivided_tree3()));
}

TEST_CASE("respects_check finds witnesses") {
  AmalgamSpec spec = catalog::double_ray();
  auto id_witness = respects_check(spec, 1, Morphism(spec.action1, {}));
  REQUIRE(id_witness);
  CHECK(id_witness->label_permutation == std::map<int, int>{{1, 1}, {2, 2}});

  // the factor swap exchanges the two adhesion sets
  auto swap_witness = respects_check(spec, 1, Morphism(spec.action1, {0}));
  REQUIRE(swap_witness);
  CHECK(swap_witness->label_permutation == std::map<int, int>{{1, 2}, {2, 1}});

  // a perturbed construction breaks a defining condition
  AmalgamSpec bad = catalog::perturbed_ladder();
  bool all_ok = true;
  for (std::size_t gi = 0; gi < bad.action1.size(); ++gi)
    if (!respects_check(bad, 1, Morphism(bad.action1, {static_cast<int>(gi)}))) all_ok = false;
  bool consistent = true;
  for (int k : bad.index1)
    for (int l : bad.index2)
      for (int l2 : bad.index2)
        if (l < l2 && !consistency_check(bad, k, l, l2)) consistent = false;
  CHECK((!all_ok || !consistent));
}

TEST_CASE("consistency_check") {
  AmalgamSpec spec = catalog::double_ray();
  auto same = consistency_check(spec, 1, 3, 3);
  REQUIRE(same);
  CHECK(same->identity_word());
  CHECK(consistency_check(spec, 1, 3, 4));  // swap word repairs the orientation
  CHECK(consistency_check(spec, 3, 1, 2));  // reverse direction as well
}

TEST_CASE("classify_type") {
  CHECK(classify_type(catalog::double_ray()).type == AmalgamType::Type1);
  CHECK(classify_type(catalog::ladder_squares()).type == AmalgamType::Type1);
  CHECK(classify_type(catalog::claw_point_tree3()).type == AmalgamType::Type1);
  CHECK(classify_type(catalog::double_ray_swap()).type == AmalgamType::Type2);
  auto bad = classify_type(catalog::perturbed_ladder());
  CHECK(bad.type == AmalgamType::Neither);
  CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("corresponding decomposition of the double ray") {
  AmalgamGraph a = construct_amalgam(catalog::double_ray());
  TreeDecomposition td = corresponding_td(a);
  CHECK(validate_td(td, 5).valid);
  auto adh = adhesion_sets(td, 3);
  CHECK(adh.all_finite);
  for (const auto& [e, set] : adh.sets) CHECK(set.size() == 1);
  CHECK(td.part(td.tree().root()).size() == 2);
}

TEST_CASE("corresponding decomposition of the trivial amalgam") {
  AmalgamGraph a = construct_amalgam(catalog::trivial_full_adhesion());
  TreeDecomposition td = corresponding_td(a);
  CHECK(validate_td(td).valid);
  VertexList everything = a.graph().all_vertices();
  CHECK(td.part(td.tree().root()) == everything);
}

TEST_CASE("corresponding decomposition of the subdivided tree") {
  AmalgamGraph a = construct_amalgam(catalog::subdivided_tree3());
  TreeDecomposition td = corresponding_td(a);
  CHECK(validate_td(td, 4).valid);
  auto adh = adhesion_sets(td, 2);
  for (const auto& [e, set] : adh.sets) CHECK(set.size() == 1);
  CHECK(td.part(td.tree().root()).size() == 4);  // star copies
}

TEST_CASE("amalgam end distinction") {
  CHECK(amalgam_distinguishes_ends(construct_amalgam(catalog::double_ray()), 4));
  CHECK(amalgam_distinguishes_ends(construct_amalgam(catalog::subdivided_tree3()), 3));
  CHECK_FALSE(amalgam_distinguishes_ends(construct_amalgam(catalog::trivial_full_adhesion()), 3));
}

TEST_CASE("amalgam automorphisms act invariantly on the decomposition") {
  for (auto& [name, spec] : catalog::all_specs()) {
    CAPTURE(name);
    AmalgamGraph a = construct_amalgam(spec);
    GroupAction action = amalgam_action(a);
    // the fully collapsed amalgam has no declared symmetries to extend
    if (name != "trivial-full-adhesion") CHECK(action.size() > 0);
    Ball probe = ball(a.graph(), {a.graph().root()}, 2);
    for (std::size_t gi = 0; gi < action.size(); ++gi) {
      Morphism m(action, {static_cast<int>(gi)});
      Morphism mi = m.inverse(action);
      for (const auto& v : probe.vertices) CHECK(mi(m(v)) == v);
    }
    TreeDecomposition td = corresponding_td(a);
    auto rep = is_invariant(td, action, 2, 2);
    CAPTURE(rep.witness);
    CHECK(rep.invariant);
  }
}

TEST_CASE("amalgam components have exact finiteness verdicts") {
  AmalgamGraph a = construct_amalgam(catalog::double_ray());
  const Graph& g = a.graph();
  VertexList sep{g.root()};
  auto comps = components_minus(g, sep);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].verdict.is_infinite());
  CHECK(comps[1].verdict.is_infinite());

  // compare against three-times-deeper exhaustive exploration
  for (auto& [name, spec] : catalog::all_specs()) {
    CAPTURE(name);
    AmalgamGraph am = construct_amalgam(spec);
    Ball b = ball(am.graph(), {am.graph().root()}, 1);
    for (const auto& c : components_minus(am.graph(), b.vertices)) {
      Finiteness probe = exhaustive_escape_probe(am.graph(), b.vertices, c.seed, 9);
      CHECK(c.verdict.kind == probe.kind);
      if (c.verdict.is_finite()) CHECK(c.verdict.bound == probe.bound);
    }
  }
}

TEST_CASE("spec validation rejects malformed data") {
  AmalgamSpec s = catalog::double_ray();
  s.bonding[{1, 3}] = {{lv(0), lv(0)}, {lv(1), lv(0)}};  // not a bijection
  CHECK_THROWS_AS(s.validate(), SpecError);

  AmalgamSpec t = catalog::double_ray();
  t.adhesion1[1] = {lv(0), lv(1)};  // cardinality mismatch
  CHECK_THROWS_AS(t.validate(), SpecError);
}
