#include "doctest.h"
#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/tree_decomp.hpp"
#include "support/brute.hpp"

using namespace septree;

namespace {

VertexId lv(std::int64_t x) { return VertexId(x); }

// parts {i, i+1} over the line, the line itself as connecting tree
TreeDecomposition line_td() {
  return TreeDecomposition::lazy_parts(
      line_graph(), line_graph(),
      [](const VertexId& t) { return VertexList{t, lv(t.token()[0] + 1)}; }, 1);
}

TreeDomain line_tree_domain() { return TreeDomain{{lv(0)}, {{lv(0), lv(1)}}}; }

GroupAction translation_only() {
  Generator t{"t", "t~", [](const VertexId& v) { return VertexId(v.token()[0] + 1); }};
  Generator ti{"t~", "t", [](const VertexId& v) { return VertexId(v.token()[0] - 1); }};
  return GroupAction({t, ti});
}

TreeDecomposition p3_two_part() {
  Graph p3 = make_path(3);
  Graph tree = make_finite_tree(2, {{0, 1}});
  return TreeDecomposition::finite(p3, tree, {{lv(0), {lv(0), lv(1)}}, {lv(1), {lv(1), lv(2)}}});
}

}  // namespace

TEST_CASE("validate_td accepts the interval decomposition of the line") {
  auto report = validate_td(line_td(), 6);
  CHECK(report.valid);
}

TEST_CASE("validate_td reports a coverage/edge violation") {
  auto broken = TreeDecomposition::lazy_parts(
      line_graph(), line_graph(),
      [](const VertexId& t) {
        if (t.token()[0] == 0) return VertexList{t};  // drops the pairing of vertex 1
        return VertexList{t, lv(t.token()[0] + 1)};
      },
      1);
  auto report = validate_td(broken, 4);
  CHECK_FALSE(report.valid);
  bool t2 = false;
  for (const auto& v : report.violations)
    if (v.find("(T2)") != std::string::npos) t2 = true;
  CHECK(t2);
}

TEST_CASE("validate_td reports the classic (T3) violation") {
  Graph g = make_path(4);  // 0-1-2-3
  Graph tree = make_finite_tree(3, {{0, 1}, {1, 2}});
  auto td = TreeDecomposition::finite(
      g, tree, {{lv(0), {lv(0), lv(1)}}, {lv(1), {lv(2), lv(3)}}, {lv(2), {lv(1), lv(2)}}});
  auto report = validate_td(td);
  CHECK_FALSE(report.valid);
  bool t3 = false;
  for (const auto& v : report.violations)
    if (v.find("(T3)") != std::string::npos) t3 = true;
  CHECK(t3);
}

TEST_CASE("adhesion sets") {
  auto line = adhesion_sets(line_td(), 4);
  CHECK(line.all_finite);
  for (const auto& [e, adh] : line.sets) {
    CHECK(adh.size() == 1);
    CHECK(adh.front() == e.second);  // {i,i+1} n {i+1,i+2} = {i+1}
  }

  Graph p3 = make_path(3);
  Graph one = make_finite_tree(1, {});
  auto single = TreeDecomposition::finite(p3, one, {{lv(0), {lv(0), lv(1), lv(2)}}});
  CHECK(adhesion_sets(single).sets.empty());
  CHECK(adhesion_sets(single).all_finite);

  auto two = adhesion_sets(p3_two_part());
  REQUIRE(two.sets.size() == 1);
  CHECK(two.sets.front().second == VertexList{lv(1)});
}

TEST_CASE("induced separations") {
  Separation s = induced_separation(line_td(), {lv(0), lv(1)});
  CHECK(s == make_separation_seeds(line_graph(), {lv(1)}, {lv(0)}));
  CHECK(s.order() == 1);

  Separation p = induced_separation(p3_two_part(), {lv(0), lv(1)});
  CHECK(p == make_separation_seeds(make_path(3), {lv(1)}, {lv(0)}));

  // star decomposition of K_{1,3}: center 0, leaves 1..3
  Graph star = make_star(3);
  Graph tree = make_finite_tree(3, {{0, 1}, {1, 2}});
  auto td = TreeDecomposition::finite(
      star, tree, {{lv(0), {lv(0), lv(1)}}, {lv(1), {lv(0), lv(2)}}, {lv(2), {lv(0), lv(3)}}});
  CHECK(validate_td(td).valid);
  Separation leafsep = induced_separation(td, {lv(0), lv(1)});
  CHECK(leafsep.order() == 1);
  CHECK(leafsep.separator() == VertexList{lv(0)});
  auto a = leafsep.side_components(Side::A);
  REQUIRE(a.size() == 1);
  CHECK(a.front()->seed == lv(1));  // the first part isolates its leaf
}

TEST_CASE("invariance of the line decomposition") {
  CHECK(is_invariant(line_td(), line_action(), 6, 4).invariant);
  CHECK(is_invariant(line_td(), GroupAction(), 6, 4).invariant);

  // parts of three consecutive vertices, moved by one: images straddle parts
  auto straddle = TreeDecomposition::lazy_parts(
      line_graph(), line_graph(),
      [](const VertexId& t) {
        std::int64_t i = t.token()[0];
        return VertexList{lv(2 * i), lv(2 * i + 1), lv(2 * i + 2)};
      },
      1);
  auto rep = is_invariant(straddle, translation_only(), 4, 3);
  CHECK_FALSE(rep.invariant);
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("refinement checks") {
  auto td = p3_two_part();
  CHECK(is_refinement(td, td, [](const VertexId& t) { return t; }));

  // the interval decomposition refines the two-ray decomposition
  Graph two = make_finite_tree(2, {{0, 1}});
  auto coarse = TreeDecomposition::lazy_membership(
      line_graph(), two,
      [](const VertexId& t, const VertexId& v) {
        return t.token()[0] == 0 ? v.token()[0] <= 1 : v.token()[0] >= 1;
      },
      1);
  auto fine = line_td();
  CHECK(is_refinement(
      fine, coarse, [](const VertexId& t) { return lv(t.token()[0] <= 0 ? 0 : 1); }, 6));

  // grouping non-adjacent nodes is not a subtree cover
  CHECK_THROWS_AS(is_refinement(
                      fine, coarse,
                      [](const VertexId& t) { return lv(t.token()[0] % 2 == 0 ? 0 : 1); }, 4),
                  DomainError);
}

TEST_CASE("compressible edges") {
  // trivial action on a path: all stabilisers equal, all orbits distinct
  Graph p3 = make_finite_tree(3, {{0, 1}, {1, 2}});
  auto edges = compressible_edges(p3, GroupAction());
  CHECK(edges.size() == 2);

  // the swap on a single edge has one vertex orbit: nothing to compress
  Graph k2 = make_finite_tree(2, {{0, 1}});
  GroupAction swap = finite_action(k2, {{"s", {{0, 1}, {1, 0}}}});
  CHECK(compressible_edges(k2, swap).empty());

  // translations on the line tree: one vertex orbit
  CHECK(compressible_edges(line_graph(), translation_only(), 12, line_tree_domain()).empty());
}

TEST_CASE("incompressibility") {
  CHECK(is_incompressible(line_graph(), translation_only(), 12, line_tree_domain()));
  Graph k2 = make_finite_tree(2, {{0, 1}});
  CHECK_FALSE(is_incompressible(k2, GroupAction()));
  Graph one = make_finite_tree(1, {});
  CHECK(is_incompressible(one, GroupAction()));
}

TEST_CASE("contract_compressible") {
  // trivial action: everything collapses to a single node
  Graph p4 = make_finite_tree(4, {{0, 1}, {1, 2}, {2, 3}});
  auto res = contract_compressible(p4, GroupAction());
  CHECK(*res.tree.vertex_count() == 1);
  CHECK(is_incompressible(res.tree, res.action));
  CHECK(res.node_map(lv(3)) == res.node_map(lv(0)));

  // star under the trivial action: one orbit per edge, three rounds
  Graph star = make_finite_tree(4, {{0, 1}, {0, 2}, {0, 3}});
  auto sres = contract_compressible(star, GroupAction());
  CHECK(*sres.tree.vertex_count() == 1);
  CHECK(sres.contracted_rounds.size() == 3);

  // translations on the line tree: no compressible edges, identity result
  auto lres = contract_compressible(line_graph(), translation_only(), 12, line_tree_domain());
  CHECK(lres.contracted_rounds.empty());
  CHECK(lres.tree == line_graph());
}

TEST_CASE("induced decomposition after contraction") {
  auto td = p3_two_part();
  auto res = contract_compressible(td.tree(), GroupAction());
  auto merged = induced_td_after_contraction(td, res);
  REQUIRE(*merged.tree().vertex_count() == 1);
  CHECK(merged.part(merged.tree().root()) == VertexList{lv(0), lv(1), lv(2)});
  CHECK(validate_td(merged).valid);

  // identity compression keeps the decomposition
  auto ident = contract_compressible(line_graph(), translation_only(), 12, line_tree_domain());
  auto same = induced_td_after_contraction(line_td(), ident);
  CHECK(validate_td(same, 4).valid);
}

TEST_CASE("size sequences") {
  SizeSequence line = size_sequence(line_graph(), translation_only(), 12, line_tree_domain());
  CHECK(line.head == 0);
  CHECK(line.normalized().tail == std::vector<long long>{1});

  Graph k2 = make_finite_tree(2, {{0, 1}});
  SizeSequence edge = size_sequence(k2, GroupAction());
  CHECK(edge.head == -1);
  CHECK(edge.normalized().tail == std::vector<long long>{1});

  Graph p3 = make_finite_tree(3, {{0, 1}, {1, 2}});
  SizeSequence path = size_sequence(p3, GroupAction());
  CHECK(path.head == -1);
  CHECK(path.normalized().tail == std::vector<long long>{2});
}

TEST_CASE("size sequence comparison") {
  SizeSequence a{0, {1}}, b{-1, {5}}, c{0, {1}}, d{0, {1, 2}}, e{0, {1, 3}};
  CHECK(compare_size(a, b) == Ordering::Greater);
  CHECK(compare_size(a, c) == Ordering::Equal);
  CHECK(compare_size(d, e) == Ordering::Less);
  CHECK(compare_size(SizeSequence{0, {1, 0}}, SizeSequence{0, {1}}) == Ordering::Equal);
}

TEST_CASE("size comparison is a total order on generated triples") {
  brute::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto mk = [&]() {
      SizeSequence s;
      s.head = static_cast<long long>(rng.below(5)) - 2;
      std::size_t len = rng.below(4);
      for (std::size_t i = 0; i < len; ++i)
        s.tail.push_back(static_cast<long long>(rng.below(3)));
      return s;
    };
    SizeSequence x = mk(), y = mk(), z = mk();
    auto xy = compare_size(x, y), yx = compare_size(y, x);
    if (xy == Ordering::Equal) CHECK(yx == Ordering::Equal);
    if (xy == Ordering::Less) CHECK(yx == Ordering::Greater);
    if (xy != Ordering::Greater && compare_size(y, z) != Ordering::Greater)
      CHECK(compare_size(x, z) != Ordering::Greater);
  }
}

TEST_CASE("incompressibility matches the absence of compressible edges") {
  brute::Rng rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    std::size_t n = 2 + rng.below(6);
    Graph tree = brute::random_connected_graph(rng, n, 0);
    auto autos = brute::all_automorphisms(tree);
    std::vector<std::pair<std::string, std::map<int, int>>> gens;
    std::size_t count = 1 + rng.below(2);
    for (std::size_t i = 0; i < count; ++i)
      gens.emplace_back("g" + std::to_string(i), autos[rng.below(autos.size())]);
    GroupAction action = finite_action(tree, gens);

    bool incompressible = is_incompressible(tree, action);
    bool none = compressible_edges(tree, action).empty();
    CHECK(incompressible == none);

    auto res = contract_compressible(tree, action);
    CHECK(is_incompressible(res.tree, res.action));
  }
}
