#include "doctest.h"
#include "septree/catalog.hpp"
#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/separation.hpp"
#include "septree/splitting.hpp"
#include "support/brute.hpp"

using namespace septree;

namespace {

VertexId lv(std::int64_t x) { return VertexId(x); }

ProcessState line_state() {
  ProcessState st;
  st.factorisation.factors = {{"line", line_graph(), line_action()}};
  st.size_trace.push_back(size_sequence(make_finite_tree(1, {}), GroupAction()));
  return st;
}

}  // namespace

TEST_CASE("split_step accepts the double-ray factorisation of the line") {
  auto res = split_step(line_state(), 0, catalog::double_ray());
  CAPTURE(res.reason);
  REQUIRE(res.accepted);
  CHECK(res.state.steps == 1);
  REQUIRE(res.state.factorisation.factors.size() == 2);
  CHECK(*res.state.factorisation.factors[0].graph.vertex_count() == 2);
  CHECK(*res.state.factorisation.factors[1].graph.vertex_count() == 2);
  REQUIRE(res.state.size_trace.size() == 2);
  CHECK(compare_size(res.state.size_trace[1], res.state.size_trace[0]) == Ordering::Greater);
}

TEST_CASE("split_step rejects a trivial amalgamation") {
  ProcessState st;
  st.factorisation.factors = {{"p4", make_path(4), GroupAction()}};
  st.size_trace.push_back(size_sequence(make_finite_tree(1, {}), GroupAction()));
  auto res = split_step(st, 0, catalog::trivial_full_adhesion(), 4, 3);
  CHECK_FALSE(res.accepted);
  CHECK(res.reason.find("trivial") != std::string::npos);
}

TEST_CASE("split_step rejects a non-distinguishing spec") {
  // a finite factor has no ends, so nothing can be distinguished
  AmalgamSpec spec = catalog::trivial_full_adhesion();
  spec.adhesion1[1] = {lv(0), lv(1)};
  spec.adhesion1[2] = {lv(2), lv(3)};
  // shrink the far adhesion to a proper subset so the amalgamation is
  // not trivial: two-vertex sets glued into a path of squares
  ProcessState st;
  st.factorisation.factors = {{"p4", make_path(4), GroupAction()}};
  st.size_trace.push_back(size_sequence(make_finite_tree(1, {}), GroupAction()));
  auto res = split_step(st, 0, spec, 2, 3);
  CHECK_FALSE(res.accepted);
}

TEST_CASE("split_step rejects a factor mismatch") {
  ProcessState st;
  st.factorisation.factors = {{"grid2d", grid2d_graph(), grid2d_action()}};
  st.size_trace.push_back(size_sequence(make_finite_tree(1, {}), GroupAction()));
  auto res = split_step(st, 0, catalog::double_ray(), 4, 3);
  CHECK_FALSE(res.accepted);
  CHECK(res.reason.find("ball mismatch") != std::string::npos);
}

TEST_CASE("terminality of factorisations") {
  Factorisation two_edges;
  two_edges.factors = {{"p2", make_path(2), GroupAction()}, {"p2", make_path(2), GroupAction()}};
  CHECK(is_terminal(two_edges, 4).terminal);

  Factorisation line_f;
  line_f.factors = {{"line", line_graph(), line_action()}};
  auto rep = is_terminal(line_f, 4);
  CHECK_FALSE(rep.terminal);
  CHECK(rep.end_counts == std::vector<std::size_t>{2});

  Factorisation grid_f;
  grid_f.factors = {{"grid", grid2d_graph(), grid2d_action()}};
  CHECK(is_terminal(grid_f, 4).terminal);
}

TEST_CASE("nice finite complement of the double ray") {
  AmalgamGraph a = construct_amalgam(catalog::double_ray());
  VertexId root_node{std::vector<std::int64_t>{}};
  VertexId child{std::vector<std::int64_t>{1}};
  // reflection through the glued vertex: maps the root copy onto the
  // child copy with the swap chart
  GroupAction phi_action = seeded_amalgam_action(a, root_node, child, {0});
  Morphism phi(phi_action, {0});

  // the edge-reversing reflection fixes the glued adhesion class, so the
  // minimal S' yields the one-point complement
  VertexId va{std::int64_t{0}};
  auto res = nice_finite_complement(a, {root_node, child}, phi, phi_action, {va});
  CHECK(*res.g2.vertex_count() == 1);
  REQUIRE(res.respecified);
  AmalgamGraph re = construct_amalgam(*res.respecified);
  CHECK(rooted_ball_isomorphic(ball(re.graph(), {re.graph().root()}, 8),
                               ball(a.graph(), {a.graph().root()}, 8)));

  // the full-copy variant: two adjacent copies
  VertexId vb{std::int64_t{1}};
  auto full = nice_finite_complement(a, {root_node, child}, phi, phi_action, {va, vb});
  CHECK(*full.g2.vertex_count() == 3);  // two edges overlapping in the glued vertex

  // a non-reversing automorphism violates the precondition
  GroupAction shift = amalgam_action(a);
  std::size_t shift_idx = shift.size();
  for (std::size_t i = 0; i < shift.size(); ++i)
    if (shift.generators()[i].tag.rfind("shift", 0) == 0) shift_idx = i;
  REQUIRE(shift_idx < shift.size());
  Morphism bad(shift, {static_cast<int>(shift_idx)});
  CHECK_THROWS_AS(nice_finite_complement(a, {root_node, child}, bad, shift, {va}), DomainError);
}

TEST_CASE("enlarge_parts gathers a finite set inside one part") {
  auto td = TreeDecomposition::lazy_parts(
      line_graph(), line_graph(),
      [](const VertexId& t) { return VertexList{t, lv(t.token()[0] + 1)}; }, 1);
  VertexList s{lv(0), lv(3)};
  auto out = enlarge_parts(td, s, line_action(), 8, 6);
  bool found = false;
  for (std::int64_t i = -6; i <= 6 && !found; ++i)
    if (set_difference(s, out.part(lv(i))).empty()) found = true;
  CHECK(found);
  CHECK(validate_td(out, 4).valid);
  CHECK(is_invariant(out, line_action(), 4, 3).invariant);

  // s inside an existing part: unchanged
  auto same = enlarge_parts(td, {lv(0), lv(1)}, line_action(), 8, 6);
  CHECK(same.part(lv(0)) == VertexList{lv(0), lv(1)});

  // trivial action on a finite decomposition
  Graph p4 = make_path(4);
  Graph tree = make_finite_tree(3, {{0, 1}, {1, 2}});
  auto ftd = TreeDecomposition::finite(
      p4, tree, {{lv(0), {lv(0), lv(1)}}, {lv(1), {lv(1), lv(2)}}, {lv(2), {lv(2), lv(3)}}});
  auto fout = enlarge_parts(ftd, {lv(0), lv(2)}, GroupAction(), 4, 4);
  bool ffound = false;
  for (const auto& t : fout.tree().all_vertices())
    if (set_difference(VertexList{lv(0), lv(2)}, fout.part(t)).empty()) ffound = true;
  CHECK(ffound);
  CHECK(validate_td(fout).valid);
}

TEST_CASE("run_process terminates the line in one step") {
  FactorInfo line{"line", line_graph(), line_action()};
  for (auto& [name, driver] : drivers::strategies_for("line")) {
    CAPTURE(name);
    auto outcome = run_process(line, driver, 5, 4);
    CHECK(outcome.kind == ProcessOutcome::Kind::Terminated);
    CHECK(outcome.state.steps == 1);
  }
}

TEST_CASE("run_process on the grid terminates immediately") {
  FactorInfo grid{"grid2d", grid2d_graph(), grid2d_action()};
  for (auto& [name, driver] : drivers::strategies_for("grid2d")) {
    auto outcome = run_process(grid, driver, 5, 4);
    CHECK(outcome.kind == ProcessOutcome::Kind::Terminated);
    CHECK(outcome.state.steps == 0);
  }
}

TEST_CASE("run_process with zero budget reports exhaustion") {
  FactorInfo line{"line", line_graph(), line_action()};
  auto driver = drivers::strategies_for("line").front().second;
  auto outcome = run_process(line, driver, 0, 4);
  CHECK(outcome.kind == ProcessOutcome::Kind::BudgetExceeded);
}

TEST_CASE("size trace reports strict growth on accepted steps") {
  auto res = split_step(line_state(), 0, catalog::double_ray());
  REQUIRE(res.accepted);
  auto report = size_trace_report(res.state);
  REQUIRE(report.size() == 1);
  CHECK(report[0].cmp == Ordering::Greater);
  CHECK_FALSE(report[0].anomaly);

  // an artificially replayed state flags the identical entries
  ProcessState replay = res.state;
  replay.size_trace.push_back(replay.size_trace.back());
  auto flagged = size_trace_report(replay);
  REQUIRE(flagged.size() == 2);
  CHECK(flagged[1].anomaly);

  CHECK(size_trace_report(line_state()).empty());
}
