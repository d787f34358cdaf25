#include "septree/catalog.hpp"

#include <algorithm>
#include <memory>

#include "septree/errors.hpp"
#include "septree/families.hpp"

namespace septree::catalog {

namespace {

// Connecting-tree shape: enough structure to build token automorphisms.
struct TreeShape {
  std::vector<int> i1, i2;
  std::map<int, int> beta;

  const std::vector<int>& labels_at_depth(std::size_t depth) const {
    return depth % 2 == 0 ? i1 : i2;
  }
};

// Mirror through the midpoint of the edge root--[k].  The walk pairs the
// labels of the arrival edges; remaining labels are matched by sorted
// rank.  An involution by construction; needs |i1| == |i2|.
VertexId edge_reflection_apply(const TreeShape& sh, int k, const VertexId& x) {
  if (sh.i1.size() != sh.i2.size())
    throw DomainError("edge reflection needs matching degrees");
  std::vector<std::int64_t> src{};
  std::vector<std::int64_t> dst{static_cast<std::int64_t>(k)};
  int src_arr = k;             // label at src of the walk edge behind us
  int dst_arr = sh.beta.at(k);  // same at dst
  for (std::size_t step = 0; step < x.token().size(); ++step) {
    int a = static_cast<int>(x.token()[step]);
    int b;
    if (a == src_arr) {
      b = dst_arr;
    } else {
      std::vector<int> rest_src, rest_dst;
      for (int l : sh.labels_at_depth(src.size()))
        if (l != src_arr) rest_src.push_back(l);
      std::size_t dst_depth = dst.size();
      for (int l : sh.labels_at_depth(dst_depth))
        if (l != dst_arr) rest_dst.push_back(l);
      auto it = std::find(rest_src.begin(), rest_src.end(), a);
      if (it == rest_src.end()) throw DomainError("invalid tree token in reflection");
      b = rest_dst[static_cast<std::size_t>(it - rest_src.begin())];
    }
    src.push_back(a);
    src_arr = sh.beta.at(a);
    if (!dst.empty() && b == sh.beta.at(static_cast<int>(dst.back()))) {
      dst_arr = static_cast<int>(dst.back());
      dst.pop_back();
    } else {
      dst.push_back(b);
      dst_arr = sh.beta.at(b);
    }
  }
  return VertexId(dst);
}

// Permute the branches at the root; parent labels map to parent labels
// below, the rest by sorted rank.
VertexId root_rotation_apply(const TreeShape& sh, const std::map<int, int>& perm,
                             const VertexId& x) {
  std::vector<std::int64_t> src{}, dst{};
  for (std::size_t step = 0; step < x.token().size(); ++step) {
    int a = static_cast<int>(x.token()[step]);
    int b;
    if (src.empty()) {
      b = perm.at(a);
    } else {
      int src_pair = sh.beta.at(static_cast<int>(src.back()));
      int dst_pair = sh.beta.at(static_cast<int>(dst.back()));
      if (a == src_pair) {
        b = dst_pair;
      } else {
        std::vector<int> rest_src, rest_dst;
        for (int l : sh.labels_at_depth(src.size()))
          if (l != src_pair) rest_src.push_back(l);
        for (int l : sh.labels_at_depth(dst.size()))
          if (l != dst_pair) rest_dst.push_back(l);
        b = rest_dst[static_cast<std::size_t>(
            std::find(rest_src.begin(), rest_src.end(), a) - rest_src.begin())];
      }
    }
    src.push_back(a);
    dst.push_back(b);
  }
  return VertexId(dst);
}

Generator reflection_gen(const TreeShape& sh, int k, const std::string& tag) {
  return {tag, tag, [sh, k](const VertexId& v) { return edge_reflection_apply(sh, k, v); }};
}

// even words in the edge reflections (side-preserving translations)
Generator pair_gen(const TreeShape& sh, int j, int k, const std::string& tag,
                   const std::string& inverse_tag) {
  return {tag, inverse_tag, [sh, j, k](const VertexId& v) {
            return edge_reflection_apply(sh, j, edge_reflection_apply(sh, k, v));
          }};
}

VertexId tn(std::initializer_list<std::int64_t> token) {
  return VertexId(std::vector<std::int64_t>(token));
}

std::map<VertexId, VertexId> identity_pairs(const VertexList& from, const VertexList& to) {
  if (from.size() != to.size()) throw DomainError("bonding chart size mismatch");
  std::map<VertexId, VertexId> m;
  for (std::size_t i = 0; i < from.size(); ++i) m[from[i]] = to[i];
  return m;
}

}  // namespace

AmalgamSpec double_ray() {
  AmalgamSpec s;
  s.name = "double-ray";
  s.g1 = make_path(2);
  s.g2 = make_path(2);
  s.action1 = finite_action(s.g1, {{"swap", {{0, 1}, {1, 0}}}});
  s.action2 = finite_action(s.g2, {{"swap", {{0, 1}, {1, 0}}}});
  s.index1 = {1, 2};
  s.index2 = {3, 4};
  VertexId a{std::int64_t{0}}, b{std::int64_t{1}};
  s.adhesion1 = {{1, {a}}, {2, {b}}};
  s.adhesion2 = {{3, {a}}, {4, {b}}};
  s.bonding[{1, 3}] = identity_pairs({a}, {a});
  s.bonding[{1, 4}] = identity_pairs({a}, {b});
  s.bonding[{2, 3}] = identity_pairs({b}, {a});
  s.bonding[{2, 4}] = identity_pairs({b}, {b});
  s.back_label = {{1, 4}, {2, 3}, {3, 2}, {4, 1}};

  TreeShape sh{{1, 2}, {3, 4}, s.back_label};
  std::map<int, int> swap_branches{{1, 2}, {2, 1}};
  Generator reflect{"r", "r", [sh, swap_branches](const VertexId& v) {
                      return root_rotation_apply(sh, swap_branches, v);
                    }};
  // shift by two nodes: mirror through the first edge, then reflect, twice
  auto shift = [sh, swap_branches](const VertexId& v) {
    VertexId w = edge_reflection_apply(sh, 1, root_rotation_apply(sh, swap_branches, v));
    return edge_reflection_apply(sh, 1, root_rotation_apply(sh, swap_branches, w));
  };
  auto shift_back = [sh, swap_branches](const VertexId& v) {
    VertexId w = root_rotation_apply(sh, swap_branches, edge_reflection_apply(sh, 1, v));
    return root_rotation_apply(sh, swap_branches, edge_reflection_apply(sh, 1, w));
  };
  s.tree_action = GroupAction({{"t2", "t2~", shift}, {"t2~", "t2", shift_back}, reflect}, 8);
  s.tree_domain = TreeDomain{{tn({}), tn({1})}, {{tn({}), tn({1})}}};
  return s;
}

AmalgamSpec double_ray_swap() {
  AmalgamSpec s;
  s.name = "double-ray-swap";
  s.g1 = make_path(2);
  s.g2 = s.g1;
  s.action1 = finite_action(s.g1, {{"swap", {{0, 1}, {1, 0}}}});
  s.action2 = s.action1;
  s.index1 = {1, 2};
  s.index2 = {1, 2};
  s.self_amalgam = true;
  s.type2_j = std::vector<int>{1};
  VertexId a{std::int64_t{0}}, b{std::int64_t{1}};
  s.adhesion1 = {{1, {a}}, {2, {b}}};
  s.adhesion2 = s.adhesion1;
  s.bonding[{1, 1}] = identity_pairs({a}, {a});
  s.bonding[{1, 2}] = identity_pairs({a}, {b});
  s.bonding[{2, 1}] = identity_pairs({b}, {a});
  s.bonding[{2, 2}] = identity_pairs({b}, {b});
  s.back_label = {{1, 2}, {2, 1}};

  TreeShape sh{{1, 2}, {1, 2}, s.back_label};
  // self-amalgam: the one-step mirror is decomposition-preserving
  Generator mirror = reflection_gen(sh, 1, "m1");
  Generator mirror2 = reflection_gen(sh, 2, "m2");
  s.tree_action = GroupAction({mirror, mirror2}, 8);
  s.tree_domain = TreeDomain{{tn({})}, {{tn({}), tn({1})}}};
  return s;
}

AmalgamSpec trivial_full_adhesion() {
  AmalgamSpec s;
  s.name = "trivial-full-adhesion";
  s.g1 = make_path(4);
  s.g2 = make_path(2);
  s.action1 = GroupAction();
  s.action2 = GroupAction();
  s.index1 = {1, 2};
  s.index2 = {3};
  VertexId v0{std::int64_t{0}}, v1{std::int64_t{1}}, v2{std::int64_t{2}}, v3{std::int64_t{3}};
  s.adhesion1 = {{1, {v0, v1}}, {2, {v2, v3}}};
  s.adhesion2 = {{3, {v0, v1}}};  // all of g2
  s.bonding[{1, 3}] = identity_pairs({v0, v1}, {v0, v1});
  s.bonding[{2, 3}] = identity_pairs({v2, v3}, {v0, v1});
  s.back_label = {{1, 3}, {2, 3}, {3, 1}};
  return s;
}

namespace {

AmalgamSpec claw_pair_base(const std::string& name) {
  AmalgamSpec s;
  s.name = name;
  s.g1 = make_star(3);  // center 0, leaves 1..3
  s.g2 = make_star(3);
  auto rot = std::map<int, int>{{0, 0}, {1, 2}, {2, 3}, {3, 1}};
  auto swp = std::map<int, int>{{0, 0}, {1, 2}, {2, 1}, {3, 3}};
  s.action1 = finite_action(s.g1, {{"rot", rot}, {"swap", swp}});
  s.action2 = finite_action(s.g2, {{"rot", rot}, {"swap", swp}});
  s.index1 = {1, 2, 3};
  s.index2 = {4, 5, 6};
  for (int k : {1, 2, 3}) s.adhesion1[k] = {VertexId(static_cast<std::int64_t>(k))};
  for (int l : {4, 5, 6}) s.adhesion2[l] = {VertexId(static_cast<std::int64_t>(l - 3))};
  for (int k : {1, 2, 3})
    for (int l : {4, 5, 6})
      s.bonding[{k, l}] =
          identity_pairs({VertexId(static_cast<std::int64_t>(k))},
                         {VertexId(static_cast<std::int64_t>(l - 3))});
  s.back_label = {{1, 4}, {2, 5}, {3, 6}, {4, 1}, {5, 2}, {6, 3}};
  TreeShape sh{{1, 2, 3}, {4, 5, 6}, s.back_label};
  std::vector<Generator> gens;
  for (int j : {1, 2, 3})
    for (int k : {1, 2, 3}) {
      if (j == k) continue;
      gens.push_back(pair_gen(sh, j, k, "h" + std::to_string(j) + std::to_string(k),
                              "h" + std::to_string(k) + std::to_string(j)));
    }
  s.tree_action = GroupAction(gens, 4);
  s.tree_domain = TreeDomain{{tn({}), tn({1})},
                             {{tn({}), tn({1})}, {tn({}), tn({2})}, {tn({}), tn({3})}}};
  return s;
}

}  // namespace

AmalgamSpec subdivided_tree3() { return claw_pair_base("subdivided-tree3"); }

AmalgamSpec claw_point_tree3() {
  AmalgamSpec s = claw_pair_base("claw-point-tree3");
  s.g2 = make_finite_graph(1, {});
  s.action2 = GroupAction();
  VertexId point{std::int64_t{0}};
  for (int l : {4, 5, 6}) s.adhesion2[l] = {point};
  for (int k : {1, 2, 3})
    for (int l : {4, 5, 6})
      s.bonding[{k, l}] = identity_pairs({VertexId(static_cast<std::int64_t>(k))}, {point});
  return s;
}

AmalgamSpec point_claw_tree3() {
  AmalgamSpec s = claw_pair_base("point-claw-tree3");
  s.g1 = make_finite_graph(1, {});
  s.action1 = GroupAction();
  VertexId point{std::int64_t{0}};
  for (int k : {1, 2, 3}) s.adhesion1[k] = {point};
  for (int k : {1, 2, 3})
    for (int l : {4, 5, 6})
      s.bonding[{k, l}] = identity_pairs({point}, {VertexId(static_cast<std::int64_t>(l - 3))});
  return s;
}

AmalgamSpec ladder_triples() {
  AmalgamSpec s;
  s.name = "ladder-triples";
  // 2x3 ladder segment: columns 0..2, vertices (col, rail) = col*2 + rail
  std::vector<std::pair<int, int>> edges = {{0, 1}, {2, 3}, {4, 5},
                                            {0, 2}, {2, 4}, {1, 3}, {3, 5}};
  s.g1 = make_finite_graph(6, edges);
  s.g2 = s.g1;
  auto rails = std::map<int, int>{{0, 1}, {1, 0}, {2, 3}, {3, 2}, {4, 5}, {5, 4}};
  auto flip = std::map<int, int>{{0, 4}, {4, 0}, {1, 5}, {5, 1}, {2, 2}, {3, 3}};
  s.action1 = finite_action(s.g1, {{"swap", rails}, {"flip", flip}});
  s.action2 = finite_action(s.g2, {{"swap", rails}, {"flip", flip}});
  s.index1 = {1, 2};
  s.index2 = {3, 4};
  VertexId a0{std::int64_t{0}}, b0{std::int64_t{1}}, a2{std::int64_t{4}}, b2{std::int64_t{5}};
  s.adhesion1 = {{1, {a0, b0}}, {2, {a2, b2}}};
  s.adhesion2 = {{3, {a0, b0}}, {4, {a2, b2}}};
  s.bonding[{1, 3}] = {{a0, a0}, {b0, b0}};
  s.bonding[{1, 4}] = {{a0, a2}, {b0, b2}};
  s.bonding[{2, 3}] = {{a2, a0}, {b2, b0}};
  s.bonding[{2, 4}] = {{a2, a2}, {b2, b2}};
  s.back_label = {{1, 4}, {2, 3}, {3, 2}, {4, 1}};

  TreeShape sh{{1, 2}, {3, 4}, s.back_label};
  std::map<int, int> swap_branches{{1, 2}, {2, 1}};
  Generator reflect{"r", "r", [sh, swap_branches](const VertexId& v) {
                      return root_rotation_apply(sh, swap_branches, v);
                    }};
  auto shift = [sh, swap_branches](const VertexId& v) {
    VertexId w = edge_reflection_apply(sh, 1, root_rotation_apply(sh, swap_branches, v));
    return edge_reflection_apply(sh, 1, root_rotation_apply(sh, swap_branches, w));
  };
  auto shift_back = [sh, swap_branches](const VertexId& v) {
    VertexId w = root_rotation_apply(sh, swap_branches, edge_reflection_apply(sh, 1, v));
    return root_rotation_apply(sh, swap_branches, edge_reflection_apply(sh, 1, w));
  };
  s.tree_action = GroupAction({{"t2", "t2~", shift}, {"t2~", "t2", shift_back}, reflect}, 8);
  s.tree_domain = TreeDomain{{tn({}), tn({1})}, {{tn({}), tn({1})}}};
  return s;
}

AmalgamSpec ladder_squares() {
  AmalgamSpec s;
  s.name = "ladder-squares";
  // square 0-1-2-3-0: rung {0,1}, rails {1,2} and {0,3}, rung {2,3}
  s.g1 = make_cycle(4);
  s.g2 = make_cycle(4);
  auto rung_swap = std::map<int, int>{{0, 1}, {1, 0}, {2, 3}, {3, 2}};
  auto rung_flip = std::map<int, int>{{0, 3}, {1, 2}, {2, 1}, {3, 0}};
  s.action1 = finite_action(s.g1, {{"swap", rung_swap}, {"flip", rung_flip}});
  s.action2 = finite_action(s.g2, {{"swap", rung_swap}, {"flip", rung_flip}});
  s.index1 = {1, 2};
  s.index2 = {3, 4};
  VertexId a0{std::int64_t{0}}, b0{std::int64_t{1}}, b1{std::int64_t{2}}, a1{std::int64_t{3}};
  s.adhesion1 = {{1, {a0, b0}}, {2, {b1, a1}}};
  s.adhesion2 = {{3, {a0, b0}}, {4, {b1, a1}}};
  s.bonding[{1, 3}] = {{a0, a0}, {b0, b0}};
  s.bonding[{1, 4}] = {{a0, a1}, {b0, b1}};
  s.bonding[{2, 3}] = {{a1, a0}, {b1, b0}};
  s.bonding[{2, 4}] = {{a1, a1}, {b1, b1}};
  s.back_label = {{1, 4}, {2, 3}, {3, 2}, {4, 1}};

  TreeShape sh{{1, 2}, {3, 4}, s.back_label};
  std::map<int, int> swap_branches{{1, 2}, {2, 1}};
  Generator reflect{"r", "r", [sh, swap_branches](const VertexId& v) {
                      return root_rotation_apply(sh, swap_branches, v);
                    }};
  auto shift = [sh, swap_branches](const VertexId& v) {
    VertexId w = edge_reflection_apply(sh, 1, root_rotation_apply(sh, swap_branches, v));
    return edge_reflection_apply(sh, 1, root_rotation_apply(sh, swap_branches, w));
  };
  auto shift_back = [sh, swap_branches](const VertexId& v) {
    VertexId w = root_rotation_apply(sh, swap_branches, edge_reflection_apply(sh, 1, v));
    return root_rotation_apply(sh, swap_branches, edge_reflection_apply(sh, 1, w));
  };
  s.tree_action = GroupAction({{"t2", "t2~", shift}, {"t2~", "t2", shift_back}, reflect}, 8);
  s.tree_domain = TreeDomain{{tn({}), tn({1})}, {{tn({}), tn({1})}}};
  return s;
}

AmalgamSpec perturbed_ladder() {
  AmalgamSpec s = ladder_squares();
  s.name = "perturbed-ladder";
  // skew one adhesion set across the rungs; no automorphism repairs this
  VertexId a0{std::int64_t{0}}, b0{std::int64_t{1}}, b1{std::int64_t{2}}, a1{std::int64_t{3}};
  s.adhesion2[4] = {a0, b1};
  s.bonding[{1, 4}] = {{a0, b1}, {b0, a0}};
  s.bonding[{2, 4}] = {{a1, b1}, {b1, a0}};
  return s;
}

std::vector<std::pair<std::string, AmalgamSpec>> all_specs() {
  return {{"double-ray", double_ray()},
          {"double-ray-swap", double_ray_swap()},
          {"trivial-full-adhesion", trivial_full_adhesion()},
          {"subdivided-tree3", subdivided_tree3()},
          {"claw-point-tree3", claw_point_tree3()},
          {"point-claw-tree3", point_claw_tree3()},
          {"ladder-squares", ladder_squares()},
          {"ladder-triples", ladder_triples()}};
}

}  // namespace septree::catalog
