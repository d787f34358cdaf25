#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "septree/action.hpp"
#include "septree/graph.hpp"
#include "septree/tree_decomp.hpp"

namespace septree {

/// Full data of a tree amalgamation: two finite factors with declared
/// actions, label sets, equal-cardinality adhesion families, bonding
/// bijections, and the labelling rule of the connecting tree given as a
/// back-label map (forward label k determines the reverse label
/// back_label[k] on the far side; outward labels enumerate the remaining
/// indices in sorted order).
struct AmalgamSpec {
  std::string name;
  Graph g1, g2;
  GroupAction action1, action2;
  std::vector<int> index1, index2;  // identical for self-amalgams
  bool self_amalgam = false;
  std::optional<std::vector<int>> type2_j;  // J of the side-swap form
  std::map<int, VertexList> adhesion1, adhesion2;
  // (k in index1, l in index2) -> bijection adhesion1[k] -> adhesion2[l]
  std::map<std::pair<int, int>, std::map<VertexId, VertexId>> bonding;
  std::map<int, int> back_label;
  std::optional<GroupAction> tree_action;  // declared connecting-tree action
  std::optional<TreeDomain> tree_domain;
  int identification_cap = 64;

  void validate() const;

  int side_of_label(int k) const;  // 1 or 2 (1 wins for self-amalgams)
  const Graph& factor(int side) const { return side == 1 ? g1 : g2; }
  const GroupAction& action(int side) const { return side == 1 ? action1 : action2; }
  const VertexList& adhesion(int side, int label) const;
  const std::vector<int>& labels(int side) const { return side == 1 ? index1 : index2; }
  /// Bonded partner of x in S_label(side) toward other_label on the far side.
  VertexId bond(int side, int label, int other_label, const VertexId& x) const;
  std::string digest() const;  // stable content hash for signatures
};

class AmalgamOracle;

/// Lazy graph generated by a tree amalgamation; vertices are π-classes
/// keyed by their least (tree node, factor vertex) member.
class AmalgamGraph {
 public:
  const Graph& graph() const { return graph_; }
  const AmalgamSpec& spec() const;
  Graph connecting_tree() const;

  /// Members of the class of `v` as (tree node, factor vertex) pairs.
  std::vector<std::pair<VertexId, VertexId>> class_members(const VertexId& v) const;
  /// π-class of a factor vertex sitting in the copy at `node`.
  VertexId vertex_at(const VertexId& node, const VertexId& factor_vertex) const;

  std::shared_ptr<const AmalgamOracle> oracle() const { return oracle_; }

 private:
  friend AmalgamGraph construct_amalgam(const AmalgamSpec& spec);
  Graph graph_;
  std::shared_ptr<const AmalgamOracle> oracle_;
};

AmalgamGraph construct_amalgam(const AmalgamSpec& spec);

struct IdentificationRecord {
  VertexId vertex;
  VertexList support;  // nodes of the subtree carrying the class
  std::size_t size() const { return support.size(); }
};

IdentificationRecord identification(const AmalgamGraph& a, const VertexId& v);
bool has_finite_identification(const AmalgamGraph& a, std::size_t bound, int probe_radius = 4);

/// Triviality: some copy maps bijectively onto the whole amalgam.
bool is_trivial(const AmalgamSpec& spec, int probe_radius = 4);

/// Witness that the amalgamation respects a factor automorphism.
struct RespectWitness {
  std::map<int, int> label_permutation;
  std::map<int, std::pair<int, std::string>> per_label;  // k -> (l, tau word tags)
};

/// Exhaustive search over label permutations, far labels and setwise
/// stabiliser elements; group elements are closed exactly on the finite
/// factors (the budget is a safety cap).
std::optional<RespectWitness> respects_check(const AmalgamSpec& spec, int side,
                                             const Morphism& gamma, int budget = -2);

/// Group element gamma with bond(k,l) = gamma o bond(k,l') pointwise, if any.
std::optional<Morphism> consistency_check(const AmalgamSpec& spec, int k, int l, int l_prime,
                                          int budget = -2);

enum class AmalgamType { Type1, Type2, Neither };

struct TypeReport {
  AmalgamType type = AmalgamType::Neither;
  std::vector<std::string> failures;
  std::size_t respect_witnesses = 0;
  std::size_t consistency_witnesses = 0;
};

TypeReport classify_type(const AmalgamSpec& spec, int budget = -2);

/// (T, {pi(V(G_u))}) as a lazy tree decomposition.
TreeDecomposition corresponding_td(const AmalgamGraph& a);

/// Some adhesion-induced separation separates two end proxies at the
/// given resolution.
bool amalgam_distinguishes_ends(const AmalgamGraph& a, int resolution);

/// Automorphisms of the amalgam graph obtained by extending factor
/// automorphisms and copy translations over the connecting tree; the
/// declared seed charts must extend (OracleError otherwise).  Generators
/// come in inverse pairs.
GroupAction amalgam_action(const AmalgamGraph& a, int translation_depth = 2);

/// Single automorphism (plus inverse) from an explicit seed: the copy at
/// `src` maps onto the copy at `dst` through the chart given as a word
/// of the target factor's action.  Throws OracleError if the seed does
/// not extend over the probed region.
GroupAction seeded_amalgam_action(const AmalgamGraph& a, const VertexId& src, const VertexId& dst,
                                  const std::vector<int>& chart_word, int probe_radius = 3);

}  // namespace septree
