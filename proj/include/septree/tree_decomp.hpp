#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "septree/action.hpp"
#include "septree/graph.hpp"
#include "septree/separation.hpp"

namespace septree {

/// Finite node/edge set meeting every orbit of a lazily generated tree;
/// required for orbit counting on infinite trees.
struct TreeDomain {
  VertexList nodes;
  std::vector<Edge> edges;
};

/// Tree plus parts.  Parts are given as a membership predicate; when
/// every part is finite a part function is supplied as well.  Lazy
/// instances carry a declared adhesion bound.
class TreeDecomposition {
 public:
  using PartFn = std::function<VertexList(const VertexId&)>;
  using MemberFn = std::function<bool(const VertexId&, const VertexId&)>;

  /// Finite tree with explicitly listed parts.
  static TreeDecomposition finite(Graph graph, Graph tree,
                                  std::map<VertexId, VertexList> parts);
  /// Lazy tree whose parts are finite and computable per node.
  static TreeDecomposition lazy_parts(Graph graph, Graph tree, PartFn parts,
                                      std::optional<int> adhesion_bound = std::nullopt);
  /// Lazy tree with possibly infinite parts, membership only.
  static TreeDecomposition lazy_membership(Graph graph, Graph tree, MemberFn member,
                                           std::optional<int> adhesion_bound = std::nullopt);

  const Graph& graph() const { return graph_; }
  const Graph& tree() const { return tree_; }
  bool has_part_lists() const { return static_cast<bool>(parts_); }
  bool is_finite() const { return finite_; }
  std::optional<int> adhesion_bound() const { return adhesion_bound_; }

  VertexList part(const VertexId& node) const;  // requires part lists
  bool part_contains(const VertexId& node, const VertexId& v) const;
  VertexList part_within(const VertexId& node, const VertexList& window) const;

 private:
  Graph graph_, tree_;
  PartFn parts_;
  MemberFn member_;
  bool finite_ = false;
  std::optional<int> adhesion_bound_;
};

struct TdReport {
  bool valid = true;
  std::vector<std::string> violations;
};

/// Check (T1) part coverage, (T2) edges inside parts, (T3) connected
/// supports.  Exhaustive on finite instances, window-restricted with
/// `probe_radius` on lazy ones.
TdReport validate_td(const TreeDecomposition& td, int probe_radius = 6);

struct AdhesionReport {
  std::vector<std::pair<Edge, VertexList>> sets;  // per explored tree edge
  bool all_finite = true;
};

AdhesionReport adhesion_sets(const TreeDecomposition& td, int probe_radius = 6);

/// Separation induced by a tree edge: separator is the edge's adhesion
/// set, sides follow the halves of the tree.
Separation induced_separation(const TreeDecomposition& td, const Edge& tree_edge,
                              int probe_radius = 8);

struct InvarianceReport {
  bool invariant = true;
  std::string witness;
};

/// Every budget-limited word must map explored parts onto parts, and the
/// induced node map must preserve tree adjacency.
InvarianceReport is_invariant(const TreeDecomposition& td, const GroupAction& action,
                              int budget = -2, int probe_radius = 5);

/// Refinement check: contracting the fibers of `cover` (fine node ->
/// coarse node) must yield the coarse tree with matching part unions.
/// Fibers that are not subtrees raise DomainError.
bool is_refinement(const TreeDecomposition& fine, const TreeDecomposition& coarse,
                   const std::function<VertexId(const VertexId&)>& cover, int probe_radius = 6);

/// Edges uv with distinct endpoint orbits whose stabiliser equals an
/// endpoint stabiliser (budget-relative on lazy trees).
std::vector<Edge> compressible_edges(const Graph& tree, const GroupAction& action,
                                     int budget = -2,
                                     const std::optional<TreeDomain>& domain = std::nullopt,
                                     int window_radius = 6);

bool is_incompressible(const Graph& tree, const GroupAction& action, int budget = -2,
                       const std::optional<TreeDomain>& domain = std::nullopt,
                       int window_radius = 6);

struct CompressionResult {
  Graph tree;          // fully contracted tree
  GroupAction action;  // induced action
  std::function<VertexId(const VertexId&)> node_map;  // canonical map onto the result
  std::function<VertexList(const VertexId&)> fiber;   // preimages of a contracted node
  std::optional<TreeDomain> domain;                   // carried along for lazy trees
  std::vector<std::vector<Edge>> contracted_rounds;   // orbit logs, round-local node ids
};

/// Iteratively contract the least compressible edge orbit until none
/// remain.  Deterministic; the log allows replaying other schedules.
CompressionResult contract_compressible(const Graph& tree, const GroupAction& action,
                                        int budget = -2,
                                        const std::optional<TreeDomain>& domain = std::nullopt,
                                        int window_radius = 6);

/// Parts unioned along the fibers of the compression's node map.
TreeDecomposition induced_td_after_contraction(const TreeDecomposition& td,
                                               const CompressionResult& cr);

/// (|orbits on E| - |orbits on V|, count of edge orbits by stabiliser
/// size n = 1, 2, ...).  Exact on finite trees; budget- and
/// domain-relative on lazy ones.
struct SizeSequence {
  long long head = 0;
  std::vector<long long> tail;

  SizeSequence normalized() const;
  std::string str() const;
  friend bool operator==(const SizeSequence& a, const SizeSequence& b);
};

SizeSequence size_sequence(const Graph& tree, const GroupAction& action, int budget = -2,
                           const std::optional<TreeDomain>& domain = std::nullopt,
                           int window_radius = 6);

enum class Ordering { Less, Equal, Greater };

/// Lexicographic on (head, tail...) with implicit trailing zeros.
Ordering compare_size(const SizeSequence& a, const SizeSequence& b);

/// Validated finite tree over tokens 0..n-1; throws unless connected and
/// acyclic.
Graph make_finite_tree(std::size_t n, const std::vector<std::pair<int, int>>& edges);

}  // namespace septree
