#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "septree/action.hpp"
#include "septree/graph.hpp"

namespace septree {

/// Finite graph over vertices 0..n-1 (tokens [i]), with optional string
/// labels for ingestion and reports.
class FiniteGraphOracle : public GraphOracle {
 public:
  FiniteGraphOracle(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                    std::vector<std::string> labels = {});

  VertexList neighbors(const VertexId& v) const override;
  VertexId root() const override { return VertexId(std::int64_t{0}); }
  bool valid_vertex(const VertexId& v) const override;
  std::optional<int> degree_bound() const override;
  bool connected_hint() const override { return connected_; }
  std::string signature() const override { return signature_; }
  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override;
  std::optional<std::size_t> vertex_count() const override { return adj_.size(); }
  VertexList all_vertices() const override;

  std::size_t size() const { return adj_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label_of(int i) const { return labels_[static_cast<std::size_t>(i)]; }
  std::optional<int> index_of_label(const std::string& l) const;
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<std::string> labels_;
  bool connected_ = true;
  std::string signature_;
};

/// Small graph over arbitrary vertex tokens (contracted trees, windows).
class ExplicitGraphOracle : public GraphOracle {
 public:
  ExplicitGraphOracle(std::map<VertexId, VertexList> adjacency, VertexId root);

  VertexList neighbors(const VertexId& v) const override;
  VertexId root() const override { return root_; }
  bool valid_vertex(const VertexId& v) const override { return adj_.count(v) > 0; }
  std::optional<int> degree_bound() const override;
  bool connected_hint() const override { return connected_; }
  std::string signature() const override { return signature_; }
  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override;
  std::optional<std::size_t> vertex_count() const override { return adj_.size(); }
  VertexList all_vertices() const override;

 private:
  std::map<VertexId, VertexList> adj_;
  VertexId root_;
  bool connected_ = true;
  std::string signature_;
};

Graph make_explicit_graph(std::map<VertexId, VertexList> adjacency, VertexId root);

Graph make_finite_graph(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                        std::vector<std::string> labels = {});
Graph make_path(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_complete(std::size_t n);
Graph make_star(std::size_t leaves);  // K_{1,leaves}, center 0

/// Two-way infinite path on Z, tokens [x].
Graph line_graph();
/// Translation x+1 and reflection -x.
GroupAction line_action();

/// Square grid on Z^2, tokens [x,y].
Graph grid2d_graph();
/// The two coordinate translations and their inverses.
GroupAction grid2d_action();

/// d-regular tree as reduced words over d involutions; tokens are the
/// words, the root is the empty word.  d = 1 degenerates to K2.
Graph regular_tree_graph(int degree);
/// Left multiplications by the d involutions (vertex-transitive).
GroupAction regular_tree_action(int degree);

/// Two-way infinite ladder Z x K2, tokens [x, rail].
Graph ladder_graph();
/// Translation, rail swap and reflection.
GroupAction ladder_action();

/// Permutation action on a finite graph from explicit vertex maps;
/// validates that every named map is an automorphism.
GroupAction finite_action(const Graph& g,
                          const std::vector<std::pair<std::string, std::map<int, int>>>& named_maps);

/// Graphs addressable by name: "line", "grid2d", "tree(d)".
Graph builtin_graph(const std::string& name);
GroupAction builtin_action(const std::string& name);
bool is_builtin_name(const std::string& name);
std::vector<std::string> builtin_names();

/// Brute-force escape check used to cross-validate family finiteness
/// oracles: explore the component of `seed` in g - s up to `radius`
/// steps from the separator hull.
Finiteness exhaustive_escape_probe(const Graph& g, const VertexList& s, const VertexId& seed,
                                   int radius);

}  // namespace septree
