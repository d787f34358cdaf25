#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "septree/vertex.hpp"

namespace septree {

/// Verdict on the extent of a component of G - S.
struct Finiteness {
  enum class Kind { Finite, Infinite, UnknownBeyond };
  Kind kind = Kind::UnknownBeyond;
  std::int64_t bound = 0;  // component size when Finite, exploration cap when UnknownBeyond

  static Finiteness finite(std::int64_t size) { return {Kind::Finite, size}; }
  static Finiteness infinite() { return {Kind::Infinite, 0}; }
  static Finiteness unknown_beyond(std::int64_t cap) { return {Kind::UnknownBeyond, cap}; }
  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
  bool is_unknown() const { return kind == Kind::UnknownBeyond; }
};

/// One component of G - S that is adjacent to S.  `ports` are exactly the
/// component's vertices with a neighbour in S; the least port is the
/// canonical seed, so handles with equal (separator, seed) denote the same
/// component.  When the separator is empty the handle covers the whole
/// graph and `seed` is the root.
struct ComponentHandle {
  VertexList separator;
  VertexId seed;
  VertexList ports;
  Finiteness verdict;
  std::optional<VertexList> members;  // full extent, present for finite components

  bool has_port(const VertexId& v) const { return contains(ports, v); }
};

struct ComponentsAnalysis {
  std::vector<ComponentHandle> components;  // ordered by seed
  std::vector<std::string> warnings;
};

/// Neighbour oracle for a locally finite graph.  Implementations must
/// return sorted, duplicate-free, loop-free neighbour lists and be
/// immutable after construction.
class GraphOracle {
 public:
  virtual ~GraphOracle() = default;

  virtual VertexList neighbors(const VertexId& v) const = 0;
  virtual VertexId root() const = 0;
  virtual bool valid_vertex(const VertexId& v) const = 0;
  virtual std::optional<int> degree_bound() const { return std::nullopt; }
  virtual bool connected_hint() const { return true; }

  /// Stable identity of the underlying graph; two handles with equal
  /// signatures are treated as the same graph.
  virtual std::string signature() const = 0;

  /// Exact component analysis of G - separator for families that can
  /// decide finiteness; nullopt selects the generic capped exploration.
  virtual std::optional<ComponentsAnalysis> analyze_components(const VertexList& separator) const {
    (void)separator;
    return std::nullopt;
  }

  virtual std::optional<std::size_t> vertex_count() const { return std::nullopt; }
  virtual VertexList all_vertices() const;  // throws unless finite
};

/// Value-semantic handle on an immutable graph oracle.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::shared_ptr<const GraphOracle> oracle) : oracle_(std::move(oracle)) {}

  bool valid() const { return static_cast<bool>(oracle_); }
  const GraphOracle& oracle() const;

  VertexList neighbors(const VertexId& v) const;
  VertexId root() const { return oracle().root(); }
  bool valid_vertex(const VertexId& v) const { return oracle().valid_vertex(v); }
  std::optional<int> degree_bound() const { return oracle().degree_bound(); }
  bool connected_hint() const { return oracle().connected_hint(); }
  std::string signature() const { return oracle().signature(); }
  bool is_finite() const { return oracle().vertex_count().has_value(); }
  std::optional<std::size_t> vertex_count() const { return oracle().vertex_count(); }
  VertexList all_vertices() const { return oracle().all_vertices(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.oracle_ == b.oracle_ || (a.valid() && b.valid() && a.signature() == b.signature());
  }
  friend bool operator!=(const Graph& a, const Graph& b) { return !(a == b); }

 private:
  std::shared_ptr<const GraphOracle> oracle_;
};

using Edge = std::pair<VertexId, VertexId>;  // stored with first < second

/// Closed ball: all vertices at distance <= radius from the centre set,
/// the induced edges, and the outer boundary layer.
struct Ball {
  VertexList centers;
  int radius = 0;
  VertexList vertices;          // sorted
  std::vector<Edge> edges;      // induced, sorted
  VertexList boundary;          // distance == radius
  std::vector<std::pair<VertexId, int>> distances;  // sorted by vertex

  bool contains_vertex(const VertexId& v) const { return contains(vertices, v); }
  int distance_of(const VertexId& v) const;
};

/// Breadth-first closed ball around `centers`.  Asserts neighbour
/// symmetry on everything it explores.
Ball ball(const Graph& g, const VertexList& centers, int radius);

/// Components of G - s adjacent to s (all components when g is
/// connected).  With an empty separator, the single component holding
/// the root.  Family oracles give exact verdicts; the generic fallback
/// explores up to `explore_cap` steps and reports UnknownBeyond for
/// components still growing at the cap.
std::vector<ComponentHandle> components_minus(const Graph& g, const VertexList& s,
                                              int explore_cap = 64);
ComponentsAnalysis components_minus_full(const Graph& g, const VertexList& s,
                                         int explore_cap = 64);

/// Locate the component of G - separator containing v among `comps`
/// (which must come from the same separator).  BFS until a port is hit.
const ComponentHandle* component_of(const Graph& g, const std::vector<ComponentHandle>& comps,
                                    const VertexList& separator, const VertexId& v,
                                    std::int64_t step_cap = 200000);

/// Isomorphism of single-centre balls respecting the centres, by
/// backtracking over distance- and degree-compatible assignments.
bool rooted_ball_isomorphic(const Ball& a, const Ball& b);

}  // namespace septree
