#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "septree/action.hpp"
#include "septree/graph.hpp"

namespace septree {

enum class Side { A, B };

inline Side other(Side s) { return s == Side::A ? Side::B : Side::A; }

/// A separation (A, B) of finite order, stored as its separator together
/// with the side assignment of the components of G - separator.  A is
/// separator + all A-side components, B likewise; equality is structural
/// on (separator, component seeds with sides).
class Separation {
 public:
  struct Part {
    ComponentHandle comp;
    Side side;
  };

  Separation() = default;
  Separation(Graph g, VertexList separator, std::vector<Part> parts);

  const Graph& graph() const { return g_; }
  const VertexList& separator() const { return sep_; }
  std::size_t order() const { return sep_.size(); }
  const std::vector<Part>& parts() const { return parts_; }

  std::vector<const ComponentHandle*> side_components(Side s) const;
  bool side_empty(Side s) const;  // no components on that side

  /// Side of the component containing v; throws DomainError when v lies
  /// in the separator.
  Side side_of(const VertexId& v) const;
  bool in_a(const VertexId& v) const;  // membership in A (separator included)
  bool in_b(const VertexId& v) const;

  bool is_plus_neutral() const;   // (V, {})
  bool is_times_neutral() const;  // ({}, V)

  std::string str() const;

  friend bool operator==(const Separation& x, const Separation& y);
  friend bool operator!=(const Separation& x, const Separation& y) { return !(x == y); }
  friend bool operator<(const Separation& x, const Separation& y);  // deterministic ordering

 private:
  Graph g_;
  VertexList sep_;
  std::vector<Part> parts_;  // sorted by component seed
};

/// Build a separation from a separator and a per-component side choice.
/// The assignment must place every component; otherwise DomainError.
Separation make_separation(const Graph& g, const VertexList& separator,
                           const std::function<std::optional<Side>(const ComponentHandle&)>& assign);

/// Components whose seed appears in `a_seeds` (or that contain such a
/// seed) go to side A, all others to B.
Separation make_separation_seeds(const Graph& g, const VertexList& separator,
                                 const VertexList& a_seeds);

Separation plus_neutral(const Graph& g);   // (V(G), {})
Separation times_neutral(const Graph& g);  // ({}, V(G))

/// (A,B) + (C,D) = (A∩C, B∪D), computed by local exploration around the
/// two separators.
Separation plus(const Separation& x, const Separation& y);
/// (A,B) × (C,D) = (A∪C, B∩D).
Separation times(const Separation& x, const Separation& y);

/// (B, A): same separator, sides exchanged.
Separation flip(const Separation& x);

/// True iff some component on each side is adjacent to every separator
/// vertex.
bool is_tight(const Separation& x);

/// ({x} ∪ N(x), V - {x}).
Separation elementary(const Graph& g, const VertexId& x);

/// All tight separations with v in the separator, order <= max_order and
/// separator inside ball(v, search_radius).  Brute force; complete only
/// relative to the search radius.
std::vector<Separation> enumerate_tight(const Graph& g, const VertexId& v, int max_order,
                                        int search_radius);

/// +/x expression tree over separations.
class SeparationExpression {
 public:
  enum class Kind { Leaf, Plus, Times };

  static SeparationExpression leaf(Separation s);
  static SeparationExpression plus(SeparationExpression l, SeparationExpression r);
  static SeparationExpression times(SeparationExpression l, SeparationExpression r);

  Kind kind() const { return node_->kind; }
  const Separation& leaf_value() const;
  SeparationExpression left() const;
  SeparationExpression right() const;
  std::vector<const Separation*> leaves() const;
  std::size_t leaf_count() const { return leaves().size(); }
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::optional<Separation> value;
    std::shared_ptr<const Node> l, r;
  };
  std::shared_ptr<const Node> node_;
  explicit SeparationExpression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

/// Fold of plus/times over the leaves.
Separation evaluate(const SeparationExpression& e);

/// Decompose a separation into tight separations of order at most its
/// own, following the product/sum recursion on non-full component sides;
/// neutral elements appear as leaves for the X/Y remainder terms.
/// Throws DomainError for the degenerate one-sided separations that no
/// expression over tight separations can reach.
SeparationExpression decompose_into_tight(const Separation& x);

/// One end candidate at finite resolution: an infinite component of
/// G - ball(root, resolution).
struct EndProxy {
  int resolution = 0;
  ComponentHandle comp;
};

struct EndProxies {
  std::vector<EndProxy> proxies;
  std::vector<std::string> warnings;  // unknown-verdict components
};

EndProxies end_proxies(const Graph& g, int resolution);

/// True iff the two proxies lie on opposite sides of x.  Requires the
/// separator to lie inside both proxies' resolution balls.
bool distinguishes(const Separation& x, const EndProxy& p, const EndProxy& q);

/// Image of a separation under a morphism of its graph.
Separation apply_morphism(const Separation& x, const Morphism& m, const GroupAction& action);

/// Representatives of tight separations modulo budget-limited words.
struct OrbitCatalog {
  std::vector<Separation> representatives;
  int order_bound = 0;
  int radius = 0;
  int budget = 0;
};

OrbitCatalog tight_orbit_catalog(const Graph& g, const GroupAction& a, int order_bound, int radius,
                                 int budget);

}  // namespace septree
