#include "septree/separation.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "septree/errors.hpp"

namespace septree {

Separation::Separation(Graph g, VertexList separator, std::vector<Part> parts)
    : g_(std::move(g)), sep_(std::move(separator)), parts_(std::move(parts)) {
  std::sort(parts_.begin(), parts_.end(),
            [](const Part& a, const Part& b) { return a.comp.seed < b.comp.seed; });
}

std::vector<const ComponentHandle*> Separation::side_components(Side s) const {
  std::vector<const ComponentHandle*> out;
  for (const auto& p : parts_)
    if (p.side == s) out.push_back(&p.comp);
  return out;
}

bool Separation::side_empty(Side s) const { return side_components(s).empty(); }

Side Separation::side_of(const VertexId& v) const {
  if (contains(sep_, v)) throw DomainError("side_of: " + v.str() + " lies in the separator");
  std::vector<ComponentHandle> comps;
  comps.reserve(parts_.size());
  for (const auto& p : parts_) comps.push_back(p.comp);
  const ComponentHandle* c = component_of(g_, comps, sep_, v);
  if (!c) throw DomainError("side_of: no component found for " + v.str());
  for (const auto& p : parts_)
    if (p.comp.seed == c->seed) return p.side;
  throw InternalError("side_of: component lookup failed");
}

bool Separation::in_a(const VertexId& v) const {
  return contains(sep_, v) || side_of(v) == Side::A;
}

bool Separation::in_b(const VertexId& v) const {
  return contains(sep_, v) || side_of(v) == Side::B;
}

bool Separation::is_plus_neutral() const {
  return sep_.empty() && side_empty(Side::B) && !parts_.empty();
}

bool Separation::is_times_neutral() const {
  return sep_.empty() && side_empty(Side::A) && !parts_.empty();
}

std::string Separation::str() const {
  std::ostringstream os;
  os << "sep=" << to_string(sep_) << " A:[";
  for (const auto* c : side_components(Side::A)) os << c->seed.str() << ' ';
  os << "] B:[";
  for (const auto* c : side_components(Side::B)) os << c->seed.str() << ' ';
  os << ']';
  return os.str();
}

bool operator==(const Separation& x, const Separation& y) {
  if (!(x.g_ == y.g_) || x.sep_ != y.sep_ || x.parts_.size() != y.parts_.size()) return false;
  for (std::size_t i = 0; i < x.parts_.size(); ++i)
    if (x.parts_[i].comp.seed != y.parts_[i].comp.seed || x.parts_[i].side != y.parts_[i].side)
      return false;
  return true;
}

bool operator<(const Separation& x, const Separation& y) {
  if (x.sep_ != y.sep_) return x.sep_ < y.sep_;
  auto key = [](const Separation& s) {
    std::vector<std::pair<VertexId, int>> k;
    for (const auto& p : s.parts_) k.emplace_back(p.comp.seed, p.side == Side::A ? 0 : 1);
    return k;
  };
  return key(x) < key(y);
}

Separation make_separation(const Graph& g, const VertexList& separator,
                           const std::function<std::optional<Side>(const ComponentHandle&)>& assign) {
  VertexList s = sorted_unique(separator);
  std::vector<Separation::Part> parts;
  for (auto& c : components_minus(g, s)) {
    auto side = assign(c);
    if (!side) throw DomainError("make_separation: component at " + c.seed.str() + " unassigned");
    parts.push_back({std::move(c), *side});
  }
  return Separation(g, std::move(s), std::move(parts));
}

Separation make_separation_seeds(const Graph& g, const VertexList& separator,
                                 const VertexList& a_seeds) {
  VertexList s = sorted_unique(separator);
  auto comps = components_minus(g, s);
  std::set<VertexId> a_comp_seeds;
  for (const auto& seed : a_seeds) {
    const ComponentHandle* c = component_of(g, comps, s, seed);
    if (!c) throw DomainError("make_separation: seed " + seed.str() + " not in any component");
    a_comp_seeds.insert(c->seed);
  }
  std::vector<Separation::Part> parts;
  for (auto& c : comps) {
    Side side = a_comp_seeds.count(c.seed) ? Side::A : Side::B;
    parts.push_back({std::move(c), side});
  }
  return Separation(g, std::move(s), std::move(parts));
}

Separation plus_neutral(const Graph& g) {
  return make_separation(g, {}, [](const ComponentHandle&) { return Side::A; });
}

Separation times_neutral(const Graph& g) {
  return make_separation(g, {}, [](const ComponentHandle&) { return Side::B; });
}

namespace {

Separation combine(const Separation& x, const Separation& y, bool product) {
  if (!(x.graph() == y.graph())) throw DomainError("separations over different graphs");
  const Graph& g = x.graph();

  // membership in the result sides E, F: plus (A∩C, B∪D), times (A∪C, B∩D)
  auto in_e = [&](const VertexId& v) {
    return product ? (x.in_a(v) || y.in_a(v)) : (x.in_a(v) && y.in_a(v));
  };
  auto in_f = [&](const VertexId& v) {
    return product ? (x.in_b(v) && y.in_b(v)) : (x.in_b(v) || y.in_b(v));
  };

  VertexList candidates = set_union(x.separator(), y.separator());
  VertexList new_sep;
  for (const auto& v : candidates)
    if (in_e(v) && in_f(v)) new_sep.push_back(v);

  std::vector<Separation::Part> parts;
  for (auto& c : components_minus(g, new_sep)) {
    VertexId probe = c.seed;
    bool e = in_e(probe), f = in_f(probe);
    if (e == f)
      throw InternalError("semiring combine: probe " + probe.str() + " on both/no sides");
    parts.push_back({std::move(c), e ? Side::A : Side::B});
  }
  return Separation(g, std::move(new_sep), std::move(parts));
}

// component adjacent to every separator vertex (A∩B ⊆ N(C))
bool full_component(const Graph& g, const VertexList& sep, const ComponentHandle& c) {
  for (const auto& v : sep)
    if (set_intersection(g.neighbors(v), c.ports).empty()) return false;
  return true;
}

}  // namespace

Separation plus(const Separation& x, const Separation& y) { return combine(x, y, false); }
Separation times(const Separation& x, const Separation& y) { return combine(x, y, true); }

Separation flip(const Separation& x) {
  std::vector<Separation::Part> parts;
  for (const auto& p : x.parts()) parts.push_back({p.comp, other(p.side)});
  return Separation(x.graph(), x.separator(), std::move(parts));
}

bool is_tight(const Separation& x) {
  bool a = false, b = false;
  for (const auto& p : x.parts()) {
    if (!full_component(x.graph(), x.separator(), p.comp)) continue;
    (p.side == Side::A ? a : b) = true;
    if (a && b) return true;
  }
  return false;
}

Separation elementary(const Graph& g, const VertexId& x) {
  VertexList s = g.neighbors(x);
  return make_separation(g, s, [&](const ComponentHandle& c) {
    return c.has_port(x) || c.seed == x ? Side::A : Side::B;
  });
}

std::vector<Separation> enumerate_tight(const Graph& g, const VertexId& v, int max_order,
                                        int search_radius) {
  if (max_order < 1) throw DomainError("enumerate_tight: order bound must be >= 1");
  Ball window = ball(g, {v}, search_radius);
  VertexList others = set_difference(window.vertices, VertexList{v});

  std::vector<Separation> out;
  std::set<Separation> seen;

  std::vector<VertexList> separators;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, int)> choose = [&](std::size_t start, int remaining) {
    VertexList s{v};
    for (std::size_t i : pick) s.push_back(others[i]);
    separators.push_back(sorted_unique(s));
    if (remaining == 0) return;
    for (std::size_t i = start; i < others.size(); ++i) {
      pick.push_back(i);
      choose(i + 1, remaining - 1);
      pick.pop_back();
    }
  };
  choose(0, max_order - 1);

  for (const auto& s : separators) {
    auto comps = components_minus(g, s);
    if (comps.size() > 20)
      throw BudgetError("enumerate_tight: too many components for exhaustive side assignment");
    std::size_t m = comps.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<Separation::Part> parts;
      for (std::size_t i = 0; i < m; ++i)
        parts.push_back({comps[i], (mask >> i) & 1 ? Side::B : Side::A});
      Separation cand(g, s, std::move(parts));
      if (is_tight(cand) && seen.insert(cand).second) out.push_back(std::move(cand));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------ expressions

SeparationExpression SeparationExpression::leaf(Separation s) {
  return SeparationExpression(
      std::make_shared<const Node>(Node{Kind::Leaf, std::move(s), nullptr, nullptr}));
}

SeparationExpression SeparationExpression::plus(SeparationExpression l, SeparationExpression r) {
  return SeparationExpression(
      std::make_shared<const Node>(Node{Kind::Plus, std::nullopt, l.node_, r.node_}));
}

SeparationExpression SeparationExpression::times(SeparationExpression l, SeparationExpression r) {
  return SeparationExpression(
      std::make_shared<const Node>(Node{Kind::Times, std::nullopt, l.node_, r.node_}));
}

const Separation& SeparationExpression::leaf_value() const {
  if (kind() != Kind::Leaf) throw DomainError("not a leaf");
  return *node_->value;
}

SeparationExpression SeparationExpression::left() const {
  if (kind() == Kind::Leaf) throw DomainError("leaf has no children");
  return SeparationExpression(node_->l);
}

SeparationExpression SeparationExpression::right() const {
  if (kind() == Kind::Leaf) throw DomainError("leaf has no children");
  return SeparationExpression(node_->r);
}

std::vector<const Separation*> SeparationExpression::leaves() const {
  std::vector<const Separation*> out;
  std::function<void(const SeparationExpression&)> walk = [&](const SeparationExpression& e) {
    if (e.kind() == Kind::Leaf) {
      out.push_back(&e.leaf_value());
      return;
    }
    walk(e.left());
    walk(e.right());
  };
  walk(*this);
  return out;
}

std::string SeparationExpression::str() const {
  if (kind() == Kind::Leaf) return "[" + leaf_value().str() + "]";
  return (kind() == Kind::Plus ? "(+ " : "(x ") + left().str() + " " + right().str() + ")";
}

Separation evaluate(const SeparationExpression& e) {
  if (e.kind() == SeparationExpression::Kind::Leaf) return e.leaf_value();
  Separation l = evaluate(e.left());
  Separation r = evaluate(e.right());
  return e.kind() == SeparationExpression::Kind::Plus ? plus(l, r) : times(l, r);
}

// ------------------------------------------------- tight decomposition

namespace {

struct FormulaTerms {
  std::vector<Separation> terms;  // component factors/summands
  Separation remainder;           // (X, V) or (V, Y)
  bool stalls = false;            // single term structurally equal to the input
};

// product:  (A,B) = (X,V) × Π_C (C∪N(C), V−C)   over components C of A−B
// sum:      (A,B) = (V,Y) + Σ_C (V−C, C∪N(C))   over components C of B−A
FormulaTerms formula(const Separation& x, bool product) {
  const Graph& g = x.graph();
  Side from = product ? Side::A : Side::B;
  FormulaTerms out;
  VertexList used;  // ⋃ N(C) within the separator
  for (const auto* c : x.side_components(from)) {
    VertexList nc;
    for (const auto& v : x.separator())
      if (!set_intersection(g.neighbors(v), c->ports).empty()) nc.push_back(v);
    used = set_union(used, nc);
    const VertexList& cports = c->ports;
    Separation term = make_separation(g, nc, [&](const ComponentHandle& d) {
      bool inside = !set_intersection(d.ports, cports).empty();
      if (product) return inside ? Side::A : Side::B;
      return inside ? Side::B : Side::A;
    });
    out.terms.push_back(std::move(term));
  }
  VertexList rest = set_difference(x.separator(), used);
  out.remainder = product
                      ? make_separation(g, rest, [](const ComponentHandle&) { return Side::B; })
                      : make_separation(g, rest, [](const ComponentHandle&) { return Side::A; });
  out.stalls = out.terms.size() == 1 && out.terms.front() == x;
  return out;
}

SeparationExpression fold(const std::vector<SeparationExpression>& es, bool product) {
  SeparationExpression acc = es.front();
  for (std::size_t i = 1; i < es.size(); ++i)
    acc = product ? SeparationExpression::times(acc, es[i]) : SeparationExpression::plus(acc, es[i]);
  return acc;
}

SeparationExpression flip_expression(const SeparationExpression& e) {
  switch (e.kind()) {
    case SeparationExpression::Kind::Leaf:
      return SeparationExpression::leaf(flip(e.leaf_value()));
    case SeparationExpression::Kind::Plus:
      return SeparationExpression::times(flip_expression(e.left()), flip_expression(e.right()));
    default:
      return SeparationExpression::plus(flip_expression(e.left()), flip_expression(e.right()));
  }
}

// All tight separations of order <= cap of a finite graph.
std::vector<Separation> finite_tight_catalog_uncached(const Graph& g, int cap) {
  VertexList vs = g.all_vertices();
  std::vector<Separation> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, int)> choose = [&](std::size_t start, int remaining) {
    if (!pick.empty()) {
      VertexList s;
      for (std::size_t i : pick) s.push_back(vs[i]);
      auto comps = components_minus(g, s);
      if (comps.size() <= 20) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << comps.size()); ++mask) {
          std::vector<Separation::Part> parts;
          for (std::size_t i = 0; i < comps.size(); ++i)
            parts.push_back({comps[i], (mask >> i) & 1 ? Side::B : Side::A});
          Separation cand(g, s, std::move(parts));
          if (is_tight(cand)) out.push_back(std::move(cand));
        }
      }
    }
    if (remaining == 0) return;
    for (std::size_t i = start; i < vs.size(); ++i) {
      pick.push_back(i);
      choose(i + 1, remaining - 1);
      pick.pop_back();
    }
  };
  choose(0, cap);
  return out;
}

const std::vector<Separation>& finite_tight_catalog(const Graph& g, int cap) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, std::vector<Separation>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.signature(), cap);
  auto it = memo.find(key);
  if (it == memo.end()) it = memo.emplace(key, finite_tight_catalog_uncached(g, cap)).first;
  return it->second;
}

// Bounded synthesis for separations the product/sum recursion cannot
// reach: search a representation x = Σ_j P_j where each P_j is a tight
// separation of order <= cap or a product of two of them.  Works on
// explicit bitmask sides, so finite graphs only.
std::optional<SeparationExpression> synthesize_sum(const Separation& x, int cap) {
  const Graph& g = x.graph();
  auto n_opt = g.vertex_count();
  if (!n_opt || *n_opt > 60) return std::nullopt;
  std::size_t n = *n_opt;
  VertexList vs = g.all_vertices();
  auto mask_of = [&](const VertexList& set) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (contains(set, vs[i])) m |= std::uint64_t{1} << i;
    return m;
  };
  auto full_side = [&](const Separation& s, Side side) {
    VertexList out = s.separator();
    for (const auto* c : s.side_components(side))
      if (c->members) out = set_union(out, *c->members);
    return out;
  };

  std::uint64_t target_a = mask_of(full_side(x, Side::A));
  std::uint64_t target_b = mask_of(full_side(x, Side::B));

  const std::vector<Separation>& tights = finite_tight_catalog(g, cap);
  // summands must keep A(x) inside their A-side and stay inside B(x)
  struct Cand {
    std::uint64_t a, b;
    int i, j;  // j < 0: single tight, else product of tights i and j
  };
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sides;
  sides.reserve(tights.size());
  for (const auto& t : tights)
    sides.emplace_back(mask_of(full_side(t, Side::A)), mask_of(full_side(t, Side::B)));

  std::vector<Cand> cands;
  for (std::size_t i = 0; i < tights.size(); ++i)
    if ((sides[i].first & target_a) == target_a && (sides[i].second | target_b) == target_b)
      cands.push_back({sides[i].first, sides[i].second, static_cast<int>(i), -1});
  for (std::size_t i = 0; i < tights.size(); ++i)
    for (std::size_t j = i; j < tights.size(); ++j) {
      std::uint64_t a = sides[i].first | sides[j].first;    // product joins A-sides
      std::uint64_t b = sides[i].second & sides[j].second;  // and meets B-sides
      if ((a & target_a) == target_a && (b | target_b) == target_b)
        cands.push_back({a, b, static_cast<int>(i), static_cast<int>(j)});
    }

  auto expr_of = [&](const Cand& c) {
    SeparationExpression l = SeparationExpression::leaf(tights[static_cast<std::size_t>(c.i)]);
    if (c.j < 0) return l;
    return SeparationExpression::times(
        l, SeparationExpression::leaf(tights[static_cast<std::size_t>(c.j)]));
  };

  struct State {
    std::uint64_t ia, ub;
    std::vector<std::size_t> chosen;
  };
  std::uint64_t everything = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<State> layer{{everything, 0, {}}};
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (int round = 0; round < 6; ++round) {
    std::vector<State> next;
    for (const auto& st : layer)
      for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        const Cand& c = cands[ci];
        State ns{st.ia & c.a, st.ub | c.b, st.chosen};
        if (ns.ia == st.ia && ns.ub == st.ub) continue;
        if ((ns.ia & target_a) != target_a) continue;
        ns.chosen.push_back(ci);
        if (ns.ia == target_a && ns.ub == target_b) {
          std::vector<SeparationExpression> parts;
          for (std::size_t idx : ns.chosen) parts.push_back(expr_of(cands[idx]));
          SeparationExpression e = fold(parts, false);
          if (evaluate(e) == x) return e;
          continue;
        }
        if (seen.insert({ns.ia, ns.ub}).second) next.push_back(std::move(ns));
      }
    layer = std::move(next);
    if (layer.empty()) break;
  }
  return std::nullopt;
}

SeparationExpression decompose_rec(const Separation& x, std::size_t order_cap, int depth,
                                   int guard) {
  if (depth > guard)
    throw InternalError("tight decomposition exceeded its depth guard; order bookkeeping bug");
  if (x.order() > order_cap)
    throw InternalError("tight decomposition produced a term above the order cap");
  if (x.is_plus_neutral() || x.is_times_neutral()) return SeparationExpression::leaf(x);
  if (is_tight(x)) return SeparationExpression::leaf(x);

  const Graph& g = x.graph();
  auto has_full = [&](Side s) {
    for (const auto* c : x.side_components(s))
      if (full_component(g, x.separator(), *c)) return true;
    return false;
  };
  bool pcond = !has_full(Side::A);  // product case of the recursion
  bool scond = !has_full(Side::B);  // sum case

  // product first when both case conditions hold; a formula over an
  // empty side cannot make progress, so the opposite identity (valid
  // regardless of the case condition) serves as the fallback.
  std::vector<bool> tries;
  auto push = [&](bool product) {
    for (bool t : tries)
      if (t == product) return;
    tries.push_back(product);
  };
  if (pcond && !x.side_empty(Side::A)) push(true);
  if (scond && !x.side_empty(Side::B)) push(false);
  if (!x.side_empty(Side::B)) push(false);
  if (!x.side_empty(Side::A)) push(true);

  for (bool product : tries) {
    FormulaTerms f = formula(x, product);
    if (f.stalls) continue;
    try {
      std::vector<SeparationExpression> children;
      children.push_back(decompose_rec(f.remainder, order_cap, depth + 1, guard));
      for (const auto& t : f.terms)
        children.push_back(decompose_rec(t, order_cap, depth + 1, guard));
      return fold(children, product);
    } catch (const DomainError&) {
      // a sub-term is outside the reach of this formula; try the other
    }
  }

  if (auto direct = synthesize_sum(x, static_cast<int>(order_cap))) return *direct;
  if (auto dual = synthesize_sum(flip(x), static_cast<int>(order_cap)))
    return flip_expression(*dual);

  // (X, V) with several separator vertices may still split into vertex
  // corners: (X,V) = Π_{v∈X} ({v},V)
  if (x.side_empty(Side::A) && x.separator().size() >= 2) {
    std::vector<SeparationExpression> factors;
    for (const auto& v : x.separator()) {
      Separation corner = make_separation(g, {v}, [](const ComponentHandle&) { return Side::B; });
      factors.push_back(decompose_rec(corner, order_cap, depth + 1, guard));
    }
    return fold(factors, true);
  }
  if (x.side_empty(Side::B) && x.separator().size() >= 2) {
    std::vector<SeparationExpression> factors;
    for (const auto& v : x.separator()) {
      Separation corner = make_separation(g, {v}, [](const ComponentHandle&) { return Side::A; });
      factors.push_back(decompose_rec(corner, order_cap, depth + 1, guard));
    }
    return fold(factors, false);
  }

  throw DomainError("separation is not generated by tight separations of order <= " +
                    std::to_string(order_cap) + ": " + x.str());
}

}  // namespace

SeparationExpression decompose_into_tight(const Separation& x) {
  int guard = 2 * (static_cast<int>(x.order()) + 4);
  return decompose_rec(x, x.order(), 0, guard);
}

// ------------------------------------------------------------ end proxies

EndProxies end_proxies(const Graph& g, int resolution) {
  if (!g.connected_hint()) throw DomainError("end_proxies requires a connected graph");
  Ball b = ball(g, {g.root()}, resolution);
  EndProxies out;
  for (auto& c : components_minus(g, b.vertices)) {
    if (c.verdict.is_infinite()) {
      out.proxies.push_back({resolution, std::move(c)});
    } else if (c.verdict.is_unknown()) {
      out.warnings.push_back("component at " + c.seed.str() +
                             " unknown beyond cap; not counted as an end");
    }
  }
  return out;
}

bool distinguishes(const Separation& x, const EndProxy& p, const EndProxy& q) {
  if (x.separator().empty()) return false;
  int res = std::min(p.resolution, q.resolution);
  Ball window = ball(x.graph(), {x.graph().root()}, res);
  for (const auto& v : x.separator())
    if (!window.contains_vertex(v))
      throw ResolutionError("separator vertex " + v.str() + " outside resolution-" +
                            std::to_string(res) + " ball; refine the proxies");
  if (p.comp.seed == q.comp.seed && p.resolution == q.resolution) return false;
  Side sp = x.side_of(p.comp.seed);
  Side sq = x.side_of(q.comp.seed);
  return sp != sq;
}

// ------------------------------------------------------------ catalogues

Separation apply_morphism(const Separation& x, const Morphism& m, const GroupAction& action) {
  const Graph& g = x.graph();
  VertexList img_sep = m.apply(x.separator());
  Morphism inv = m.inverse(action);
  return make_separation(g, img_sep, [&](const ComponentHandle& c) -> std::optional<Side> {
    VertexId pre = inv(c.seed);
    return x.side_of(pre);
  });
}

OrbitCatalog tight_orbit_catalog(const Graph& g, const GroupAction& a, int order_bound, int radius,
                                 int budget) {
  if (budget < 0) budget = a.default_budget();
  Ball window = ball(g, {g.root()}, radius);
  auto classes = orbits_on_ball(g, a, window, budget);

  std::set<Separation> tights;
  for (const auto& cls : classes)
    for (auto& t : enumerate_tight(g, cls.front(), order_bound, radius)) tights.insert(t);

  WordEnum words = enumerate_words(a, budget, window.vertices);
  OrbitCatalog cat;
  cat.order_bound = order_bound;
  cat.radius = radius;
  cat.budget = budget;
  for (const auto& t : tights) {
    bool known = false;
    for (const auto& rep : cat.representatives) {
      for (const auto& w : words.morphisms) {
        try {
          if (apply_morphism(rep, w, a) == t) {
            known = true;
            break;
          }
        } catch (const DomainError&) {
          // image separator not analysable here; this word does not match
        }
      }
      if (known) break;
    }
    if (!known) cat.representatives.push_back(t);
  }
  return cat;
}

}  // namespace septree
