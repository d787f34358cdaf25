#include "septree/tree_decomp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "septree/errors.hpp"
#include "septree/families.hpp"

namespace septree {

// ------------------------------------------------------------ decomposition

TreeDecomposition TreeDecomposition::finite(Graph graph, Graph tree,
                                            std::map<VertexId, VertexList> parts) {
  if (!tree.is_finite()) throw DomainError("finite tree decomposition needs a finite tree");
  for (const auto& t : tree.all_vertices())
    if (!parts.count(t)) throw DomainError("no part for tree node " + t.str());
  auto shared = std::make_shared<std::map<VertexId, VertexList>>(std::move(parts));
  for (auto& [t, p] : *shared) p = sorted_unique(p);
  TreeDecomposition td;
  td.graph_ = std::move(graph);
  td.tree_ = std::move(tree);
  td.finite_ = td.graph_.is_finite();
  td.parts_ = [shared](const VertexId& t) {
    auto it = shared->find(t);
    if (it == shared->end()) throw DomainError("no part for tree node " + t.str());
    return it->second;
  };
  td.member_ = [shared](const VertexId& t, const VertexId& v) {
    auto it = shared->find(t);
    return it != shared->end() && contains(it->second, v);
  };
  return td;
}

TreeDecomposition TreeDecomposition::lazy_parts(Graph graph, Graph tree, PartFn parts,
                                                std::optional<int> adhesion_bound) {
  TreeDecomposition td;
  td.graph_ = std::move(graph);
  td.tree_ = std::move(tree);
  td.finite_ = false;
  td.parts_ = parts;
  td.member_ = [parts](const VertexId& t, const VertexId& v) { return contains(parts(t), v); };
  td.adhesion_bound_ = adhesion_bound;
  return td;
}

TreeDecomposition TreeDecomposition::lazy_membership(Graph graph, Graph tree, MemberFn member,
                                                     std::optional<int> adhesion_bound) {
  TreeDecomposition td;
  td.graph_ = std::move(graph);
  td.tree_ = std::move(tree);
  td.finite_ = false;
  td.member_ = std::move(member);
  td.adhesion_bound_ = adhesion_bound;
  return td;
}

VertexList TreeDecomposition::part(const VertexId& node) const {
  if (!parts_) throw DomainError("tree decomposition has membership-only parts");
  return parts_(node);
}

bool TreeDecomposition::part_contains(const VertexId& node, const VertexId& v) const {
  return member_(node, v);
}

VertexList TreeDecomposition::part_within(const VertexId& node, const VertexList& window) const {
  if (parts_) return set_intersection(parts_(node), window);
  VertexList out;
  for (const auto& v : window)
    if (member_(node, v)) out.push_back(v);
  return out;
}

// ------------------------------------------------------------ windows

namespace {

VertexList graph_window(const TreeDecomposition& td, int probe) {
  if (td.graph().is_finite()) return td.graph().all_vertices();
  return ball(td.graph(), {td.graph().root()}, probe).vertices;
}

VertexList tree_window(const TreeDecomposition& td, int probe) {
  if (td.tree().is_finite()) return td.tree().all_vertices();
  return ball(td.tree(), {td.tree().root()}, probe).vertices;
}

std::vector<Edge> edges_within(const Graph& g, const VertexList& window) {
  std::set<Edge> out;
  for (const auto& v : window)
    for (const auto& u : g.neighbors(v))
      if (contains(window, u)) out.insert(v < u ? Edge{v, u} : Edge{u, v});
  return {out.begin(), out.end()};
}

Edge sorted_edge(const VertexId& a, const VertexId& b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

// ------------------------------------------------------------ validation

TdReport validate_td(const TreeDecomposition& td, int probe_radius) {
  TdReport report;
  auto complain = [&](std::string msg) {
    report.valid = false;
    if (report.violations.size() < 20) report.violations.push_back(std::move(msg));
  };

  VertexList gw = graph_window(td, probe_radius);
  VertexList tw = tree_window(td, probe_radius + 4);

  // (T1) coverage
  for (const auto& v : gw) {
    bool covered = false;
    for (const auto& t : tw)
      if (td.part_contains(t, v)) {
        covered = true;
        break;
      }
    if (!covered) complain("(T1) vertex " + v.str() + " not covered by any explored part");
  }

  // (T2) every edge inside some part
  std::vector<Edge> gedges = td.graph().is_finite() ? edges_within(td.graph(), gw)
                                                    : ball(td.graph(), {td.graph().root()},
                                                           probe_radius)
                                                          .edges;
  for (const auto& [u, v] : gedges) {
    bool inside = false;
    for (const auto& t : tw)
      if (td.part_contains(t, u) && td.part_contains(t, v)) {
        inside = true;
        break;
      }
    if (!inside) complain("(T2) edge {" + u.str() + "," + v.str() + "} lies in no explored part");
  }

  // (T3) supports are connected (tree balls are convex, so windowed
  // connectivity is faithful)
  for (const auto& v : gw) {
    VertexList support;
    for (const auto& t : tw)
      if (td.part_contains(t, v)) support.push_back(t);
    support = sorted_unique(support);
    if (support.size() <= 1) continue;
    std::set<VertexId> seen{support.front()};
    std::deque<VertexId> q{support.front()};
    while (!q.empty()) {
      VertexId t = q.front();
      q.pop_front();
      for (const auto& s : td.tree().neighbors(t))
        if (contains(support, s) && seen.insert(s).second) q.push_back(s);
    }
    if (seen.size() != support.size()) {
      VertexId missing = support.front();
      for (const auto& t : support)
        if (!seen.count(t)) {
          missing = t;
          break;
        }
      complain("(T3) support of vertex " + v.str() + " is disconnected between nodes " +
               support.front().str() + " and " + missing.str());
    }
  }
  return report;
}

AdhesionReport adhesion_sets(const TreeDecomposition& td, int probe_radius) {
  AdhesionReport out;
  VertexList tw = tree_window(td, probe_radius);
  VertexList gw = graph_window(td, probe_radius * 2);
  for (const auto& [u, v] : edges_within(td.tree(), tw)) {
    VertexList adh;
    if (td.has_part_lists()) {
      adh = set_intersection(td.part(u), td.part(v));
    } else {
      adh = set_intersection(td.part_within(u, gw), td.part_within(v, gw));
    }
    if (!td.is_finite() && !td.has_part_lists()) {
      // membership-only lazy parts: finiteness rests on the declared bound
      if (!td.adhesion_bound() ||
          adh.size() > static_cast<std::size_t>(*td.adhesion_bound()))
        out.all_finite = false;
    }
    out.sets.emplace_back(Edge{u, v}, std::move(adh));
  }
  return out;
}

Separation induced_separation(const TreeDecomposition& td, const Edge& tree_edge,
                              int probe_radius) {
  const auto& [tu, tv] = tree_edge;
  if (!td.tree().valid_vertex(tu) || !td.tree().valid_vertex(tv) ||
      !contains(td.tree().neighbors(tu), tv))
    throw DomainError("not a tree edge: {" + tu.str() + "," + tv.str() + "}");

  VertexList adh;
  if (td.has_part_lists()) {
    adh = set_intersection(td.part(tu), td.part(tv));
  } else {
    adh = set_intersection(td.part_within(tu, graph_window(td, probe_radius * 2)),
                           td.part_within(tv, graph_window(td, probe_radius * 2)));
    if (!td.adhesion_bound())
      throw DomainError("membership-only lazy parts need a declared adhesion bound");
  }

  // locate a component seed in one of the halves of T - tree_edge
  auto side_of_seed = [&](const VertexId& seed) -> std::optional<Side> {
    std::set<VertexId> seen{tu, tv};
    std::deque<std::pair<VertexId, Side>> q;
    q.emplace_back(tu, Side::A);
    q.emplace_back(tv, Side::B);
    if (td.part_contains(tu, seed)) return Side::A;
    if (td.part_contains(tv, seed)) return Side::B;
    int explored = 0;
    while (!q.empty() && explored < 4000) {
      auto [t, side] = q.front();
      q.pop_front();
      ++explored;
      for (const auto& s : td.tree().neighbors(t)) {
        if (seen.count(s)) continue;
        seen.insert(s);
        if (td.part_contains(s, seed)) return side;
        q.emplace_back(s, side);
      }
    }
    return std::nullopt;
  };

  return make_separation(td.graph(), adh, [&](const ComponentHandle& c) -> std::optional<Side> {
    return side_of_seed(c.seed);
  });
}

InvarianceReport is_invariant(const TreeDecomposition& td, const GroupAction& action, int budget,
                              int probe_radius) {
  if (budget == -2) budget = action.default_budget();
  InvarianceReport rep;
  if (action.trivial()) return rep;

  VertexList core = tree_window(td, probe_radius);
  VertexList extended = tree_window(td, probe_radius + 4);
  VertexList gwin;
  if (td.has_part_lists()) {
    for (const auto& t : extended) gwin = set_union(gwin, td.part(t));
  } else {
    gwin = graph_window(td, probe_radius * 2);
  }

  WordEnum words = enumerate_words(action, td.graph().is_finite() ? -1 : budget, gwin);

  auto part_of = [&](const VertexId& t) { return td.part_within(t, gwin); };
  std::map<VertexId, VertexList> cache;
  for (const auto& t : extended) cache[t] = part_of(t);

  for (const auto& w : words.morphisms) {
    std::map<VertexId, VertexId> node_map;
    for (const auto& t : core) {
      VertexList img = w.apply(cache[t]);
      if (!set_difference(img, gwin).empty()) continue;  // image leaves the window
      bool found = false;
      for (const auto& s : extended)
        if (cache[s] == img) {
          node_map[t] = s;
          found = true;
          break;
        }
      if (!found) {
        rep.invariant = false;
        rep.witness = "word " + w.tags() + " maps the part of node " + t.str() +
                      " onto no explored part";
        return rep;
      }
    }
    for (const auto& [t, s] : node_map) {
      for (const auto& t2 : td.tree().neighbors(t)) {
        auto it = node_map.find(t2);
        if (it == node_map.end()) continue;
        if (s == it->second || contains(td.tree().neighbors(s), it->second)) continue;
        rep.invariant = false;
        rep.witness = "word " + w.tags() + " breaks tree adjacency at {" + t.str() + "," +
                      t2.str() + "}";
        return rep;
      }
    }
  }
  return rep;
}

bool is_refinement(const TreeDecomposition& fine, const TreeDecomposition& coarse,
                   const std::function<VertexId(const VertexId&)>& cover, int probe_radius) {
  VertexList fw = tree_window(fine, probe_radius + 2);
  std::map<VertexId, VertexList> fibers;
  for (const auto& s : fw) fibers[cover(s)].push_back(s);

  // fibers must induce connected subtrees (tree balls are convex)
  for (auto& [t, fiber] : fibers) {
    fiber = sorted_unique(fiber);
    std::set<VertexId> seen{fiber.front()};
    std::deque<VertexId> q{fiber.front()};
    while (!q.empty()) {
      VertexId s = q.front();
      q.pop_front();
      for (const auto& s2 : fine.tree().neighbors(s))
        if (contains(fiber, s2) && seen.insert(s2).second) q.push_back(s2);
    }
    if (seen.size() != fiber.size())
      throw DomainError("cover class of " + t.str() + " is not a subtree");
  }

  // (R1) contracting the fibers yields the coarse tree
  std::set<Edge> quotient;
  for (const auto& [u, v] : edges_within(fine.tree(), fw)) {
    VertexId cu = cover(u), cv = cover(v);
    if (cu == cv) continue;
    if (!coarse.tree().valid_vertex(cu) || !coarse.tree().valid_vertex(cv) ||
        !contains(coarse.tree().neighbors(cu), cv))
      return false;
    quotient.insert(sorted_edge(cu, cv));
  }
  // coarse edges between reached nodes must all arise
  VertexList reached;
  for (const auto& [t, fiber] : fibers) reached.push_back(t);
  reached = sorted_unique(reached);
  for (const auto& t : reached)
    for (const auto& t2 : coarse.tree().neighbors(t)) {
      if (!(t < t2) || !contains(reached, t2)) continue;
      // interior edges only: both fibers fully inside the window
      if (!quotient.count({t, t2})) return false;
    }

  // (R2) part unions along fibers match the coarse parts, compared on an
  // interior window to avoid boundary effects on lazy instances
  int interior = fine.is_finite() && coarse.is_finite() ? probe_radius : probe_radius - 2;
  VertexList gw = graph_window(fine, std::max(1, interior));
  for (const auto& [t, fiber] : fibers) {
    bool fiber_interior = true;
    for (const auto& s : fiber)
      for (const auto& s2 : fine.tree().neighbors(s))
        if (!contains(fw, s2)) fiber_interior = false;
    VertexList unioned;
    for (const auto& s : fiber) unioned = set_union(unioned, fine.part_within(s, gw));
    VertexList target = coarse.part_within(t, gw);
    if (fiber_interior) {
      if (unioned != target) return false;
    } else {
      // at the boundary only containment is checkable
      if (!set_difference(unioned, target).empty()) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ symmetry

namespace {

struct TreeSym {
  VertexList window;
  WordEnum words;
  VertexList nodes;         // candidate nodes (domain or all)
  std::vector<Edge> edges;  // candidate edges
};

TreeSym make_sym(const Graph& tree, const GroupAction& action, int budget,
                 const std::optional<TreeDomain>& domain, int window_radius) {
  if (budget == -2) budget = action.default_budget();
  TreeSym sym;
  if (tree.is_finite()) {
    sym.window = tree.all_vertices();
    sym.words = enumerate_words(action, -1, sym.window);
    sym.nodes = sym.window;
    sym.edges = edges_within(tree, sym.window);
  } else {
    if (!domain)
      throw DomainError("lazy trees require a declared fundamental domain for orbit counting");
    sym.window = ball(tree, {tree.root()}, window_radius).vertices;
    for (const auto& n : domain->nodes) sym.window = set_union(sym.window, {n});
    for (const auto& [u, v] : domain->edges) sym.window = set_union(sym.window, {u, v});
    sym.words = enumerate_words(action, budget, sym.window);
    sym.nodes = domain->nodes;
    sym.edges = domain->edges;
  }
  return sym;
}

std::vector<std::size_t> edge_stab(const TreeSym& sym, const Edge& e) {
  return stabilizer_of_edge(sym.words, e.first, e.second);
}

bool same_edge_orbit(const TreeSym& sym, const Edge& e, const Edge& f) {
  for (const auto& w : sym.words.morphisms) {
    VertexId a = w(e.first), b = w(e.second);
    if ((a == f.first && b == f.second) || (a == f.second && b == f.first)) return true;
  }
  return false;
}

bool edge_compressible(const TreeSym& sym, const Edge& e) {
  if (in_same_orbit(sym.words, e.first, e.second)) return false;
  auto se = edge_stab(sym, e);
  return se == stabilizer_of_vertex(sym.words, e.first) ||
         se == stabilizer_of_vertex(sym.words, e.second);
}

}  // namespace

std::vector<Edge> compressible_edges(const Graph& tree, const GroupAction& action, int budget,
                                     const std::optional<TreeDomain>& domain, int window_radius) {
  TreeSym sym = make_sym(tree, action, budget, domain, window_radius);
  std::vector<Edge> out;
  for (const auto& e : sym.edges)
    if (edge_compressible(sym, e)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_incompressible(const Graph& tree, const GroupAction& action, int budget,
                       const std::optional<TreeDomain>& domain, int window_radius) {
  TreeSym sym = make_sym(tree, action, budget, domain, window_radius);
  // stabiliser containment forces equal stabilisers and equal orbits
  for (const auto& u : sym.nodes) {
    auto su = stabilizer_of_vertex(sym.words, u);
    for (const auto& v : sym.window) {
      if (u == v) continue;
      auto sv = stabilizer_of_vertex(sym.words, v);
      bool u_in_v = std::includes(sv.begin(), sv.end(), su.begin(), su.end());
      bool v_in_u = std::includes(su.begin(), su.end(), sv.begin(), sv.end());
      if (u_in_v && !(su == sv && in_same_orbit(sym.words, u, v))) return false;
      if (v_in_u && !(su == sv && in_same_orbit(sym.words, u, v))) return false;
    }
  }
  return true;
}

// ------------------------------------------------------------ contraction

namespace {

// Lazy tree obtained by contracting one edge orbit; fibres are closures
// over the orbit's image set and stay finite for star-shaped orbits.
class ContractedTreeOracle : public GraphOracle {
 public:
  ContractedTreeOracle(Graph base, std::set<Edge> contracted, int fiber_cap = 64)
      : base_(std::move(base)), contracted_(std::move(contracted)), cap_(fiber_cap) {
    std::ostringstream os;
    os << "contracted:" << base_.signature() << ':' << contracted_.size() << ':'
       << (contracted_.empty() ? "-" : contracted_.begin()->first.str());
    signature_ = os.str();
  }

  VertexList fiber(const VertexId& x) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = fibers_.find(x);
      if (it != fibers_.end()) return it->second;
    }
    VertexList members{x};
    std::deque<VertexId> q{x};
    std::set<VertexId> seen{x};
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop_front();
      for (const auto& u : base_.neighbors(v)) {
        if (seen.count(u) || !contracted_.count(sorted_edge(v, u))) continue;
        if (members.size() >= static_cast<std::size_t>(cap_))
          throw BudgetError("contraction fibre exceeded its cap near " + x.str());
        seen.insert(u);
        members.push_back(u);
        q.push_back(u);
      }
    }
    members = sorted_unique(members);
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& m : members) fibers_[m] = members;
    return members;
  }

  VertexId rep(const VertexId& x) const { return fiber(x).front(); }

  VertexList neighbors(const VertexId& v) const override {
    VertexList out;
    for (const auto& m : fiber(v))
      for (const auto& u : base_.neighbors(m)) {
        if (contracted_.count(sorted_edge(m, u))) continue;
        VertexId r = rep(u);
        if (r != v) out.push_back(r);
      }
    return sorted_unique(out);
  }
  VertexId root() const override { return rep(base_.root()); }
  bool valid_vertex(const VertexId& v) const override {
    return base_.valid_vertex(v) && rep(v) == v;
  }
  std::string signature() const override { return signature_; }
  bool connected_hint() const override { return base_.connected_hint(); }

  const Graph& base() const { return base_; }

 private:
  Graph base_;
  std::set<Edge> contracted_;
  int cap_;
  std::string signature_;
  mutable std::mutex mu_;
  mutable std::map<VertexId, VertexList> fibers_;
};

GroupAction action_on_quotient(const GroupAction& action,
                               std::shared_ptr<const ContractedTreeOracle> oracle) {
  std::vector<Generator> gens;
  for (const auto& g : action.generators())
    gens.push_back({g.tag, g.inverse_tag, [g, oracle](const VertexId& v) {
                      return oracle->rep(g.map(v));
                    }});
  return GroupAction(gens, action.default_budget());
}

}  // namespace

CompressionResult contract_compressible(const Graph& tree, const GroupAction& action, int budget,
                                        const std::optional<TreeDomain>& domain,
                                        int window_radius) {
  CompressionResult res;
  res.tree = tree;
  res.action = action;
  res.domain = domain;
  res.node_map = [](const VertexId& v) { return v; };
  res.fiber = [](const VertexId& v) { return VertexList{v}; };

  for (int round = 0; round < 16; ++round) {
    TreeSym sym = make_sym(res.tree, res.action, budget, res.domain, window_radius);
    std::vector<Edge> comp;
    for (const auto& e : sym.edges)
      if (edge_compressible(sym, e)) comp.push_back(e);
    std::sort(comp.begin(), comp.end());
    if (comp.empty()) return res;

    const Edge e0 = comp.front();
    // full image set of the chosen orbit under the enumerated words
    std::set<Edge> orbit;
    for (const auto& w : sym.words.morphisms) orbit.insert(sorted_edge(w(e0.first), w(e0.second)));
    res.contracted_rounds.push_back({orbit.begin(), orbit.end()});

    if (res.tree.is_finite()) {
      // union-find over the orbit, then an explicit quotient tree
      std::map<VertexId, VertexId> parent;
      for (const auto& v : res.tree.all_vertices()) parent[v] = v;
      std::function<VertexId(VertexId)> find = [&](VertexId v) {
        while (parent[v] != v) {
          parent[v] = parent[parent[v]];
          v = parent[v];
        }
        return v;
      };
      for (const auto& [u, v] : orbit) {
        if (!parent.count(u) || !parent.count(v)) continue;
        VertexId ru = find(u), rv = find(v);
        if (ru != rv) parent[rv < ru ? ru : rv] = rv < ru ? rv : ru;
      }
      std::map<VertexId, VertexList> adj;
      for (const auto& v : res.tree.all_vertices()) adj[find(v)];
      for (const auto& [u, v] : edges_within(res.tree, res.tree.all_vertices())) {
        VertexId ru = find(u), rv = find(v);
        if (ru == rv) continue;
        adj[ru].push_back(rv);
        adj[rv].push_back(ru);
      }
      Graph quotient = make_explicit_graph(std::move(adj), find(res.tree.root()));
      std::map<VertexId, VertexId> flat;
      for (const auto& v : res.tree.all_vertices()) flat[v] = find(v);
      auto prev_map = res.node_map;
      res.node_map = [prev_map, flat](const VertexId& v) { return flat.at(prev_map(v)); };
      auto prev_fiber = res.fiber;
      std::map<VertexId, VertexList> fibers;
      for (const auto& [v, r] : flat) fibers[r].push_back(v);
      res.fiber = [prev_fiber, fibers](const VertexId& r) {
        VertexList out;
        for (const auto& m : fibers.at(r))
          out = set_union(out, prev_fiber ? prev_fiber(m) : VertexList{m});
        return out;
      };

      std::vector<Generator> gens;
      for (const auto& g : res.action.generators()) {
        std::map<VertexId, VertexId> gm;
        for (const auto& [r, members] : fibers) gm[r] = flat.at(g.map(r));
        gens.push_back({g.tag, g.inverse_tag,
                        [gm](const VertexId& v) { return gm.at(v); }});
      }
      res.action = action.trivial() ? GroupAction()
                                    : GroupAction(gens, res.action.default_budget());
      res.tree = quotient;
    } else {
      auto oracle = std::make_shared<ContractedTreeOracle>(res.tree, orbit);
      Graph quotient{oracle};
      auto prev_map = res.node_map;
      res.node_map = [prev_map, oracle](const VertexId& v) { return oracle->rep(prev_map(v)); };
      auto prev_fiber = res.fiber;
      res.fiber = [prev_fiber, oracle](const VertexId& r) {
        VertexList out;
        for (const auto& m : oracle->fiber(r))
          out = set_union(out, prev_fiber ? prev_fiber(m) : VertexList{m});
        return out;
      };
      res.action = action_on_quotient(res.action, oracle);
      // carry the declared domain through the contraction
      TreeDomain nd;
      for (const auto& n : res.domain->nodes) nd.nodes.push_back(oracle->rep(n));
      nd.nodes = sorted_unique(nd.nodes);
      std::set<Edge> nde;
      for (const auto& [u, v] : res.domain->edges) {
        VertexId ru = oracle->rep(u), rv = oracle->rep(v);
        if (ru != rv) nde.insert(sorted_edge(ru, rv));
      }
      for (const auto& n : nd.nodes)
        for (const auto& u : quotient.neighbors(n)) nde.insert(sorted_edge(n, u));
      nd.edges = {nde.begin(), nde.end()};
      res.domain = nd;
      res.tree = quotient;
    }
  }
  throw BudgetError("contraction did not stabilise within its round cap");
}

TreeDecomposition induced_td_after_contraction(const TreeDecomposition& td,
                                               const CompressionResult& cr) {
  if (cr.contracted_rounds.empty()) return td;  // identity compression
  if (!cr.fiber) throw InternalError("compression result carries no fibre map");
  if (cr.tree.is_finite() && td.tree().is_finite() && td.has_part_lists()) {
    std::map<VertexId, VertexList> parts;
    for (const auto& t : cr.tree.all_vertices()) {
      VertexList merged;
      for (const auto& s : cr.fiber(t)) merged = set_union(merged, td.part(s));
      parts[t] = merged;
    }
    return TreeDecomposition::finite(td.graph(), cr.tree, std::move(parts));
  }
  auto fiber = cr.fiber;
  auto partfn = [td, fiber](const VertexId& t) {
    VertexList merged;
    for (const auto& s : fiber(t)) merged = set_union(merged, td.part(s));
    return merged;
  };
  return TreeDecomposition::lazy_parts(td.graph(), cr.tree, partfn, td.adhesion_bound());
}

// ------------------------------------------------------------ size

SizeSequence SizeSequence::normalized() const {
  SizeSequence out = *this;
  while (!out.tail.empty() && out.tail.back() == 0) out.tail.pop_back();
  return out;
}

std::string SizeSequence::str() const {
  std::ostringstream os;
  os << '(' << head << ",[";
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (i) os << ',';
    os << tail[i];
  }
  os << "])";
  return os.str();
}

bool operator==(const SizeSequence& a, const SizeSequence& b) {
  return compare_size(a, b) == Ordering::Equal;
}

SizeSequence size_sequence(const Graph& tree, const GroupAction& action, int budget,
                           const std::optional<TreeDomain>& domain, int window_radius) {
  TreeSym sym = make_sym(tree, action, budget, domain, window_radius);

  // node orbit classes among the candidates
  std::vector<VertexList> node_classes;
  for (const auto& n : sym.nodes) {
    bool placed = false;
    for (auto& cls : node_classes)
      if (in_same_orbit(sym.words, cls.front(), n)) {
        cls.push_back(n);
        placed = true;
        break;
      }
    if (!placed) node_classes.push_back({n});
  }

  std::vector<Edge> edge_reps;
  std::vector<std::size_t> edge_stab_sizes;
  for (const auto& e : sym.edges) {
    bool placed = false;
    for (const auto& r : edge_reps)
      if (same_edge_orbit(sym, r, e)) {
        placed = true;
        break;
      }
    if (placed) continue;
    edge_reps.push_back(e);
    edge_stab_sizes.push_back(edge_stab(sym, e).size());
  }

  SizeSequence out;
  out.head = static_cast<long long>(edge_reps.size()) - static_cast<long long>(node_classes.size());
  for (std::size_t s : edge_stab_sizes) {
    if (s == 0) throw InternalError("empty edge stabiliser");
    if (out.tail.size() < s) out.tail.resize(s, 0);
    ++out.tail[s - 1];
  }
  return out;
}

Ordering compare_size(const SizeSequence& a, const SizeSequence& b) {
  if (a.head != b.head) return a.head < b.head ? Ordering::Less : Ordering::Greater;
  std::size_t n = std::max(a.tail.size(), b.tail.size());
  for (std::size_t i = 0; i < n; ++i) {
    long long x = i < a.tail.size() ? a.tail[i] : 0;
    long long y = i < b.tail.size() ? b.tail[i] : 0;
    if (x != y) return x < y ? Ordering::Less : Ordering::Greater;
  }
  return Ordering::Equal;
}

Graph make_finite_tree(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 0) throw DomainError("empty tree");
  if (edges.size() != n - 1) throw DomainError("a tree on n nodes has n-1 edges");
  Graph g = make_finite_graph(n, edges);
  if (!g.connected_hint()) throw DomainError("tree must be connected");
  return g;
}

}  // namespace septree
