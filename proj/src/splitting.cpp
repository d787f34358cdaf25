#include "septree/splitting.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "septree/catalog.hpp"
#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/separation.hpp"

namespace septree {

// ------------------------------------------------------------ stepping

namespace {

SizeSequence single_node_size() {
  return size_sequence(make_finite_tree(1, {}), GroupAction());
}

SizeSequence compressed_tree_size(const AmalgamGraph& a) {
  const AmalgamSpec& spec = a.spec();
  Graph tree = a.connecting_tree();
  GroupAction action = spec.tree_action.value_or(GroupAction());
  std::optional<TreeDomain> domain = spec.tree_domain;
  if (!tree.is_finite() && !domain)
    throw DomainError("lazy connecting tree needs a declared domain for size accounting");
  CompressionResult cr = contract_compressible(tree, action, -2, domain, 4);
  return size_sequence(cr.tree, cr.action, -2, cr.domain, 4);
}

}  // namespace

StepResult split_step(const ProcessState& st, std::size_t factor_index, const AmalgamSpec& spec,
                      int match_radius, int resolution) {
  StepResult out;
  out.state = st;
  if (factor_index >= st.factorisation.factors.size()) {
    out.reason = "factor index out of range";
    return out;
  }
  const FactorInfo& target = st.factorisation.factors[factor_index];

  AmalgamGraph a;
  try {
    a = construct_amalgam(spec);
  } catch (const SpecError& e) {
    out.reason = std::string("spec invalid: ") + e.what();
    return out;
  }

  Ball mine = ball(a.graph(), {a.graph().root()}, match_radius);
  Ball theirs = ball(target.graph, {target.graph.root()}, match_radius);
  if (!rooted_ball_isomorphic(mine, theirs)) {
    out.reason = "amalgam does not reproduce the factor (ball mismatch at radius " +
                 std::to_string(match_radius) + ")";
    return out;
  }
  if (is_trivial(spec)) {
    out.reason = "amalgamation is trivial";
    return out;
  }
  if (!has_finite_identification(a, static_cast<std::size_t>(spec.identification_cap), 4)) {
    out.reason = "identification sizes exceed the declared cap";
    return out;
  }
  TypeReport type = classify_type(spec);
  if (type.type == AmalgamType::Neither) {
    out.reason = "amalgamation respects neither action form";
    if (!type.failures.empty()) out.reason += ": " + type.failures.front();
    return out;
  }
  if (!amalgam_distinguishes_ends(a, resolution)) {
    out.reason = "no adhesion separation distinguishes two end proxies at resolution " +
                 std::to_string(resolution);
    return out;
  }

  SizeSequence size = compressed_tree_size(a);

  out.accepted = true;
  out.state.steps = st.steps + 1;
  auto& factors = out.state.factorisation.factors;
  factors.erase(factors.begin() + static_cast<long>(factor_index));
  factors.insert(factors.begin() + static_cast<long>(factor_index),
                 {spec.name + "/g2", spec.g2, spec.action2});
  factors.insert(factors.begin() + static_cast<long>(factor_index),
                 {spec.name + "/g1", spec.g1, spec.action1});
  out.state.factorisation.history.push_back({factor_index, spec.name, size});
  out.state.size_trace.push_back(size);
  return out;
}

TerminalReport is_terminal(const Factorisation& f, int resolution) {
  TerminalReport rep;
  rep.terminal = true;
  for (const auto& factor : f.factors) {
    if (factor.graph.is_finite()) {
      rep.end_counts.push_back(0);
      continue;
    }
    EndProxies near = end_proxies(factor.graph, resolution);
    EndProxies far = end_proxies(factor.graph, resolution + 2);
    if (!near.warnings.empty() || !far.warnings.empty()) rep.indeterminate = true;
    rep.end_counts.push_back(far.proxies.size());
    if (near.proxies.size() != far.proxies.size()) {
      rep.indeterminate = true;  // proxy count flaps across the window
      rep.terminal = false;
    }
    if (far.proxies.size() > 1) rep.terminal = false;
  }
  return rep;
}

// ------------------------------------------------------------ complement

ComplementResult nice_finite_complement(const AmalgamGraph& a, const Edge& tree_edge,
                                        const Morphism& phi, const GroupAction& ambient,
                                        const VertexList& s_prime_local) {
  const AmalgamSpec& spec = a.spec();
  const auto& [u, v] = tree_edge;
  auto side_of_node = [](const VertexId& n) { return n.token().size() % 2 == 0 ? 1 : 2; };
  if (side_of_node(u) == side_of_node(v)) throw DomainError("not a tree edge");
  const VertexId& unode = u.token().size() < v.token().size() ? u : v;
  const VertexId& vnode = u.token().size() < v.token().size() ? v : u;

  int uside = static_cast<int>(unode.token().size() % 2 == 0 ? 1 : 2);
  // adhesion glued along this edge: the label of the deeper node's last step
  int klabel = static_cast<int>(vnode.token().back());
  const VertexList& s_local = spec.adhesion(uside, klabel);

  if (!set_difference(s_local, s_prime_local).empty())
    throw DomainError("S' must contain the adhesion set of the edge");

  // S' must induce a connected subgraph of the factor
  {
    std::set<VertexId> left(s_prime_local.begin(), s_prime_local.end());
    std::deque<VertexId> q{*left.begin()};
    std::set<VertexId> seen{*left.begin()};
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      for (const auto& y : spec.factor(uside).neighbors(x))
        if (left.count(y) && seen.insert(y).second) q.push_back(y);
    }
    if (seen.size() != left.size()) throw DomainError("S' must be connected");
  }

  // phi must reverse the edge: the glued adhesion class set is fixed
  VertexList pi_s;
  for (const auto& x : s_local) pi_s.push_back(a.vertex_at(unode, x));
  pi_s = sorted_unique(pi_s);
  VertexList phi_s;
  for (const auto& x : pi_s) phi_s.push_back(phi(x));
  phi_s = sorted_unique(phi_s);
  if (phi_s != pi_s)
    throw DomainError("the automorphism does not fix the adhesion set of the edge");

  bool full = s_prime_local == spec.factor(uside).all_vertices();

  VertexList first_half, second_half;
  if (!full) {
    for (const auto& x : s_prime_local) first_half.push_back(a.vertex_at(unode, x));
    first_half = sorted_unique(first_half);
    for (const auto& x : first_half) second_half.push_back(phi(x));
    second_half = sorted_unique(second_half);
  } else {
    for (const auto& x : spec.factor(1).all_vertices())
      first_half.push_back(a.vertex_at(unode, x));
    first_half = sorted_unique(first_half);
    for (const auto& x : spec.factor(2).all_vertices())
      second_half.push_back(a.vertex_at(vnode, x));
    second_half = sorted_unique(second_half);
  }
  VertexList chunk = set_union(first_half, second_half);

  // induced subgraph, relabelled to a finite graph
  std::map<VertexId, int> index;
  std::vector<std::string> labels;
  for (const auto& key : chunk) {
    index[key] = static_cast<int>(labels.size());
    labels.push_back(key.str());
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& key : chunk)
    for (const auto& nb : a.graph().neighbors(key))
      if (index.count(nb) && key < nb) edges.emplace_back(index[key], index[nb]);
  ComplementResult res;
  res.g2 = make_finite_graph(chunk.size(), edges, labels);
  if (!res.g2.connected_hint()) throw DomainError("complement chunk is not connected");

  // best-effort re-specified amalgamation g1 * chunk
  try {
    AmalgamSpec re;
    re.name = spec.name + "+complement";
    re.g1 = spec.factor(uside);
    re.action1 = spec.action(uside);
    re.g2 = res.g2;
    re.action2 = GroupAction();
    re.index1 = spec.labels(uside);
    int b1 = 0, b2 = 0;
    for (int k : re.index1) b1 = std::max(b1, k + 1);
    b2 = b1 + 1;
    re.index2 = {b1, b2};

    // adhesion copies of S' inside g1, one per label, via group words
    WordEnum elems = enumerate_words(re.action1, -1, re.g1.all_vertices(), 50000);
    int base_label = klabel;
    for (int k : re.index1) {
      bool found = false;
      for (const auto& w : elems.morphisms) {
        if (w.apply(spec.adhesion(uside, base_label)) != spec.adhesion(uside, k)) continue;
        re.adhesion1[k] = full ? re.g1.all_vertices() : w.apply(s_prime_local);
        found = true;
        break;
      }
      if (!found) throw DomainError("no word carries the base adhesion to label " +
                                    std::to_string(k));
    }

    auto g2_of = [&](const VertexId& key) {
      return VertexId(static_cast<std::int64_t>(index.at(key)));
    };
    VertexList a1, a2;
    for (const auto& key : first_half) a1.push_back(g2_of(key));
    for (const auto& key : second_half) a2.push_back(g2_of(key));
    re.adhesion2[b1] = sorted_unique(a1);
    re.adhesion2[b2] = sorted_unique(a2);

    for (int k : re.index1) {
      // chart: x in the k-th S' copy -> its class in the chunk
      const Morphism* wk = nullptr;
      for (const auto& w : elems.morphisms)
        if (w.apply(re.adhesion1[base_label]) == re.adhesion1[k]) {
          wk = &w;
          break;
        }
      if (!wk) throw DomainError("no chart word for label " + std::to_string(k));
      Morphism inv = wk->inverse(re.action1);
      std::map<VertexId, VertexId> m1, m2;
      for (const auto& x : re.adhesion1[k]) {
        VertexId base = full ? inv(x) : inv(x);
        VertexId key = a.vertex_at(unode, base);
        m1[x] = g2_of(key);
        m2[x] = g2_of(full ? a.vertex_at(vnode, base) : phi(key));
      }
      re.bonding[{k, b1}] = m1;
      re.bonding[{k, b2}] = m2;
    }

    for (int k : re.index1) re.back_label[k] = b1;
    re.back_label[b1] = re.index1.front();
    re.back_label[b2] = re.index1.front();
    re.validate();
    res.respecified = re;
  } catch (const std::exception& e) {
    res.note = std::string("re-specification not constructed: ") + e.what();
  }
  (void)ambient;
  return res;
}

// ------------------------------------------------------------ enlargement

TreeDecomposition enlarge_parts(const TreeDecomposition& td, const VertexList& s,
                                const GroupAction& action, int budget, int probe_radius) {
  if (budget == -2) budget = action.default_budget();
  if (s.empty()) return td;
  for (const auto& v : s)
    if (!td.graph().valid_vertex(v)) throw DomainError("invalid vertex " + v.str());

  VertexList tree_win = td.tree().is_finite()
                            ? td.tree().all_vertices()
                            : ball(td.tree(), {td.tree().root()}, probe_radius + 4).vertices;

  // already inside a part: nothing to do
  for (const auto& t : tree_win) {
    bool inside = true;
    for (const auto& v : s)
      if (!td.part_contains(t, v)) {
        inside = false;
        break;
      }
    if (inside) return td;
  }

  // connected hull of s
  VertexList hull = sorted_unique(s);
  auto connected = [&](const VertexList& vs) {
    std::set<VertexId> inside(vs.begin(), vs.end());
    std::set<VertexId> seen{vs.front()};
    std::deque<VertexId> q{vs.front()};
    while (!q.empty()) {
      VertexId x = q.front();
      q.pop_front();
      for (const auto& y : td.graph().neighbors(x))
        if (inside.count(y) && seen.insert(y).second) q.push_back(y);
    }
    return seen.size() == inside.size();
  };
  while (!connected(hull)) {
    // shortest path from the component of hull.front() to the rest
    std::set<VertexId> comp{hull.front()};
    std::deque<VertexId> cq{hull.front()};
    while (!cq.empty()) {
      VertexId x = cq.front();
      cq.pop_front();
      for (const auto& y : td.graph().neighbors(x))
        if (contains(hull, y) && comp.insert(y).second) cq.push_back(y);
    }
    std::map<VertexId, VertexId> parent;
    std::deque<VertexId> q(comp.begin(), comp.end());
    for (const auto& c : comp) parent[c] = c;
    std::optional<VertexId> hit;
    while (!q.empty() && !hit) {
      VertexId x = q.front();
      q.pop_front();
      for (const auto& y : td.graph().neighbors(x)) {
        if (parent.count(y)) continue;
        parent[y] = x;
        if (contains(hull, y) && !comp.count(y)) {
          hit = y;
          break;
        }
        q.push_back(y);
      }
    }
    if (!hit) throw DomainError("vertices of s lie in different components");
    VertexId walk = *hit;
    while (!comp.count(walk)) {
      hull.push_back(walk);
      walk = parent[walk];
    }
    hull = sorted_unique(hull);
  }
  VertexList s_hull = hull;

  // support subtree of the hull
  VertexList support;
  for (const auto& t : tree_win)
    if (!td.part_within(t, s_hull).empty()) support.push_back(t);
  support = sorted_unique(support);
  if (support.empty()) throw DomainError("hull not covered by explored parts");

  // graph window for word enumeration
  VertexList gwin = s_hull;
  for (const auto& t : tree_win)
    if (td.has_part_lists()) gwin = set_union(gwin, td.part(t));
  if (!td.graph().is_finite())
    gwin = set_union(gwin, ball(td.graph(), {td.graph().root()}, probe_radius * 2).vertices);

  WordEnum words = enumerate_words(action, td.graph().is_finite() ? -1 : budget, gwin);

  // V'_t = V_t plus every word image of the hull whose support image hits t
  auto base_part = [td](const VertexId& t) { return td.part(t); };
  struct Shift {
    VertexList image_hull;
    std::vector<VertexList> image_parts;  // images of the support parts
  };
  auto shifts = std::make_shared<std::vector<Shift>>();
  for (const auto& w : words.morphisms) {
    Shift sh;
    sh.image_hull = w.apply(s_hull);
    for (const auto& q : support) sh.image_parts.push_back(w.apply(td.part(q)));
    shifts->push_back(std::move(sh));
  }

  auto parts_fn = [base_part, shifts](const VertexId& t) {
    VertexList out = base_part(t);
    VertexList mine = out;
    for (const auto& sh : *shifts)
      for (const auto& img : sh.image_parts)
        if (img == mine) {
          out = set_union(out, sh.image_hull);
          break;
        }
    return out;
  };

  TreeDecomposition enlarged =
      td.is_finite()
          ? TreeDecomposition::finite(td.graph(), td.tree(),
                                      [&] {
                                        std::map<VertexId, VertexList> parts;
                                        for (const auto& t : td.tree().all_vertices())
                                          parts[t] = parts_fn(t);
                                        return parts;
                                      }())
          : TreeDecomposition::lazy_parts(td.graph(), td.tree(), parts_fn, td.adhesion_bound());

  // the enlargement must place s inside one part
  bool placed = false;
  for (const auto& t : tree_win)
    if (set_difference(s, parts_fn(t)).empty()) {
      placed = true;
      break;
    }
  if (!placed) throw BudgetError("budget too small to gather s inside one part");
  return enlarged;
}

// ------------------------------------------------------------ process

ProcessOutcome run_process(const FactorInfo& initial, const Driver& driver, int max_steps,
                           int resolution, int match_radius) {
  ProcessOutcome out;
  out.state.factorisation.factors = {initial};
  out.state.size_trace.push_back(single_node_size());

  while (true) {
    TerminalReport term = is_terminal(out.state.factorisation, resolution);
    if (term.indeterminate) out.log.push_back("indeterminate end counts at this resolution");
    if (term.terminal) {
      out.kind = ProcessOutcome::Kind::Terminated;
      return out;
    }
    if (out.state.steps >= max_steps) {
      out.kind = ProcessOutcome::Kind::BudgetExceeded;
      return out;
    }
    bool advanced = false;
    for (int attempt = 0; attempt < 3 && !advanced; ++attempt) {
      auto choice = driver(out.state);
      if (!choice) break;
      StepResult step = split_step(out.state, choice->first, choice->second, match_radius,
                                   resolution);
      if (step.accepted) {
        out.state = step.state;
        out.log.push_back("step " + std::to_string(out.state.steps) + ": split factor " +
                          std::to_string(choice->first) + " via " + choice->second.name);
        advanced = true;
      } else {
        out.log.push_back("rejected " + choice->second.name + ": " + step.reason);
      }
    }
    if (!advanced) {
      out.kind = ProcessOutcome::Kind::Stalled;
      return out;
    }
  }
}

std::vector<TraceEntry> size_trace_report(const ProcessState& st) {
  std::vector<TraceEntry> out;
  for (std::size_t i = 0; i + 1 < st.size_trace.size(); ++i) {
    TraceEntry e;
    e.before = st.size_trace[i];
    e.after = st.size_trace[i + 1];
    e.cmp = compare_size(e.after, e.before);
    e.anomaly = e.cmp != Ordering::Greater;
    out.push_back(std::move(e));
  }
  return out;
}

// ------------------------------------------------------------ drivers

namespace drivers {

Driver split_signature(const std::string& graph_signature, const AmalgamSpec& spec) {
  return [graph_signature, spec](const ProcessState& st)
             -> std::optional<std::pair<std::size_t, AmalgamSpec>> {
    for (std::size_t i = 0; i < st.factorisation.factors.size(); ++i) {
      const FactorInfo& f = st.factorisation.factors[i];
      if (f.graph.signature() != graph_signature) continue;
      return std::make_pair(i, spec);
    }
    return std::nullopt;
  };
}

std::vector<std::pair<std::string, Driver>> strategies_for(const std::string& name) {
  if (name == "line")
    return {{"two-edges", split_signature("line", catalog::double_ray())},
            {"self-swap", split_signature("line", catalog::double_ray_swap())}};
  if (name == "tree(3)")
    return {{"claw-point", split_signature("tree(3)", catalog::claw_point_tree3())},
            {"point-claw", split_signature("tree(3)", catalog::point_claw_tree3())}};
  if (name == "ladder")
    return {{"squares", split_signature("ladder", catalog::ladder_squares())},
            {"triples", split_signature("ladder", catalog::ladder_triples())}};
  if (name == "grid2d")
    return {{"noop", split_signature("grid2d", catalog::double_ray())},
            {"noop2", split_signature("grid2d", catalog::double_ray_swap())}};
  throw DomainError("no shipped strategies for '" + name + "'");
}

}  // namespace drivers

}  // namespace septree
