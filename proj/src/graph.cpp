#include "septree/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "septree/errors.hpp"

namespace septree {

VertexList GraphOracle::all_vertices() const {
  throw DomainError("all_vertices: graph is not finite");
}

const GraphOracle& Graph::oracle() const {
  if (!oracle_) throw DomainError("empty graph handle");
  return *oracle_;
}

VertexList Graph::neighbors(const VertexId& v) const {
  if (!valid_vertex(v)) throw DomainError("invalid vertex id " + v.str());
  VertexList ns = oracle().neighbors(v);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == v) throw OracleError("self-loop reported at " + v.str());
    if (i + 1 < ns.size() && !(ns[i] < ns[i + 1]))
      throw OracleError("neighbor list not sorted/unique at " + v.str());
  }
  return ns;
}

int Ball::distance_of(const VertexId& v) const {
  auto it = std::lower_bound(distances.begin(), distances.end(), v,
                             [](const auto& p, const VertexId& x) { return p.first < x; });
  if (it == distances.end() || it->first != v) throw DomainError("vertex not in ball");
  return it->second;
}

Ball ball(const Graph& g, const VertexList& centers, int radius) {
  if (centers.empty()) throw DomainError("ball: empty center set");
  if (radius < 0) throw DomainError("ball: negative radius");

  std::map<VertexId, int> dist;
  std::map<VertexId, VertexList> adj;
  std::deque<VertexId> queue;
  for (const auto& c : sorted_unique(centers)) {
    if (!g.valid_vertex(c)) throw DomainError("invalid vertex id " + c.str());
    dist[c] = 0;
    queue.push_back(c);
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    int d = dist[v];
    if (d == radius) continue;
    adj[v] = g.neighbors(v);
    for (const auto& u : adj[v]) {
      if (!dist.count(u)) {
        dist[u] = d + 1;
        queue.push_back(u);
      }
    }
  }
  // neighbour lists of the outer layer are needed for the induced edges
  for (auto& [v, d] : dist)
    if (!adj.count(v)) adj[v] = g.neighbors(v);

  // symmetry discipline on everything explored
  for (const auto& [v, ns] : adj)
    for (const auto& u : ns)
      if (adj.count(u) && !contains(adj.at(u), v))
        throw OracleError("asymmetric adjacency: " + v.str() + " lists " + u.str() +
                          " but not conversely");

  Ball b;
  b.centers = sorted_unique(centers);
  b.radius = radius;
  for (auto& [v, d] : dist) {
    b.vertices.push_back(v);
    b.distances.emplace_back(v, d);
    if (d == radius) b.boundary.push_back(v);
  }
  std::set<Edge> edges;
  for (const auto& [v, ns] : adj)
    for (const auto& u : ns)
      if (dist.count(u)) edges.insert(v < u ? Edge{v, u} : Edge{u, v});
  b.edges.assign(edges.begin(), edges.end());
  return b;
}

namespace {

// Generic capped exploration for graphs without a component oracle.
ComponentsAnalysis generic_components(const Graph& g, const VertexList& s, int explore_cap) {
  ComponentsAnalysis out;
  VertexList ports;
  for (const auto& v : s)
    for (const auto& u : g.neighbors(v))
      if (!contains(s, u)) ports.push_back(u);
  ports = sorted_unique(ports);

  std::set<VertexId> assigned;
  for (const auto& p : ports) {
    if (assigned.count(p)) continue;
    // BFS in G - s from p, up to explore_cap layers
    std::map<VertexId, int> dist;
    std::deque<VertexId> queue;
    dist[p] = 0;
    queue.push_back(p);
    bool capped = false;
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      if (dist[v] == explore_cap) {
        capped = true;
        continue;
      }
      for (const auto& u : g.neighbors(v)) {
        if (contains(s, u) || dist.count(u)) continue;
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
    ComponentHandle h;
    h.separator = s;
    VertexList members;
    for (auto& [v, d] : dist) members.push_back(v);
    h.ports = set_intersection(members, ports);
    for (const auto& q : h.ports) assigned.insert(q);
    h.seed = h.ports.front();
    if (capped) {
      h.verdict = Finiteness::unknown_beyond(explore_cap);
      out.warnings.push_back("component at " + h.seed.str() + " still growing at cap " +
                             std::to_string(explore_cap));
    } else {
      h.verdict = Finiteness::finite(static_cast<std::int64_t>(members.size()));
      h.members = members;
    }
    out.components.push_back(std::move(h));
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const ComponentHandle& a, const ComponentHandle& b) { return a.seed < b.seed; });
  return out;
}

}  // namespace

ComponentsAnalysis components_minus_full(const Graph& g, const VertexList& s_in, int explore_cap) {
  VertexList s = sorted_unique(s_in);
  for (const auto& v : s)
    if (!g.valid_vertex(v)) throw DomainError("invalid vertex id " + v.str());

  if (s.empty()) {
    // G - {} = G: the single component containing the root
    ComponentHandle h;
    h.seed = g.root();
    if (auto n = g.vertex_count()) {
      h.verdict = Finiteness::finite(static_cast<std::int64_t>(*n));
      h.members = g.all_vertices();
    } else {
      h.verdict = Finiteness::infinite();
    }
    ComponentsAnalysis out;
    out.components.push_back(std::move(h));
    return out;
  }

  if (auto exact = g.oracle().analyze_components(s)) {
    for (auto& c : exact->components) c.separator = s;
    std::sort(exact->components.begin(), exact->components.end(),
              [](const ComponentHandle& a, const ComponentHandle& b) { return a.seed < b.seed; });
    return *exact;
  }
  return generic_components(g, s, explore_cap);
}

std::vector<ComponentHandle> components_minus(const Graph& g, const VertexList& s,
                                              int explore_cap) {
  return components_minus_full(g, s, explore_cap).components;
}

const ComponentHandle* component_of(const Graph& g, const std::vector<ComponentHandle>& comps,
                                    const VertexList& separator, const VertexId& v,
                                    std::int64_t step_cap) {
  if (contains(separator, v)) return nullptr;
  if (separator.empty()) return comps.empty() ? nullptr : &comps.front();
  for (const auto& c : comps)
    if (c.has_port(v)) return &c;
  // BFS in G - separator until a port of some component is hit
  std::set<VertexId> seen{v};
  std::deque<VertexId> queue{v};
  std::int64_t steps = 0;
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    if (++steps > step_cap) throw BudgetError("component_of: step cap exhausted near " + v.str());
    for (const auto& u : g.neighbors(x)) {
      if (contains(separator, u) || seen.count(u)) continue;
      for (const auto& c : comps)
        if (c.has_port(u)) return &c;
      seen.insert(u);
      queue.push_back(u);
    }
  }
  return nullptr;  // component not adjacent to the separator (disconnected input)
}

bool rooted_ball_isomorphic(const Ball& x, const Ball& y) {
  if (x.vertices.size() != y.vertices.size() || x.edges.size() != y.edges.size()) return false;
  if (x.centers.size() != 1 || y.centers.size() != 1) return false;
  std::map<VertexId, VertexList> ax, ay;
  for (const auto& [u, v] : x.edges) {
    ax[u].push_back(v);
    ax[v].push_back(u);
  }
  for (const auto& [u, v] : y.edges) {
    ay[u].push_back(v);
    ay[v].push_back(u);
  }
  for (auto& [v, ns] : ax) ns = sorted_unique(ns);
  for (auto& [v, ns] : ay) ns = sorted_unique(ns);

  std::map<VertexId, VertexId> fwd, bwd;
  std::function<bool(std::size_t)> extend = [&](std::size_t idx) -> bool {
    if (idx == x.vertices.size()) return true;
    VertexId v = x.vertices[idx];
    if (fwd.count(v)) return extend(idx + 1);
    for (const auto& w : y.vertices) {
      if (bwd.count(w)) continue;
      if (x.distance_of(v) != y.distance_of(w)) continue;
      if (ax[v].size() != ay[w].size()) continue;
      bool compatible = true;
      for (const auto& u : ax[v])
        if (fwd.count(u) && !contains(ay[w], fwd[u])) compatible = false;
      for (const auto& u : ay[w])
        if (bwd.count(u) && !contains(ax[v], bwd[u])) compatible = false;
      if (!compatible) continue;
      fwd[v] = w;
      bwd[w] = v;
      if (extend(idx + 1)) return true;
      fwd.erase(v);
      bwd.erase(w);
    }
    return false;
  };
  fwd[x.centers.front()] = y.centers.front();
  bwd[y.centers.front()] = x.centers.front();
  return extend(0);
}

}  // namespace septree
