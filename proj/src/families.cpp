#include "septree/families.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "septree/errors.hpp"

namespace septree {

// ---------------------------------------------------------------- finite

FiniteGraphOracle::FiniteGraphOracle(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                                     std::vector<std::string> labels)
    : adj_(n), labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n) throw DomainError("label count does not match vertex count");
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= static_cast<int>(n) || v >= static_cast<int>(n))
      throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("self-loop rejected");
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& ns : adj_) {
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  }
  // connectivity from vertex 0
  if (n > 0) {
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    std::size_t cnt = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u : adj_[static_cast<std::size_t>(v)])
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          ++cnt;
          q.push_back(u);
        }
    }
    connected_ = (cnt == n);
  }
  std::ostringstream os;
  os << "finite:" << n << ':';
  for (std::size_t v = 0; v < n; ++v)
    for (int u : adj_[v])
      if (static_cast<int>(v) < u) os << v << '-' << u << ',';
  signature_ = os.str();
}

VertexList FiniteGraphOracle::neighbors(const VertexId& v) const {
  auto i = static_cast<std::size_t>(v.token()[0]);
  VertexList out;
  for (int u : adj_[i]) out.push_back(VertexId(static_cast<std::int64_t>(u)));
  return out;
}

bool FiniteGraphOracle::valid_vertex(const VertexId& v) const {
  return v.token().size() == 1 && v.token()[0] >= 0 &&
         v.token()[0] < static_cast<std::int64_t>(adj_.size());
}

std::optional<int> FiniteGraphOracle::degree_bound() const {
  std::size_t d = 0;
  for (const auto& ns : adj_) d = std::max(d, ns.size());
  return static_cast<int>(d);
}

VertexList FiniteGraphOracle::all_vertices() const {
  VertexList out;
  for (std::size_t i = 0; i < adj_.size(); ++i) out.push_back(VertexId(static_cast<std::int64_t>(i)));
  return out;
}

std::optional<int> FiniteGraphOracle::index_of_label(const std::string& l) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<ComponentsAnalysis> FiniteGraphOracle::analyze_components(const VertexList& s) const {
  ComponentsAnalysis out;
  std::set<VertexId> sep(s.begin(), s.end());
  std::set<VertexId> assigned;
  VertexList ports;
  for (const auto& v : s)
    for (const auto& u : neighbors(v))
      if (!sep.count(u)) ports.push_back(u);
  ports = sorted_unique(ports);
  for (const auto& p : ports) {
    if (assigned.count(p)) continue;
    VertexList members{p};
    std::deque<VertexId> q{p};
    std::set<VertexId> seen{p};
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop_front();
      for (const auto& u : neighbors(v))
        if (!sep.count(u) && seen.insert(u).second) {
          members.push_back(u);
          q.push_back(u);
        }
    }
    members = sorted_unique(members);
    ComponentHandle h;
    h.ports = set_intersection(members, ports);
    for (const auto& x : h.ports) assigned.insert(x);
    h.seed = h.ports.front();
    h.verdict = Finiteness::finite(static_cast<std::int64_t>(members.size()));
    h.members = members;
    out.components.push_back(std::move(h));
  }
  return out;
}

Graph make_finite_graph(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                        std::vector<std::string> labels) {
  return Graph(std::make_shared<FiniteGraphOracle>(n, edges, std::move(labels)));
}

// ---------------------------------------------------------------- explicit

ExplicitGraphOracle::ExplicitGraphOracle(std::map<VertexId, VertexList> adjacency, VertexId root)
    : adj_(std::move(adjacency)), root_(std::move(root)) {
  if (!adj_.count(root_)) throw DomainError("root not among the vertices");
  for (auto& [v, ns] : adj_) {
    ns = sorted_unique(ns);
    for (const auto& u : ns) {
      if (u == v) throw DomainError("self-loop rejected at " + v.str());
      auto it = adj_.find(u);
      if (it == adj_.end()) throw DomainError("edge endpoint " + u.str() + " undeclared");
      if (!contains(it->second, v))
        throw DomainError("asymmetric adjacency between " + v.str() + " and " + u.str());
    }
  }
  std::set<VertexId> seen{root_};
  std::deque<VertexId> q{root_};
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (const auto& u : adj_.at(v))
      if (seen.insert(u).second) q.push_back(u);
  }
  connected_ = seen.size() == adj_.size();
  std::ostringstream os;
  os << "explicit:";
  for (const auto& [v, ns] : adj_) {
    os << v.str() << "->";
    for (const auto& u : ns) os << u.str() << ',';
    os << ';';
  }
  signature_ = os.str();
}

VertexList ExplicitGraphOracle::neighbors(const VertexId& v) const { return adj_.at(v); }

std::optional<int> ExplicitGraphOracle::degree_bound() const {
  std::size_t d = 0;
  for (const auto& [v, ns] : adj_) d = std::max(d, ns.size());
  return static_cast<int>(d);
}

VertexList ExplicitGraphOracle::all_vertices() const {
  VertexList out;
  for (const auto& [v, ns] : adj_) out.push_back(v);
  return out;
}

std::optional<ComponentsAnalysis> ExplicitGraphOracle::analyze_components(
    const VertexList& s) const {
  ComponentsAnalysis out;
  std::set<VertexId> assigned;
  VertexList ports;
  for (const auto& v : s)
    for (const auto& u : adj_.at(v))
      if (!contains(s, u)) ports.push_back(u);
  ports = sorted_unique(ports);
  for (const auto& p : ports) {
    if (assigned.count(p)) continue;
    VertexList members{p};
    std::deque<VertexId> q{p};
    std::set<VertexId> seen{p};
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop_front();
      for (const auto& u : adj_.at(v))
        if (!contains(s, u) && seen.insert(u).second) {
          members.push_back(u);
          q.push_back(u);
        }
    }
    members = sorted_unique(members);
    ComponentHandle h;
    h.ports = set_intersection(members, ports);
    for (const auto& x : h.ports) assigned.insert(x);
    h.seed = h.ports.front();
    h.verdict = Finiteness::finite(static_cast<std::int64_t>(members.size()));
    h.members = members;
    out.components.push_back(std::move(h));
  }
  return out;
}

Graph make_explicit_graph(std::map<VertexId, VertexList> adjacency, VertexId root) {
  return Graph(std::make_shared<ExplicitGraphOracle>(std::move(adjacency), std::move(root)));
}

Graph make_path(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  return make_finite_graph(n, e);
}

Graph make_cycle(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i < n; ++i)
    e.emplace_back(static_cast<int>(i), static_cast<int>((i + 1) % n));
  return make_finite_graph(n, e);
}

Graph make_complete(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return make_finite_graph(n, e);
}

Graph make_star(std::size_t leaves) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, static_cast<int>(i));
  return make_finite_graph(leaves + 1, e);
}

// ---------------------------------------------------------------- line

namespace {

class LineOracle : public GraphOracle {
 public:
  VertexList neighbors(const VertexId& v) const override {
    std::int64_t x = v.token()[0];
    return {VertexId(x - 1), VertexId(x + 1)};
  }
  VertexId root() const override { return VertexId(std::int64_t{0}); }
  bool valid_vertex(const VertexId& v) const override { return v.token().size() == 1; }
  std::optional<int> degree_bound() const override { return 2; }
  std::string signature() const override { return "line"; }

  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override {
    std::vector<std::int64_t> xs;
    for (const auto& v : s) xs.push_back(v.token()[0]);
    std::sort(xs.begin(), xs.end());
    ComponentsAnalysis out;
    auto ray = [&](std::int64_t port) {
      ComponentHandle h;
      h.ports = {VertexId(port)};
      h.seed = h.ports.front();
      h.verdict = Finiteness::infinite();
      return h;
    };
    out.components.push_back(ray(xs.front() - 1));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      std::int64_t a = xs[i], b = xs[i + 1];
      if (b - a < 2) continue;
      ComponentHandle h;
      VertexList members;
      for (std::int64_t x = a + 1; x < b; ++x) members.push_back(VertexId(x));
      h.ports = sorted_unique({VertexId(a + 1), VertexId(b - 1)});
      h.seed = h.ports.front();
      h.verdict = Finiteness::finite(b - a - 1);
      h.members = members;
      out.components.push_back(std::move(h));
    }
    out.components.push_back(ray(xs.back() + 1));
    return out;
  }
};

}  // namespace

Graph line_graph() {
  static const auto oracle = std::make_shared<LineOracle>();
  return Graph(oracle);
}

GroupAction line_action() {
  Generator t{"t", "t~", [](const VertexId& v) { return VertexId(v.token()[0] + 1); }};
  Generator ti{"t~", "t", [](const VertexId& v) { return VertexId(v.token()[0] - 1); }};
  Generator r{"r", "r", [](const VertexId& v) { return VertexId(-v.token()[0]); }};
  return GroupAction({t, ti, r});
}

// ---------------------------------------------------------------- grid

namespace {

class GridOracle : public GraphOracle {
 public:
  VertexList neighbors(const VertexId& v) const override {
    std::int64_t x = v.token()[0], y = v.token()[1];
    VertexList out{VertexId({x - 1, y}), VertexId({x, y - 1}), VertexId({x, y + 1}),
                   VertexId({x + 1, y})};
    std::sort(out.begin(), out.end());
    return out;
  }
  VertexId root() const override { return VertexId({0, 0}); }
  bool valid_vertex(const VertexId& v) const override { return v.token().size() == 2; }
  std::optional<int> degree_bound() const override { return 4; }
  std::string signature() const override { return "grid2d"; }

  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override {
    std::int64_t xlo = s[0].token()[0], xhi = xlo, ylo = s[0].token()[1], yhi = ylo;
    for (const auto& v : s) {
      xlo = std::min(xlo, v.token()[0]);
      xhi = std::max(xhi, v.token()[0]);
      ylo = std::min(ylo, v.token()[1]);
      yhi = std::max(yhi, v.token()[1]);
    }
    auto inside_box = [&](const VertexId& v) {
      return v.token()[0] >= xlo && v.token()[0] <= xhi && v.token()[1] >= ylo &&
             v.token()[1] <= yhi;
    };
    VertexList ports;
    for (const auto& v : s)
      for (const auto& u : neighbors(v))
        if (!contains(s, u)) ports.push_back(u);
    ports = sorted_unique(ports);

    // Anything reaching outside the bounding box of S joins the single
    // infinite outer region; regions confined to the box are finite.
    ComponentsAnalysis out;
    std::set<VertexId> assigned;
    VertexList escaped_ports;
    for (const auto& p : ports) {
      if (assigned.count(p)) continue;
      bool escaped = false;
      VertexList members;
      std::set<VertexId> seen{p};
      std::deque<VertexId> q{p};
      while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        members.push_back(v);
        if (!inside_box(v)) {
          escaped = true;
          continue;  // outside the box everything is one infinite region
        }
        for (const auto& u : neighbors(v))
          if (!contains(s, u) && seen.insert(u).second) q.push_back(u);
      }
      members = sorted_unique(members);
      VertexList comp_ports = set_intersection(members, ports);
      if (escaped) {
        for (const auto& x : comp_ports) {
          assigned.insert(x);
          escaped_ports.push_back(x);
        }
      } else {
        ComponentHandle h;
        h.ports = comp_ports;
        for (const auto& x : comp_ports) assigned.insert(x);
        h.seed = h.ports.front();
        h.verdict = Finiteness::finite(static_cast<std::int64_t>(members.size()));
        h.members = members;
        out.components.push_back(std::move(h));
      }
    }
    if (!escaped_ports.empty()) {
      ComponentHandle h;
      h.ports = sorted_unique(escaped_ports);
      h.seed = h.ports.front();
      h.verdict = Finiteness::infinite();
      out.components.push_back(std::move(h));
    }
    return out;
  }
};

}  // namespace

Graph grid2d_graph() {
  static const auto oracle = std::make_shared<GridOracle>();
  return Graph(oracle);
}

GroupAction grid2d_action() {
  auto shift = [](std::size_t i, std::int64_t d) {
    return [i, d](const VertexId& v) {
      auto t = v.token();
      t[i] += d;
      return VertexId(t);
    };
  };
  return GroupAction({{"tx", "tx~", shift(0, 1)},
                      {"tx~", "tx", shift(0, -1)},
                      {"ty", "ty~", shift(1, 1)},
                      {"ty~", "ty", shift(1, -1)}});
}

// ---------------------------------------------------------------- tree

namespace {

// Reduced words over d involutions; adjacent letters never repeat.
bool valid_word(const std::vector<std::int64_t>& w, int d) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= d) return false;
    if (i > 0 && w[i] == w[i - 1]) return false;
  }
  return true;
}

class RegularTreeOracle : public GraphOracle {
 public:
  explicit RegularTreeOracle(int d) : d_(d) {
    if (d < 1) throw DomainError("tree degree must be >= 1");
  }

  VertexList neighbors(const VertexId& v) const override {
    VertexList out;
    const auto& w = v.token();
    for (std::int64_t i = 0; i < d_; ++i) {
      auto t = w;
      if (!t.empty() && t.back() == i)
        t.pop_back();
      else
        t.push_back(i);
      out.push_back(VertexId(t));
    }
    return sorted_unique(out);
  }
  VertexId root() const override { return VertexId(std::vector<std::int64_t>{}); }
  bool valid_vertex(const VertexId& v) const override { return valid_word(v.token(), d_); }
  std::optional<int> degree_bound() const override { return d_; }
  std::string signature() const override { return "tree(" + std::to_string(d_) + ")"; }
  std::optional<std::size_t> vertex_count() const override {
    if (d_ == 1) return 2;  // single edge
    return std::nullopt;
  }
  VertexList all_vertices() const override {
    if (d_ != 1) return GraphOracle::all_vertices();
    return {root(), VertexId(std::vector<std::int64_t>{0})};
  }

  // vertex set of the tree path u..v, inclusive (prefix structure)
  static VertexList tree_path(const VertexId& u, const VertexId& v) {
    const auto& a = u.token();
    const auto& b = v.token();
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    VertexList out;
    for (std::size_t len = a.size() + 1; len-- > common;)
      out.push_back(VertexId(std::vector<std::int64_t>(a.begin(), a.begin() + static_cast<long>(len))));
    for (std::size_t len = common + 1; len <= b.size(); ++len)
      out.push_back(VertexId(std::vector<std::int64_t>(b.begin(), b.begin() + static_cast<long>(len))));
    return sorted_unique(out);
  }

  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override {
    if (d_ == 1) {
      // exhaustive on the two vertices
      FiniteGraphOracle k2(2, {{0, 1}});
      auto sub = [&](const VertexId& v) {
        return VertexId(static_cast<std::int64_t>(v.token().empty() ? 0 : 1));
      };
      VertexList s2;
      for (const auto& v : s) s2.push_back(sub(v));
      auto res = k2.analyze_components(sorted_unique(s2));
      auto lift = [&](const VertexId& v) {
        return v.token()[0] == 0 ? root() : VertexId(std::vector<std::int64_t>{0});
      };
      for (auto& c : res->components) {
        VertexList ps;
        for (const auto& p : c.ports) ps.push_back(lift(p));
        c.ports = sorted_unique(ps);
        c.seed = c.ports.front();
        if (c.members) {
          VertexList ms;
          for (const auto& m : *c.members) ms.push_back(lift(m));
          c.members = sorted_unique(ms);
        }
      }
      return res;
    }

    VertexList ports;
    for (const auto& v : s)
      for (const auto& u : neighbors(v))
        if (!contains(s, u)) ports.push_back(u);
    ports = sorted_unique(ports);

    // Steiner hull of the separator
    VertexList hull;
    for (const auto& a : s)
      for (const auto& b : s)
        for (const auto& x : tree_path(a, b)) hull.push_back(x);
    hull = sorted_unique(hull);

    // components via "tree path avoids S"
    std::vector<VertexList> classes;
    for (const auto& p : ports) {
      bool placed = false;
      for (auto& cls : classes) {
        VertexList path = tree_path(cls.front(), p);
        if (set_intersection(path, s).empty()) {
          cls.push_back(p);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({p});
    }

    ComponentsAnalysis out;
    for (auto& cls : classes) {
      ComponentHandle h;
      h.ports = sorted_unique(cls);
      h.seed = h.ports.front();
      // finite iff confined to the hull; every direction off the hull is infinite
      VertexList members;
      bool infinite = false;
      std::set<VertexId> seen{h.seed};
      std::deque<VertexId> q{h.seed};
      if (!contains(hull, h.seed)) infinite = true;
      while (!q.empty() && !infinite) {
        VertexId v = q.front();
        q.pop_front();
        members.push_back(v);
        for (const auto& u : neighbors(v)) {
          if (contains(s, u) || seen.count(u)) continue;
          if (!contains(hull, u)) {
            infinite = true;
            break;
          }
          seen.insert(u);
          q.push_back(u);
        }
      }
      h.verdict = infinite ? Finiteness::infinite()
                           : Finiteness::finite(static_cast<std::int64_t>(members.size()));
      if (!infinite) h.members = sorted_unique(members);
      out.components.push_back(std::move(h));
    }
    return out;
  }

 private:
  int d_;
};

}  // namespace

Graph regular_tree_graph(int degree) {
  return Graph(std::make_shared<RegularTreeOracle>(degree));
}

GroupAction regular_tree_action(int degree) {
  std::vector<Generator> gens;
  for (std::int64_t i = 0; i < degree; ++i) {
    std::string tag = "a" + std::to_string(i);
    gens.push_back({tag, tag, [i](const VertexId& v) {
                      auto w = v.token();
                      if (!w.empty() && w.front() == i)
                        w.erase(w.begin());
                      else
                        w.insert(w.begin(), i);
                      return VertexId(w);
                    }});
  }
  return GroupAction(gens);
}

// ---------------------------------------------------------------- ladder

namespace {

class LadderOracle : public GraphOracle {
 public:
  VertexList neighbors(const VertexId& v) const override {
    std::int64_t x = v.token()[0], r = v.token()[1];
    VertexList out{VertexId({x - 1, r}), VertexId({x, 1 - r}), VertexId({x + 1, r})};
    std::sort(out.begin(), out.end());
    return out;
  }
  VertexId root() const override { return VertexId({0, 0}); }
  bool valid_vertex(const VertexId& v) const override {
    return v.token().size() == 2 && (v.token()[1] == 0 || v.token()[1] == 1);
  }
  std::optional<int> degree_bound() const override { return 3; }
  std::string signature() const override { return "ladder"; }

  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override {
    std::int64_t xlo = s[0].token()[0], xhi = xlo;
    for (const auto& v : s) {
      xlo = std::min(xlo, v.token()[0]);
      xhi = std::max(xhi, v.token()[0]);
    }
    auto inside = [&](const VertexId& v) {
      return v.token()[0] >= xlo && v.token()[0] <= xhi;
    };
    VertexList ports;
    for (const auto& v : s)
      for (const auto& u : neighbors(v))
        if (!contains(s, u)) ports.push_back(u);
    ports = sorted_unique(ports);

    // rungs connect the rails outside [xlo, xhi], so each escape
    // direction is one infinite region
    ComponentsAnalysis out;
    std::set<VertexId> assigned;
    VertexList escaped_left, escaped_right;
    for (const auto& p : ports) {
      if (assigned.count(p)) continue;
      bool left = false, right = false;
      VertexList members;
      std::set<VertexId> seen{p};
      std::deque<VertexId> q{p};
      while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        members.push_back(v);
        if (!inside(v)) {
          (v.token()[0] < xlo ? left : right) = true;
          continue;
        }
        for (const auto& u : neighbors(v))
          if (!contains(s, u) && seen.insert(u).second) q.push_back(u);
      }
      members = sorted_unique(members);
      VertexList comp_ports = set_intersection(members, ports);
      if (left || right) {
        for (const auto& x : comp_ports) assigned.insert(x);
        if (left) escaped_left = set_union(escaped_left, comp_ports);
        if (right) escaped_right = set_union(escaped_right, comp_ports);
      } else {
        ComponentHandle h;
        h.ports = comp_ports;
        for (const auto& x : comp_ports) assigned.insert(x);
        h.seed = h.ports.front();
        h.verdict = Finiteness::finite(static_cast<std::int64_t>(members.size()));
        h.members = members;
        out.components.push_back(std::move(h));
      }
    }
    // regions escaping both ways merge into one
    if (!escaped_left.empty() && !escaped_right.empty() &&
        !set_intersection(escaped_left, escaped_right).empty()) {
      escaped_left = set_union(escaped_left, escaped_right);
      escaped_right.clear();
    }
    for (VertexList* esc : {&escaped_left, &escaped_right}) {
      if (esc->empty()) continue;
      ComponentHandle h;
      h.ports = *esc;
      h.seed = h.ports.front();
      h.verdict = Finiteness::infinite();
      out.components.push_back(std::move(h));
    }
    return out;
  }
};

}  // namespace

Graph ladder_graph() {
  static const auto oracle = std::make_shared<LadderOracle>();
  return Graph(oracle);
}

GroupAction ladder_action() {
  auto tx = [](std::int64_t d) {
    return [d](const VertexId& v) { return VertexId({v.token()[0] + d, v.token()[1]}); };
  };
  Generator t{"t", "t~", tx(1)};
  Generator ti{"t~", "t", tx(-1)};
  Generator swap{"s", "s", [](const VertexId& v) {
                   return VertexId({v.token()[0], 1 - v.token()[1]});
                 }};
  Generator refl{"r", "r", [](const VertexId& v) {
                   return VertexId({-v.token()[0], v.token()[1]});
                 }};
  return GroupAction({t, ti, swap, refl});
}

// ---------------------------------------------------------------- misc

GroupAction finite_action(const Graph& g,
                          const std::vector<std::pair<std::string, std::map<int, int>>>& named_maps) {
  auto n = g.vertex_count();
  if (!n) throw DomainError("finite_action requires a finite graph");
  std::vector<Generator> gens;
  for (const auto& [name, m] : named_maps) {
    if (m.size() != *n) throw DomainError("generator '" + name + "': map must cover all vertices");
    std::map<int, int> inv;
    for (auto [a, b] : m) {
      if (a < 0 || b < 0 || a >= static_cast<int>(*n) || b >= static_cast<int>(*n))
        throw DomainError("generator '" + name + "': vertex out of range");
      if (!inv.emplace(b, a).second) throw DomainError("generator '" + name + "' is not injective");
    }
    // automorphism check: edge images are edges (a bijection on a finite
    // graph preserving adjacency forward is an automorphism)
    for (const auto& v : g.all_vertices()) {
      int iv = static_cast<int>(v.token()[0]);
      for (const auto& u : g.neighbors(v)) {
        int iu = static_cast<int>(u.token()[0]);
        VertexId fv(static_cast<std::int64_t>(m.at(iv))), fu(static_cast<std::int64_t>(m.at(iu)));
        if (!contains(g.neighbors(fv), fu))
          throw DomainError("generator '" + name + "' maps edge {" + v.str() + "," + u.str() +
                            "} to a non-edge");
      }
    }
    bool involution = true;
    for (auto [a, b] : m)
      if (m.at(b) != a) {
        involution = false;
        break;
      }
    auto apply = [m](const VertexId& v) {
      return VertexId(static_cast<std::int64_t>(m.at(static_cast<int>(v.token()[0]))));
    };
    if (involution) {
      gens.push_back({name, name, apply});
    } else {
      auto apply_inv = [inv](const VertexId& v) {
        return VertexId(static_cast<std::int64_t>(inv.at(static_cast<int>(v.token()[0]))));
      };
      gens.push_back({name, name + "~", apply});
      gens.push_back({name + "~", name, apply_inv});
    }
  }
  return GroupAction(gens);
}

bool is_builtin_name(const std::string& name) {
  if (name == "line" || name == "grid2d" || name == "ladder") return true;
  return name.rfind("tree(", 0) == 0 && name.back() == ')';
}

Graph builtin_graph(const std::string& name) {
  if (name == "line") return line_graph();
  if (name == "grid2d") return grid2d_graph();
  if (name == "ladder") return ladder_graph();
  if (name.rfind("tree(", 0) == 0 && name.back() == ')') {
    int d = std::stoi(name.substr(5, name.size() - 6));
    return regular_tree_graph(d);
  }
  throw DomainError("unknown builtin graph '" + name + "'");
}

GroupAction builtin_action(const std::string& name) {
  if (name == "line") return line_action();
  if (name == "grid2d") return grid2d_action();
  if (name == "ladder") return ladder_action();
  if (name.rfind("tree(", 0) == 0 && name.back() == ')') {
    int d = std::stoi(name.substr(5, name.size() - 6));
    return regular_tree_action(d);
  }
  throw DomainError("unknown builtin graph '" + name + "'");
}

std::vector<std::string> builtin_names() {
  return {"line", "grid2d", "ladder", "tree(3)", "tree(4)"};
}

Finiteness exhaustive_escape_probe(const Graph& g, const VertexList& s, const VertexId& seed,
                                   int radius) {
  if (contains(s, seed)) throw DomainError("escape probe: seed lies in the separator");
  std::map<VertexId, int> dist{{seed, 0}};
  std::deque<VertexId> q{seed};
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    if (dist[v] >= radius) return Finiteness::infinite();  // still growing at the probe radius
    for (const auto& u : g.neighbors(v)) {
      if (contains(s, u) || dist.count(u)) continue;
      dist[u] = dist[v] + 1;
      q.push_back(u);
    }
  }
  return Finiteness::finite(static_cast<std::int64_t>(dist.size()));
}

}  // namespace septree
