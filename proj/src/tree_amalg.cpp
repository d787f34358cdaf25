#include "septree/tree_amalg.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <mutex>
#include <sstream>

#include "septree/errors.hpp"
#include "septree/families.hpp"
#include "septree/separation.hpp"

namespace septree {

// ------------------------------------------------------------ spec

int AmalgamSpec::side_of_label(int k) const {
  if (std::find(index1.begin(), index1.end(), k) != index1.end()) return 1;
  if (std::find(index2.begin(), index2.end(), k) != index2.end()) return 2;
  throw DomainError("unknown amalgam label " + std::to_string(k));
}

const VertexList& AmalgamSpec::adhesion(int side, int label) const {
  const auto& family = side == 1 ? adhesion1 : adhesion2;
  auto it = family.find(label);
  if (it == family.end())
    throw DomainError("no adhesion set for label " + std::to_string(label));
  return it->second;
}

VertexId AmalgamSpec::bond(int side, int label, int other_label, const VertexId& x) const {
  if (side == 1) {
    const auto& m = bonding.at({label, other_label});
    auto it = m.find(x);
    if (it == m.end()) throw DomainError("vertex " + x.str() + " outside the bonded set");
    return it->second;
  }
  const auto& m = bonding.at({other_label, label});
  for (const auto& [a, b] : m)
    if (b == x) return a;
  throw DomainError("vertex " + x.str() + " outside the bonded set");
}

std::string AmalgamSpec::digest() const {
  std::ostringstream os;
  os << g1.signature() << '|' << g2.signature() << '|';
  for (int k : index1) os << k << ',';
  os << '|';
  for (int k : index2) os << k << ',';
  os << '|' << (self_amalgam ? 1 : 0) << '|';
  if (type2_j) {
    for (int k : *type2_j) os << k << ',';
  }
  os << '|';
  auto dump_family = [&](const std::map<int, VertexList>& f) {
    for (const auto& [k, set] : f) os << k << ':' << to_string(set) << ';';
  };
  dump_family(adhesion1);
  os << '|';
  dump_family(adhesion2);
  os << '|';
  for (const auto& [kl, m] : bonding) {
    os << kl.first << '-' << kl.second << ':';
    for (const auto& [a, b] : m) os << a.str() << '>' << b.str() << ',';
    os << ';';
  }
  os << '|';
  for (const auto& [k, l] : back_label) os << k << '>' << l << ',';
  std::size_t h = 1469598103934665603ull;
  for (char c : os.str()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

void AmalgamSpec::validate() const {
  auto check_factor = [](const Graph& g, const char* which) {
    if (!g.is_finite()) throw SpecError(std::string(which) + ": factor must be finite");
    if (*g.vertex_count() == 0) throw SpecError(std::string(which) + ": factor is empty");
    if (!g.connected_hint()) throw SpecError(std::string(which) + ": factor must be connected");
  };
  check_factor(g1, "g1");
  check_factor(g2, "g2");
  if (index1.empty() || index2.empty()) throw SpecError("label sets must be nonempty");
  auto sorted_ok = [](const std::vector<int>& v) {
    return std::is_sorted(v.begin(), v.end()) &&
           std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!sorted_ok(index1) || !sorted_ok(index2))
    throw SpecError("label sets must be sorted and duplicate-free");
  if (self_amalgam) {
    if (!(g1 == g2)) throw SpecError("self-amalgam factors must coincide");
    if (index1 != index2) throw SpecError("self-amalgam label sets must coincide");
    if (adhesion1 != adhesion2) throw SpecError("self-amalgam adhesion families must coincide");
  } else {
    for (int k : index1)
      if (std::find(index2.begin(), index2.end(), k) != index2.end())
        throw SpecError("label sets must be disjoint");
    if (type2_j) throw SpecError("side-swap data requires a self-amalgam");
  }

  std::optional<std::size_t> cardinality;
  auto check_adhesions = [&](int side) {
    for (int k : labels(side)) {
      const VertexList& s = adhesion(side, k);
      if (s.empty()) throw SpecError("adhesion set of label " + std::to_string(k) + " is empty");
      if (s != sorted_unique(s)) throw SpecError("adhesion sets must be sorted vertex sets");
      for (const auto& v : s)
        if (!factor(side).valid_vertex(v))
          throw SpecError("adhesion vertex " + v.str() + " outside the factor");
      if (!cardinality) cardinality = s.size();
      if (s.size() != *cardinality)
        throw SpecError("adhesion sets must share one cardinality");
    }
  };
  check_adhesions(1);
  check_adhesions(2);

  for (int k : index1)
    for (int l : index2) {
      auto it = bonding.find({k, l});
      if (it == bonding.end())
        throw SpecError("missing bonding map " + std::to_string(k) + "->" + std::to_string(l));
      const auto& m = it->second;
      const VertexList& dom = adhesion(1, k);
      const VertexList& ran = adhesion(2, l);
      if (m.size() != dom.size())
        throw SpecError("bonding map " + std::to_string(k) + "->" + std::to_string(l) +
                        " is not total");
      VertexList image;
      for (const auto& [a, b] : m) {
        if (!contains(dom, a) || !contains(ran, b))
          throw SpecError("bonding map " + std::to_string(k) + "->" + std::to_string(l) +
                          " leaves the adhesion sets");
        image.push_back(b);
      }
      if (sorted_unique(image) != ran)
        throw SpecError("bonding map " + std::to_string(k) + "->" + std::to_string(l) +
                        " is not a bijection");
    }

  for (int k : index1) {
    auto it = back_label.find(k);
    if (it == back_label.end() ||
        std::find(index2.begin(), index2.end(), it->second) == index2.end())
      throw SpecError("back label of " + std::to_string(k) + " must lie in the far label set");
  }
  for (int l : index2) {
    auto it = back_label.find(l);
    if (it == back_label.end() ||
        std::find(index1.begin(), index1.end(), it->second) == index1.end())
      throw SpecError("back label of " + std::to_string(l) + " must lie in the far label set");
  }

  if (type2_j) {
    for (int k : *type2_j)
      if (std::find(index1.begin(), index1.end(), k) == index1.end())
        throw SpecError("side-swap subset leaves the label set");
    auto in_j = [&](int k) {
      return std::find(type2_j->begin(), type2_j->end(), k) != type2_j->end();
    };
    for (int k : index1)
      if (in_j(k) == in_j(back_label.at(k)))
        throw SpecError("back labels must exchange the side-swap subset with its complement");
  }
}

// ------------------------------------------------------------ tree tokens

namespace {

int node_side_of(const VertexId& node) { return node.token().size() % 2 == 0 ? 1 : 2; }

struct IncidentEdge {
  VertexId neighbor;
  int label_here;
  int label_there;
};

struct CTree {
  const AmalgamSpec* spec;

  bool valid_node(const VertexId& node) const {
    const auto& tok = node.token();
    for (std::size_t j = 0; j < tok.size(); ++j) {
      int side = j % 2 == 0 ? 1 : 2;  // side of the parent at depth j
      int label = static_cast<int>(tok[j]);
      const auto& ls = spec->labels(side);
      if (std::find(ls.begin(), ls.end(), label) == ls.end()) return false;
      if (j > 0 && label == spec->back_label.at(static_cast<int>(tok[j - 1]))) return false;
    }
    return true;
  }

  std::vector<IncidentEdge> incident(const VertexId& node) const {
    std::vector<IncidentEdge> out;
    const auto& tok = node.token();
    int side = node_side_of(node);
    std::optional<int> parent_label;  // label of this node toward its parent
    if (!tok.empty()) {
      int last = static_cast<int>(tok.back());
      parent_label = spec->back_label.at(last);
      auto parent_tok = tok;
      parent_tok.pop_back();
      out.push_back({VertexId(parent_tok), *parent_label, last});
    }
    for (int k : spec->labels(side)) {
      if (parent_label && k == *parent_label) continue;
      auto child = tok;
      child.push_back(k);
      out.push_back({VertexId(child), k, spec->back_label.at(k)});
    }
    return out;
  }

  bool infinite() const { return spec->index1.size() >= 2 && spec->index2.size() >= 2; }

  // path u..v as a sorted node set (tokens are root paths)
  VertexList path(const VertexId& u, const VertexId& v) const {
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

  VertexList enumerate_all(std::size_t cap = 4096) const {
    VertexList out{VertexId(std::vector<std::int64_t>{})};
    std::deque<VertexId> q{out.front()};
    std::set<VertexId> seen{out.front()};
    while (!q.empty()) {
      VertexId n = q.front();
      q.pop_front();
      for (const auto& e : incident(n))
        if (seen.insert(e.neighbor).second) {
          if (seen.size() > cap) throw BudgetError("connecting tree enumeration exceeded cap");
          out.push_back(e.neighbor);
          q.push_back(e.neighbor);
        }
    }
    return sorted_unique(out);
  }
};

class ConnectingTreeOracle : public GraphOracle {
 public:
  explicit ConnectingTreeOracle(std::shared_ptr<const AmalgamSpec> spec)
      : spec_(std::move(spec)), ct_{spec_.get()} {
    if (!ct_.infinite()) nodes_ = ct_.enumerate_all();
    signature_ = "ctree:" + spec_->digest();
  }

  VertexList neighbors(const VertexId& v) const override {
    VertexList out;
    for (const auto& e : ct_.incident(v)) out.push_back(e.neighbor);
    return sorted_unique(out);
  }
  VertexId root() const override { return VertexId(std::vector<std::int64_t>{}); }
  bool valid_vertex(const VertexId& v) const override { return ct_.valid_node(v); }
  std::string signature() const override { return signature_; }
  std::optional<std::size_t> vertex_count() const override {
    if (nodes_.empty()) return std::nullopt;
    return nodes_.size();
  }
  VertexList all_vertices() const override {
    if (nodes_.empty()) return GraphOracle::all_vertices();
    return nodes_;
  }

  const CTree& ct() const { return ct_; }

 private:
  std::shared_ptr<const AmalgamSpec> spec_;
  CTree ct_;
  VertexList nodes_;  // finite trees only
  std::string signature_;
};

VertexId encode_vertex(const VertexId& node, const VertexId& local) {
  auto t = node.token();
  t.push_back(-1);
  t.push_back(local.token()[0]);
  return VertexId(t);
}

std::pair<VertexId, VertexId> decode_vertex(const VertexId& key) {
  const auto& t = key.token();
  if (t.size() < 2 || t[t.size() - 2] != -1)
    throw DomainError("malformed amalgam vertex " + key.str());
  return {VertexId(std::vector<std::int64_t>(t.begin(), t.end() - 2)), VertexId(t.back())};
}

}  // namespace

// ------------------------------------------------------------ oracle

class AmalgamOracle : public GraphOracle {
 public:
  explicit AmalgamOracle(AmalgamSpec spec)
      : spec_(std::make_shared<const AmalgamSpec>(std::move(spec))),
        tree_(std::make_shared<ConnectingTreeOracle>(spec_)) {
    signature_ = "amalgam:" + spec_->digest();
    if (tree_->vertex_count()) {
      // finite connecting tree: the amalgam itself is finite
      std::set<VertexId> keys;
      for (const auto& node : tree_->all_vertices())
        for (const auto& x : spec_->factor(node_side_of(node)).all_vertices())
          keys.insert(key_of(node, x));
      vertices_ = VertexList(keys.begin(), keys.end());
    }
  }

  struct ClassInfo {
    std::vector<std::pair<VertexId, VertexId>> members;  // (node, factor vertex)
    VertexList nodes;                                    // support subtree
    VertexId key;
  };

  ClassInfo class_of(const VertexId& node, const VertexId& local) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto probe = pair_key_.find({node, local});
    if (probe != pair_key_.end()) return classes_.at(probe->second);

    ClassInfo info;
    std::set<std::pair<VertexId, VertexId>> seen{{node, local}};
    std::deque<std::pair<VertexId, VertexId>> q{{node, local}};
    while (!q.empty()) {
      auto [n, x] = q.front();
      q.pop_front();
      if (seen.size() > static_cast<std::size_t>(spec_->identification_cap))
        throw BudgetError("identification closure exceeded its cap near " + n.str());
      int side = node_side_of(n);
      for (const auto& e : tree_->ct().incident(n)) {
        const VertexList& s = spec_->adhesion(side, e.label_here);
        if (!contains(s, x)) continue;
        VertexId partner = spec_->bond(side, e.label_here, e.label_there, x);
        if (seen.insert({e.neighbor, partner}).second) q.push_back({e.neighbor, partner});
      }
    }
    info.members.assign(seen.begin(), seen.end());
    std::sort(info.members.begin(), info.members.end());
    for (const auto& [n, x] : info.members) info.nodes.push_back(n);
    info.nodes = sorted_unique(info.nodes);
    info.key = encode_vertex(info.members.front().first, info.members.front().second);
    for (const auto& m : info.members) pair_key_[m] = info.key;
    classes_[info.key] = info;
    return info;
  }

  VertexId key_of(const VertexId& node, const VertexId& local) const {
    return class_of(node, local).key;
  }

  VertexList neighbors(const VertexId& v) const override {
    ClassInfo info = class_of_key(v);
    VertexList out;
    for (const auto& [n, x] : info.members) {
      const Graph& factor = spec_->factor(node_side_of(n));
      for (const auto& y : factor.neighbors(x)) {
        VertexId k = key_of(n, y);
        if (k != v) out.push_back(k);
      }
    }
    return sorted_unique(out);
  }

  VertexId root() const override {
    return key_of(VertexId(std::vector<std::int64_t>{}), spec_->g1.all_vertices().front());
  }

  bool valid_vertex(const VertexId& v) const override {
    const auto& t = v.token();
    if (t.size() < 2 || t[t.size() - 2] != -1) return false;
    auto [node, local] = decode_vertex(v);
    if (!tree_->valid_vertex(node)) return false;
    if (!spec_->factor(node_side_of(node)).valid_vertex(local)) return false;
    return key_of(node, local) == v;
  }

  std::string signature() const override { return signature_; }
  std::optional<std::size_t> vertex_count() const override {
    if (vertices_.empty()) return std::nullopt;
    return vertices_.size();
  }
  VertexList all_vertices() const override {
    if (vertices_.empty()) return GraphOracle::all_vertices();
    return vertices_;
  }

  std::optional<ComponentsAnalysis> analyze_components(const VertexList& s) const override;

  ClassInfo class_of_key(const VertexId& v) const {
    auto [node, local] = decode_vertex(v);
    return class_of(node, local);
  }

  const AmalgamSpec& spec() const { return *spec_; }
  std::shared_ptr<const AmalgamSpec> shared_spec() const { return spec_; }
  Graph tree_graph() const { return Graph(tree_); }
  const ConnectingTreeOracle& tree_oracle() const { return *tree_; }

 private:
  std::shared_ptr<const AmalgamSpec> spec_;
  std::shared_ptr<ConnectingTreeOracle> tree_;
  VertexList vertices_;  // finite amalgams only
  std::string signature_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<VertexId, VertexId>, VertexId> pair_key_;
  mutable std::map<VertexId, ClassInfo> classes_;
};

std::optional<ComponentsAnalysis> AmalgamOracle::analyze_components(const VertexList& s) const {
  const CTree& ct = tree_->ct();

  if (!vertices_.empty()) {
    // finite amalgam: exhaustive component analysis
    ComponentsAnalysis out;
    VertexList ports;
    for (const auto& v : s)
      for (const auto& u : neighbors(v))
        if (!contains(s, u)) ports.push_back(u);
    ports = sorted_unique(ports);
    std::set<VertexId> assigned;
    for (const auto& p : ports) {
      if (assigned.count(p)) continue;
      VertexList members{p};
      std::deque<VertexId> q{p};
      std::set<VertexId> seen{p};
      while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        for (const auto& u : neighbors(v))
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

  // support of the separator on the connecting tree
  VertexList support;
  for (const auto& v : s) support = set_union(support, class_of_key(v).nodes);

  // boundary nodes and the components of T - support they seed
  VertexList boundary;
  for (const auto& u : support)
    for (const auto& e : ct.incident(u))
      if (!contains(support, e.neighbor)) boundary.push_back(e.neighbor);
  boundary = sorted_unique(boundary);

  std::vector<VertexList> tclasses;
  for (const auto& w : boundary) {
    bool placed = false;
    for (auto& cls : tclasses)
      if (set_intersection(ct.path(cls.front(), w), support).empty()) {
        cls.push_back(w);
        placed = true;
        break;
      }
    if (!placed) tclasses.push_back({w});
  }

  VertexList hull;
  for (const auto& a : support)
    for (const auto& b : support) hull = set_union(hull, ct.path(a, b));

  // classify each tree component: escape from the hull means infinite
  std::vector<bool> tinfinite(tclasses.size(), false);
  VertexList region = support;  // support plus all finite components
  for (std::size_t i = 0; i < tclasses.size(); ++i) {
    const VertexId& rep = tclasses[i].front();
    if (!contains(hull, rep)) {
      tinfinite[i] = true;
      continue;
    }
    bool infinite = false;
    VertexList nodes;
    std::set<VertexId> seen{rep};
    std::deque<VertexId> q{rep};
    while (!q.empty() && !infinite) {
      VertexId n = q.front();
      q.pop_front();
      nodes.push_back(n);
      for (const auto& e : ct.incident(n)) {
        if (contains(support, e.neighbor) || seen.count(e.neighbor)) continue;
        if (!contains(hull, e.neighbor)) {
          infinite = true;
          break;
        }
        seen.insert(e.neighbor);
        q.push_back(e.neighbor);
      }
    }
    tinfinite[i] = infinite;
    if (!infinite) region = set_union(region, sorted_unique(nodes));
  }

  auto infinite_marks = [&](const VertexList& class_nodes) {
    std::set<std::size_t> marks;
    for (const auto& n : class_nodes) {
      if (contains(region, n)) continue;
      bool found = false;
      for (std::size_t i = 0; i < tclasses.size(); ++i) {
        if (!tinfinite[i]) continue;
        if (set_intersection(ct.path(tclasses[i].front(), n), support).empty()) {
          marks.insert(i);
          found = true;
          break;
        }
      }
      if (!found)
        throw InternalError("support node " + n.str() + " not locatable in T - support");
    }
    return marks;
  };

  VertexList ports;
  for (const auto& v : s)
    for (const auto& u : neighbors(v))
      if (!contains(s, u)) ports.push_back(u);
  ports = sorted_unique(ports);

  // bounded exploration of G - s; classes leaning into an infinite tree
  // component are recorded but not expanded
  struct Region {
    VertexList members;
    VertexList ports;
    std::set<std::size_t> marks;
  };
  std::vector<Region> regions;
  std::set<VertexId> assigned;
  for (const auto& p : ports) {
    if (assigned.count(p)) continue;
    Region reg;
    std::set<VertexId> seen{p};
    std::deque<VertexId> q{p};
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop_front();
      reg.members.push_back(v);
      auto marks = infinite_marks(class_of_key(v).nodes);
      if (!marks.empty()) {
        reg.marks.insert(marks.begin(), marks.end());
        continue;  // do not walk into the infinite branch
      }
      for (const auto& u : neighbors(v))
        if (!contains(s, u) && seen.insert(u).second) q.push_back(u);
    }
    reg.members = sorted_unique(reg.members);
    reg.ports = set_intersection(reg.members, ports);
    for (const auto& x : reg.ports) assigned.insert(x);
    regions.push_back(std::move(reg));
  }

  // merge regions meeting the same infinite tree component
  std::vector<std::size_t> owner(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) owner[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (owner[i] != i) {
      owner[i] = owner[owner[i]];
      i = owner[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      for (std::size_t m : regions[i].marks)
        if (regions[j].marks.count(m)) {
          owner[find(j) < find(i) ? find(i) : find(j)] = std::min(find(i), find(j));
          break;
        }

  std::map<std::size_t, Region> merged;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    Region& dst = merged[find(i)];
    dst.members = set_union(dst.members, regions[i].members);
    dst.ports = set_union(dst.ports, regions[i].ports);
    dst.marks.insert(regions[i].marks.begin(), regions[i].marks.end());
  }

  ComponentsAnalysis out;
  for (auto& [root_idx, reg] : merged) {
    ComponentHandle h;
    h.ports = reg.ports;
    h.seed = reg.ports.front();
    if (reg.marks.empty()) {
      h.verdict = Finiteness::finite(static_cast<std::int64_t>(reg.members.size()));
      h.members = reg.members;
    } else {
      h.verdict = Finiteness::infinite();
    }
    out.components.push_back(std::move(h));
  }
  return out;
}

// ------------------------------------------------------------ construction

AmalgamGraph construct_amalgam(const AmalgamSpec& spec) {
  spec.validate();
  AmalgamGraph a;
  auto oracle = std::make_shared<AmalgamOracle>(spec);
  a.oracle_ = oracle;
  a.graph_ = Graph(oracle);
  return a;
}

const AmalgamSpec& AmalgamGraph::spec() const { return oracle_->spec(); }

Graph AmalgamGraph::connecting_tree() const { return oracle_->tree_graph(); }

std::vector<std::pair<VertexId, VertexId>> AmalgamGraph::class_members(const VertexId& v) const {
  return oracle_->class_of_key(v).members;
}

VertexId AmalgamGraph::vertex_at(const VertexId& node, const VertexId& factor_vertex) const {
  return oracle_->key_of(node, factor_vertex);
}

IdentificationRecord identification(const AmalgamGraph& a, const VertexId& v) {
  auto members = a.class_members(v);
  IdentificationRecord rec;
  rec.vertex = v;
  for (const auto& [n, x] : members) rec.support.push_back(n);
  rec.support = sorted_unique(rec.support);
  return rec;
}

bool has_finite_identification(const AmalgamGraph& a, std::size_t bound, int probe_radius) {
  Ball window = ball(a.graph(), {a.graph().root()}, probe_radius);
  for (const auto& v : window.vertices)
    if (identification(a, v).size() > bound) return false;
  return true;
}

bool is_trivial(const AmalgamSpec& spec, int probe_radius) {
  spec.validate();
  // sufficient condition: a single label whose adhesion set is the whole factor
  for (int side : {1, 2}) {
    if (spec.labels(side).size() != 1) continue;
    const Graph& f = spec.factor(side);
    if (spec.adhesion(side, spec.labels(side).front()) == f.all_vertices()) return true;
  }

  AmalgamGraph a = construct_amalgam(spec);
  VertexList explored = a.graph().is_finite()
                            ? a.graph().all_vertices()
                            : ball(a.graph(), {a.graph().root()}, probe_radius).vertices;
  VertexId root_node{std::vector<std::int64_t>{}};
  VertexList candidates{root_node};
  for (int k : spec.labels(1)) candidates.push_back(VertexId(std::vector<std::int64_t>{k}));
  for (const auto& node : candidates) {
    int side = node_side_of(node);
    std::set<VertexId> image;
    bool injective = true;
    for (const auto& x : spec.factor(side).all_vertices())
      if (!image.insert(a.vertex_at(node, x)).second) injective = false;
    bool surjective = true;
    for (const auto& v : explored)
      if (!image.count(v)) {
        surjective = false;
        break;
      }
    if (injective && surjective) return true;
  }
  return false;
}

// ------------------------------------------------------------ respects

namespace {

// exact element list of a finite factor's declared group
WordEnum factor_elements(const AmalgamSpec& spec, int side, int budget) {
  const Graph& f = spec.factor(side);
  return enumerate_words(spec.action(side), budget, f.all_vertices(), 50000);
}

VertexList apply_to_set(const Morphism& m, const VertexList& s) { return m.apply(s); }

}  // namespace

std::optional<RespectWitness> respects_check(const AmalgamSpec& spec, int side,
                                             const Morphism& gamma, int budget) {
  if (budget == -2) budget = 8;
  int j = spec.self_amalgam ? side : 3 - side;  // far side of the bonding maps
  WordEnum far = factor_elements(spec, j, -1);

  const auto& labels_i = spec.labels(side);
  const auto& labels_j = spec.labels(3 - side);  // bonding partners live opposite

  // candidates for the label permutation: gamma(S_k) must be some S_{k'}
  std::map<int, std::vector<int>> candidates;
  for (int k : labels_i) {
    VertexList img = apply_to_set(gamma, spec.adhesion(side, k));
    for (int k2 : labels_i)
      if (img == spec.adhesion(side, k2)) candidates[k].push_back(k2);
    if (candidates[k].empty()) return std::nullopt;
  }

  std::optional<RespectWitness> witness_out;
  std::map<int, int> sigma;
  std::set<int> used;
  std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
    if (idx == labels_i.size()) {
      // for every k find l and tau with bond(k,l) = tau o bond(sigma(k),l) o gamma
      RespectWitness w;
      w.label_permutation = sigma;
      for (int k : labels_i) {
        bool found = false;
        for (int l : labels_j) {
          const VertexList& target_set = spec.adhesion(3 - side, l);
          for (std::size_t ti = 0; ti < far.size() && !found; ++ti) {
            const Morphism& tau = far.morphisms[ti];
            if (apply_to_set(tau, target_set) != target_set) continue;  // setwise stabiliser
            bool ok = true;
            for (const auto& x : spec.adhesion(side, k)) {
              VertexId lhs = spec.bond(side, k, l, x);
              VertexId rhs = tau(spec.bond(side, sigma.at(k), l, gamma(x)));
              if (lhs != rhs) {
                ok = false;
                break;
              }
            }
            if (ok) {
              w.per_label[k] = {l, tau.tags()};
              found = true;
            }
          }
          if (found) break;
        }
        if (!found) return false;
      }
      witness_out = w;
      return true;
    }
    int k = labels_i[idx];
    for (int k2 : candidates[k]) {
      if (used.count(k2)) continue;
      used.insert(k2);
      sigma[k] = k2;
      if (assign(idx + 1)) return true;
      used.erase(k2);
      sigma.erase(k);
    }
    return false;
  };

  if (assign(0)) return witness_out;
  return std::nullopt;
}

std::optional<Morphism> consistency_check(const AmalgamSpec& spec, int k, int l, int l_prime,
                                          int budget) {
  if (budget == -2) budget = 8;
  int side = spec.self_amalgam ? 1 : spec.side_of_label(k);
  int j = spec.self_amalgam ? 1 : 3 - side;
  WordEnum far = factor_elements(spec, j, -1);
  for (const auto& gamma : far.morphisms) {
    bool ok = true;
    for (const auto& x : spec.adhesion(side, k)) {
      if (gamma(spec.bond(side, k, l_prime, x)) != spec.bond(side, k, l, x)) {
        ok = false;
        break;
      }
    }
    if (ok) return gamma;
  }
  return std::nullopt;
}

TypeReport classify_type(const AmalgamSpec& spec, int budget) {
  if (budget == -2) budget = 6;
  spec.validate();
  TypeReport rep;

  auto check_respect = [&](int side) {
    WordEnum words = factor_elements(spec, side, budget);
    for (const auto& gamma : words.morphisms) {
      auto witness = respects_check(spec, side, gamma, budget);
      if (!witness) {
        rep.failures.push_back("no respect witness for word " + gamma.tags() + " on factor " +
                               std::to_string(side));
        return false;
      }
      ++rep.respect_witnesses;
    }
    return true;
  };

  auto check_consistency = [&](const std::vector<int>& from, const std::vector<int>& to) {
    for (int k : from)
      for (std::size_t i = 0; i < to.size(); ++i)
        for (std::size_t i2 = i; i2 < to.size(); ++i2) {
          if (consistency_check(spec, k, to[i], to[i2], budget)) {
            ++rep.consistency_witnesses;
          } else {
            rep.failures.push_back("bonding maps from " + std::to_string(k) + " to " +
                                   std::to_string(to[i]) + " and " + std::to_string(to[i2]) +
                                   " are inconsistent");
            return false;
          }
        }
    return true;
  };

  if (spec.type2_j) {
    std::vector<int> complement;
    for (int k : spec.index1)
      if (std::find(spec.type2_j->begin(), spec.type2_j->end(), k) == spec.type2_j->end())
        complement.push_back(k);
    bool ok = check_respect(1);
    ok = ok && check_consistency(*spec.type2_j, complement);
    ok = ok && check_consistency(complement, *spec.type2_j);
    rep.type = ok ? AmalgamType::Type2 : AmalgamType::Neither;
    return rep;
  }

  bool ok = check_respect(1) && check_respect(2);
  ok = ok && check_consistency(spec.index1, spec.index2);
  ok = ok && check_consistency(spec.index2, spec.index1);
  rep.type = ok ? AmalgamType::Type1 : AmalgamType::Neither;
  return rep;
}

// ------------------------------------------------------------ decomposition

TreeDecomposition corresponding_td(const AmalgamGraph& a) {
  const AmalgamSpec& spec = a.spec();
  std::size_t adhesion_size = spec.adhesion(1, spec.index1.front()).size();
  AmalgamGraph copy = a;
  auto parts = [copy](const VertexId& node) {
    int side = node_side_of(node);
    VertexList out;
    for (const auto& x : copy.spec().factor(side).all_vertices())
      out.push_back(copy.vertex_at(node, x));
    return sorted_unique(out);
  };
  return TreeDecomposition::lazy_parts(a.graph(), a.connecting_tree(), parts,
                                       static_cast<int>(adhesion_size));
}

bool amalgam_distinguishes_ends(const AmalgamGraph& a, int resolution) {
  auto proxies = end_proxies(a.graph(), resolution).proxies;
  if (proxies.size() < 2) return false;
  TreeDecomposition td = corresponding_td(a);
  Ball window = ball(td.tree(), {td.tree().root()}, 2);
  std::set<Edge> tried;
  for (const auto& [u, v] : window.edges) {
    Separation sep = induced_separation(td, {u, v});
    for (std::size_t i = 0; i < proxies.size(); ++i)
      for (std::size_t j = i + 1; j < proxies.size(); ++j)
        if (distinguishes(sep, proxies[i], proxies[j])) return true;
  }
  return false;
}

// ------------------------------------------------------------ automorphisms

namespace {

// Extends a seed (source node -> target node with a factor-group chart)
// over the connecting tree: charts propagate across every tree edge by
// solving the bonding-compatibility equation in the declared factor
// groups.  This realises amalgam automorphisms whenever the amalgamation
// respects the actions; extension failures surface as OracleError.
class AmalgamMorphismEngine {
 public:
  AmalgamMorphismEngine(std::shared_ptr<const AmalgamOracle> oracle, VertexId src, VertexId dst,
                        std::size_t chart_idx,
                        std::array<std::shared_ptr<const WordEnum>, 2> groups)
      : oracle_(std::move(oracle)), src_(std::move(src)), dst_(std::move(dst)),
        groups_(std::move(groups)) {
    if (node_side_of(src_) != node_side_of(dst_) &&
        !(oracle_->spec().self_amalgam || oracle_->spec().g1 == oracle_->spec().g2))
      throw DomainError("side-exchanging seed needs equal factors");
    images_[src_] = {dst_, chart_idx};
    preimages_[dst_] = src_;
  }

  VertexId forward(const VertexId& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto [node, local] = decode_vertex(key);
    NodeImage im = image_of(node);
    const Morphism& chart = element(node_side_of(im.target), im.chart);
    return oracle_->key_of(im.target, chart(local));
  }

  VertexId backward(const VertexId& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto [node, local] = decode_vertex(key);
    VertexId pre = preimage_of(node);
    NodeImage im = image_of(pre);
    const Morphism& chart = element(node_side_of(node), im.chart);
    for (const auto& y : oracle_->spec().factor(node_side_of(pre)).all_vertices())
      if (chart(y) == local) return oracle_->key_of(pre, y);
    throw OracleError("chart not invertible at " + node.str());
  }

 private:
  struct NodeImage {
    VertexId target;
    std::size_t chart;
    // the edge pairing this image arrived through, pinned in the star
    // matching so deeper extensions stay consistent
    std::optional<std::pair<int, int>> entry;
  };

  const WordEnum& group(int side) const {
    return *groups_[oracle_->spec().self_amalgam ? 0 : static_cast<std::size_t>(side - 1)];
  }
  const Morphism& element(int side, std::size_t idx) const {
    return group(side).morphisms[idx];
  }

  // ordered node path src..dst along the rooted token tree
  static std::vector<VertexId> ordered_path(const VertexId& u, const VertexId& v) {
    const auto& a = u.token();
    const auto& b = v.token();
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common]) ++common;
    std::vector<VertexId> out;
    for (std::size_t len = a.size() + 1; len-- > common;)
      out.push_back(VertexId(std::vector<std::int64_t>(a.begin(), a.begin() + static_cast<long>(len))));
    for (std::size_t len = common + 1; len <= b.size(); ++len)
      out.push_back(VertexId(std::vector<std::int64_t>(b.begin(), b.begin() + static_cast<long>(len))));
    return out;
  }

  // lexicographically least perfect matching of the star labels at
  // `node` onto the star labels of its image, chart-compatibly
  const std::map<int, int>& matching_at(const VertexId& node, const NodeImage& im) const {
    auto it = matchings_.find(node);
    if (it != matchings_.end()) return it->second;

    const AmalgamSpec& spec = oracle_->spec();
    int side = node_side_of(node);
    int tside = node_side_of(im.target);
    const Morphism& chart = element(tside, im.chart);
    std::vector<int> here = spec.labels(side);
    std::vector<int> there = spec.labels(tside);

    std::map<int, std::vector<int>> cands;
    for (int k : here) {
      if (im.entry && k == im.entry->first) {
        cands[k] = {im.entry->second};  // arrival edge is already paired
        continue;
      }
      VertexList img = chart.apply(spec.adhesion(side, k));
      for (int k2 : there) {
        if (im.entry && k2 == im.entry->second) continue;
        if (img == spec.adhesion(tside, k2)) cands[k].push_back(k2);
      }
      if (cands[k].empty())
        throw OracleError("chart does not permute the adhesion family at " + node.str());
    }
    std::map<int, int> match;
    std::set<int> used;
    std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
      if (idx == here.size()) return true;
      for (int k2 : cands[here[idx]]) {
        if (used.count(k2)) continue;
        used.insert(k2);
        match[here[idx]] = k2;
        if (assign(idx + 1)) return true;
        used.erase(k2);
        match.erase(here[idx]);
      }
      return false;
    };
    if (!assign(0)) throw OracleError("no star matching at " + node.str());
    return matchings_.emplace(node, std::move(match)).first->second;
  }

  // extend across the tree edge at `node` labelled k; returns the image
  // of the neighbouring node
  NodeImage extend(const VertexId& node, int label) const {
    const AmalgamSpec& spec = oracle_->spec();
    const CTree& ct = oracle_->tree_oracle().ct();
    NodeImage im = image_of(node);
    int side = node_side_of(node);
    int tside = node_side_of(im.target);
    const Morphism& chart = element(tside, im.chart);

    const auto& match = matching_at(node, im);
    int klabel = match.at(label);

    IncidentEdge here{};
    for (const auto& e : ct.incident(node))
      if (e.label_here == label) here = e;
    IncidentEdge there{};
    for (const auto& e : ct.incident(im.target))
      if (e.label_here == klabel) there = e;

    int farside = node_side_of(here.neighbor);
    int tfarside = node_side_of(there.neighbor);
    const WordEnum& candidates = group(tfarside);
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      const Morphism& cand = candidates.morphisms[ci];
      bool ok = true;
      for (const auto& x : spec.adhesion(side, label)) {
        VertexId lhs = cand(spec.bond(side, label, here.label_there, x));
        VertexId rhs = spec.bond(tside, klabel, there.label_there, chart(x));
        if (lhs != rhs) {
          ok = false;
          break;
        }
      }
      if (ok) {
        // the neighbour arrived through its edge back to `node`
        NodeImage next{there.neighbor, ci,
                       std::make_pair(here.label_there, there.label_there)};
        images_[here.neighbor] = next;
        preimages_[there.neighbor] = here.neighbor;
        (void)farside;
        return next;
      }
    }
    throw OracleError("no compatible chart across the edge at " + node.str() + " label " +
                      std::to_string(label));
  }

  NodeImage image_of(const VertexId& node) const {
    auto it = images_.find(node);
    if (it != images_.end()) return it->second;
    auto path = ordered_path(src_, node);
    NodeImage cur = images_.at(src_);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      auto next_it = images_.find(path[i + 1]);
      if (next_it != images_.end()) {
        cur = next_it->second;
        continue;
      }
      // label of the edge path[i] -> path[i+1]
      const CTree& ct = oracle_->tree_oracle().ct();
      int label = -1;
      for (const auto& e : ct.incident(path[i]))
        if (e.neighbor == path[i + 1]) label = e.label_here;
      if (label < 0) throw InternalError("path step is not a tree edge");
      cur = extend(path[i], label);
    }
    return cur;
  }

  VertexId preimage_of(const VertexId& target) const {
    auto it = preimages_.find(target);
    if (it != preimages_.end()) return it->second;
    auto path = ordered_path(dst_, target);
    VertexId pre = src_;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      auto next_it = preimages_.find(path[i + 1]);
      if (next_it != preimages_.end()) {
        pre = next_it->second;
        continue;
      }
      const CTree& ct = oracle_->tree_oracle().ct();
      int tlabel = -1;
      for (const auto& e : ct.incident(path[i]))
        if (e.neighbor == path[i + 1]) tlabel = e.label_here;
      if (tlabel < 0) throw InternalError("path step is not a tree edge");
      // find the source edge mapping onto tlabel
      NodeImage im = image_of(pre);
      const auto& match = matching_at(pre, im);
      int label = -1;
      for (const auto& [k, k2] : match)
        if (k2 == tlabel) label = k;
      if (label < 0) throw OracleError("label " + std::to_string(tlabel) + " has no preimage");
      extend(pre, label);
      const CTree& ct2 = oracle_->tree_oracle().ct();
      for (const auto& e : ct2.incident(pre))
        if (e.label_here == label) pre = e.neighbor;
    }
    return pre;
  }

  std::shared_ptr<const AmalgamOracle> oracle_;
  VertexId src_, dst_;
  std::array<std::shared_ptr<const WordEnum>, 2> groups_;
  mutable std::mutex mu_;
  mutable std::map<VertexId, NodeImage> images_;
  mutable std::map<VertexId, VertexId> preimages_;
  mutable std::map<VertexId, std::map<int, int>> matchings_;
};

}  // namespace

GroupAction amalgam_action(const AmalgamGraph& a, int translation_depth) {
  const AmalgamSpec& spec = a.spec();
  auto oracle = a.oracle();
  auto g1 = std::make_shared<const WordEnum>(factor_elements(spec, 1, -1));
  auto g2 = spec.self_amalgam ? g1
                              : std::make_shared<const WordEnum>(factor_elements(spec, 2, -1));
  std::array<std::shared_ptr<const WordEnum>, 2> groups{g1, g2};

  VertexId root_node{std::vector<std::int64_t>{}};
  Ball probe = ball(a.graph(), {a.graph().root()}, 2);

  std::vector<Generator> gens;
  auto try_add = [&](const std::string& tag, const VertexId& src, const VertexId& dst,
                     std::size_t chart_idx) {
    auto engine = std::make_shared<AmalgamMorphismEngine>(oracle, src, dst, chart_idx, groups);
    try {
      for (const auto& v : probe.vertices) {
        VertexId img = engine->forward(v);
        if (engine->backward(img) != v)
          throw OracleError("engine inverse mismatch at " + v.str());
      }
    } catch (const std::exception&) {
      return;  // seed does not extend; skip this generator
    }
    gens.push_back({tag, tag + "~", [engine](const VertexId& v) { return engine->forward(v); }});
    gens.push_back({tag + "~", tag, [engine](const VertexId& v) { return engine->backward(v); }});
  };

  // factor automorphisms extended from a copy of each side
  auto chart_index_of = [&](const WordEnum& words, const Morphism& m, const Graph& factor) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      bool same = true;
      for (const auto& v : factor.all_vertices())
        if (words.morphisms[i](v) != m(v)) {
          same = false;
          break;
        }
      if (same) return i;
    }
    throw InternalError("factor generator missing from its own closure");
  };
  for (std::size_t gi = 0; gi < spec.action1.size(); ++gi) {
    if (spec.action1.inverse_index(static_cast<int>(gi)) < static_cast<int>(gi))
      continue;  // the backward lambda of the earlier engine covers the inverse
    Morphism m(spec.action1, {static_cast<int>(gi)});
    try_add("f1." + spec.action1.generators()[gi].tag, root_node, root_node,
            chart_index_of(*g1, m, spec.g1));
  }
  if (!spec.labels(1).empty()) {
    VertexId child{std::vector<std::int64_t>{spec.labels(1).front()}};
    for (std::size_t gi = 0; gi < spec.action2.size(); ++gi) {
      if (spec.action2.inverse_index(static_cast<int>(gi)) < static_cast<int>(gi)) continue;
      Morphism m(spec.action2, {static_cast<int>(gi)});
      try_add("f2." + spec.action2.generators()[gi].tag, child, child,
              chart_index_of(*g2, m, spec.g2));
    }
  }

  // copy translations with the identity chart
  if (translation_depth >= 2) {
    Ball nodes = ball(a.connecting_tree(), {root_node}, 2);
    for (const auto& w : nodes.vertices) {
      if (w.token().size() != 2) continue;
      std::ostringstream tag;
      tag << "shift" << w.str();
      try_add(tag.str(), root_node, w, 0);
    }
  }
  return GroupAction(gens, 6);
}

GroupAction seeded_amalgam_action(const AmalgamGraph& a, const VertexId& src, const VertexId& dst,
                                  const std::vector<int>& chart_word, int probe_radius) {
  const AmalgamSpec& spec = a.spec();
  auto g1 = std::make_shared<const WordEnum>(factor_elements(spec, 1, -1));
  auto g2 = spec.self_amalgam || spec.g1 == spec.g2
                ? g1
                : std::make_shared<const WordEnum>(factor_elements(spec, 2, -1));
  std::array<std::shared_ptr<const WordEnum>, 2> groups{g1, g2};

  int dst_side = dst.token().size() % 2 == 0 ? 1 : 2;
  const WordEnum& target_group = *(spec.self_amalgam || spec.g1 == spec.g2
                                       ? g1
                                       : groups[static_cast<std::size_t>(dst_side - 1)]);
  Morphism chart(spec.action(dst_side == 1 || spec.self_amalgam || spec.g1 == spec.g2 ? 1 : 2),
                 chart_word);
  std::size_t chart_idx = target_group.size();
  for (std::size_t i = 0; i < target_group.size(); ++i) {
    bool same = true;
    for (const auto& v : spec.factor(dst_side).all_vertices())
      if (target_group.morphisms[i](v) != chart(v)) {
        same = false;
        break;
      }
    if (same) {
      chart_idx = i;
      break;
    }
  }
  if (chart_idx == target_group.size())
    throw DomainError("chart word lies outside the declared factor group");

  auto engine = std::make_shared<AmalgamMorphismEngine>(a.oracle(), src, dst, chart_idx, groups);
  Ball probe = ball(a.graph(), {a.graph().root()}, probe_radius);
  for (const auto& v : probe.vertices) {
    VertexId img = engine->forward(v);
    if (engine->backward(img) != v) throw OracleError("seed does not extend consistently");
  }
  return GroupAction({{"phi", "phi~", [engine](const VertexId& v) { return engine->forward(v); }},
                      {"phi~", "phi", [engine](const VertexId& v) { return engine->backward(v); }}},
                     6);
}

}  // namespace septree
