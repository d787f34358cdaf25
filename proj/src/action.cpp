#include "septree/action.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "septree/errors.hpp"

namespace septree {

GroupAction::GroupAction(std::vector<Generator> gens, int default_budget)
    : gens_(std::make_shared<std::vector<Generator>>(std::move(gens))), budget_(default_budget) {
  inverse_.assign(gens_->size(), -1);
  for (std::size_t i = 0; i < gens_->size(); ++i) {
    const auto& g = (*gens_)[i];
    for (std::size_t j = 0; j < gens_->size(); ++j) {
      if ((*gens_)[j].tag == g.inverse_tag) {
        inverse_[i] = static_cast<int>(j);
        break;
      }
    }
    if (inverse_[i] < 0)
      throw DomainError("generator '" + g.tag + "': inverse tag '" + g.inverse_tag +
                        "' does not resolve");
  }
}

VertexId Morphism::operator()(const VertexId& v) const {
  VertexId x = v;
  for (int i : word_) {
    const auto& gen = (*gens_)[static_cast<std::size_t>(i)];
    try {
      x = gen.map(x);
    } catch (const std::exception& e) {
      throw OracleError("generator '" + gen.tag + "' undefined at " + x.str() + ": " + e.what());
    }
  }
  return x;
}

VertexList Morphism::apply(const VertexList& vs) const {
  VertexList out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back((*this)(v));
  return sorted_unique(out);
}

Morphism Morphism::inverse(const GroupAction& action) const {
  std::vector<int> w;
  w.reserve(word_.size());
  for (auto it = word_.rbegin(); it != word_.rend(); ++it)
    w.push_back(action.inverse_index(*it));
  return Morphism(action, std::move(w));
}

std::string Morphism::tags() const {
  if (word_.empty()) return "id";
  std::string s;
  for (std::size_t i = 0; i < word_.size(); ++i) {
    if (i) s += ".";
    s += (*gens_)[static_cast<std::size_t>(word_[i])].tag;
  }
  return s;
}

WordEnum enumerate_words(const GroupAction& action, int budget, const VertexList& window,
                         std::size_t cap) {
  WordEnum out;
  std::set<std::vector<VertexId>> seen;
  std::vector<VertexId> idsig(window.begin(), window.end());
  seen.insert(idsig);
  out.morphisms.push_back(Morphism(action, {}));
  out.signatures.push_back(idsig);

  const auto& gens = action.generators();
  std::deque<std::size_t> frontier{0};
  int level = 0;
  while (!frontier.empty()) {
    if (budget >= 0 && level >= budget) break;
    std::deque<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (std::size_t gi = 0; gi < action.size(); ++gi) {
        // word = parent word followed by gi, so the signature extends pointwise
        std::vector<VertexId> sig;
        sig.reserve(window.size());
        try {
          for (const auto& img : out.signatures[idx]) sig.push_back(gens[gi].map(img));
        } catch (const std::exception& e) {
          throw OracleError("generator '" + gens[gi].tag + "' undefined on window: " + e.what());
        }
        if (seen.insert(sig).second) {
          if (out.morphisms.size() >= cap)
            throw BudgetError("word enumeration exceeded cap " + std::to_string(cap));
          std::vector<int> w = out.morphisms[idx].word();
          w.push_back(static_cast<int>(gi));
          out.morphisms.push_back(Morphism(action, std::move(w)));
          out.signatures.push_back(std::move(sig));
          next.push_back(out.morphisms.size() - 1);
        }
      }
    }
    frontier = std::move(next);
    ++level;
  }
  out.closed = frontier.empty();
  return out;
}

std::vector<VertexList> orbits_on_ball(const Graph& g, const GroupAction& action, const Ball& b,
                                       int budget) {
  (void)g;
  if (budget == -2) budget = action.default_budget();
  std::map<VertexId, VertexId> parent;
  for (const auto& v : b.vertices) parent[v] = v;
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  auto unite = [&](const VertexId& a, const VertexId& c) {
    VertexId ra = find(a), rc = find(c);
    if (ra != rc) parent[rc < ra ? ra : rc] = rc < ra ? rc : ra;
  };

  if (!action.trivial()) {
    WordEnum words = enumerate_words(action, budget, b.vertices);
    for (std::size_t wi = 0; wi < words.size(); ++wi)
      for (std::size_t vi = 0; vi < b.vertices.size(); ++vi) {
        const VertexId& img = words.signatures[wi][vi];
        if (contains(b.vertices, img)) unite(b.vertices[vi], img);
      }
  }

  std::map<VertexId, VertexList> classes;
  for (const auto& v : b.vertices) classes[find(v)].push_back(v);
  std::vector<VertexList> out;
  for (auto& [rep, members] : classes) out.push_back(sorted_unique(members));
  return out;
}

std::vector<std::size_t> stabilizer_of_vertex(const WordEnum& words, const VertexId& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words.morphisms[i](x) == x) out.push_back(i);
  return out;
}

std::vector<std::size_t> stabilizer_of_edge(const WordEnum& words, const VertexId& u,
                                            const VertexId& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    VertexId a = words.morphisms[i](u), b = words.morphisms[i](v);
    if ((a == u && b == v) || (a == v && b == u)) out.push_back(i);
  }
  return out;
}

bool in_same_orbit(const WordEnum& words, const VertexId& x, const VertexId& y) {
  if (x == y) return true;
  for (const auto& m : words.morphisms)
    if (m(x) == y) return true;
  return false;
}

}  // namespace septree
