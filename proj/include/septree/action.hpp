#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "septree/graph.hpp"
#include "septree/vertex.hpp"

namespace septree {

/// One declared automorphism generator, evaluated lazily on vertices.
struct Generator {
  std::string tag;
  std::string inverse_tag;
  std::function<VertexId(const VertexId&)> map;
};

/// Finitely generated (sub)group of automorphisms, given by generators
/// closed under formal inverses.  Group elements are generator words
/// with a global budget; everything downstream is budget-relative
/// unless the closure is exhausted.
class GroupAction {
 public:
  GroupAction() : gens_(std::make_shared<std::vector<Generator>>()) {}
  explicit GroupAction(std::vector<Generator> gens, int default_budget = 12);

  const std::vector<Generator>& generators() const { return *gens_; }
  std::size_t size() const { return gens_->size(); }
  bool trivial() const { return gens_->empty(); }
  int inverse_index(int i) const { return inverse_[static_cast<std::size_t>(i)]; }
  int default_budget() const { return budget_; }

  std::shared_ptr<const std::vector<Generator>> shared_generators() const { return gens_; }

 private:
  std::shared_ptr<const std::vector<Generator>> gens_;
  std::vector<int> inverse_;
  int budget_ = 12;
};

/// A generator word, applied left to right.
class Morphism {
 public:
  Morphism() = default;  // identity
  Morphism(const GroupAction& action, std::vector<int> word)
      : gens_(action.shared_generators()), word_(std::move(word)) {}

  VertexId operator()(const VertexId& v) const;
  VertexList apply(const VertexList& vs) const;
  Morphism inverse(const GroupAction& action) const;
  const std::vector<int>& word() const { return word_; }
  bool identity_word() const { return word_.empty(); }
  std::string tags() const;

 private:
  std::shared_ptr<const std::vector<Generator>> gens_;
  std::vector<int> word_;
};

/// Distinct budget-limited words, deduplicated by their action on a
/// finite window.  `closed` reports that longer words add nothing on
/// the window (always reached on finite graphs well inside the cap).
struct WordEnum {
  std::vector<Morphism> morphisms;                // identity first, then shortlex
  std::vector<std::vector<VertexId>> signatures;  // parallel to morphisms
  bool closed = false;

  std::size_t size() const { return morphisms.size(); }
};

/// BFS over generator words up to `budget` (budget < 0: run to closure),
/// keeping the first word per window signature.  Throws BudgetError when
/// `cap` distinct elements are exceeded.
WordEnum enumerate_words(const GroupAction& action, int budget, const VertexList& window,
                         std::size_t cap = 200000);

/// Partition of the ball's vertices by budget-limited word reachability.
/// Over-counts the true orbit number; classes are sorted by least member.
std::vector<VertexList> orbits_on_ball(const Graph& g, const GroupAction& action, const Ball& b,
                                       int budget = -2 /* -2: action default */);

/// Indices into `words` of the elements fixing x / fixing {u,v} setwise.
std::vector<std::size_t> stabilizer_of_vertex(const WordEnum& words, const VertexId& x);
std::vector<std::size_t> stabilizer_of_edge(const WordEnum& words, const VertexId& u,
                                            const VertexId& v);

/// True if some enumerated word maps x to y.
bool in_same_orbit(const WordEnum& words, const VertexId& x, const VertexId& y);

}  // namespace septree
