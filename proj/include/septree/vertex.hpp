#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace septree {

/// Opaque vertex identifier.  Finite graphs use a single-entry token
/// [index]; the line uses [x], the grid [x,y], regular trees use the
/// reduced word of the vertex, and amalgamation graphs use
/// [tree path..., -1, local vertex].  Ordering is lexicographic on the
/// token, which keeps every exploration and report deterministic.
class VertexId {
 public:
  VertexId() = default;
  explicit VertexId(std::vector<std::int64_t> token) : tok_(std::move(token)) {}
  explicit VertexId(std::int64_t single) : tok_{single} {}

  const std::vector<std::int64_t>& token() const { return tok_; }

  friend bool operator==(const VertexId& a, const VertexId& b) { return a.tok_ == b.tok_; }
  friend bool operator!=(const VertexId& a, const VertexId& b) { return !(a == b); }
  friend bool operator<(const VertexId& a, const VertexId& b) { return a.tok_ < b.tok_; }
  friend bool operator>(const VertexId& a, const VertexId& b) { return b < a; }
  friend bool operator<=(const VertexId& a, const VertexId& b) { return !(b < a); }
  friend bool operator>=(const VertexId& a, const VertexId& b) { return !(a < b); }

  std::string str() const;

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : tok_) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  std::vector<std::int64_t> tok_;
};

struct VertexIdHash {
  std::size_t operator()(const VertexId& v) const { return v.hash(); }
};

/// Sorted, duplicate-free vertex list.  Cheap at desk scale and keeps
/// set operations deterministic.
using VertexList = std::vector<VertexId>;

VertexList sorted_unique(VertexList v);
bool contains(const VertexList& sorted, const VertexId& v);
VertexList set_union(const VertexList& a, const VertexList& b);
VertexList set_intersection(const VertexList& a, const VertexList& b);
VertexList set_difference(const VertexList& a, const VertexList& b);

std::string to_string(const VertexList& vs);

}  // namespace septree
