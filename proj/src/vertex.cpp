#include "septree/vertex.hpp"

#include <algorithm>
#include <sstream>

namespace septree {

std::string VertexId::str() const {
  if (tok_.size() == 1) return std::to_string(tok_[0]);
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < tok_.size(); ++i) {
    if (i) os << ',';
    os << tok_[i];
  }
  os << ')';
  return os.str();
}

VertexList sorted_unique(VertexList v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const VertexList& sorted, const VertexId& v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

VertexList set_union(const VertexList& a, const VertexList& b) {
  VertexList out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexList set_intersection(const VertexList& a, const VertexList& b) {
  VertexList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexList set_difference(const VertexList& a, const VertexList& b) {
  VertexList out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string to_string(const VertexList& vs) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) os << ' ';
    os << vs[i].str();
  }
  os << '}';
  return os.str();
}

}  // namespace septree
