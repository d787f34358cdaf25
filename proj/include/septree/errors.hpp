#pragma once

#include <stdexcept>
#include <string>

namespace septree {

/// Invalid argument or an operation applied outside its domain
/// (mismatched graphs, unassigned component, bad vertex id, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed amalgamation data: cardinality mismatch, non-bijective
/// bonding map, label sets not disjoint, ...
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// A word budget, exploration cap or identification cap was exhausted
/// before the answer stabilised.  The result would be budget-relative
/// at best, so we refuse instead of guessing.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// End proxies were requested at a resolution too coarse for the
/// separation at hand; the caller must refine the radius.
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// A graph or morphism oracle misbehaved (asymmetric adjacency,
/// morphism undefined on a requested vertex, ...).
struct OracleError : std::runtime_error {
  explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

/// Input document does not match the expected JSON schema.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Invariant that should hold by construction failed; signals a bug.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace septree
