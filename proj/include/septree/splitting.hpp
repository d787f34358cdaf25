#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "septree/graph.hpp"
#include "septree/tree_amalg.hpp"
#include "septree/tree_decomp.hpp"

namespace septree {

struct FactorInfo {
  std::string name;
  Graph graph;
  GroupAction action;
};

struct SplitRecord {
  std::size_t factor_index;
  std::string spec_name;
  SizeSequence compressed_size;  // of the contracted connecting tree
};

/// Current factors plus the record of how they were produced.
struct Factorisation {
  std::vector<FactorInfo> factors;
  std::vector<SplitRecord> history;
};

struct ProcessState {
  Factorisation factorisation;
  int steps = 0;
  std::vector<SizeSequence> size_trace;  // baseline plus one entry per step
};

struct StepResult {
  bool accepted = false;
  std::string reason;  // rejection reason when not accepted
  ProcessState state;
};

/// Replace a factor by the two factors of a splitting.  The amalgam must
/// reproduce the factor (rooted ball isomorphism at `match_radius`), be
/// non-trivial with finite adhesion and identification, classify as
/// Type 1 or Type 2, and distinguish ends at `resolution`.
StepResult split_step(const ProcessState& st, std::size_t factor_index, const AmalgamSpec& spec,
                      int match_radius = 8, int resolution = 4);

struct TerminalReport {
  bool terminal = false;
  bool indeterminate = false;  // unknown verdicts or unstable proxy counts
  std::vector<std::size_t> end_counts;
};

/// All factors have at most one end, stably at resolutions r and r+2.
TerminalReport is_terminal(const Factorisation& f, int resolution);

/// Finite complement construction: given an edge of the connecting tree
/// whose adhesion is fixed setwise by the edge-reversing automorphism
/// `phi`, the subgraph induced by pi(S') and phi(pi(S')) is a finite
/// connected factor completing g1 to the same amalgam.
struct ComplementResult {
  Graph g2;
  std::optional<AmalgamSpec> respecified;  // best effort, ball-checked by callers
  std::string note;
};

ComplementResult nice_finite_complement(const AmalgamGraph& a, const Edge& tree_edge,
                                        const Morphism& phi, const GroupAction& ambient,
                                        const VertexList& s_prime_local);

/// Enlarge parts along word images of the connected hull of `s` until
/// some part contains `s`; keeps validity and invariance (budget-relative).
TreeDecomposition enlarge_parts(const TreeDecomposition& td, const VertexList& s,
                                const GroupAction& action, int budget = -2, int probe_radius = 6);

using Driver =
    std::function<std::optional<std::pair<std::size_t, AmalgamSpec>>(const ProcessState&)>;

struct ProcessOutcome {
  enum class Kind { Terminated, BudgetExceeded, Stalled };
  Kind kind = Kind::Stalled;
  ProcessState state;
  std::vector<std::string> log;
};

ProcessOutcome run_process(const FactorInfo& initial, const Driver& driver, int max_steps,
                           int resolution, int match_radius = 8);

struct TraceEntry {
  SizeSequence before, after;
  Ordering cmp = Ordering::Equal;
  bool anomaly = false;  // non-increasing step
};

std::vector<TraceEntry> size_trace_report(const ProcessState& st);

namespace drivers {

/// Supplies `spec` for the first multi-ended factor whose graph carries
/// the given signature; pure function of the state.
Driver split_signature(const std::string& graph_signature, const AmalgamSpec& spec);

/// Named strategy lists for the shipped catalog graphs.
std::vector<std::pair<std::string, Driver>> strategies_for(const std::string& builtin_name);

}  // namespace drivers

}  // namespace septree
