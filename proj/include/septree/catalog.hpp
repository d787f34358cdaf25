#pragma once

#include <string>
#include <vector>

#include "septree/tree_amalg.hpp"

namespace septree::catalog {

/// Double ray as a product of two edges over the two-sided path tree
/// (distinct factors, disjoint label sets).
AmalgamSpec double_ray();
/// Same construction as a self-amalgamation with a side-swap subset.
AmalgamSpec double_ray_swap();
/// Full-adhesion single-label gluing: the amalgam collapses onto g1.
AmalgamSpec trivial_full_adhesion();
/// Two claws glued leaf-to-leaf: the subdivided 3-regular tree.
AmalgamSpec subdivided_tree3();
/// Claw and a single vertex glued through all leaves: the 3-regular tree.
AmalgamSpec claw_point_tree3();
/// The same construction with the factor roles exchanged.
AmalgamSpec point_claw_tree3();
/// Squares overlapping in rungs: the ladder.
AmalgamSpec ladder_squares();
/// Three-rung ladder segments overlapping in end rungs: the ladder again.
AmalgamSpec ladder_triples();
/// Ladder construction with one adhesion set skewed; classifies Neither.
AmalgamSpec perturbed_ladder();

std::vector<std::pair<std::string, AmalgamSpec>> all_specs();

}  // namespace septree::catalog
