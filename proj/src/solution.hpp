#pragma once

#include "actsense/validate.hpp"
#include "digraph.hpp"

namespace actsense::detail {

// Product of a plan that solves the world; throws NotASolution otherwise.
ProductGraph require_solution(const Plan& plan, const World& world);

// World-state projection of the product's transitions.
Adjacency world_projection(const ProductGraph& g);

} // namespace actsense::detail
