#pragma once

#include <cstdint>

#include "tnepfacts/grid.hpp"

namespace tnepfacts::testsupport {

struct SmallInstance {
    Network net;
    std::vector<Scenario> scenarios;
    CostConfig costs;
};

// Random desk-scale instance: <= 5 buses, <= 5 branches, <= 2 scenarios,
// and at most 12 enumerable integer variables in the largest formulation
// (gamma ranges, device binaries and the two sign binaries per
// branch-scenario all counted). Deterministic in the seed.
SmallInstance random_small_instance(std::uint64_t seed);

// Number of integer variables with a non-trivial range in the extended
// formulation of this instance: branches with upgrades + device candidates
// + 2 * branches * scenarios.
int facets_integer_count(const SmallInstance& inst);

}  // namespace tnepfacts::testsupport
