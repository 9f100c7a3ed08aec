#pragma once

#include <utility>
#include <vector>

#include "lqmatch/instance.hpp"

namespace lqmatch {

// All pairs (a,b) in E \ M where a prefers b to its current assignment and
// b is undersubscribed or prefers a to its worst assignee. Sorted by
// (agent, resource). Throws ValidationError when m is invalid for inst.
std::vector<std::pair<int, int>> blocking_pairs(const Instance& inst, const Matching& m);

// All pairs (a, a') where a' is matched to some b, (a,b) is an edge,
// a prefers b to its own assignment and b prefers a to a'. Sorted by
// (envier, envied).
std::vector<std::pair<int, int>> envy_pairs(const Instance& inst, const Matching& m);

// True iff every resource meets its lower quota.
bool is_feasible(const Instance& inst, const Matching& m);

bool is_stable(const Instance& inst, const Matching& m);
bool is_envy_free(const Instance& inst, const Matching& m);

// True iff no unmatched agent participates in a blocking pair and, for
// every resource b, at most lower(b) of its assignees do.
bool is_relaxed_stable(const Instance& inst, const Matching& m);

// True iff some matching saturates every lower quota; decided by maximum
// bipartite matching between per-resource demand slots and agents.
bool feasibility_exists(const Instance& inst);

}  // namespace lqmatch
