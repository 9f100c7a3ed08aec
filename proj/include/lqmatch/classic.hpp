#pragma once

#include <vector>

#include "lqmatch/instance.hpp"

namespace lqmatch {

// Agent-proposing deferred acceptance, ignoring lower quotas. The result is
// stable and agent-optimal: every agent does at least as well as in any
// other stable matching.
Matching stable_agent_optimal(const Instance& inst);

// Resource-proposing deferred acceptance; resource-optimal stable matching.
Matching stable_resource_optimal(const Instance& inst);

struct Deficiency {
  int d = 0;                   // total shortfall below lower quotas
  int n_d = 0;                 // number of deficient resources
  std::vector<int> deficient;  // ascending resource indices
};

// Deficiency w.r.t. the agent-optimal stable matching (the choice is
// immaterial: the matched sets are invariant across stable matchings).
Deficiency deficiency(const Instance& inst);

}  // namespace lqmatch
