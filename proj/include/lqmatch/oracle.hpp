#pragma once

#include <optional>
#include <vector>

#include "lqmatch/gen.hpp"
#include "lqmatch/instance.hpp"

namespace lqmatch {

struct OracleOptions {
  int cap = 16;  // maximum |agents| + |resources|
};

// Exhaustive ground truth: maximum-cardinality feasible envy-free matching
// over all matchings, or nothing. Ties broken by lexicographically
// smallest edge list. Throws PreconditionError when the instance exceeds
// the cap.
std::optional<Matching> max_efm_bruteforce(const Instance& inst, const OracleOptions& options = {});

// Same, for feasible relaxed-stable matchings.
std::optional<Matching> max_rsm_bruteforce(const Instance& inst, const OracleOptions& options = {});

// First independent set of size k in lexicographic order, or nothing.
std::optional<std::vector<int>> max_independent_set_bruteforce(const SimpleGraph& g, int k);

}  // namespace lqmatch
