#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "lqmatch/instance.hpp"

namespace lqmatch {

// For each resource unmatched in a matching: the rank (in the resource's
// list) of the most-preferred matched agent that prefers the resource to
// its current partner, or kDummyRank when no such agent exists. Matched
// resources carry kNotApplicable.
struct ThresholdMap {
  static constexpr int kDummyRank = std::numeric_limits<int>::max();
  static constexpr int kNotApplicable = -1;
  std::vector<int> rank;
};

ThresholdMap threshold_agents(const Instance& inst, const Matching& m);

// Extends a minimal feasible matching m: unmatched agents and resources
// form a subgraph keeping edges (a,b) with a strictly preferred over the
// threshold agent of b, and its agent-optimal stable matching is unioned
// onto m. If the result is envy-free, it is a maximum-size envy-free
// matching containing m. Throws PreconditionError when the instance is
// not one-one or m is not minimal feasible.
Matching extend(const Instance& inst, const Matching& m);

// An injective assignment of one listed agent to each LQ resource; as a
// matching it is minimal feasible.
struct LqAssignment {
  std::vector<std::pair<int, int>> pairs;  // (resource, agent), resources ascending
  Matching to_matching(const Instance& inst) const;
};

// Streams every injective assignment in lexicographic order by
// (LQ resource index, agent rank). Yields a single empty assignment when
// there are no LQ resources, and nothing when some LQ resource has an
// empty list.
class AssignmentEnumerator {
public:
  explicit AssignmentEnumerator(const Instance& inst);
  std::optional<LqAssignment> next();

private:
  bool advance();

  const Instance& inst_;
  std::vector<int> lq_;
  std::vector<int> choice_;      // per LQ resource: index into its pref list
  std::vector<int> agent_used_;  // agent -> position holding it + 1, or 0
  bool done_ = false;
  bool fresh_ = true;
};

struct SolveOptions {
  int threads = 1;
  std::optional<std::uint64_t> budget;  // cap on enumerated assignments
};

struct SolveStats {
  std::uint64_t assignments_enumerated = 0;
};

struct SolveResult {
  std::optional<Matching> matching;
  SolveStats stats;
};

// Maximum-size feasible envy-free matching of a one-one instance, or
// nothing when none exists. Ties go to the lexicographically smallest
// edge list; the result is independent of the thread count.
SolveResult alg_efm(const Instance& inst, const SolveOptions& options = {});

// Maximum-size feasible relaxed-stable matching of a one-one instance
// admitting a feasible matching.
SolveResult alg_rsm(const Instance& inst, const SolveOptions& options = {});

}  // namespace lqmatch
