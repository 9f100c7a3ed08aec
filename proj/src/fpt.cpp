#include "lqmatch/fpt.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "lqmatch/classic.hpp"
#include "lqmatch/optimality.hpp"

namespace lqmatch {

ThresholdMap threshold_agents(const Instance& inst, const Matching& m) {
  validate_matching(inst, m);
  ThresholdMap out;
  out.rank.assign(inst.num_resources(), ThresholdMap::kNotApplicable);
  for (int b = 0; b < inst.num_resources(); ++b) {
    if (m.resource_matched(b)) continue;
    out.rank[b] = ThresholdMap::kDummyRank;
    const auto& prefs = inst.resource_prefs(b);
    for (size_t i = 0; i < prefs.size(); ++i) {
      int a = prefs[i];
      if (m.agent_matched(a) && inst.agent_prefers(a, b, m.agent_match(a))) {
        out.rank[b] = static_cast<int>(i) + 1;
        break;
      }
    }
  }
  return out;
}

namespace {

void require_one_one(const Instance& inst) {
  if (!inst.is_one_one()) throw PreconditionError("operation requires a one-one instance");
}

// Minimal feasible in a one-one instance: exactly the LQ resources are matched.
bool is_minimal_feasible_one_one(const Instance& inst, const Matching& m) {
  for (int b = 0; b < inst.num_resources(); ++b)
    if (m.resource_matched(b) != inst.is_lq(b)) return false;
  return true;
}

}  // namespace

Matching extend(const Instance& inst, const Matching& m) {
  require_one_one(inst);
  validate_matching(inst, m);
  if (!is_minimal_feasible_one_one(inst, m))
    throw PreconditionError("matching is not minimal feasible");

  ThresholdMap thresholds = threshold_agents(inst, m);

  // Unmatched agents and resources, keeping edges where the agent beats the
  // resource's threshold agent; the dummy threshold admits every edge.
  auto keep = [&](int a, int b) {
    if (m.agent_matched(a) || m.resource_matched(b)) return false;
    return inst.resource_rank(b, a) < thresholds.rank[b];
  };
  SubInstance sub = make_subinstance(inst, keep, [](int) { return Quota{0, 1}; });

  Matching result = m;
  Matching sub_stable = stable_agent_optimal(sub.instance);
  for (auto [a, b] : sub_stable.edges()) result.add(sub.agent_to_orig[a], sub.resource_to_orig[b]);
  return result;
}

// ---------------------------------------------------------------------------
// Assignment enumeration

Matching LqAssignment::to_matching(const Instance& inst) const {
  Matching m = Matching::empty_for(inst);
  for (auto [b, a] : pairs) m.add(a, b);
  return m;
}

AssignmentEnumerator::AssignmentEnumerator(const Instance& inst) : inst_(inst), lq_(inst.lq_resources()) {
  require_one_one(inst);
  choice_.assign(lq_.size(), -1);
  agent_used_.assign(inst.num_agents(), 0);
}

// Moves choice_ to the next injective combination in lexicographic order by
// (position, rank). Positions with value -1 are "to be filled".
bool AssignmentEnumerator::advance() {
  int pos = fresh_ ? 0 : static_cast<int>(lq_.size()) - 1;
  fresh_ = false;
  while (pos >= 0 && pos < static_cast<int>(lq_.size())) {
    const auto& prefs = inst_.resource_prefs(lq_[pos]);
    // Release the current holder of this position, if any.
    if (choice_[pos] >= 0) agent_used_[prefs[choice_[pos]]] = 0;
    int next = choice_[pos] + 1;
    while (next < static_cast<int>(prefs.size()) && agent_used_[prefs[next]]) ++next;
    if (next < static_cast<int>(prefs.size())) {
      choice_[pos] = next;
      agent_used_[prefs[next]] = 1;
      ++pos;
      if (pos < static_cast<int>(lq_.size())) choice_[pos] = -1;
    } else {
      choice_[pos] = -1;
      --pos;  // backtrack
    }
  }
  return pos >= 0;
}

std::optional<LqAssignment> AssignmentEnumerator::next() {
  if (done_) return std::nullopt;
  if (!advance()) {
    done_ = true;
    return std::nullopt;
  }
  LqAssignment out;
  out.pairs.reserve(lq_.size());
  for (size_t i = 0; i < lq_.size(); ++i) out.pairs.emplace_back(lq_[i], inst_.resource_prefs(lq_[i])[choice_[i]]);
  return out;
}

// ---------------------------------------------------------------------------
// FPT solvers

namespace {

struct Candidate {
  int size = -1;
  std::vector<std::pair<int, int>> edges;

  bool better_than(const Candidate& other) const {
    if (size != other.size) return size > other.size;
    return edges < other.edges;
  }
};

// Evaluates one assignment; returns the surviving extension's edges.
std::optional<Candidate> evaluate_efm(const Instance& inst, const LqAssignment& assignment) {
  Matching me = assignment.to_matching(inst);
  // Discard when a matched agent envies another matched agent.
  for (auto [envier, envied] : envy_pairs(inst, me)) {
    (void)envied;
    if (me.agent_matched(envier)) return std::nullopt;
  }
  Matching extended = extend(inst, me);
  if (!is_envy_free(inst, extended)) return std::nullopt;
  return Candidate{extended.size(), extended.edges()};
}

std::optional<Candidate> evaluate_rsm(const Instance& inst, const LqAssignment& assignment) {
  Matching me = assignment.to_matching(inst);
  // Prune the instance to the vertices untouched by the assignment.
  auto keep = [&](int a, int b) { return !me.agent_matched(a) && !me.resource_matched(b); };
  SubInstance sub = make_subinstance(inst, keep);
  Matching sub_stable = stable_agent_optimal(sub.instance);
  Matching candidate = me;
  for (auto [a, b] : sub_stable.edges()) candidate.add(sub.agent_to_orig[a], sub.resource_to_orig[b]);
  if (!is_relaxed_stable(inst, candidate)) return std::nullopt;
  return Candidate{candidate.size(), candidate.edges()};
}

template <typename Evaluate>
SolveResult run_solver(const Instance& inst, const SolveOptions& options, Evaluate evaluate) {
  require_one_one(inst);

  std::vector<LqAssignment> assignments;
  AssignmentEnumerator enumerator(inst);
  while (auto assignment = enumerator.next()) {
    if (options.budget && assignments.size() >= *options.budget)
      throw BudgetExceededError("assignment budget of " + std::to_string(*options.budget) + " exceeded");
    assignments.push_back(std::move(*assignment));
  }

  SolveResult result;
  result.stats.assignments_enumerated = assignments.size();

  Candidate best;
  const int threads = std::max(1, options.threads);
  if (threads == 1 || assignments.size() <= 1) {
    for (const auto& assignment : assignments)
      if (auto candidate = evaluate(inst, assignment); candidate && candidate->better_than(best))
        best = std::move(*candidate);
  } else {
    std::atomic<size_t> cursor{0};
    std::mutex merge_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
      Candidate local;
      try {
        for (size_t i = cursor.fetch_add(1); i < assignments.size(); i = cursor.fetch_add(1))
          if (auto candidate = evaluate(inst, assignments[i]); candidate && candidate->better_than(local))
            local = std::move(*candidate);
      } catch (...) {
        std::lock_guard lock(merge_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      std::lock_guard lock(merge_mutex);
      if (local.better_than(best)) best = std::move(local);
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  if (best.size >= 0) {
    Matching m = Matching::empty_for(inst);
    for (auto [a, b] : best.edges) m.add(a, b);
    result.matching = std::move(m);
  }
  return result;
}

}  // namespace

SolveResult alg_efm(const Instance& inst, const SolveOptions& options) {
  return run_solver(inst, options, evaluate_efm);
}

SolveResult alg_rsm(const Instance& inst, const SolveOptions& options) {
  require_one_one(inst);
  if (!feasibility_exists(inst)) throw PreconditionError("instance admits no feasible matching");
  return run_solver(inst, options, evaluate_rsm);
}

}  // namespace lqmatch
