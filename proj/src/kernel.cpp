#include "lqmatch/kernel.hpp"

#include <algorithm>
#include <deque>

#include "lqmatch/classic.hpp"
#include "lqmatch/optimality.hpp"

namespace lqmatch {

const char* to_string(MarkStep step) {
  switch (step) {
    case MarkStep::Step1: return "step1";
    case MarkStep::Step2: return "step2";
    case MarkStep::Step3: return "step3";
    case MarkStep::Step4: return "step4";
    case MarkStep::AgentSide: return "agent-side";
    case MarkStep::ResourceSide: return "resource-side";
  }
  return "?";
}

std::optional<MarkStep> mark_step_from_string(std::string_view s) {
  for (MarkStep step : {MarkStep::Step1, MarkStep::Step2, MarkStep::Step3, MarkStep::Step4, MarkStep::AgentSide,
                        MarkStep::ResourceSide})
    if (s == to_string(step)) return step;
  return std::nullopt;
}

namespace {

// Dense per-edge mark table; -1 means unmarked.
class MarkTable {
public:
  explicit MarkTable(const Instance& inst)
      : nb_(inst.num_resources()), table_(static_cast<size_t>(inst.num_agents()) * inst.num_resources(), -1) {}

  bool marked(int a, int b) const { return table_[static_cast<size_t>(a) * nb_ + b] >= 0; }

  void mark(int a, int b, MarkStep step) {
    auto& slot = table_[static_cast<size_t>(a) * nb_ + b];
    if (slot < 0) slot = static_cast<signed char>(step);
  }

  std::vector<EdgeMark> collect(const Instance& inst) const {
    std::vector<EdgeMark> out;
    for (int a = 0; a < inst.num_agents(); ++a)
      for (int b = 0; b < inst.num_resources(); ++b)
        if (marked(a, b)) out.push_back({a, b, static_cast<MarkStep>(table_[static_cast<size_t>(a) * nb_ + b])});
    return out;
  }

private:
  int nb_;
  std::vector<signed char> table_;
};

KernelResult with_kernel(const Instance& inst, const Matching& ms, const MarkTable& marks) {
  KernelResult result;
  result.verdict = KernelVerdict::Kernel;
  result.stable = ms;
  for (int a = 0; a < inst.num_agents(); ++a)
    if (ms.agent_matched(a)) result.cover_agents.push_back(a);
  for (int b = 0; b < inst.num_resources(); ++b)
    if (ms.resource_matched(b)) result.cover_resources.push_back(b);
  result.marks = marks.collect(inst);
  result.reduced =
      make_subinstance(inst, [&](int a, int b) { return marks.marked(a, b); }).instance;
  return result;
}

void require_one_one(const Instance& inst) {
  if (!inst.is_one_one()) throw PreconditionError("operation requires a one-one instance");
}

}  // namespace

KernelResult efm_kernelize(const Instance& inst, std::optional<int> k) {
  require_one_one(inst);
  if (!feasibility_exists(inst)) throw PreconditionError("instance admits no feasible matching");

  Matching ms = stable_agent_optimal(inst);
  const int s = ms.size();

  if (k && s < *k) {
    KernelResult result;
    result.verdict = KernelVerdict::TrivialNo;
    result.reason = "every envy-free matching has size at most the stable size " + std::to_string(s);
    result.stable = std::move(ms);
    return result;
  }
  if (is_feasible(inst, ms)) {
    KernelResult result;
    result.verdict = KernelVerdict::TrivialYes;
    result.witness = ms;
    result.stable = std::move(ms);
    return result;
  }

  MarkTable marks(inst);
  std::vector<int> cover_agents, cover_resources;
  for (int a = 0; a < inst.num_agents(); ++a)
    if (ms.agent_matched(a)) cover_agents.push_back(a);
  for (int b = 0; b < inst.num_resources(); ++b)
    if (ms.resource_matched(b)) cover_resources.push_back(b);

  // Step 1: all edges between covered agents and LQ resources.
  for (int a : cover_agents)
    for (int b : inst.agent_prefs(a))
      if (inst.is_lq(b)) marks.mark(a, b, MarkStep::Step1);

  // Step 2: each covered resource keeps its min(s+1, list length) best edges.
  for (int b : cover_resources) {
    const auto& prefs = inst.resource_prefs(b);
    const int w = std::min<int>(s + 1, static_cast<int>(prefs.size()));
    for (int i = 0; i < w; ++i) marks.mark(prefs[i], b, MarkStep::Step2);
  }

  // Step 3: non-LQ resources shared by two covered agents.
  std::vector<int> covered_listers(inst.num_resources(), 0);
  for (int a : cover_agents)
    for (int b : inst.agent_prefs(a)) ++covered_listers[b];
  for (int a : cover_agents)
    for (int b : inst.agent_prefs(a))
      if (!inst.is_lq(b) && covered_listers[b] >= 2) marks.mark(a, b, MarkStep::Step3);

  // Step 4: each covered agent keeps its best still-unmarked edge, if any.
  for (int a : cover_agents)
    for (int b : inst.agent_prefs(a))
      if (!marks.marked(a, b)) {
        marks.mark(a, b, MarkStep::Step4);
        break;
      }

  return with_kernel(inst, ms, marks);
}

KernelResult rsm_kernelize(const Instance& inst, int k) {
  require_one_one(inst);
  Matching ms = stable_agent_optimal(inst);
  if (!is_feasible(inst, ms)) throw PreconditionError("stable matching is infeasible");
  const int s = ms.size();

  if (k <= s) {
    KernelResult result;
    result.verdict = KernelVerdict::TrivialYes;
    result.witness = ms;
    result.stable = std::move(ms);
    return result;
  }
  if (k > 2 * s) {
    KernelResult result;
    result.verdict = KernelVerdict::TrivialNo;
    result.reason = "every relaxed-stable matching has size at most " + std::to_string(2 * s);
    result.stable = std::move(ms);
    return result;
  }

  MarkTable marks(inst);
  for (int a = 0; a < inst.num_agents(); ++a) {
    if (!ms.agent_matched(a)) continue;
    const auto& prefs = inst.agent_prefs(a);
    const int w = std::min<int>(2 * s + 1, static_cast<int>(prefs.size()));
    for (int i = 0; i < w; ++i) marks.mark(a, prefs[i], MarkStep::AgentSide);
  }
  for (int b = 0; b < inst.num_resources(); ++b) {
    if (!ms.resource_matched(b)) continue;
    const auto& prefs = inst.resource_prefs(b);
    const int w = std::min<int>(2 * s + 1, static_cast<int>(prefs.size()));
    for (int i = 0; i < w; ++i) marks.mark(prefs[i], b, MarkStep::ResourceSide);
  }

  return with_kernel(inst, ms, marks);
}

namespace {

const Instance& kernel_of(const KernelResult& kr) {
  if (kr.verdict != KernelVerdict::Kernel || !kr.reduced)
    throw PreconditionError("kernel result does not carry a reduced instance");
  return *kr.reduced;
}

}  // namespace

Matching efm_project(const Instance& original, const KernelResult& kr, const Matching& m) {
  const Instance& kernel = kernel_of(kr);
  validate_matching(original, m);
  if (!is_feasible(original, m) || !is_envy_free(original, m))
    throw PreconditionError("matching must be feasible and envy-free in the original instance");

  std::vector<std::vector<signed char>> marked(original.num_agents(),
                                               std::vector<signed char>(original.num_resources(), 0));
  std::vector<int> step4_of(original.num_agents(), kUnmatched);
  for (const auto& mark : kr.marks) {
    marked[mark.agent][mark.resource] = 1;
    if (mark.step == MarkStep::Step4) step4_of[mark.agent] = mark.resource;
  }

  Matching out = Matching::empty_for(kernel);
  for (auto [a, b] : m.edges()) {
    int target = b;
    if (!marked[a][b]) {
      // The off-kernel edge is rerouted to the agent's step-4 resource,
      // which is better-preferred and unmatched.
      target = step4_of[a];
      if (target == kUnmatched)
        throw PreconditionError("matching leaves the kernel at an agent without a step-4 edge");
    }
    auto ka = kernel.agent_index(original.agent_id(a));
    auto kb = kernel.resource_index(original.resource_id(target));
    if (!ka || !kb) throw PreconditionError("matched vertex missing from the kernel");
    if (!out.resource_matches(*kb).empty())
      throw PreconditionError("projection would overload resource " + original.resource_id(target));
    out.add(*ka, *kb);
  }
  return out;
}

Matching efm_lift(const Instance& original, const KernelResult& kr, const Matching& kernel_matching) {
  const Instance& kernel = kernel_of(kr);
  validate_matching(kernel, kernel_matching);
  if (!is_feasible(kernel, kernel_matching) || !is_envy_free(kernel, kernel_matching))
    throw PreconditionError("matching must be feasible and envy-free in the kernel");

  Matching m = translate_matching(kernel_matching, kernel, original);

  // Agents whose envy only exists along deleted edges; they are unmatched
  // and now propose down their full lists, resources trading up. A newly
  // displaced agent starts from the top of its own list.
  std::vector<char> ever_queued(original.num_agents(), 0);
  std::deque<int> queue;
  for (auto [envier, envied] : envy_pairs(original, m)) {
    (void)envied;
    if (m.agent_matched(envier))
      throw PreconditionError("matched agent envies in the original; input is not a kernel matching");
    if (!ever_queued[envier]) {
      ever_queued[envier] = 1;
      queue.push_back(envier);
    }
  }

  std::vector<size_t> next(original.num_agents(), 0);
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    const auto& prefs = original.agent_prefs(a);
    while (next[a] < prefs.size()) {
      int b = prefs[next[a]++];
      int holder = m.resource_match_one(b);
      if (holder == kUnmatched) {
        m.add(a, b);
        break;
      }
      if (original.resource_prefers(b, a, holder)) {
        m.remove(holder, b);
        m.add(a, b);
        ever_queued[holder] = 1;
        queue.push_back(holder);
        break;
      }
    }
  }
  return m;
}

}  // namespace lqmatch
