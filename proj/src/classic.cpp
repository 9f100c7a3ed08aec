#include "lqmatch/classic.hpp"

#include <deque>
#include <set>

namespace lqmatch {

Matching stable_agent_optimal(const Instance& inst) {
  Matching m = Matching::empty_for(inst);
  const int na = inst.num_agents();

  // Free agents propose in FIFO order; a resource keeps its upper(b) best
  // proposers, ejecting the worst when over capacity.
  std::deque<int> free;
  for (int a = 0; a < na; ++a)
    if (!inst.agent_prefs(a).empty()) free.push_back(a);
  std::vector<size_t> next(na, 0);
  // Per resource: assignees keyed by (rank at the resource, agent).
  std::vector<std::set<std::pair<int, int>>> held(inst.num_resources());

  while (!free.empty()) {
    int a = free.front();
    free.pop_front();
    const auto& prefs = inst.agent_prefs(a);
    if (next[a] >= prefs.size()) continue;  // exhausted, stays unmatched
    int b = prefs[next[a]++];
    auto& slot = held[b];
    if (static_cast<int>(slot.size()) < inst.upper(b)) {
      slot.emplace(inst.resource_rank(b, a), a);
      m.add(a, b);
    } else {
      auto worst = std::prev(slot.end());
      if (inst.resource_rank(b, a) < worst->first) {
        int ejected = worst->second;
        slot.erase(worst);
        m.remove(ejected, b);
        slot.emplace(inst.resource_rank(b, a), a);
        m.add(a, b);
        if (next[ejected] < inst.agent_prefs(ejected).size()) free.push_back(ejected);
      } else if (next[a] < prefs.size()) {
        free.push_back(a);
      }
    }
  }
  return m;
}

Matching stable_resource_optimal(const Instance& inst) {
  Matching m = Matching::empty_for(inst);
  const int nb = inst.num_resources();

  // Undersubscribed resources propose down their lists; an agent keeps the
  // best proposal seen so far.
  std::deque<int> free;
  for (int b = 0; b < nb; ++b)
    if (!inst.resource_prefs(b).empty()) free.push_back(b);
  std::vector<size_t> next(nb, 0);

  while (!free.empty()) {
    int b = free.front();
    free.pop_front();
    const auto& prefs = inst.resource_prefs(b);
    while (static_cast<int>(m.resource_matches(b).size()) < inst.upper(b) && next[b] < prefs.size()) {
      int a = prefs[next[b]++];
      int current = m.agent_match(a);
      if (current == kUnmatched) {
        m.add(a, b);
      } else if (inst.agent_prefers(a, b, current)) {
        m.remove(a, current);
        m.add(a, b);
        if (next[current] < inst.resource_prefs(current).size()) free.push_back(current);
      }
    }
  }
  return m;
}

Deficiency deficiency(const Instance& inst) {
  Matching ms = stable_agent_optimal(inst);
  Deficiency out;
  for (int b = 0; b < inst.num_resources(); ++b) {
    int shortfall = inst.lower(b) - static_cast<int>(ms.resource_matches(b).size());
    if (shortfall > 0) {
      out.d += shortfall;
      out.n_d += 1;
      out.deficient.push_back(b);
    }
  }
  return out;
}

}  // namespace lqmatch
