#include "lqmatch/optimality.hpp"

#include <algorithm>

namespace lqmatch {

namespace {

// Worst assignee of b under m, or kUnmatched.
int worst_assignee(const Instance& inst, const Matching& m, int b) {
  int worst = kUnmatched;
  for (int a : m.resource_matches(b))
    if (worst == kUnmatched || inst.resource_prefers(b, worst, a)) worst = a;
  return worst;
}

}  // namespace

std::vector<std::pair<int, int>> blocking_pairs(const Instance& inst, const Matching& m) {
  validate_matching(inst, m);
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < inst.num_agents(); ++a) {
    const int current = m.agent_match(a);
    for (int b : inst.agent_prefs(a)) {
      if (b == current) break;  // current and everything after it is no better
      const bool undersubscribed = static_cast<int>(m.resource_matches(b).size()) < inst.upper(b);
      if (undersubscribed || inst.resource_prefers(b, a, worst_assignee(inst, m, b))) out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> envy_pairs(const Instance& inst, const Matching& m) {
  validate_matching(inst, m);
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < inst.num_agents(); ++a) {
    const int current = m.agent_match(a);
    for (int b : inst.agent_prefs(a)) {
      if (!inst.agent_prefers(a, b, current)) continue;
      for (int other : m.resource_matches(b))
        if (other != a && inst.resource_prefers(b, a, other)) out.emplace_back(a, other);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_feasible(const Instance& inst, const Matching& m) {
  for (int b = 0; b < inst.num_resources(); ++b)
    if (static_cast<int>(m.resource_matches(b).size()) < inst.lower(b)) return false;
  return true;
}

bool is_stable(const Instance& inst, const Matching& m) { return blocking_pairs(inst, m).empty(); }

bool is_envy_free(const Instance& inst, const Matching& m) { return envy_pairs(inst, m).empty(); }

bool is_relaxed_stable(const Instance& inst, const Matching& m) {
  auto blocking = blocking_pairs(inst, m);
  std::vector<char> blocks(inst.num_agents(), 0);
  for (auto [a, b] : blocking) blocks[a] = 1;
  for (int a = 0; a < inst.num_agents(); ++a)
    if (blocks[a] && !m.agent_matched(a)) return false;
  for (int b = 0; b < inst.num_resources(); ++b) {
    int blocking_assignees = 0;
    for (int a : m.resource_matches(b)) blocking_assignees += blocks[a];
    if (blocking_assignees > inst.lower(b)) return false;
  }
  return true;
}

namespace {

// Kuhn's augmenting-path search: slot -> agent assignment.
bool augment(int slot, const std::vector<std::vector<int>>& adj, std::vector<char>& visited,
             std::vector<int>& agent_of_slot, std::vector<int>& slot_of_agent) {
  for (int a : adj[slot]) {
    if (visited[a]) continue;
    visited[a] = 1;
    if (slot_of_agent[a] == -1 || augment(slot_of_agent[a], adj, visited, agent_of_slot, slot_of_agent)) {
      slot_of_agent[a] = slot;
      agent_of_slot[slot] = a;
      return true;
    }
  }
  return false;
}

}  // namespace

bool feasibility_exists(const Instance& inst) {
  // One demand slot per unit of lower quota; feasible iff the slots admit
  // a perfect matching into the agents.
  std::vector<std::vector<int>> adj;
  for (int b : inst.lq_resources()) {
    for (int i = 0; i < inst.lower(b); ++i) adj.push_back(inst.resource_prefs(b));
  }
  const int slots = static_cast<int>(adj.size());
  if (slots > inst.num_agents()) return false;
  std::vector<int> agent_of_slot(slots, -1), slot_of_agent(inst.num_agents(), -1);
  for (int slot = 0; slot < slots; ++slot) {
    std::vector<char> visited(inst.num_agents(), 0);
    if (!augment(slot, adj, visited, agent_of_slot, slot_of_agent)) return false;
  }
  return true;
}

}  // namespace lqmatch
