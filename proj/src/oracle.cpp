#include "lqmatch/oracle.hpp"

#include <algorithm>

#include "lqmatch/optimality.hpp"

namespace lqmatch {

namespace {

// Backtracking over agents in index order; per agent the options are its
// preference list followed by staying unmatched. Prunes on lower-quota
// shortfall, on a strict size bound against the incumbent, and (mode
// dependent) on violations that are already final in the partial matching.
class Search {
public:
  Search(const Instance& inst, bool envy_free_mode) : inst_(inst), efm_(envy_free_mode) {
    assigned_.assign(inst.num_agents(), kUnmatched);
    load_.assign(inst.num_resources(), 0);
    for (int b = 0; b < inst.num_resources(); ++b) shortfall_ += inst.lower(b);
    one_one_ = inst.is_one_one();
  }

  std::optional<Matching> run() {
    descend(0, 0);
    if (!best_) return std::nullopt;
    Matching m = Matching::empty_for(inst_);
    for (int a = 0; a < inst_.num_agents(); ++a)
      if ((*best_)[a] != kUnmatched) m.add(a, (*best_)[a]);
    return m;
  }

private:
  void descend(int agent, int matched) {
    const int remaining = inst_.num_agents() - agent;
    if (shortfall_ > remaining) return;  // lower quotas out of reach
    if (best_ && matched + remaining < best_size_) return;
    if (agent == inst_.num_agents()) {
      finish(matched);
      return;
    }
    for (int b : inst_.agent_prefs(agent)) {
      if (load_[b] >= inst_.upper(b)) continue;
      if (rejectable(agent, b)) continue;
      place(agent, b);
      descend(agent + 1, matched + 1);
      unplace(agent, b);
    }
    assigned_[agent] = kUnmatched;
    if (!rejectable(agent, kUnmatched)) descend(agent + 1, matched);
  }

  // True when giving `agent` the option `b` creates a violation that no
  // later assignment can undo.
  bool rejectable(int agent, int b) {
    if (efm_) {
      // Envy between two already-decided agents is final in either mode.
      assigned_[agent] = b;
      for (int other = 0; other < agent; ++other) {
        if (envies(agent, other) || envies(other, agent)) {
          assigned_[agent] = kUnmatched;
          return true;
        }
      }
      assigned_[agent] = kUnmatched;
      return false;
    }
    if (!one_one_) return false;  // relaxed stability is checked at leaves
    // In a one-one instance a matched resource keeps its assignee, so a
    // blocking pair between a decided agent and a matched resource is final.
    assigned_[agent] = b;
    bool bad = (b == kUnmatched || !inst_.is_lq(b)) && blocks_with_matched(agent);
    if (!bad && b != kUnmatched) {
      for (int other = 0; other < agent; ++other) {
        int ob = assigned_[other];
        if (ob != kUnmatched && inst_.is_lq(ob)) continue;
        if (inst_.agent_prefers(other, b, ob) && inst_.resource_prefers(b, other, agent)) {
          bad = true;
          break;
        }
      }
    }
    assigned_[agent] = kUnmatched;
    return bad;
  }

  bool envies(int a, int other) const {
    int b = assigned_[other];
    if (b == kUnmatched) return false;
    return inst_.agent_prefers(a, b, assigned_[a]) && inst_.resource_prefers(b, a, other);
  }

  bool blocks_with_matched(int agent) const {
    int own = assigned_[agent];
    for (int b : inst_.agent_prefs(agent)) {
      if (b == own) break;
      if (load_[b] == 0) continue;
      int holder = holder_of(b);
      if (inst_.resource_prefers(b, agent, holder)) return true;
    }
    return false;
  }

  int holder_of(int b) const {
    for (int a = 0; a < inst_.num_agents(); ++a)
      if (assigned_[a] == b) return a;
    return kUnmatched;
  }

  void place(int agent, int b) {
    assigned_[agent] = b;
    if (++load_[b] <= inst_.lower(b)) --shortfall_;
  }

  void unplace(int agent, int b) {
    assigned_[agent] = kUnmatched;
    if (load_[b]-- <= inst_.lower(b)) ++shortfall_;
  }

  void finish(int matched) {
    if (shortfall_ != 0) return;
    if (!efm_) {
      Matching m = Matching::empty_for(inst_);
      for (int a = 0; a < inst_.num_agents(); ++a)
        if (assigned_[a] != kUnmatched) m.add(a, assigned_[a]);
      if (!is_relaxed_stable(inst_, m)) return;
    }
    if (!best_ || matched > best_size_ || (matched == best_size_ && lex_smaller(assigned_, *best_))) {
      best_ = assigned_;
      best_size_ = matched;
    }
  }

  static bool lex_smaller(const std::vector<int>& lhs, const std::vector<int>& rhs) {
    // Compare as sorted edge lists; since both are indexed by agent, the
    // first differing agent decides, with "unmatched" largest.
    for (size_t a = 0; a < lhs.size(); ++a) {
      if (lhs[a] == rhs[a]) continue;
      if (lhs[a] == kUnmatched) return false;
      if (rhs[a] == kUnmatched) return true;
      return lhs[a] < rhs[a];
    }
    return false;
  }

  const Instance& inst_;
  bool efm_;
  bool one_one_ = true;
  std::vector<int> assigned_;
  std::vector<int> load_;
  int shortfall_ = 0;
  std::optional<std::vector<int>> best_;
  int best_size_ = -1;
};

void check_cap(const Instance& inst, const OracleOptions& options) {
  if (inst.num_agents() + inst.num_resources() > options.cap)
    throw PreconditionError("instance exceeds the oracle cap of " + std::to_string(options.cap) + " vertices");
}

}  // namespace

std::optional<Matching> max_efm_bruteforce(const Instance& inst, const OracleOptions& options) {
  check_cap(inst, options);
  return Search(inst, true).run();
}

std::optional<Matching> max_rsm_bruteforce(const Instance& inst, const OracleOptions& options) {
  check_cap(inst, options);
  return Search(inst, false).run();
}

std::optional<std::vector<int>> max_independent_set_bruteforce(const SimpleGraph& g, int k) {
  if (k < 0 || k > g.n) return std::nullopt;
  std::vector<int> pick(k);
  // Lexicographically first k-subset that is pairwise non-adjacent.
  auto independent_extension = [&](auto&& self, int depth, int from) -> bool {
    if (depth == k) return true;
    for (int v = from; v < g.n; ++v) {
      bool ok = true;
      for (int i = 0; i < depth && ok; ++i) ok = !g.adjacent(pick[i], v);
      if (!ok) continue;
      pick[depth] = v;
      if (self(self, depth + 1, v + 1)) return true;
    }
    return false;
  };
  if (!independent_extension(independent_extension, 0, 0)) return std::nullopt;
  return pick;
}

}  // namespace lqmatch
