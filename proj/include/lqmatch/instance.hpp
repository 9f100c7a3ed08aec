#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lqmatch/error.hpp"

namespace lqmatch {

inline constexpr int kUnmatched = -1;

struct Quota {
  int lower = 0;
  int upper = 1;
  bool operator==(const Quota&) const = default;
};

class Instance;

// Incremental construction of an Instance. Indices are assigned in call
// order; build() validates the whole structure and freezes it.
class InstanceBuilder {
public:
  int add_agent(std::string id);
  int add_resource(std::string id, int lower, int upper);
  void set_agent_prefs(int agent, std::vector<int> resources);
  void set_resource_prefs(int resource, std::vector<int> agents);
  Instance build() &&;

private:
  friend class Instance;
  std::vector<std::string> agent_ids_;
  std::vector<std::string> resource_ids_;
  std::vector<Quota> quotas_;
  std::vector<std::vector<int>> agent_prefs_;
  std::vector<std::vector<int>> resource_prefs_;
  std::unordered_map<std::string, int> agent_index_;
  std::unordered_map<std::string, int> resource_index_;
};

// A two-sided preference system: agents and resources with strict ranked
// lists over mutually acceptable partners, and a [lower, upper] quota per
// resource. Immutable after construction; safe to share across threads.
class Instance {
public:
  Instance() = default;  // the empty instance

  int num_agents() const { return static_cast<int>(agent_ids_.size()); }
  int num_resources() const { return static_cast<int>(resource_ids_.size()); }
  int num_edges() const { return num_edges_; }

  const std::string& agent_id(int a) const { return agent_ids_[a]; }
  const std::string& resource_id(int b) const { return resource_ids_[b]; }
  std::optional<int> agent_index(std::string_view id) const;
  std::optional<int> resource_index(std::string_view id) const;

  Quota quota(int b) const { return quotas_[b]; }
  int lower(int b) const { return quotas_[b].lower; }
  int upper(int b) const { return quotas_[b].upper; }
  bool is_lq(int b) const { return quotas_[b].lower > 0; }
  // Indices of resources with a positive lower quota, ascending.
  const std::vector<int>& lq_resources() const { return lq_resources_; }

  const std::vector<int>& agent_prefs(int a) const { return agent_prefs_[a]; }
  const std::vector<int>& resource_prefs(int b) const { return resource_prefs_[b]; }

  // 1-based rank of b in a's list; 0 when (a,b) is not an edge.
  int agent_rank(int a, int b) const { return agent_rank_[static_cast<size_t>(a) * num_resources() + b]; }
  int resource_rank(int b, int a) const { return resource_rank_[static_cast<size_t>(b) * num_agents() + a]; }
  bool is_edge(int a, int b) const { return agent_rank(a, b) != 0; }

  // True when a prefers b1 over b2 (kUnmatched is least preferred).
  bool agent_prefers(int a, int b1, int b2) const;
  bool resource_prefers(int b, int a1, int a2) const;

  bool is_one_one() const { return one_one_; }

  bool operator==(const Instance& other) const;

private:
  friend class InstanceBuilder;

  std::vector<std::string> agent_ids_;
  std::vector<std::string> resource_ids_;
  std::vector<Quota> quotas_;
  std::vector<std::vector<int>> agent_prefs_;
  std::vector<std::vector<int>> resource_prefs_;
  std::unordered_map<std::string, int> agent_index_;
  std::unordered_map<std::string, int> resource_index_;
  std::vector<int> agent_rank_;
  std::vector<int> resource_rank_;
  std::vector<int> lq_resources_;
  int num_edges_ = 0;
  bool one_one_ = true;
};

// An allocation of agents to resources. Capacity against a concrete
// instance is checked by validate_matching, not by this container.
class Matching {
public:
  Matching() = default;
  Matching(int num_agents, int num_resources);
  static Matching empty_for(const Instance& inst);

  void add(int agent, int resource);
  void remove(int agent, int resource);

  int agent_match(int agent) const { return agent_match_[agent]; }
  bool agent_matched(int agent) const { return agent_match_[agent] != kUnmatched; }
  // Assignees of a resource, ascending agent index.
  const std::vector<int>& resource_matches(int resource) const { return resource_match_[resource]; }
  bool resource_matched(int resource) const { return !resource_match_[resource].empty(); }
  // Unique assignee in a one-one matching; kUnmatched when empty.
  int resource_match_one(int resource) const;

  int size() const { return size_; }
  int num_agents() const { return static_cast<int>(agent_match_.size()); }
  int num_resources() const { return static_cast<int>(resource_match_.size()); }

  // Edge list sorted by (agent, resource); also the tie-breaking key.
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const Matching& other) const;

private:
  std::vector<int> agent_match_;
  std::vector<std::vector<int>> resource_match_;
  int size_ = 0;
};

// Throws ValidationError unless every matched pair is an edge of inst and
// every resource holds at most upper(b) agents.
void validate_matching(const Instance& inst, const Matching& m);

// Canonical text format.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

// Matching file: one "<agent-id> <resource-id>" per line.
Matching parse_matching(const Instance& inst, std::string_view text);
std::string serialize_matching(const Instance& inst, const Matching& m);

// Re-expresses m (a matching of `from`) against `to`, mapping vertices by
// id. Throws ValidationError when an edge does not exist in `to`.
Matching translate_matching(const Matching& m, const Instance& from, const Instance& to);

struct CloneResult {
  Instance instance;
  // Per original resource index: ids of its copies, lower-quota copies first.
  std::vector<std::vector<std::string>> copies;
};

// Expands every resource b into upper(b) unit-capacity copies b(1..upper);
// copies 1..lower(b) get quota [1,1], the rest [0,1]. A one-one input is
// returned unchanged.
CloneResult clone_to_one_one(const Instance& inst);

// The structural parameters of an instance.
struct ParamProfile {
  int q = 0;       // number of LQ resources
  int ell_lq = 0;  // longest preference list over LQ resources
  int d = 0;       // deficiency w.r.t. the agent-optimal stable matching
  int n_d = 0;     // number of deficient resources
  int a_bar = 0;   // agents acceptable to some LQ resource
  int t = 0;       // max common non-LQ resources over agent pairs
  int s = 0;       // size of a stable matching
  bool operator==(const ParamProfile&) const = default;
};

ParamProfile compute_params(const Instance& inst);

// A vertex-induced restriction of an instance: keeps exactly the edges
// accepted by keep_edge, preserves relative preference orders, and drops
// vertices left without edges. quota_override, when set, supplies the
// quota of each surviving resource (by original index).
struct SubInstance {
  Instance instance;
  std::vector<int> agent_to_orig;
  std::vector<int> resource_to_orig;
};

SubInstance make_subinstance(const Instance& inst,
                             const std::function<bool(int, int)>& keep_edge,
                             const std::function<Quota(int)>& quota_override = nullptr);

}  // namespace lqmatch
