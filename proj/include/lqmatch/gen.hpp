#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "lqmatch/instance.hpp"

namespace lqmatch {

// Undirected simple graph; vertices 0..n-1, edges stored with u < v.
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  bool adjacent(int u, int v) const;
};

// Text format: first line "n m", then m lines "u v" with 1-based vertices.
SimpleGraph parse_graph(std::string_view text);

enum class Fig1Variant { Base, B1Lq, BothLq };

// The two-agent, two-resource exemplar instance; variants differ only in
// which resources carry a lower quota.
Instance gen_fig1(Fig1Variant variant);

// Reduction from independent set: one agent per vertex and per edge, a
// block of deg(v)+1 unit resources per vertex, and k resources with quota
// [1,1] listing all vertex-agents. The graph has an independent set of
// size k iff the instance admits a feasible envy-free matching covering
// every agent.
Instance gen_indset_reduction(const SimpleGraph& g, int k);

// Seeded random one-one instance: uniform random acceptability and strict
// orders, n_lq resources with lower quota 1, regenerated until a feasible
// matching exists (bounded retries).
Instance gen_random(int n_agents, int n_resources, int n_lq, int max_list_len, std::uint64_t seed);

// Many-one variant: upper quotas drawn from [1, max_upper] and lower
// quotas of LQ resources from [1, upper].
Instance gen_random_many_one(int n_agents, int n_resources, int n_lq, int max_list_len,
                             int max_upper, std::uint64_t seed);

}  // namespace lqmatch
