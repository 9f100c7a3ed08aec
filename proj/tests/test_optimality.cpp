#include <doctest.h>

#include <algorithm>

#include "lqmatch/classic.hpp"
#include "lqmatch/gen.hpp"
#include "lqmatch/optimality.hpp"
#include "test_helpers.hpp"

using namespace lqmatch;
namespace th = lqmatch::testing;

namespace {

Matching m1_of(const Instance& inst) {  // {(a1, b2)}
  Matching m = Matching::empty_for(inst);
  m.add(*inst.agent_index("a1"), *inst.resource_index("b2"));
  return m;
}

Matching m2_of(const Instance& inst) {  // {(a1, b2), (a2, b1)}
  Matching m = m1_of(inst);
  m.add(*inst.agent_index("a2"), *inst.resource_index("b1"));
  return m;
}

// Random valid matching for property tests: walk agents in a seeded order
// and match each to a random acceptable resource with space, sometimes none.
Matching random_matching(const Instance& inst, std::uint64_t seed) {
  Matching m = Matching::empty_for(inst);
  std::uint64_t state = seed * 2654435761u + 1;
  auto next = [&] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (int a = 0; a < inst.num_agents(); ++a) {
    const auto& prefs = inst.agent_prefs(a);
    if (prefs.empty() || next() % 3 == 0) continue;
    int b = prefs[next() % prefs.size()];
    if (static_cast<int>(m.resource_matches(b).size()) < inst.upper(b)) m.add(a, b);
  }
  return m;
}

}  // namespace

TEST_CASE("blocking pairs of fig1 matchings") {
  Instance inst = parse_instance(th::kFig1Text);
  int a1 = *inst.agent_index("a1"), a2 = *inst.agent_index("a2"), b1 = *inst.resource_index("b1");

  CHECK(blocking_pairs(inst, m1_of(inst)) == std::vector<std::pair<int, int>>{{a1, b1}, {a2, b1}});

  Matching stable = Matching::empty_for(inst);
  stable.add(a1, b1);
  CHECK(blocking_pairs(inst, stable).empty());

  // Empty matching: every edge is a blocking pair.
  auto blocking = blocking_pairs(inst, Matching::empty_for(inst));
  CHECK(blocking.size() == 3);
}

TEST_CASE("blocking_pairs rejects foreign matchings") {
  Instance inst = parse_instance(th::kFig1Text);
  Matching bad = Matching::empty_for(inst);
  bad.add(*inst.agent_index("a2"), *inst.resource_index("b2"));  // not an edge
  CHECK_THROWS_AS(blocking_pairs(inst, bad), ValidationError);
}

TEST_CASE("envy pairs of the all-LQ variant") {
  Instance inst = gen_fig1(Fig1Variant::BothLq);
  auto envy = envy_pairs(inst, m2_of(inst));
  CHECK(envy == std::vector<std::pair<int, int>>{{*inst.agent_index("a1"), *inst.agent_index("a2")}});
  CHECK_FALSE(is_envy_free(inst, m2_of(inst)));
}

TEST_CASE("feasibility of fig1 matchings") {
  Instance inst = parse_instance(th::kFig1Text);
  CHECK(is_feasible(inst, m1_of(inst)));
  Matching stable = Matching::empty_for(inst);
  stable.add(*inst.agent_index("a1"), *inst.resource_index("b1"));
  CHECK_FALSE(is_feasible(inst, stable));  // b2 stays deficient

  Instance no_lq = parse_instance("@lqmatch v1\nagent a1: b1\nresource b1 [0,1]: a1\n");
  CHECK(is_feasible(no_lq, Matching::empty_for(no_lq)));
}

TEST_CASE("fig1 M1 is envy-free but not stable") {
  Instance inst = parse_instance(th::kFig1Text);
  CHECK(is_envy_free(inst, m1_of(inst)));
  CHECK_FALSE(is_stable(inst, m1_of(inst)));
  CHECK(is_envy_free(inst, Matching::empty_for(inst)));
}

TEST_CASE("relaxed stability checker") {
  // All-LQ variant: M2 is relaxed stable (the blocking agent holds an LQ
  // resource) though neither stable nor envy-free.
  Instance bothlq = gen_fig1(Fig1Variant::BothLq);
  CHECK(is_relaxed_stable(bothlq, m2_of(bothlq)));
  CHECK_FALSE(is_stable(bothlq, m2_of(bothlq)));

  // Base variant: in M1 the unmatched agent a2 blocks with b1.
  Instance base = gen_fig1(Fig1Variant::Base);
  CHECK_FALSE(is_relaxed_stable(base, m1_of(base)));

  // Base variant again: M2's blocking agent a1 sits on the LQ resource b2.
  CHECK(is_relaxed_stable(base, m2_of(base)));

  // With the quotas flipped, a1 blocks while holding non-LQ b2, so the
  // definition rules M2 out even though b1 is covered.
  Instance b1lq = gen_fig1(Fig1Variant::B1Lq);
  CHECK_FALSE(is_relaxed_stable(b1lq, m2_of(b1lq)));

  // A stable matching is always relaxed stable.
  Matching stable = Matching::empty_for(base);
  stable.add(*base.agent_index("a1"), *base.resource_index("b1"));
  CHECK(is_relaxed_stable(base, stable));
}

TEST_CASE("implications between the optimality notions") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Instance inst = gen_random_many_one(2 + seed % 6, 2 + (seed / 2) % 5, static_cast<int>(seed % 3), 4, 2, seed);
    Matching m = random_matching(inst, seed);
    CAPTURE(seed);
    if (is_stable(inst, m)) {
      CHECK(is_envy_free(inst, m));
      CHECK(is_relaxed_stable(inst, m));
    }
    // Every envy pair projects onto a blocking pair at the envied resource.
    auto blocking = blocking_pairs(inst, m);
    for (auto [envier, envied] : envy_pairs(inst, m)) {
      std::pair<int, int> pair{envier, m.agent_match(envied)};
      CHECK(std::find(blocking.begin(), blocking.end(), pair) != blocking.end());
    }
  }
}

namespace {

// Straight transcription of the definitions, scanning every pair.
std::vector<std::pair<int, int>> naive_blocking_pairs(const Instance& inst, const Matching& m) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < inst.num_agents(); ++a)
    for (int b = 0; b < inst.num_resources(); ++b) {
      if (!inst.is_edge(a, b) || m.agent_match(a) == b) continue;
      if (!inst.agent_prefers(a, b, m.agent_match(a))) continue;
      bool prefers_a = static_cast<int>(m.resource_matches(b).size()) < inst.upper(b);
      for (int held : m.resource_matches(b))
        if (inst.resource_prefers(b, a, held)) prefers_a = true;
      if (prefers_a) out.emplace_back(a, b);
    }
  return out;
}

std::vector<std::pair<int, int>> naive_envy_pairs(const Instance& inst, const Matching& m) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < inst.num_agents(); ++a)
    for (int other = 0; other < inst.num_agents(); ++other) {
      if (a == other || !m.agent_matched(other)) continue;
      int b = m.agent_match(other);
      if (inst.is_edge(a, b) && inst.agent_prefers(a, b, m.agent_match(a)) && inst.resource_prefers(b, a, other))
        out.emplace_back(a, other);
    }
  return out;
}

}  // namespace

TEST_CASE("pair listings agree with a naive definitional scan") {
  for (std::uint64_t seed = 500; seed <= 570; ++seed) {
    Instance inst = gen_random_many_one(2 + seed % 6, 2 + (seed / 2) % 5, static_cast<int>(seed % 3), 4, 3, seed);
    Matching m = random_matching(inst, seed);
    CAPTURE(seed);
    CHECK(blocking_pairs(inst, m) == naive_blocking_pairs(inst, m));
    CHECK(envy_pairs(inst, m) == naive_envy_pairs(inst, m));
    // The stable outputs also pass the naive scan.
    CHECK(naive_blocking_pairs(inst, stable_agent_optimal(inst)).empty());
    CHECK(naive_blocking_pairs(inst, stable_resource_optimal(inst)).empty());
  }
}

TEST_CASE("feasibility_exists on fig1 and degenerate instances") {
  CHECK(feasibility_exists(parse_instance(th::kFig1Text)));
  // An LQ resource nobody lists cannot be saturated.
  CHECK_FALSE(feasibility_exists(parse_instance("@lqmatch v1\nresource b1 [1,1]:\n")));
}

TEST_CASE("feasibility_exists agrees with exhaustive search") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    // Raw random instances, not pre-screened for feasibility.
    Instance base = gen_random_many_one(2 + seed % 5, 2 + (seed / 2) % 5, 0, 4, 2, seed);
    // Give a couple of resources a lower quota equal to their upper quota.
    InstanceBuilder builder;
    for (int a = 0; a < base.num_agents(); ++a) builder.add_agent(base.agent_id(a));
    for (int b = 0; b < base.num_resources(); ++b) {
      int lower = (b + static_cast<int>(seed)) % 3 == 0 ? base.upper(b) : 0;
      builder.add_resource(base.resource_id(b), lower, base.upper(b));
    }
    for (int a = 0; a < base.num_agents(); ++a) builder.set_agent_prefs(a, base.agent_prefs(a));
    for (int b = 0; b < base.num_resources(); ++b) builder.set_resource_prefs(b, base.resource_prefs(b));
    Instance inst = std::move(builder).build();

    bool brute = th::max_size_where(inst, [&](const Matching& m) { return is_feasible(inst, m); }).has_value();
    CAPTURE(seed);
    CHECK(feasibility_exists(inst) == brute);
  }
}
