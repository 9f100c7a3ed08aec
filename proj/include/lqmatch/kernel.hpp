#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lqmatch/instance.hpp"

namespace lqmatch {

enum class KernelVerdict { TrivialYes, TrivialNo, Kernel };

// Which marking step claimed an edge (first claimant wins).
enum class MarkStep { Step1, Step2, Step3, Step4, AgentSide, ResourceSide };

const char* to_string(MarkStep step);
std::optional<MarkStep> mark_step_from_string(std::string_view s);

struct EdgeMark {
  int agent;
  int resource;
  MarkStep step;
  bool operator==(const EdgeMark&) const = default;
};

struct KernelResult {
  KernelVerdict verdict = KernelVerdict::Kernel;

  // TrivialYes: a witness matching in the original instance.
  std::optional<Matching> witness;
  // TrivialNo: why the target size is unreachable.
  std::string reason;

  // Kernel verdict only. `reduced` keeps original ids and quotas.
  std::optional<Instance> reduced;
  std::vector<EdgeMark> marks;  // original indices, sorted by (agent, resource)
  std::optional<Matching> stable;
  std::vector<int> cover_agents;     // X_A: agents matched in the stable matching
  std::vector<int> cover_resources;  // X_B: resources matched in the stable matching
};

// Reduction for maximum feasible envy-free matching. Requires a one-one
// instance admitting a feasible matching. With k present, answers the
// size-k decision trivially where possible; the kernel itself does not
// depend on k.
KernelResult efm_kernelize(const Instance& inst, std::optional<int> k = std::nullopt);

// Reduction for maximum feasible relaxed-stable matching. Requires a
// one-one instance whose stable matching is feasible; k is mandatory
// because both trivial verdicts depend on it.
KernelResult rsm_kernelize(const Instance& inst, int k);

// Re-expresses a feasible envy-free matching of the original inside the
// kernel without changing its size: every off-kernel edge of an agent is
// replaced by that agent's step-4 marked resource.
Matching efm_project(const Instance& original, const KernelResult& kr, const Matching& m);

// Turns a feasible envy-free matching of the kernel into one of the
// original, of equal size, by letting agents that envy along deleted
// edges propose down their full lists.
Matching efm_lift(const Instance& original, const KernelResult& kr, const Matching& kernel_matching);

}  // namespace lqmatch
