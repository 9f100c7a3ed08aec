#include "lqmatch/gen.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "lqmatch/optimality.hpp"

namespace lqmatch {

bool SimpleGraph::adjacent(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end();
}

SimpleGraph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  SimpleGraph g;
  int m = 0;
  if (!(in >> g.n >> m) || g.n < 0 || m < 0) throw ParseError(1, 1, "expected 'n m' header");
  for (int i = 0; i < m; ++i) {
    int u = 0, v = 0;
    if (!(in >> u >> v)) throw ParseError(i + 2, 1, "expected edge 'u v'");
    if (u < 1 || u > g.n || v < 1 || v > g.n) throw ParseError(i + 2, 1, "vertex out of range");
    if (u == v) throw ParseError(i + 2, 1, "self-loop");
    --u, --v;
    if (u > v) std::swap(u, v);
    if (g.adjacent(u, v)) throw ParseError(i + 2, 1, "duplicate edge");
    g.edges.emplace_back(u, v);
  }
  return g;
}

Instance gen_fig1(Fig1Variant variant) {
  int lq1 = 0, lq2 = 0;
  switch (variant) {
    case Fig1Variant::Base: lq2 = 1; break;
    case Fig1Variant::B1Lq: lq1 = 1; break;
    case Fig1Variant::BothLq: lq1 = lq2 = 1; break;
  }
  InstanceBuilder b;
  int a1 = b.add_agent("a1");
  int a2 = b.add_agent("a2");
  int b1 = b.add_resource("b1", lq1, 1);
  int b2 = b.add_resource("b2", lq2, 1);
  b.set_agent_prefs(a1, {b1, b2});
  b.set_agent_prefs(a2, {b1});
  b.set_resource_prefs(b1, {a1, a2});
  b.set_resource_prefs(b2, {a1});
  return std::move(b).build();
}

Instance gen_indset_reduction(const SimpleGraph& g, int k) {
  if (k < 1 || k > g.n) throw PreconditionError("k must be between 1 and the number of vertices");
  const int n = g.n;
  const int m = static_cast<int>(g.edges.size());

  // Edges incident on each vertex, in edge-index order.
  std::vector<std::vector<int>> incident(n);
  for (int j = 0; j < m; ++j) {
    incident[g.edges[j].first].push_back(j);
    incident[g.edges[j].second].push_back(j);
  }

  InstanceBuilder b;
  std::vector<int> vertex_agent(n), edge_agent(m);
  for (int i = 0; i < n; ++i) vertex_agent[i] = b.add_agent("a" + std::to_string(i + 1));
  for (int j = 0; j < m; ++j) edge_agent[j] = b.add_agent("ae" + std::to_string(j + 1));

  // Block B_i: deg(v_i)+1 unit resources preferring a_i, then E_i agents.
  std::vector<std::vector<int>> block(n);
  for (int i = 0; i < n; ++i) {
    const int q_i = static_cast<int>(incident[i].size()) + 1;
    for (int u = 1; u <= q_i; ++u)
      block[i].push_back(b.add_resource("b" + std::to_string(i + 1) + "_" + std::to_string(u), 0, 1));
  }
  std::vector<int> x(k);
  for (int j = 0; j < k; ++j) x[j] = b.add_resource("x" + std::to_string(j + 1), 1, 1);

  for (int i = 0; i < n; ++i) {
    std::vector<int> prefs = block[i];
    prefs.insert(prefs.end(), x.begin(), x.end());
    b.set_agent_prefs(vertex_agent[i], std::move(prefs));
  }
  for (int j = 0; j < m; ++j) {
    std::vector<int> prefs = block[g.edges[j].first];
    const auto& second = block[g.edges[j].second];
    prefs.insert(prefs.end(), second.begin(), second.end());
    b.set_agent_prefs(edge_agent[j], std::move(prefs));
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> prefs{vertex_agent[i]};
    for (int j : incident[i]) prefs.push_back(edge_agent[j]);
    for (int r : block[i]) b.set_resource_prefs(r, prefs);
  }
  for (int j = 0; j < k; ++j) b.set_resource_prefs(x[j], vertex_agent);

  return std::move(b).build();
}

namespace {

// Deterministic RNG with a fixed algorithm so instances are reproducible
// across platforms (std::uniform_int_distribution is not portable).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n)
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  // Uniform in [lo, hi]
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[below(i + 1)]);
  }

private:
  std::uint64_t state_;
};

Instance random_attempt(int n_agents, int n_resources, int n_lq, int max_list_len, int max_upper, Rng& rng) {
  std::vector<int> uppers(n_resources, 1);
  if (max_upper > 1)
    for (int& u : uppers) u = rng.between(1, max_upper);

  std::vector<int> order(n_resources);
  for (int i = 0; i < n_resources; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<int> lowers(n_resources, 0);
  for (int i = 0; i < n_lq; ++i) lowers[order[i]] = rng.between(1, uppers[order[i]]);

  std::vector<std::vector<int>> agent_prefs(n_agents);
  std::vector<std::vector<int>> resource_listers(n_resources);
  const int cap = std::min(max_list_len, n_resources);
  for (int a = 0; a < n_agents; ++a) {
    if (cap == 0) continue;
    int len = rng.between(1, cap);
    std::vector<int> pool(n_resources);
    for (int i = 0; i < n_resources; ++i) pool[i] = i;
    rng.shuffle(pool);
    pool.resize(len);
    agent_prefs[a] = pool;
    for (int b : pool) resource_listers[b].push_back(a);
  }
  for (auto& listers : resource_listers) rng.shuffle(listers);

  InstanceBuilder builder;
  for (int a = 0; a < n_agents; ++a) builder.add_agent("a" + std::to_string(a + 1));
  for (int b = 0; b < n_resources; ++b)
    builder.add_resource("b" + std::to_string(b + 1), lowers[b], uppers[b]);
  for (int a = 0; a < n_agents; ++a) builder.set_agent_prefs(a, agent_prefs[a]);
  for (int b = 0; b < n_resources; ++b) builder.set_resource_prefs(b, resource_listers[b]);
  return std::move(builder).build();
}

Instance random_feasible(int n_agents, int n_resources, int n_lq, int max_list_len, int max_upper,
                         std::uint64_t seed) {
  if (n_agents < 0 || n_resources < 0 || max_list_len < 0 || max_upper < 1)
    throw PreconditionError("invalid generator arguments");
  if (n_lq < 0 || n_lq > n_resources) throw PreconditionError("n_lq must be between 0 and n_resources");
  Rng rng(seed);
  constexpr int kMaxRetries = 1000;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    Instance inst = random_attempt(n_agents, n_resources, n_lq, max_list_len, max_upper, rng);
    if (feasibility_exists(inst)) return inst;
  }
  throw PreconditionError("retries exhausted: no feasible instance found for these parameters");
}

}  // namespace

Instance gen_random(int n_agents, int n_resources, int n_lq, int max_list_len, std::uint64_t seed) {
  return random_feasible(n_agents, n_resources, n_lq, max_list_len, 1, seed);
}

Instance gen_random_many_one(int n_agents, int n_resources, int n_lq, int max_list_len, int max_upper,
                             std::uint64_t seed) {
  return random_feasible(n_agents, n_resources, n_lq, max_list_len, max_upper, seed);
}

}  // namespace lqmatch
