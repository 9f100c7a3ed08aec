#include "lqmatch/instance.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <sstream>

#include "lqmatch/classic.hpp"

namespace lqmatch {

namespace {

bool within(int i, int n) { return i >= 0 && i < n; }

}  // namespace

// ---------------------------------------------------------------------------
// InstanceBuilder

int InstanceBuilder::add_agent(std::string id) {
  if (id.empty()) throw ValidationError("empty agent id");
  if (agent_index_.count(id)) throw ValidationError("duplicate agent id: " + id);
  int idx = static_cast<int>(agent_ids_.size());
  agent_index_.emplace(id, idx);
  agent_ids_.push_back(std::move(id));
  agent_prefs_.emplace_back();
  return idx;
}

int InstanceBuilder::add_resource(std::string id, int lower, int upper) {
  if (id.empty()) throw ValidationError("empty resource id");
  if (resource_index_.count(id)) throw ValidationError("duplicate resource id: " + id);
  if (upper < 1) throw ValidationError("quota violation for " + id + ": upper quota must be at least 1");
  if (lower < 0) throw ValidationError("quota violation for " + id + ": lower quota must be non-negative");
  if (lower > upper) throw ValidationError("quota violation for " + id + ": lower quota exceeds upper quota");
  int idx = static_cast<int>(resource_ids_.size());
  resource_index_.emplace(id, idx);
  resource_ids_.push_back(std::move(id));
  quotas_.push_back(Quota{lower, upper});
  resource_prefs_.emplace_back();
  return idx;
}

void InstanceBuilder::set_agent_prefs(int agent, std::vector<int> resources) {
  if (!within(agent, static_cast<int>(agent_ids_.size()))) throw ValidationError("agent index out of range");
  agent_prefs_[agent] = std::move(resources);
}

void InstanceBuilder::set_resource_prefs(int resource, std::vector<int> agents) {
  if (!within(resource, static_cast<int>(resource_ids_.size()))) throw ValidationError("resource index out of range");
  resource_prefs_[resource] = std::move(agents);
}

Instance InstanceBuilder::build() && {
  Instance inst;
  inst.agent_ids_ = std::move(agent_ids_);
  inst.resource_ids_ = std::move(resource_ids_);
  inst.quotas_ = std::move(quotas_);
  inst.agent_prefs_ = std::move(agent_prefs_);
  inst.resource_prefs_ = std::move(resource_prefs_);
  inst.agent_index_ = std::move(agent_index_);
  inst.resource_index_ = std::move(resource_index_);

  const int na = inst.num_agents();
  const int nb = inst.num_resources();
  inst.agent_rank_.assign(static_cast<size_t>(na) * nb, 0);
  inst.resource_rank_.assign(static_cast<size_t>(nb) * na, 0);

  for (int a = 0; a < na; ++a) {
    int rank = 0;
    for (int b : inst.agent_prefs_[a]) {
      if (!within(b, nb)) throw ValidationError("preference entry out of range for agent " + inst.agent_ids_[a]);
      int& slot = inst.agent_rank_[static_cast<size_t>(a) * nb + b];
      if (slot != 0)
        throw ValidationError("duplicate preference entry " + inst.resource_ids_[b] + " for agent " +
                              inst.agent_ids_[a]);
      slot = ++rank;
    }
    inst.num_edges_ += rank;
  }
  for (int b = 0; b < nb; ++b) {
    int rank = 0;
    for (int a : inst.resource_prefs_[b]) {
      if (!within(a, na)) throw ValidationError("preference entry out of range for resource " + inst.resource_ids_[b]);
      int& slot = inst.resource_rank_[static_cast<size_t>(b) * na + a];
      if (slot != 0)
        throw ValidationError("duplicate preference entry " + inst.agent_ids_[a] + " for resource " +
                              inst.resource_ids_[b]);
      slot = ++rank;
    }
  }

  // Mutual acceptability: the two sides must list exactly the same edges.
  for (int a = 0; a < na; ++a)
    for (int b : inst.agent_prefs_[a])
      if (inst.resource_rank(b, a) == 0)
        throw ValidationError("asymmetric edge: agent " + inst.agent_ids_[a] + " lists " + inst.resource_ids_[b] +
                              " but not vice versa");
  for (int b = 0; b < nb; ++b)
    for (int a : inst.resource_prefs_[b])
      if (inst.agent_rank(a, b) == 0)
        throw ValidationError("asymmetric edge: resource " + inst.resource_ids_[b] + " lists " + inst.agent_ids_[a] +
                              " but not vice versa");

  inst.one_one_ = true;
  for (int b = 0; b < nb; ++b) {
    if (inst.quotas_[b].upper != 1) inst.one_one_ = false;
    if (inst.quotas_[b].lower > 0) inst.lq_resources_.push_back(b);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Instance

std::optional<int> Instance::agent_index(std::string_view id) const {
  auto it = agent_index_.find(std::string(id));
  if (it == agent_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Instance::resource_index(std::string_view id) const {
  auto it = resource_index_.find(std::string(id));
  if (it == resource_index_.end()) return std::nullopt;
  return it->second;
}

bool Instance::agent_prefers(int a, int b1, int b2) const {
  int r1 = b1 == kUnmatched ? 0 : agent_rank(a, b1);
  int r2 = b2 == kUnmatched ? 0 : agent_rank(a, b2);
  if (r1 == 0) return false;             // unmatched or unacceptable never wins
  if (r2 == 0) return true;              // anything acceptable beats unmatched
  return r1 < r2;
}

bool Instance::resource_prefers(int b, int a1, int a2) const {
  int r1 = a1 == kUnmatched ? 0 : resource_rank(b, a1);
  int r2 = a2 == kUnmatched ? 0 : resource_rank(b, a2);
  if (r1 == 0) return false;
  if (r2 == 0) return true;
  return r1 < r2;
}

bool Instance::operator==(const Instance& other) const {
  return agent_ids_ == other.agent_ids_ && resource_ids_ == other.resource_ids_ && quotas_ == other.quotas_ &&
         agent_prefs_ == other.agent_prefs_ && resource_prefs_ == other.resource_prefs_;
}

// ---------------------------------------------------------------------------
// Matching

Matching::Matching(int num_agents, int num_resources)
    : agent_match_(num_agents, kUnmatched), resource_match_(num_resources) {}

Matching Matching::empty_for(const Instance& inst) { return Matching(inst.num_agents(), inst.num_resources()); }

void Matching::add(int agent, int resource) {
  if (agent_match_[agent] != kUnmatched)
    throw ValidationError("agent " + std::to_string(agent) + " already matched");
  agent_match_[agent] = resource;
  auto& v = resource_match_[resource];
  v.insert(std::lower_bound(v.begin(), v.end(), agent), agent);
  ++size_;
}

void Matching::remove(int agent, int resource) {
  if (agent_match_[agent] != resource) throw ValidationError("edge not present in matching");
  agent_match_[agent] = kUnmatched;
  auto& v = resource_match_[resource];
  v.erase(std::find(v.begin(), v.end(), agent));
  --size_;
}

int Matching::resource_match_one(int resource) const {
  const auto& v = resource_match_[resource];
  if (v.empty()) return kUnmatched;
  if (v.size() > 1) throw ValidationError("resource has multiple assignees");
  return v.front();
}

std::vector<std::pair<int, int>> Matching::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(size_);
  for (int a = 0; a < num_agents(); ++a)
    if (agent_match_[a] != kUnmatched) out.emplace_back(a, agent_match_[a]);
  return out;
}

bool Matching::operator==(const Matching& other) const {
  return agent_match_ == other.agent_match_ && resource_match_ == other.resource_match_;
}

void validate_matching(const Instance& inst, const Matching& m) {
  if (m.num_agents() != inst.num_agents() || m.num_resources() != inst.num_resources())
    throw ValidationError("matching sized for a different instance");
  for (int a = 0; a < inst.num_agents(); ++a) {
    int b = m.agent_match(a);
    if (b == kUnmatched) continue;
    if (b < 0 || b >= inst.num_resources() || !inst.is_edge(a, b))
      throw ValidationError("matching uses edge (" + inst.agent_id(a) + ", " +
                            (b >= 0 && b < inst.num_resources() ? inst.resource_id(b) : std::to_string(b)) +
                            ") not in the instance");
  }
  for (int b = 0; b < inst.num_resources(); ++b)
    if (static_cast<int>(m.resource_matches(b).size()) > inst.upper(b))
      throw ValidationError("resource " + inst.resource_id(b) + " exceeds its upper quota");
}

// ---------------------------------------------------------------------------
// Canonical text format

namespace {

struct Token {
  std::string text;
  int line;
  int col;
};

struct Line {
  std::string text;
  int number;
};

std::vector<Line> logical_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    ++number;
    std::string line(raw);
    if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) line.pop_back();
    if (!line.empty()) out.push_back({std::move(line), number});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

class LineScanner {
public:
  LineScanner(const std::string& text, int line) : text_(text), line_(line) {}

  void skip_spaces() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_spaces();
    return pos_ >= text_.size();
  }

  int col() const { return static_cast<int>(pos_) + 1; }
  int line() const { return line_; }

  // A run of characters excluding whitespace and the given stop characters.
  Token word(std::string_view stops = "") {
    skip_spaces();
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' &&
           stops.find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    if (pos_ == start) throw ParseError(line_, col(), "expected identifier");
    return Token{text_.substr(start, pos_ - start), line_, static_cast<int>(start) + 1};
  }

  void expect(char c, const std::string& what) {
    skip_spaces();
    if (pos_ >= text_.size() || text_[pos_] != c) throw ParseError(line_, col(), "expected '" + std::string(1, c) + "' " + what);
    ++pos_;
  }

  int integer(const std::string& what) {
    skip_spaces();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError(line_, col(), "expected " + what);
    long v = 0;
    for (size_t i = start; i < pos_; ++i) {
      v = v * 10 + (text_[i] - '0');
      if (v > 1'000'000'000) throw ParseError(line_, static_cast<int>(start) + 1, what + " out of range");
    }
    return static_cast<int>(v);
  }

private:
  const std::string& text_;
  int line_;
  size_t pos_ = 0;
};

}  // namespace

Instance parse_instance(std::string_view text) {
  const auto lines = logical_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing '@lqmatch v1' header");
  if (lines[0].text != "@lqmatch v1")
    throw ParseError(lines[0].number, 1, "expected '@lqmatch v1' header");

  struct PendingPrefs {
    int vertex;
    std::vector<Token> entries;
  };
  InstanceBuilder builder;
  std::unordered_map<std::string, int> agent_idx, resource_idx;
  std::vector<PendingPrefs> agent_lists, resource_lists;

  for (size_t i = 1; i < lines.size(); ++i) {
    LineScanner sc(lines[i].text, lines[i].number);
    Token kw = sc.word(":");
    if (kw.text == "agent") {
      Token id = sc.word(":");
      sc.expect(':', "after agent id");
      PendingPrefs p;
      try {
        p.vertex = builder.add_agent(id.text);
      } catch (const ValidationError& e) {
        throw ParseError(id.line, id.col, e.what());
      }
      agent_idx.emplace(id.text, p.vertex);
      while (!sc.at_end()) p.entries.push_back(sc.word(":"));
      agent_lists.push_back(std::move(p));
    } else if (kw.text == "resource") {
      Token id = sc.word(":[");
      sc.expect('[', "before quota");
      int col_quota = sc.col() - 1;
      int lower = sc.integer("lower quota");
      sc.expect(',', "between quotas");
      int upper = sc.integer("upper quota");
      sc.expect(']', "after quota");
      sc.expect(':', "after quota");
      PendingPrefs p;
      try {
        p.vertex = builder.add_resource(id.text, lower, upper);
      } catch (const ValidationError& e) {
        std::string msg = e.what();
        bool quota = msg.find("quota") != std::string::npos;
        throw ParseError(lines[i].number, quota ? col_quota : id.col, msg);
      }
      resource_idx.emplace(id.text, p.vertex);
      while (!sc.at_end()) p.entries.push_back(sc.word(":"));
      resource_lists.push_back(std::move(p));
    } else {
      throw ParseError(kw.line, kw.col, "expected 'agent' or 'resource', got '" + kw.text + "'");
    }
  }

  // Ids may be referenced before their own line; resolve in a second pass.
  auto resolve = [](const std::unordered_map<std::string, int>& idx, const Token& tok, const char* side) {
    auto it = idx.find(tok.text);
    if (it == idx.end()) throw ParseError(tok.line, tok.col, std::string("unknown ") + side + " id: " + tok.text);
    return it->second;
  };
  for (const auto& p : agent_lists) {
    std::vector<int> prefs;
    prefs.reserve(p.entries.size());
    for (const auto& tok : p.entries) prefs.push_back(resolve(resource_idx, tok, "resource"));
    builder.set_agent_prefs(p.vertex, std::move(prefs));
  }
  for (const auto& p : resource_lists) {
    std::vector<int> prefs;
    prefs.reserve(p.entries.size());
    for (const auto& tok : p.entries) prefs.push_back(resolve(agent_idx, tok, "agent"));
    builder.set_resource_prefs(p.vertex, std::move(prefs));
  }

  return std::move(builder).build();
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "@lqmatch v1\n";
  for (int a = 0; a < inst.num_agents(); ++a) {
    out << "agent " << inst.agent_id(a) << ":";
    for (int b : inst.agent_prefs(a)) out << " " << inst.resource_id(b);
    out << "\n";
  }
  for (int b = 0; b < inst.num_resources(); ++b) {
    out << "resource " << inst.resource_id(b) << " [" << inst.lower(b) << "," << inst.upper(b) << "]:";
    for (int a : inst.resource_prefs(b)) out << " " << inst.agent_id(a);
    out << "\n";
  }
  return out.str();
}

Matching parse_matching(const Instance& inst, std::string_view text) {
  Matching m = Matching::empty_for(inst);
  for (const auto& line : logical_lines(text)) {
    LineScanner sc(line.text, line.number);
    Token agent = sc.word();
    Token resource = sc.word();
    if (!sc.at_end()) throw ParseError(line.number, sc.col(), "expected end of line");
    auto a = inst.agent_index(agent.text);
    if (!a) throw ParseError(agent.line, agent.col, "unknown agent id: " + agent.text);
    auto b = inst.resource_index(resource.text);
    if (!b) throw ParseError(resource.line, resource.col, "unknown resource id: " + resource.text);
    if (m.agent_matched(*a)) throw ParseError(agent.line, agent.col, "agent " + agent.text + " listed twice");
    m.add(*a, *b);
  }
  validate_matching(inst, m);
  return m;
}

std::string serialize_matching(const Instance& inst, const Matching& m) {
  std::ostringstream out;
  for (auto [a, b] : m.edges()) out << inst.agent_id(a) << " " << inst.resource_id(b) << "\n";
  return out.str();
}

Matching translate_matching(const Matching& m, const Instance& from, const Instance& to) {
  Matching out = Matching::empty_for(to);
  for (auto [a, b] : m.edges()) {
    auto ta = to.agent_index(from.agent_id(a));
    auto tb = to.resource_index(from.resource_id(b));
    if (!ta || !tb || !to.is_edge(*ta, *tb))
      throw ValidationError("edge (" + from.agent_id(a) + ", " + from.resource_id(b) +
                            ") does not exist in the target instance");
    out.add(*ta, *tb);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cloning

CloneResult clone_to_one_one(const Instance& inst) {
  CloneResult result;
  result.copies.resize(inst.num_resources());

  InstanceBuilder builder;
  for (int a = 0; a < inst.num_agents(); ++a) builder.add_agent(inst.agent_id(a));

  std::vector<std::vector<int>> copy_indices(inst.num_resources());
  for (int b = 0; b < inst.num_resources(); ++b) {
    const int up = inst.upper(b);
    const int low = inst.lower(b);
    if (up == 1) {
      // Unit resources keep their identity so one-one inputs are fixed points.
      int idx = builder.add_resource(inst.resource_id(b), low, 1);
      copy_indices[b].push_back(idx);
      result.copies[b].push_back(inst.resource_id(b));
    } else {
      for (int c = 1; c <= up; ++c) {
        std::string id = inst.resource_id(b) + "(" + std::to_string(c) + ")";
        int idx = builder.add_resource(id, c <= low ? 1 : 0, 1);
        copy_indices[b].push_back(idx);
        result.copies[b].push_back(std::move(id));
      }
    }
  }

  for (int a = 0; a < inst.num_agents(); ++a) {
    std::vector<int> prefs;
    for (int b : inst.agent_prefs(a))
      for (int idx : copy_indices[b]) prefs.push_back(idx);
    builder.set_agent_prefs(a, std::move(prefs));
  }
  for (int b = 0; b < inst.num_resources(); ++b)
    for (int idx : copy_indices[b]) builder.set_resource_prefs(idx, inst.resource_prefs(b));

  result.instance = std::move(builder).build();
  return result;
}

// ---------------------------------------------------------------------------
// Parameters

ParamProfile compute_params(const Instance& inst) {
  ParamProfile p;
  p.q = static_cast<int>(inst.lq_resources().size());
  for (int b : inst.lq_resources()) p.ell_lq = std::max(p.ell_lq, static_cast<int>(inst.resource_prefs(b).size()));

  std::vector<char> in_a_bar(inst.num_agents(), 0);
  for (int b : inst.lq_resources())
    for (int a : inst.resource_prefs(b)) in_a_bar[a] = 1;
  for (char c : in_a_bar) p.a_bar += c;

  Deficiency def = deficiency(inst);
  p.d = def.d;
  p.n_d = def.n_d;
  p.s = stable_agent_optimal(inst).size();

  // t: per agent, a bitset over non-LQ resources in its list; take the
  // maximum intersection size over unordered pairs.
  const int nb = inst.num_resources();
  const int words = (nb + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(inst.num_agents(), std::vector<std::uint64_t>(words, 0));
  for (int a = 0; a < inst.num_agents(); ++a)
    for (int b : inst.agent_prefs(a))
      if (!inst.is_lq(b)) bits[a][b / 64] |= std::uint64_t{1} << (b % 64);
  for (int a1 = 0; a1 < inst.num_agents(); ++a1)
    for (int a2 = a1 + 1; a2 < inst.num_agents(); ++a2) {
      int common = 0;
      for (int w = 0; w < words; ++w) common += std::popcount(bits[a1][w] & bits[a2][w]);
      p.t = std::max(p.t, common);
    }
  return p;
}

// ---------------------------------------------------------------------------
// Subinstance

SubInstance make_subinstance(const Instance& inst, const std::function<bool(int, int)>& keep_edge,
                             const std::function<Quota(int)>& quota_override) {
  const int na = inst.num_agents();
  const int nb = inst.num_resources();
  std::vector<char> agent_alive(na, 0), resource_alive(nb, 0);
  for (int a = 0; a < na; ++a)
    for (int b : inst.agent_prefs(a))
      if (keep_edge(a, b)) agent_alive[a] = resource_alive[b] = 1;

  SubInstance sub;
  InstanceBuilder builder;
  std::vector<int> agent_new(na, -1), resource_new(nb, -1);
  for (int a = 0; a < na; ++a)
    if (agent_alive[a]) {
      agent_new[a] = builder.add_agent(inst.agent_id(a));
      sub.agent_to_orig.push_back(a);
    }
  for (int b = 0; b < nb; ++b)
    if (resource_alive[b]) {
      Quota q = quota_override ? quota_override(b) : inst.quota(b);
      resource_new[b] = builder.add_resource(inst.resource_id(b), q.lower, q.upper);
      sub.resource_to_orig.push_back(b);
    }

  for (int a = 0; a < na; ++a) {
    if (!agent_alive[a]) continue;
    std::vector<int> prefs;
    for (int b : inst.agent_prefs(a))
      if (keep_edge(a, b)) prefs.push_back(resource_new[b]);
    builder.set_agent_prefs(agent_new[a], std::move(prefs));
  }
  for (int b = 0; b < nb; ++b) {
    if (!resource_alive[b]) continue;
    std::vector<int> prefs;
    for (int a : inst.resource_prefs(b))
      if (keep_edge(a, b)) prefs.push_back(agent_new[a]);
    builder.set_resource_prefs(resource_new[b], std::move(prefs));
  }

  sub.instance = std::move(builder).build();
  return sub;
}

}  // namespace lqmatch
