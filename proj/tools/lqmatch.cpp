// lqmatch: matchings under two-sided preferences with lower quotas.
//
// Subcommands: check, params, solve-efm, solve-rsm, kernel-efm, kernel-rsm,
// extend, oracle, gen, clone. Exit codes: 0 success, 2 no solution,
// 3 enumeration budget exceeded, 4 input or usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lqmatch/classic.hpp"
#include "lqmatch/fpt.hpp"
#include "lqmatch/gen.hpp"
#include "lqmatch/instance.hpp"
#include "lqmatch/kernel.hpp"
#include "lqmatch/optimality.hpp"
#include "lqmatch/oracle.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace lqmatch;

constexpr int kExitOk = 0;
constexpr int kExitNone = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInput = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

json matching_json(const Instance& inst, const Matching& m) {
  json arr = json::array();
  for (auto [a, b] : m.edges()) arr.push_back({inst.agent_id(a), inst.resource_id(b)});
  return arr;
}

void print_matching(const Instance& inst, const Matching& m) {
  for (auto [a, b] : m.edges()) std::cout << inst.agent_id(a) << " " << inst.resource_id(b) << "\n";
}

struct Report {
  bool json_mode = false;
  json body;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  explicit Report(const std::string& command) { body["command"] = command; }

  void emit(std::uint64_t assignments = 0) {
    if (!json_mode) return;
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    body["stats"] = {{"assignments_enumerated", assignments}, {"elapsed_ms", elapsed.count()}};
    std::cout << body.dump() << "\n";
  }
};

int default_threads() {
  if (const char* env = std::getenv("LQMATCH_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

// ---------------------------------------------------------------------------

int run_check(const std::string& instance_path, const std::string& matching_path, Report& report) {
  Instance inst = load_instance(instance_path);
  Matching m = parse_matching(inst, read_file(matching_path));

  auto blocking = blocking_pairs(inst, m);
  auto envy = envy_pairs(inst, m);
  bool feasible = is_feasible(inst, m);
  bool relaxed = is_relaxed_stable(inst, m);

  if (report.json_mode) {
    report.body["verdict"] = {{"feasible", feasible},
                              {"stable", blocking.empty()},
                              {"envy_free", envy.empty()},
                              {"relaxed_stable", relaxed}};
    json bp = json::array(), ep = json::array();
    for (auto [a, b] : blocking) bp.push_back({inst.agent_id(a), inst.resource_id(b)});
    for (auto [a, a2] : envy) ep.push_back({inst.agent_id(a), inst.agent_id(a2)});
    report.body["violations"] = {{"blocking_pairs", bp}, {"envy_pairs", ep}};
    report.emit();
  } else {
    auto yesno = [](bool v) { return v ? "yes" : "no"; };
    std::cout << "feasible=" << yesno(feasible) << "\n";
    std::cout << "stable=" << yesno(blocking.empty()) << "\n";
    std::cout << "envy_free=" << yesno(envy.empty()) << "\n";
    std::cout << "relaxed_stable=" << yesno(relaxed) << "\n";
    std::cout << "blocking_pairs=" << blocking.size() << "\n";
    for (auto [a, b] : blocking) std::cout << inst.agent_id(a) << " " << inst.resource_id(b) << "\n";
    std::cout << "envy_pairs=" << envy.size() << "\n";
    for (auto [a, a2] : envy) std::cout << inst.agent_id(a) << " " << inst.agent_id(a2) << "\n";
  }
  return kExitOk;
}

int run_params(const std::string& instance_path, Report& report) {
  Instance inst = load_instance(instance_path);
  ParamProfile p = compute_params(inst);
  if (report.json_mode) {
    report.body["params"] = {{"q", p.q},     {"ell_lq", p.ell_lq}, {"d", p.d}, {"n_d", p.n_d},
                             {"a_bar", p.a_bar}, {"t", p.t},       {"s", p.s}};
    report.body["verdict"] = "ok";
    report.emit();
  } else {
    std::cout << "q=" << p.q << "\nell_lq=" << p.ell_lq << "\nd=" << p.d << "\nn_d=" << p.n_d
              << "\na_bar=" << p.a_bar << "\nt=" << p.t << "\ns=" << p.s << "\n";
  }
  return kExitOk;
}

int run_solve(const std::string& instance_path, bool efm, const SolveOptions& options, Report& report) {
  Instance inst = load_instance(instance_path);
  SolveResult result = efm ? alg_efm(inst, options) : alg_rsm(inst, options);

  if (report.json_mode) {
    report.body["verdict"] = result.matching ? "ok" : "none";
    if (result.matching) {
      report.body["size"] = result.matching->size();
      report.body["matching"] = matching_json(inst, *result.matching);
    }
    report.emit(result.stats.assignments_enumerated);
  } else {
    if (result.matching) {
      std::cout << "size=" << result.matching->size() << "\n";
      print_matching(inst, *result.matching);
    } else {
      std::cout << "NONE\n";
    }
    std::cout << "assignments_enumerated=" << result.stats.assignments_enumerated << "\n";
  }
  return result.matching ? kExitOk : kExitNone;
}

std::string marks_text(const Instance& inst, const KernelResult& kr) {
  std::ostringstream out;
  for (const auto& mark : kr.marks)
    out << inst.agent_id(mark.agent) << " " << inst.resource_id(mark.resource) << " " << to_string(mark.step) << "\n";
  return out.str();
}

int run_kernel(const std::string& instance_path, bool efm, std::optional<int> k, const std::string& out_path,
               const std::string& marks_path, Report& report) {
  Instance inst = load_instance(instance_path);
  KernelResult kr = efm ? efm_kernelize(inst, k) : rsm_kernelize(inst, *k);

  switch (kr.verdict) {
    case KernelVerdict::TrivialYes:
      if (report.json_mode) {
        report.body["verdict"] = "trivial-yes";
        report.body["size"] = kr.witness->size();
        report.body["matching"] = matching_json(inst, *kr.witness);
        report.emit();
      } else {
        std::cout << "verdict=trivial-yes\nsize=" << kr.witness->size() << "\n";
        print_matching(inst, *kr.witness);
      }
      return kExitOk;
    case KernelVerdict::TrivialNo:
      if (report.json_mode) {
        report.body["verdict"] = "trivial-no";
        report.body["reason"] = kr.reason;
        report.emit();
      } else {
        std::cout << "verdict=trivial-no\nreason=" << kr.reason << "\n";
      }
      return kExitNone;
    case KernelVerdict::Kernel: break;
  }

  if (!out_path.empty()) write_file(out_path, serialize_instance(*kr.reduced));
  if (!marks_path.empty()) write_file(marks_path, marks_text(inst, kr));
  if (report.json_mode) {
    report.body["verdict"] = "kernel";
    report.body["kernel_agents"] = kr.reduced->num_agents();
    report.body["kernel_resources"] = kr.reduced->num_resources();
    report.body["kernel_edges"] = kr.reduced->num_edges();
    report.emit();
  } else {
    std::cout << "verdict=kernel\nagents=" << kr.reduced->num_agents()
              << "\nresources=" << kr.reduced->num_resources() << "\nedges=" << kr.reduced->num_edges() << "\n";
  }
  return kExitOk;
}

int run_extend(const std::string& instance_path, const std::string& matching_path, Report& report) {
  Instance inst = load_instance(instance_path);
  Matching m = parse_matching(inst, read_file(matching_path));
  Matching extended = extend(inst, m);
  if (report.json_mode) {
    report.body["verdict"] = "ok";
    report.body["size"] = extended.size();
    report.body["matching"] = matching_json(inst, extended);
    report.emit();
  } else {
    std::cout << "size=" << extended.size() << "\n";
    print_matching(inst, extended);
  }
  return kExitOk;
}

int run_oracle(const std::string& instance_path, bool efm, int cap, Report& report) {
  Instance inst = load_instance(instance_path);
  OracleOptions options{cap};
  auto best = efm ? max_efm_bruteforce(inst, options) : max_rsm_bruteforce(inst, options);
  if (report.json_mode) {
    report.body["verdict"] = best ? "ok" : "none";
    if (best) {
      report.body["size"] = best->size();
      report.body["matching"] = matching_json(inst, *best);
    }
    report.emit();
  } else {
    if (best) {
      std::cout << "size=" << best->size() << "\n";
      print_matching(inst, *best);
    } else {
      std::cout << "NONE\n";
    }
  }
  return best ? kExitOk : kExitNone;
}

int emit_instance(const Instance& inst, const std::string& out_path, Report& report) {
  std::string text = serialize_instance(inst);
  if (!out_path.empty()) write_file(out_path, text);
  if (report.json_mode) {
    report.body["verdict"] = "ok";
    if (out_path.empty()) report.body["instance"] = text;
    report.emit();
  } else if (out_path.empty()) {
    std::cout << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchings under two-sided preferences with lower quotas"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  bool json_mode = false;
  app.add_flag("--json", json_mode, "emit a single JSON object on stdout");

  std::string instance_path, matching_path, out_path, marks_path, map_path, graph_path, variant;
  int k = 0, cap = 16, threads = default_threads();
  std::uint64_t budget = 0, seed = 0;
  int gen_agents = 0, gen_resources = 0, gen_lq = 0, gen_maxlen = 0, gen_max_upper = 1;

  auto* check = app.add_subcommand("check", "evaluate a matching against an instance");
  check->add_option("instance", instance_path)->required();
  check->add_option("--matching", matching_path)->required();

  auto* params = app.add_subcommand("params", "structural parameters of an instance");
  params->add_option("instance", instance_path)->required();

  auto add_solver = [&](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->add_option("instance", instance_path)->required();
    cmd->add_option("--threads", threads, "worker threads (default LQMATCH_THREADS or 1)");
    cmd->add_option("--budget", budget, "cap on enumerated assignments");
    return cmd;
  };
  auto* solve_efm = add_solver("solve-efm", "maximum feasible envy-free matching");
  auto* solve_rsm = add_solver("solve-rsm", "maximum feasible relaxed-stable matching");

  auto* kernel_efm = app.add_subcommand("kernel-efm", "kernelize for envy-freeness");
  kernel_efm->add_option("instance", instance_path)->required();
  auto* efm_k = kernel_efm->add_option("--k", k, "target matching size");
  kernel_efm->add_option("--out", out_path, "write the reduced instance here")->required();
  kernel_efm->add_option("--marks", marks_path, "write edge-mark provenance here");

  auto* kernel_rsm = app.add_subcommand("kernel-rsm", "kernelize for relaxed stability");
  kernel_rsm->add_option("instance", instance_path)->required();
  kernel_rsm->add_option("--k", k, "target matching size")->required();
  kernel_rsm->add_option("--out", out_path, "write the reduced instance here")->required();
  kernel_rsm->add_option("--marks", marks_path, "write edge-mark provenance here");

  auto* extend_cmd = app.add_subcommand("extend", "extend a minimal feasible matching");
  extend_cmd->add_option("instance", instance_path)->required();
  extend_cmd->add_option("--matching", matching_path)->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force maximum matching");
  oracle->add_option("instance", instance_path)->required();
  bool oracle_efm = false, oracle_rsm = false;
  oracle->add_flag("--efm", oracle_efm, "maximize feasible envy-free matchings");
  oracle->add_flag("--rsm", oracle_rsm, "maximize feasible relaxed-stable matchings");
  oracle->add_option("--cap", cap, "vertex-count cap (default 16)");

  auto* gen = app.add_subcommand("gen", "instance generators");
  gen->require_subcommand(1);
  auto* gen_fig1_cmd = gen->add_subcommand("fig1", "two-agent exemplar instance");
  gen_fig1_cmd->add_option("--variant", variant, "base | b1lq | bothlq")->required();
  gen_fig1_cmd->add_option("--out", out_path);
  auto* gen_indset = gen->add_subcommand("indset", "reduction from independent set");
  gen_indset->add_option("graph", graph_path, "graph file: 'n m' then edges")->required();
  gen_indset->add_option("--k", k, "independent-set size")->required();
  gen_indset->add_option("--out", out_path);
  auto* gen_random_cmd = gen->add_subcommand("random", "seeded random instance");
  gen_random_cmd->add_option("--agents", gen_agents)->required();
  gen_random_cmd->add_option("--resources", gen_resources)->required();
  gen_random_cmd->add_option("--lq", gen_lq)->required();
  gen_random_cmd->add_option("--maxlen", gen_maxlen)->required();
  gen_random_cmd->add_option("--seed", seed)->required();
  gen_random_cmd->add_option("--max-upper", gen_max_upper, "draw upper quotas from [1, U] (default 1)");
  gen_random_cmd->add_option("--out", out_path);

  auto* clone = app.add_subcommand("clone", "expand a many-one instance into unit copies");
  clone->add_option("instance", instance_path)->required();
  clone->add_option("--out", out_path);
  clone->add_option("--map", map_path, "write 'resource copy...' lines here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  auto* sub = app.get_subcommands().front();
  Report report(sub->get_name() == "gen" ? "gen " + gen->get_subcommands().front()->get_name() : sub->get_name());
  report.json_mode = json_mode;

  try {
    if (sub == check) return run_check(instance_path, matching_path, report);
    if (sub == params) return run_params(instance_path, report);
    if (sub == solve_efm || sub == solve_rsm) {
      SolveOptions options;
      options.threads = threads;
      if (budget > 0) options.budget = budget;
      return run_solve(instance_path, sub == solve_efm, options, report);
    }
    if (sub == kernel_efm)
      return run_kernel(instance_path, true, efm_k->count() ? std::optional<int>(k) : std::nullopt, out_path,
                        marks_path, report);
    if (sub == kernel_rsm) return run_kernel(instance_path, false, k, out_path, marks_path, report);
    if (sub == extend_cmd) return run_extend(instance_path, matching_path, report);
    if (sub == oracle) {
      if (oracle_efm == oracle_rsm) throw ValidationError("pass exactly one of --efm or --rsm");
      return run_oracle(instance_path, oracle_efm, cap, report);
    }
    if (sub == gen) {
      auto* mode = gen->get_subcommands().front();
      if (mode == gen_fig1_cmd) {
        Fig1Variant v;
        if (variant == "base") v = Fig1Variant::Base;
        else if (variant == "b1lq") v = Fig1Variant::B1Lq;
        else if (variant == "bothlq") v = Fig1Variant::BothLq;
        else throw ValidationError("unknown fig1 variant: " + variant);
        return emit_instance(gen_fig1(v), out_path, report);
      }
      if (mode == gen_indset)
        return emit_instance(gen_indset_reduction(parse_graph(read_file(graph_path)), k), out_path, report);
      return emit_instance(
          gen_random_many_one(gen_agents, gen_resources, gen_lq, gen_maxlen, gen_max_upper, seed), out_path, report);
    }
    if (sub == clone) {
      Instance inst = load_instance(instance_path);
      CloneResult cloned = clone_to_one_one(inst);
      if (!map_path.empty()) {
        std::ostringstream map_text;
        for (int b = 0; b < inst.num_resources(); ++b) {
          map_text << inst.resource_id(b);
          for (const auto& copy : cloned.copies[b]) map_text << " " << copy;
          map_text << "\n";
        }
        write_file(map_path, map_text.str());
      }
      return emit_instance(cloned.instance, out_path, report);
    }
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
