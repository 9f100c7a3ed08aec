#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "lqmatch/gen.hpp"
#include "lqmatch/instance.hpp"
#include "test_helpers.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
namespace th = lqmatch::testing;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(LQMATCH_BIN_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class TempDir {
public:
  TempDir() {
    dir_ = fs::temp_directory_path() / ("lqmatch_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

private:
  fs::path dir_;
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("solve-efm verdicts and exit codes") {
  TempDir tmp;
  std::string base = tmp.file("base.lq", th::kFig1Text);

  RunResult ok = run_cli("solve-efm " + base);
  CHECK(ok.exit_code == 0);
  CHECK(contains(ok.out, "size=1"));
  CHECK(contains(ok.out, "a1 b2"));
  CHECK(contains(ok.out, "assignments_enumerated=1"));

  std::string bothlq = tmp.file("bothlq.lq", serialize_instance(lqmatch::gen_fig1(lqmatch::Fig1Variant::BothLq)));
  RunResult none = run_cli("solve-rsm " + bothlq);
  CHECK(none.exit_code == 0);
  CHECK(contains(none.out, "size=2"));
  RunResult efm_none = run_cli("solve-efm " + bothlq);
  CHECK(efm_none.exit_code == 2);
  CHECK(contains(efm_none.out, "NONE"));
}

TEST_CASE("json output is stable modulo elapsed_ms") {
  TempDir tmp;
  std::string base = tmp.file("base.lq", th::kFig1Text);
  RunResult first = run_cli("solve-efm --json " + base);
  RunResult second = run_cli("solve-efm --json " + base);
  REQUIRE(first.exit_code == 0);

  json a = json::parse(first.out);
  json b = json::parse(second.out);
  CHECK(a["command"] == "solve-efm");
  CHECK(a["verdict"] == "ok");
  CHECK(a["size"] == 1);
  CHECK(a["matching"] == json::array({{"a1", "b2"}}));
  CHECK(a["stats"]["assignments_enumerated"] == 1);
  CHECK(a["stats"].contains("elapsed_ms"));
  a["stats"].erase("elapsed_ms");
  b["stats"].erase("elapsed_ms");
  CHECK(a == b);
}

TEST_CASE("params and check subcommands") {
  TempDir tmp;
  std::string base = tmp.file("base.lq", th::kFig1Text);
  RunResult params = run_cli("params " + base);
  CHECK(params.exit_code == 0);
  CHECK(params.out == "q=1\nell_lq=1\nd=1\nn_d=1\na_bar=1\nt=1\ns=1\n");

  std::string m1 = tmp.file("m1.txt", "a1 b2\n");
  RunResult check = run_cli("check " + base + " --matching " + m1);
  CHECK(check.exit_code == 0);
  CHECK(contains(check.out, "feasible=yes"));
  CHECK(contains(check.out, "stable=no"));
  CHECK(contains(check.out, "envy_free=yes"));
  CHECK(contains(check.out, "relaxed_stable=no"));
  CHECK(contains(check.out, "blocking_pairs=2"));

  RunResult check_json = run_cli("check --json " + base + " --matching " + m1);
  json j = json::parse(check_json.out);
  CHECK(j["verdict"]["feasible"] == true);
  CHECK(j["violations"]["blocking_pairs"] == json::array({{"a1", "b1"}, {"a2", "b1"}}));
}

TEST_CASE("generators emit canonical instances") {
  TempDir tmp;
  RunResult fig1 = run_cli("gen fig1 --variant base");
  CHECK(fig1.exit_code == 0);
  CHECK(fig1.out == th::kFig1Text);

  RunResult r1 = run_cli("gen random --agents 4 --resources 4 --lq 1 --maxlen 3 --seed 9");
  RunResult r2 = run_cli("gen random --agents 4 --resources 4 --lq 1 --maxlen 3 --seed 9");
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(lqmatch::parse_instance(r1.out).num_agents() == 4);

  std::string graph = tmp.file("k3.graph", "3 3\n1 2\n1 3\n2 3\n");
  RunResult indset = run_cli("gen indset " + graph + " --k 1");
  CHECK(indset.exit_code == 0);
  lqmatch::Instance reduced = lqmatch::parse_instance(indset.out);
  CHECK(reduced.num_agents() == 6);
  CHECK(reduced.num_resources() == 10);
}

TEST_CASE("oracle and extend subcommands") {
  TempDir tmp;
  std::string bothlq = tmp.file("bothlq.lq", serialize_instance(lqmatch::gen_fig1(lqmatch::Fig1Variant::BothLq)));
  RunResult none = run_cli("oracle " + bothlq + " --efm");
  CHECK(none.exit_code == 2);
  RunResult rsm = run_cli("oracle " + bothlq + " --rsm");
  CHECK(rsm.exit_code == 0);
  CHECK(contains(rsm.out, "size=2"));

  std::string base = tmp.file("base.lq", th::kFig1Text);
  std::string m1 = tmp.file("m1.txt", "a1 b2\n");
  RunResult extended = run_cli("extend " + base + " --matching " + m1);
  CHECK(extended.exit_code == 0);
  CHECK(contains(extended.out, "size=1"));
}

TEST_CASE("clone emits instance and map") {
  TempDir tmp;
  std::string many = tmp.file("many.lq",
                              "@lqmatch v1\n"
                              "agent a1: b\n"
                              "agent a2: b\n"
                              "resource b [1,2]: a1 a2\n");
  std::string map_path = tmp.path("map.txt");
  RunResult cloned = run_cli("clone " + many + " --map " + map_path);
  CHECK(cloned.exit_code == 0);
  lqmatch::Instance one_one = lqmatch::parse_instance(cloned.out);
  CHECK(one_one.is_one_one());
  CHECK(one_one.num_resources() == 2);
  std::ifstream map_in(map_path);
  std::string map_line;
  std::getline(map_in, map_line);
  CHECK(map_line == "b b(1) b(2)");
}

TEST_CASE("kernel subcommands write reduced instances") {
  TempDir tmp;
  std::string base = tmp.file("base.lq", th::kFig1Text);
  std::string out = tmp.path("kernel.lq");
  std::string marks = tmp.path("marks.txt");

  RunResult kr = run_cli("kernel-efm " + base + " --k 1 --out " + out + " --marks " + marks);
  CHECK(kr.exit_code == 0);
  CHECK(contains(kr.out, "verdict=kernel"));
  CHECK(contains(kr.out, "edges=3"));
  lqmatch::Instance reduced = lqmatch::parse_instance(th::kFig1Text);
  std::ifstream out_in(out);
  std::string out_text(std::istreambuf_iterator<char>(out_in), std::istreambuf_iterator<char>{});
  CHECK(lqmatch::parse_instance(out_text) == reduced);
  std::ifstream marks_in(marks);
  std::string marks_text(std::istreambuf_iterator<char>(marks_in), std::istreambuf_iterator<char>{});
  CHECK(contains(marks_text, "a1 b2 step1"));
  CHECK(contains(marks_text, "a1 b1 step2"));

  std::string b1lq = tmp.file("b1lq.lq", serialize_instance(lqmatch::gen_fig1(lqmatch::Fig1Variant::B1Lq)));
  RunResult yes = run_cli("kernel-rsm " + b1lq + " --k 1 --out " + tmp.path("unused.lq"));
  CHECK(yes.exit_code == 0);
  CHECK(contains(yes.out, "verdict=trivial-yes"));
  RunResult no = run_cli("kernel-rsm " + b1lq + " --k 3 --out " + tmp.path("unused2.lq"));
  CHECK(no.exit_code == 2);
  CHECK(contains(no.out, "verdict=trivial-no"));
}

TEST_CASE("input and usage errors exit with 4, budget with 3") {
  TempDir tmp;
  CHECK(run_cli("solve-efm /nonexistent/file.lq").exit_code == 4);
  CHECK(run_cli("frobnicate").exit_code == 4);
  CHECK(run_cli("solve-efm").exit_code == 4);

  std::string bad = tmp.file("bad.lq", "@lqmatch v1\nagent a1: zz\n");
  CHECK(run_cli("params " + bad).exit_code == 4);

  // Two LQ resources with two candidates each: two injective assignments.
  std::string two = tmp.file("two.lq",
                             "@lqmatch v1\n"
                             "agent a1: b1 b2\n"
                             "agent a2: b1 b2\n"
                             "resource b1 [1,1]: a1 a2\n"
                             "resource b2 [1,1]: a1 a2\n");
  CHECK(run_cli("solve-rsm " + two + " --budget 1").exit_code == 3);
  CHECK(run_cli("solve-rsm " + two + " --budget 2").exit_code == 0);
}
