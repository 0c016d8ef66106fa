#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("EGOLINK_CLI_PATH");
  REQUIRE_MESSAGE(env != nullptr, "EGOLINK_CLI_PATH is not set");
  return env;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "egolink_test_cli";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > " + (work_dir() / "stdout.txt").string() +
                          " 2> " + (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("generate, sample, predict, evaluate") {
  const fs::path d = work_dir();
  REQUIRE(run("generate --family sbm --nodes 120 --degree 20 --seed 3 --out " + q(d / "g.edges") +
              " --out-prob " + q(d / "p.csv")) == 0);
  REQUIRE(run("describe --graph " + q(d / "g.edges")) == 0);
  CHECK(slurp(d / "stdout.txt").find("nodes") != std::string::npos);

  REQUIRE(run("sample --graph " + q(d / "g.edges") + " --rho 0.25 --seed 4 --out " + q(d / "s.json")) == 0);
  CHECK(slurp(d / "s.json").find("egolink-ego-sample") != std::string::npos);

  for (const char* method : {"se", "cur", "usvt", "mc", "ns"}) {
    CAPTURE(method);
    const fs::path scores = d / (std::string(method) + ".csv");
    REQUIRE(run("predict --sample " + q(d / "s.json") + " --method " + method + " --rank 5 --out " +
                q(scores)) == 0);
    REQUIRE(run("evaluate --scores " + q(scores) + " --sample " + q(d / "s.json") + " --truth " +
                q(d / "g.edges") + " --prob " + q(d / "p.csv") + " --out " + q(d / "eval.csv")) == 0);
    const std::string eval = slurp(d / "eval.csv");
    CHECK(eval.find("auc") != std::string::npos);
    CHECK(eval.find("kendall_tau") != std::string::npos);
  }
  CHECK(run("predict --sample " + q(d / "s.json") + " --method se --rank auto --holdouts 5 --out " +
            q(d / "auto.csv")) == 0);
}

TEST_CASE("experiment and summarize") {
  const fs::path d = work_dir();
  write_file(d / "spec.json", R"({
    "model": {"family": "product", "n_nodes": 80},
    "sampling": {"rho": [0.2]},
    "degree_grid": [15],
    "methods": ["se", "cur"],
    "replications": 3,
    "base_seed": 11,
    "rank_policy": 5
  })");
  REQUIRE(run("experiment --spec " + q(d / "spec.json") + " --out " + q(d / "r1.csv")) == 0);
  REQUIRE(run("experiment --spec " + q(d / "spec.json") + " --workers 3 --out " + q(d / "r2.csv")) == 0);
  const std::string r1 = slurp(d / "r1.csv");
  CHECK(r1 == slurp(d / "r2.csv"));
  CHECK(r1.rfind("model,method,rho,degree,replication,seed,auc,kendall_tau,selected_rank,wall_time_ms", 0) == 0);

  REQUIRE(run("experiment --spec " + q(d / "spec.json") + " --seed 12 --out " + q(d / "r3.csv")) == 0);
  CHECK(r1 != slurp(d / "r3.csv"));

  REQUIRE(run("summarize --in " + q(d / "r1.csv") + " --out " + q(d / "sum.csv")) == 0);
  CHECK(slurp(d / "sum.csv").rfind("model,method,rho,degree,metric,count,mean,se", 0) == 0);
}

TEST_CASE("exit codes") {
  const fs::path d = work_dir();
  write_file(d / "bad_spec.json", R"({"model": {"family": "sbm"}, "methods": ["se"]})");
  CHECK(run("experiment --spec " + q(d / "bad_spec.json")) == 2);
  CHECK(run("experiment --spec " + q(d / "no_such_spec.json")) == 2);
  CHECK(run("experiment --spec " + q(d / "bad_spec.json") + " --format parquet") == 2);

  write_file(d / "bad.edges", "a b\nc\n");
  CHECK(run("describe --graph " + q(d / "bad.edges")) == 3);
  CHECK(slurp(d / "stderr.txt").find("2") != std::string::npos);
  CHECK(run("describe --graph " + q(d / "missing.edges")) == 3);

  write_file(d / "ds_spec.json", R"({"dataset": "missing.edges", "sampling": {"rho": [0.2]},
                                     "methods": ["se"], "replications": 1})");
  CHECK(run("experiment --spec " + q(d / "ds_spec.json")) == 3);
  CHECK(run("predict --sample " + q(d / "s.json") + " --method svd") == 2);
}
