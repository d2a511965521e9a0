#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fuzzy_ettp/cli.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fuzzy_ettp;
namespace ft = fuzzy_ettp::testing;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("fuzzy_ettp_cli_" + std::string(info->name()) + "_" +
                                        std::to_string(static_cast<long>(::getpid())));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> argv) {
    out_.str("");
    err_.str("");
    return cli::run_cli(argv, {out_, err_});
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    cli::write_file(dir_ / name, text);
    return path(name);
  }
  static std::string slurp(const std::string& p) { return read_text_file(p); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const std::vector<std::string> kTinyGenerate = {
    "generate",          "--num-exams",   "2", "--num-courses", "2", "--num-events", "2", "--num-semesters", "1",
    "--num-teachers",    "4",             "--num-rooms", "2", "--num-days", "1", "--sessions-per-day", "2",
    "--students",        "10",            "--lab-fraction", "0"};

std::vector<std::string> with(std::vector<std::string> a, std::initializer_list<std::string> more) {
  a.insert(a.end(), more);
  return a;
}

/// Two exams sharing every student, one slot.
std::string clash_instance() {
  auto inst = ft::tiny_instance(1, {.exams = 2, .slots = 1, .rooms = 1, .students = 0, .cap_lo = 50, .cap_hi = 50});
  inst.registrations = RegistrationMatrix(2, {{0, 1}, {0, 1}});
  return dump_instance(inst);
}

}  // namespace

TEST_F(Cli, GenerateIsDeterministic) {
  ASSERT_EQ(run(with(kTinyGenerate, {"--out", path("a")})), cli::kOk) << err_.str();
  ASSERT_EQ(run(with(kTinyGenerate, {"--out", path("b")})), cli::kOk);
  const auto a = slurp(path("a/instance.json"));
  EXPECT_EQ(a, slurp(path("b/instance.json")));
  const auto inst = load_instance_json(a);
  EXPECT_EQ(inst.num_exams(), 2u);
  EXPECT_TRUE(validate(inst).empty());
  const auto man = json::parse(slurp(path("a/manifest.json")));
  EXPECT_EQ(man["command"], "generate");
  EXPECT_EQ(man["seed"], 1);
  EXPECT_EQ(man["artifacts"][0]["fnv1a"], hex64(fnv1a(a)));
}

TEST_F(Cli, SolveHeuristicAndExact) {
  ASSERT_EQ(run(with(kTinyGenerate, {"--out", path("gen")})), cli::kOk);
  const auto instance = path("gen/instance.json");
  EXPECT_EQ(run({"solve", "--instance", instance, "--out", path("h"), "--max-nodes", "500"}), cli::kOk) << err_.str();
  auto report = json::parse(slurp(path("h/report.json")));
  EXPECT_TRUE(report["feasible"].get<bool>());
  EXPECT_EQ(report["hard_violations"], 0);

  for (const char* model : {"1", "2", "3"}) {
    const auto out = path(std::string("x") + model);
    EXPECT_EQ(run({"solve", "--instance", instance, "--mode", "exact", "--model", model, "--out", out}), cli::kOk)
        << model << ": " << err_.str();
    report = json::parse(slurp(out + "/report.json"));
    EXPECT_EQ(report["solver"]["status"], "proved_optimal") << model;
    EXPECT_TRUE(report["feasible"].get<bool>()) << model;
    EXPECT_TRUE(fs::exists(out + "/timetable.json"));
  }
}

TEST_F(Cli, BadInputExitsOne) {
  EXPECT_EQ(run({"solve", "--instance", path("missing.json")}), cli::kBadInput);
  EXPECT_NE(err_.str().find("error"), std::string::npos);
  EXPECT_EQ(run({"solve", "--instance", write("bad.json", "{not json")}), cli::kBadInput);
  EXPECT_EQ(run({"solve", "--instance", write("empty.json", "{}")}), cli::kBadInput);
  EXPECT_EQ(run({"solve"}), cli::kBadInput);
  EXPECT_EQ(run({"solve", "--instance", "a", "--carter", "b"}), cli::kBadInput);
  EXPECT_EQ(run({"solve", "--instance", write("i.json", clash_instance()), "--model", "4"}), cli::kBadInput);
  EXPECT_EQ(run({"solve", "--instance", path("i.json"), "--ordering", "random"}), cli::kBadInput);
  EXPECT_EQ(run({"frobnicate"}), cli::kBadInput);
  EXPECT_EQ(run({}), cli::kBadInput);
  EXPECT_EQ(run({"generate", "--num-exams", "-3", "--out", path("g")}), cli::kBadInput);
  EXPECT_EQ(run({"solve", "--instance", path("i.json"), "--mode", "exact", "--max-nodes", "0"}), cli::kBadInput);
}

TEST_F(Cli, ExactModeRefusesLargeModels) {
  ASSERT_EQ(run({"generate", "--out", path("gen")}), cli::kOk);
  EXPECT_EQ(run({"solve", "--instance", path("gen/instance.json"), "--mode", "exact", "--model", "1", "--out", path("x")}), cli::kBadInput);
  EXPECT_NE(err_.str().find("--var-cap"), std::string::npos);
}

TEST_F(Cli, InfeasibleExitsTwo) {
  const auto instance = write("clash.json", clash_instance());
  EXPECT_EQ(run({"solve", "--instance", instance, "--mode", "exact", "--model", "1", "--out", path("x")}),
            cli::kInfeasible);
  EXPECT_EQ(json::parse(slurp(path("x/report.json")))["solver"]["status"], "infeasible");
  EXPECT_EQ(run({"solve", "--instance", instance, "--out", path("h")}), cli::kInfeasible);
  EXPECT_FALSE(json::parse(slurp(path("h/report.json")))["feasible"].get<bool>());
}

TEST_F(Cli, BudgetWithoutSolutionExitsThree) {
  // First enumerable case where a single node finds no incumbent.
  int found = -1;
  for (int s = 1; s <= 100 && found < 0; ++s) {
    const auto c = ft::exactness_case(s);
    const auto res = solve_exact(defuzzify_model(build_model(c.kind, c.instance)), {.max_nodes = 1});
    if (res.status == SolveStatus::BudgetExhausted) found = s;
  }
  ASSERT_GT(found, 0);
  const auto c = ft::exactness_case(found);
  const auto instance = write("c.json", dump_instance(c.instance));
  const auto model = std::to_string(static_cast<int>(c.kind));
  EXPECT_EQ(run({"solve", "--instance", instance, "--mode", "exact", "--model", model, "--max-nodes", "1", "--out",
                 path("x")}),
            cli::kBudget);
  EXPECT_EQ(json::parse(slurp(path("x/report.json")))["solver"]["status"], "budget_exhausted");
}

TEST_F(Cli, ReplayReproducesArtifacts) {
  ASSERT_EQ(run(with(kTinyGenerate, {"--seed", "4", "--out", path("gen")})), cli::kOk);
  ASSERT_EQ(run({"solve", "--instance", path("gen/instance.json"), "--max-nodes", "300", "--out", path("s")}),
            cli::kOk);
  EXPECT_EQ(run({"replay", path("s/manifest.json"), "--out", path("r")}), cli::kOk) << err_.str();
  EXPECT_EQ(slurp(path("s/timetable.json")), slurp(path("r/timetable.json")));
  EXPECT_EQ(slurp(path("s/report.json")), slurp(path("r/report.json")));
  EXPECT_EQ(run({"replay", path("gen/manifest.json"), "--out", path("g2")}), cli::kOk);
  EXPECT_EQ(slurp(path("gen/instance.json")), slurp(path("g2/instance.json")));
  EXPECT_EQ(run({"replay", path("nothing.json")}), cli::kBadInput);
}

TEST_F(Cli, BenchIsByteIdenticalAcrossRuns) {
  fs::create_directories(dir_ / "data");
  for (std::uint64_t seed : {3, 4}) {
    auto inst = ft::tiny_instance(seed, {.exams = 14, .slots = 8, .rooms = 0, .students = 40, .take = 0.2});
    inst.name = "syn-" + std::to_string(seed);
    write_carter(to_carter(inst), dir_ / "data" / inst.name);
  }
  const std::vector<std::string> bench = {"bench", path("data"), "--runs", "3", "--slots", "12", "--max-nodes", "3000"};
  ASSERT_EQ(run(with(bench, {"--out", path("b1")})), cli::kOk) << err_.str();
  ASSERT_EQ(run(with(bench, {"--out", path("b2"), "--jobs", "2"})), cli::kOk);
  const auto csv = slurp(path("b1/bench.csv"));
  EXPECT_EQ(csv, slurp(path("b2/bench.csv")));
  EXPECT_EQ(csv.rfind("dataset,best,mean,runs\nsyn-3,", 0), 0u) << csv;
  EXPECT_NE(csv.find("\nsyn-4,"), std::string::npos);
  // No reference value for synthetic names, so the diff table is empty.
  EXPECT_EQ(slurp(path("b1/diff.csv")), "dataset,ours,reference,difference\n");
  EXPECT_TRUE(fs::exists(path("b1/timings.csv")));
}

TEST_F(Cli, BenchWithNothingToRunExitsOne) {
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(run({"bench", path("empty"), "--out", path("b")}), cli::kBadInput);
  // A dataset with no conventional period count and no --slots is skipped.
  auto inst = ft::tiny_instance(1, {.exams = 4, .slots = 4, .rooms = 0, .students = 5});
  write_carter(to_carter(inst), dir_ / "odd" / "odd-1");
  EXPECT_EQ(run({"bench", path("odd"), "--out", path("b")}), cli::kBadInput);
  EXPECT_NE(err_.str().find("--slots"), std::string::npos);
  EXPECT_EQ(run({"bench", path("odd"), "--runs", "0", "--slots", "4"}), cli::kBadInput);
}

TEST_F(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}), cli::kOk);
  EXPECT_NE(out_.str().find("solve"), std::string::npos);
  EXPECT_EQ(run({"solve", "--help"}), cli::kOk);
  EXPECT_NE(out_.str().find("--var-cap"), std::string::npos);
}

#ifdef FUZZY_ETTP_CLI
TEST_F(Cli, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    const int raw = std::system((std::string("\"") + FUZZY_ETTP_CLI + "\" " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("--help"), 0);
  EXPECT_EQ(status("solve --instance /nonexistent.json"), 1);
  const auto clash = write("clash.json", clash_instance());
  EXPECT_EQ(status("solve --mode exact --model 2 --instance " + clash + " --out " + path("o")), 2);
}
#endif
