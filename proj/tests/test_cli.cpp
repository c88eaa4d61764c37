#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fracsense/harness.hpp"
#include "fracsense/text_io.hpp"

namespace fracsense {
namespace {

struct CliRun {
  int code;
  std::string out;
};

// Per-test file names, since ctest runs the cases in parallel.
std::string tmp(const std::string& name) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  return ::testing::TempDir() + "/fracsense_" + info->test_suite_name() + "_" + info->name() + "_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run(const std::string& args) {
  const std::string out = tmp("stdout.txt");
  const std::string cmd = std::string(FRACSENSE_CLI) + " " + args + " > " + out + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto inst = generate_instance(30, 60, 4, RngSeed{5});
    x0_ = inst.x0;
    save_matrix(tmp("A.txt"), inst.A);
    save_vector(tmp("b.txt"), inst.b);
  }
  Vector x0_;
};

TEST_F(Cli, Solve) {
  const CliRun r = run("solve --matrix " + tmp("A.txt") + " --rhs " + tmp("b.txt") + " --a 5 --sparsity 4");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["termination"], "Converged");
  ASSERT_EQ(j["solution"].size(), 60u);
  Vector x(60);
  for (int i = 0; i < 60; ++i) x(i) = j["solution"][i].get<double>();
  EXPECT_LE(relative_error(x, x0_), 1e-4);
  EXPECT_EQ(j["trace"].size(), j["iterations"].get<std::size_t>());
  for (const char* key : {"k", "objective", "step_delta", "lambda_k", "residual"})
    EXPECT_TRUE(j["trace"][0].contains(key)) << key;
  EXPECT_TRUE(j.contains("mu"));
  EXPECT_TRUE(j.contains("fixed_point_residual"));
}

TEST_F(Cli, SolveToFileWithoutTrace) {
  const std::string out = tmp("report.json");
  const CliRun r = run("solve --matrix " + tmp("A.txt") + " --rhs " + tmp("b.txt") +
                    " --sparsity 4 --no-trace -o " + out);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(nlohmann::json::parse(slurp(out))["trace"].empty());
}

TEST_F(Cli, Lp) {
  const CliRun r = run("lp --matrix " + tmp("A.txt") + " --rhs " + tmp("b.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["status"], "Optimal");
  EXPECT_EQ(j["basis"].size(), 30u);
}

TEST_F(Cli, InvalidInputExitsOne) {
  std::ofstream(tmp("bad.txt")) << "2 2\n1 2\n3 oops\n";
  CliRun r = run("solve --matrix " + tmp("bad.txt") + " --rhs " + tmp("b.txt") + " --sparsity 4");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;

  r = run("solve --matrix " + tmp("A.txt") + " --rhs " + tmp("b.txt"));
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("solve --matrix " + tmp("A.txt") + " --rhs " + tmp("A.txt") + " --sparsity 4");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("lp --matrix " + tmp("missing.txt") + " --rhs " + tmp("b.txt"));
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("sweep --r 5:1:1");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("frobnicate");
  EXPECT_EQ(r.code, 1) << r.out;
  r = run("");
  EXPECT_EQ(r.code, 1) << r.out;
}

TEST_F(Cli, SolverErrorExitsTwo) {
  std::ofstream(tmp("R.txt")) << "2 3\n1 1 1\n2 2 2\n";
  std::ofstream(tmp("r.txt")) << "2\n1 2\n";
  const CliRun r = run("lp --matrix " + tmp("R.txt") + " --rhs " + tmp("r.txt"));
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(CliSweep, CsvAndDeterminism) {
  const std::string args = "sweep --m 20 --n 40 --r 2:6:4 --trials 3 --a 1,5 --seed 9";
  const CliRun a = run(args);
  const CliRun b = run(args);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  std::istringstream is(a.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "method,r,success_rate,mean_re,mean_iters,mean_time_s");
  std::vector<std::string> methods;
  while (std::getline(is, line)) methods.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(methods, (std::vector<std::string>{"nit_a1", "nit_a1", "nit_a5", "nit_a5", "lp", "lp"}));
}

TEST(CliProxCheck, PassesAtDefaults) {
  const CliRun r = run("prox-check --a 3 --lambda 0.25");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(CliProxCheck, FailsWhenToleranceIsImpossible) {
  // The oracle's own resolution is far coarser than 1e-300.
  const CliRun r = run("prox-check --a 3 --lambda 0.25 --v-min 1.3 --v-max 1.4 --max-dev 1e-300");
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(CliHelp, DocumentsDefaults) {
  CliRun r = run("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"solve", "lp", "sweep", "prox-check"}) EXPECT_NE(r.out.find(sub), std::string::npos);
  r = run("sweep --help");
  EXPECT_EQ(r.code, 0);
  for (const char* text : {"--trials", "100", "--seed", "42", "FRACSENSE_THREADS", "5:60:5"})
    EXPECT_NE(r.out.find(text), std::string::npos) << text;
  r = run("solve --help");
  for (const char* text : {"--epsilon", "0.01", "--tol", "1e-08", "--max-iter", "10000"})
    EXPECT_NE(r.out.find(text), std::string::npos) << text;
}

}  // namespace
}  // namespace fracsense
