// End-to-end checks of the acctest binary.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("acctest_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name, const std::string& content) const {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = env + " \"" ACCTEST_CLI "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path dir_;
};

TEST_F(CliTest, ForwardStopThreeRows) {
  const auto in = file("p.csv", "p\n0.1\n0.2\n0.3\n");
  const auto r = run("test -i " + in.string() + " -m forwardstop -a 0.25");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k_hat=3\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, SeqStepFiveValues) {
  const auto in = file("p.csv", "p\n0.01\n0.95\n0.02\n0.8\n0.9\n");
  const auto r = run("test -i " + in.string() + " -m seqstep:C=2 -a 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k_hat=1\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, EmptyFileIsUsageError) {
  const auto in = file("empty.csv", "");
  const auto r = run("test -i " + in.string() + " -m forwardstop -a 0.2");
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, OutOfRangePIsDataError) {
  const auto in = file("p.csv", "p\n0.1\n1.5\n");
  EXPECT_EQ(run("test -i " + in.string() + " -a 0.2").code, 3);
}

TEST_F(CliTest, UnknownMethodIsUsageError) {
  const auto in = file("p.csv", "p\n0.1\n");
  EXPECT_EQ(run("test -i " + in.string() + " -m bogus -a 0.2").code, 2);
}

TEST_F(CliTest, MissingFlagIsUsageError) { EXPECT_EQ(run("simulate --trials 1").code, 2); }

TEST_F(CliTest, MaskReportsTruth) {
  const auto in = file("p.csv", "p,is_null\n0.01,0\n0.95,1\n0.02,0\n0.8,1\n0.9,1\n");
  const auto r = run("test -i " + in.string() + " -m seqstep:C=2 -a 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("false_positives=0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("fdp=0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("power=0.5\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, PathCsvRoundTrip) {
  std::string csv = "p\n";
  for (int i = 1; i <= 40; ++i) csv += std::to_string((i * 37 % 41) / 41.0) + "\n";
  const auto in = file("p.csv", csv);
  const auto path = dir_ / "path.csv";
  const auto a = run("test -i " + in.string() + " -m hingeexp:C=2 -a 0.4 -o " + path.string());
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_TRUE(fs::exists(path));
  ASSERT_TRUE(fs::exists(path.string() + ".manifest.json"));
  const auto b = run("test -i " + path.string() + " -m hingeexp:C=2 -a 0.4");
  ASSERT_EQ(b.code, 0) << b.err;
  const auto k = [](const std::string& s) { return s.substr(s.find("k_hat=")); };
  EXPECT_EQ(k(a.out), k(b.out));
}

double field(const std::string& out, const std::string& key) {
  const auto at = out.find("\n" + key + "=");
  const auto start = at == std::string::npos ? (out.rfind(key + "=", 0) == 0 ? 0 : std::string::npos)
                                             : at + 1;
  if (start == std::string::npos) return std::nan("");
  return std::stod(out.substr(start + key.size() + 1));
}

TEST_F(CliTest, PowerExamples) {
  auto r = run("power --curve \"f:0,0.5;1,0.3\" --alpha 0.8 --mu 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "T"), 0.5, 1e-8) << r.out;
  EXPECT_NEAR(field(r.out, "power"), 2.0 / 3.0, 1e-6) << r.out;

  r = run("power --curve \"f:0,1;1,1\" --alpha 0.6 --mu 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "T"), 1.0) << r.out;
  EXPECT_EQ(field(r.out, "power"), 1.0) << r.out;

  r = run("power --curve \"f:0,0.5;1,0.3\" --alpha 0.01 --mu 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "T"), 0.0) << r.out;
  EXPECT_EQ(field(r.out, "power"), 0.0) << r.out;
}

TEST_F(CliTest, InvalidCurveNamesCondition) {
  const auto r = run("power --curve \"f:0,0.3;1,0.5\" --alpha 0.5 --mu 0.5");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("nonincreasing"), std::string::npos) << r.err;
}

TEST_F(CliTest, DosageMissingGroup) {
  const auto in = file("m.csv", "gene_id,C1,C2,H1,H2\ng1,1,2,3,4\n");
  const auto r = run("dosage -i " + in.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("Low"), std::string::npos) << r.err;
}

TEST_F(CliTest, DosageNonNumericCell) {
  const auto in = file("m.csv", "gene_id,C1,C2,L1,L2,H1,H2\ng1,1,2,x,4,5,6\n");
  const auto r = run("dosage -i " + in.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("column"), std::string::npos) << r.err;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

TEST_F(CliTest, DosageSyntheticCounts) {
  const auto out = dir_ / "counts.csv";
  const auto r = run("dosage --synthetic 500 --seed 3 --alpha 0,0.1,0.2 -o " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = rows(slurp(out));
  ASSERT_FALSE(table.empty());
  std::map<std::string, std::vector<std::pair<double, long>>> by_method;
  for (const auto& row : table) {
    ASSERT_EQ(row.size(), 3u);
    by_method[row[0]].emplace_back(std::stod(row[1]), std::stol(row[2]));
  }
  for (const auto& [method, counts] : by_method) {
    ASSERT_EQ(counts.size(), 3u) << method;
    for (const auto& [alpha, n] : counts) {
      if (alpha == 0.0) EXPECT_EQ(n, 0) << method;
    }
    if (method.rfind("bh", 0) == 0 || method.rfind("storey", 0) == 0) continue;
    EXPECT_LE(counts[1].second, counts[2].second) << method;
  }
}

std::map<std::string, double> power_at(const std::string& summary, const std::string& alpha) {
  std::map<std::string, double> out;
  for (const auto& row : rows(summary)) {
    if (row.size() >= 3 && row[1] == alpha) out[row[0]] = std::stod(row[2]);
  }
  return out;
}

TEST_F(CliTest, DefaultSimulationFavoursHingeExp) {
  const auto prefix = (dir_ / "sim").string();
  const auto r = run("simulate --seed 1 -o " + prefix);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto power = power_at(slurp(prefix + "_summary.csv"), "0.20000000000000001");
  ASSERT_EQ(power.size(), 4u);
  for (const auto& [method, value] : power) EXPECT_GE(power.at("hingeexp:C=2"), value) << method;
}

TEST_F(CliTest, NoSignalGivesLowPower) {
  const auto prefix = (dir_ / "sim").string();
  const auto r = run("simulate --seed 1 --mu2 0 -o " + prefix);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto power = power_at(slurp(prefix + "_summary.csv"), "0.20000000000000001");
  ASSERT_EQ(power.size(), 4u);
  for (const auto& [method, value] : power) EXPECT_LT(value, 0.05) << method;
}

TEST_F(CliTest, SimulateIsByteIdentical) {
  const auto a = dir_ / "a";
  const auto b = dir_ / "b";
  const std::string common = "simulate --seed 7 --trials 3 --n 200 --n-nonnull 20 ";
  ASSERT_EQ(run(common + "-o " + a.string() + " --threads 1").code, 0);
  ASSERT_EQ(run(common + "-o " + b.string(), "ACCTEST_THREADS=4").code, 0);
  EXPECT_EQ(slurp(a.string() + "_summary.csv"), slurp(b.string() + "_summary.csv"));
  EXPECT_EQ(slurp(a.string() + "_paths.csv"), slurp(b.string() + "_paths.csv"));
  EXPECT_FALSE(slurp(a.string() + "_summary.csv").empty());
}

TEST_F(CliTest, ReplayReproducesOutputs) {
  const auto a = dir_ / "sim";
  ASSERT_EQ(run("simulate --seed 9 --trials 2 --n 150 --n-nonnull 15 -o " + a.string()).code, 0);
  const auto summary = slurp(a.string() + "_summary.csv");
  const auto paths = slurp(a.string() + "_paths.csv");
  fs::remove(a.string() + "_summary.csv");
  fs::remove(a.string() + "_paths.csv");
  const auto r = run("replay " + a.string() + ".manifest.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(a.string() + "_summary.csv"), summary);
  EXPECT_EQ(slurp(a.string() + "_paths.csv"), paths);
}

TEST_F(CliTest, ValidatePasses) {
  const auto r = run("validate");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

}  // namespace
