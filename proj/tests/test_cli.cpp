#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("mcdc_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "mcdc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return mcdc::cli::run(int(argv.size()), argv.data(), out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  void make_data() {
    ASSERT_EQ(run({"synth", "--n", "300", "--d", "8", "--k", "3", "--purity", "0.9", "--seed",
                   "4", "--output", path("data.csv"), "--truth-output", path("truth.txt")}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(Cli, SynthIsDeterministic) {
  make_data();
  const auto first = slurp(path("data.csv"));
  make_data();
  EXPECT_EQ(first, slurp(path("data.csv")));
  EXPECT_EQ(first.substr(0, first.find('\n')), "f0,f1,f2,f3,f4,f5,f6,f7,class");
  const auto truth = mcdc::cli::read_labels(path("truth.txt"));
  EXPECT_EQ(truth.size(), 300u);
}

TEST_F(Cli, SynthRejectsBadSpec) {
  EXPECT_NE(run({"synth", "--purity", "2", "--output", path("x.csv")}), 0);
  EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, ClusterWritesReportAndLabels) {
  make_data();
  ASSERT_EQ(run({"cluster", "--input", path("data.csv"), "--label-column", "class", "--seed",
                 "2", "--output", path("report.json"), "--labels-out", path("labels.txt"),
                 "--emit-gamma", path("gamma.csv"), "--include-levels"}),
            0)
      << err_.str();
  const auto report = json::parse(slurp(path("report.json")));
  EXPECT_EQ(report["schema"], "mcdc-report/1");
  EXPECT_EQ(report["dataset"]["n"], 300);
  EXPECT_EQ(report["dataset"]["d"], 8);
  EXPECT_TRUE(report.contains("kappa"));
  EXPECT_TRUE(report.contains("theta"));
  EXPECT_TRUE(report["runs"][0].contains("levels"));
  for (const auto* key : {"acc", "ari", "ami", "fm"}) {
    EXPECT_TRUE(report["indices"].contains(key)) << key;
    EXPECT_TRUE(report["summary"]["indices"].contains(key)) << key;
  }
  EXPECT_GT(report["indices"]["acc"].get<double>(), 0.9);
  EXPECT_EQ(report["config"]["variant"], "full");

  const auto labels = mcdc::cli::read_labels(path("labels.txt"));
  EXPECT_EQ(labels.size(), 300u);
  EXPECT_EQ(labels, report["labels"].get<mcdc::Labels>());
  const auto gamma = slurp(path("gamma.csv"));
  EXPECT_EQ(gamma.rfind("level1", 0), 0u);
  EXPECT_EQ(std::count(gamma.begin(), gamma.end(), '\n'), 301);

  // evaluate the written labels against the written truth
  ASSERT_EQ(run({"eval", "--pred", path("labels.txt"), "--truth", path("truth.txt")}), 0);
  const auto scores = json::parse(out_.str());
  EXPECT_DOUBLE_EQ(scores["acc"].get<double>(), report["indices"]["acc"].get<double>());
}

TEST_F(Cli, ClusterIsReproducible) {
  make_data();
  for (const auto* name : {"a", "b"}) {
    ASSERT_EQ(run({"cluster", "--input", path("data.csv"), "--label-column", "class",
                   "--output", path(std::string(name) + ".json"), "--labels-out",
                   path(std::string(name) + ".txt")}),
              0);
  }
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
  auto a = json::parse(slurp(path("a.json")));
  auto b = json::parse(slurp(path("b.json")));
  for (auto* r : {&a, &b}) {
    for (auto& run : (*r)["runs"]) run.erase("timings");
  }
  EXPECT_EQ(a, b);
}

TEST_F(Cli, NoIndicesWithoutLabelColumn) {
  write("plain.csv", "a,b\nx,p\ny,q\nx,p\ny,q\n");
  ASSERT_EQ(run({"cluster", "--input", path("plain.csv"), "--k0", "2"}), 0) << err_.str();
  const auto report = json::parse(out_.str());
  EXPECT_FALSE(report.contains("indices"));
  EXPECT_FALSE(report["runs"][0].contains("indices"));
}

TEST_F(Cli, RepeatsReportSpread) {
  make_data();
  ASSERT_EQ(run({"cluster", "--input", path("data.csv"), "--label-column", "class",
                 "--repeats", "3", "--seed", "10"}),
            0);
  const auto report = json::parse(out_.str());
  ASSERT_EQ(report["runs"].size(), 3u);
  EXPECT_EQ(report["runs"][2]["seed"], 12);
  EXPECT_TRUE(report["summary"]["indices"]["ari"].contains("std"));
}

TEST_F(Cli, VariantsAndKModesDegenerateK) {
  make_data();
  ASSERT_EQ(run({"cluster", "--input", path("data.csv"), "--label-column", "class", "--variant",
                 "kmodes", "--k", "1", "--labels-out", path("k1.txt")}),
            0)
      << err_.str();
  for (const auto l : mcdc::cli::read_labels(path("k1.txt"))) EXPECT_EQ(l, 0u);
  for (const auto* v : {"mcdc1", "mcdc2", "mcdc3", "mcdc4"}) {
    EXPECT_EQ(run({"cluster", "--input", path("data.csv"), "--label-column", "class",
                   "--variant", v, "--k", "3"}),
              0)
        << v << ": " << err_.str();
  }
}

TEST_F(Cli, MissingKIsConfigError) {
  make_data();
  EXPECT_EQ(run({"cluster", "--input", path("data.csv"), "--variant", "mcdc1"}), 2);
  EXPECT_NE(err_.str().find("--k"), std::string::npos);
  EXPECT_EQ(run({"cluster", "--input", path("data.csv"), "--variant", "bogus"}), 2);
}

TEST_F(Cli, GammaNeedsLearningVariant) {
  make_data();
  EXPECT_EQ(run({"cluster", "--input", path("data.csv"), "--variant", "kmodes", "--k", "3",
                 "--emit-gamma", path("g.csv"), "--labels-out", path("l.txt")}),
            2);
  EXPECT_FALSE(fs::exists(path("g.csv")));
  EXPECT_FALSE(fs::exists(path("l.txt")));
}

TEST_F(Cli, UnreadableInputFails) {
  EXPECT_EQ(run({"cluster", "--input", path("missing.csv"), "--labels-out", path("l.txt")}), 1);
  EXPECT_FALSE(fs::exists(path("l.txt")));
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(Cli, MissingRowsAreDroppedAndCounted) {
  write("m.csv", "a,b,c\nx,p,0\n?,q,1\ny,q,1\nx,p,0\ny,q,1\n");
  ASSERT_EQ(run({"cluster", "--input", path("m.csv"), "--label-column", "c", "--k0", "2"}), 0)
      << err_.str();
  const auto report = json::parse(out_.str());
  EXPECT_EQ(report["dataset"]["rows_dropped"], 1);
  EXPECT_EQ(report["dataset"]["n"], 4);
  ASSERT_EQ(run({"cluster", "--input", path("m.csv"), "--label-column", "c", "--k0", "2",
                 "--missing-token", ""}),
            0);
  EXPECT_EQ(json::parse(out_.str())["dataset"]["n"], 5);
}

TEST_F(Cli, EvalExamples) {
  write("p.txt", "0\n0\n1\n1\n");
  write("t.txt", "0\n1\n1\n1\n");
  ASSERT_EQ(run({"eval", "--pred", path("p.txt"), "--truth", path("t.txt")}), 0);
  EXPECT_DOUBLE_EQ(json::parse(out_.str())["acc"].get<double>(), 0.75);

  ASSERT_EQ(run({"eval", "--pred", path("t.txt"), "--truth", path("t.txt")}), 0);
  const auto same = json::parse(out_.str());
  for (const auto* key : {"acc", "ari", "ami", "fm"}) EXPECT_DOUBLE_EQ(same[key].get<double>(), 1.0);

  write("single.txt", "0\n1\n2\n3\n");
  write("one.txt", "0\n0\n0\n0\n");
  ASSERT_EQ(run({"eval", "--pred", path("single.txt"), "--truth", path("one.txt")}), 0);
  EXPECT_DOUBLE_EQ(json::parse(out_.str())["fm"].get<double>(), 0.0);
}

TEST_F(Cli, EvalErrors) {
  write("p.txt", "0\n0\n1\n");
  write("t.txt", "0\n1\n");
  EXPECT_EQ(run({"eval", "--pred", path("p.txt"), "--truth", path("t.txt"), "--output",
                 path("o.json")}),
            1);
  EXPECT_FALSE(fs::exists(path("o.json")));
  write("bad.txt", "0\n-1\n");
  EXPECT_EQ(run({"eval", "--pred", path("bad.txt"), "--truth", path("t.txt")}), 1);
  write("word.txt", "0\nx\n");
  EXPECT_EQ(run({"eval", "--pred", path("word.txt"), "--truth", path("t.txt")}), 1);
}

TEST_F(Cli, BenchEmitsOneRowPerGridPoint) {
  ASSERT_EQ(run({"bench", "--axis", "n", "--grid", "200,400,800", "--repeats", "1", "--k0",
                 "8"}),
            0)
      << err_.str();
  std::istringstream csv(out_.str());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "n,mean_seconds,std_seconds,mean_learning_seconds,mean_aggregation_seconds");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, BenchKAxisHasEnoughDistinctLevels) {
  ASSERT_EQ(run({"bench", "--axis", "k", "--grid", "2,4,8", "--n", "3000", "--repeats", "1"}), 0)
      << err_.str();
  std::istringstream csv(out_.str());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("k,", 0), 0u);
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST_F(Cli, BenchValidatesGrid) {
  EXPECT_EQ(run({"bench", "--grid", "400,200"}), 2);
  EXPECT_EQ(run({"bench", "--grid", "a,b"}), 2);
  EXPECT_EQ(run({"bench", "--axis", "z", "--grid", "1"}), 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_NE(run({}), 0);
  EXPECT_NE(run({"cluster"}), 0);
  EXPECT_NE(run({"frobnicate"}), 0);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST(LabelFiles, RoundTrip) {
  const mcdc::Labels labels{3, 0, 12, 7};
  const auto p = fs::temp_directory_path() / "mcdc_labels_roundtrip.txt";
  mcdc::cli::write_file_atomic(p, mcdc::cli::format_labels(labels));
  EXPECT_EQ(mcdc::cli::read_labels(p), labels);
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  fs::remove(p);
}
