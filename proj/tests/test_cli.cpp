#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hoprank::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("hoprank-cli-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Toy tree a(b(d, e), c(f, g)) plus a detached pair, and a log over both.
  void write_toy_inputs() {
    spit(path("graph.txt"), "a b\na c\nb d\nb e\nc f\nc g\nx y\n");
    spit(path("log.tsv"),
         "ts\tclient\tontology\tconcept\treferrer\taction\n"
         "1\tu1\tonto\ta\t\t\n"
         "2\tu1\tonto\td\t/local\t\n"
         "3\tu1\tonto\tq\t/local\t\n"
         "4\tu1\tonto\tg\t/local\texpand\n"
         "5\tu2\tonto\tb\thttps://www.google.com/\t\n"
         "6\tu2\tonto\tc\t/local\t\n"
         "7\tu2\tonto\tx\t/local\t\n");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthWritesFilesAndIsDeterministic) {
  const std::vector<std::string> args{"synth", "--kind", "random-tree", "--nodes", "50", "--beta", "0.1,0.5,0.4",
                                      "--transitions", "400", "--seed", "3"};
  auto a = args;
  a.insert(a.end(), {"-o", path("s1")});
  auto b = args;
  b.insert(b.end(), {"-o", path("s2")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  for (const char* f : {"graph.tsv", "transitions.tsv", "synth.json"}) {
    ASSERT_TRUE(fs::exists(dir_ / "s1" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "s1" / f), slurp(dir_ / "s2" / f)) << f;
  }
  std::istringstream tr(slurp(dir_ / "s1" / "transitions.tsv"));
  std::string line;
  std::uint64_t total = 0;
  while (std::getline(tr, line)) total += std::stoull(line.substr(line.rfind('\t') + 1));
  EXPECT_EQ(total, 400u);
}

TEST_F(Cli, SynthZeroNodesIsADataError) {
  EXPECT_EQ(run({"synth", "--kind", "random-tree", "--nodes", "0", "-o", path("s")}).code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"synth", "--nodes", "7"}).code, 1);  // missing -o
  EXPECT_EQ(run({"synth", "--nodes", "notanumber", "-o", path("s")}).code, 1);
}

TEST_F(Cli, RefusesToOverwriteWithoutForce) {
  ASSERT_EQ(run({"synth", "--beta", "0,1", "-o", path("s")}).code, 0);
  EXPECT_EQ(run({"synth", "--beta", "0,1", "-o", path("s")}).code, 1);
  EXPECT_EQ(run({"synth", "--beta", "0,1", "-o", path("s"), "--force"}).code, 0);
}

TEST_F(Cli, IngestToyLog) {
  write_toy_inputs();
  const Result r = run({"ingest", "--graph", path("graph.txt"), "--log", path("log.tsv"), "--default-rules", "-o", path("d")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"graph.tsv", "idmap.tsv", "transitions.tsv", "transitions.DC.tsv", "transitions.LS.tsv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "d" / f)) << f;
  }
  const auto summary = nlohmann::json::parse(slurp(dir_ / "d" / "summary.json"));
  EXPECT_EQ(summary["lcc"]["nodes"], 7);
  EXPECT_GE(summary["unknown_requests"].get<int>(), 2);  // q is not a concept; x is outside the LCC
  const std::string t = slurp(dir_ / "d" / "transitions.tsv");
  EXPECT_NE(t.find("a\td\tDC\t1"), std::string::npos) << t;
  // the unknown q breaks d -> q -> g into two dropped pairs rather than bridging d -> g
  EXPECT_EQ(t.find("d\tg"), std::string::npos) << t;
  EXPECT_GE(summary["dropped_pairs"].get<int>(), 2);
  EXPECT_EQ(t.find('q'), std::string::npos);
}

TEST_F(Cli, IngestWithReferrersButNoRulesIsADataError) {
  write_toy_inputs();
  EXPECT_EQ(run({"ingest", "--graph", path("graph.txt"), "--log", path("log.tsv"), "-o", path("d")}).code, 2);
}

TEST_F(Cli, IngestMissingFileIsADataError) {
  EXPECT_EQ(run({"ingest", "--graph", path("nope.txt"), "--log", path("nope.tsv"), "--default-rules", "-o", path("d")}).code, 2);
}

class Pipeline : public Cli {
 protected:
  void SetUp() override {
    Cli::SetUp();
    ASSERT_EQ(run({"synth", "--kind", "binary-tree", "--nodes", "31", "--beta", "0,0.1,0.2,0.3,0.4", "--transitions",
                   "3000", "--seed", "5", "-o", path("data")})
                  .code,
              0);
  }
};

TEST_F(Pipeline, FitHoprankBetaHasDiameterPlusOneEntries) {
  const Result r = run({"fit", "--data", path("data"), "--models", "hoprank,rw-empirical", "--navtypes", "DC", "-o", path("fit")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = nlohmann::json::parse(slurp(dir_ / "fit" / "model.DC.hoprank.json"));
  EXPECT_EQ(m["params"]["beta"].size(), 9u);  // 31-node balanced tree has diameter 8
  double sum = 0;
  for (const auto& b : m["params"]["beta"]) sum += b.get<double>();
  EXPECT_NEAR(sum, 1.0, 1e-12);
  const auto rw = nlohmann::json::parse(slurp(dir_ / "fit" / "model.DC.rw-empirical.json"));
  EXPECT_GE(rw["params"]["alpha"].get<double>(), 0.0);
  EXPECT_LE(rw["params"]["alpha"].get<double>(), 1.0);
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "beta.tsv"));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "fit.json"));
}

TEST_F(Pipeline, UnknownOrEmptyModelListIsAUsageError) {
  EXPECT_EQ(run({"fit", "--data", path("data"), "--models", "hoprank,magic", "-o", path("fit")}).code, 1);
  EXPECT_EQ(run({"fit", "--data", path("data"), "--models", "", "-o", path("fit2")}).code, 1);
}

TEST_F(Pipeline, RankOrderAndReport) {
  ASSERT_EQ(run({"fit", "--data", path("data"), "--navtypes", "ALL", "-o", path("fit")}).code, 0);
  const Result r = run({"rank", "--data", path("data"), "--fit", path("fit"), "--dataset", "tree", "-o", path("rank")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ALL: "), std::string::npos);
  std::istringstream ev(slurp(dir_ / "rank" / "evaluations.tsv"));
  std::string header, first;
  std::getline(ev, header);
  std::getline(ev, first);
  EXPECT_EQ(header, "dataset\tnavtype\tmodel\tloglik\tnparams\tnobs\tbic");
  EXPECT_EQ(first.rfind("tree\tALL\thoprank\t", 0), 0u) << first;
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "rank" / "manifest.json"));
  EXPECT_EQ(manifest["dataset"], "tree");

  const Result rep = run({"report", "--run", path("rank"), "-o", path("report")});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(slurp(dir_ / "report" / "evaluations.tsv"), slurp(dir_ / "rank" / "evaluations.tsv"));
  const std::string w = slurp(dir_ / "report" / "winners.tsv");
  EXPECT_NE(w.find("tree\t-\t-\t-\t-\t-\t-\t-\thoprank"), std::string::npos) << w;
  EXPECT_EQ(run({"report", "--run", path("rank"), "--run", path("rank"), "-o", path("report2")}).code, 2);
}

TEST_F(Pipeline, RankRejectsFitFromAnotherGraph) {
  ASSERT_EQ(run({"fit", "--data", path("data"), "--models", "pa", "--navtypes", "ALL", "-o", path("fit")}).code, 0);
  ASSERT_EQ(run({"synth", "--kind", "random-tree", "--nodes", "31", "--beta", "0,1", "-o", path("other")}).code, 0);
  EXPECT_EQ(run({"rank", "--data", path("other"), "--fit", path("fit"), "-o", path("rank")}).code, 2);
}

TEST_F(Pipeline, RerunsAreByteIdenticalAcrossThreadCounts) {
  ASSERT_EQ(run({"--threads", "1", "fit", "--data", path("data"), "-o", path("f1")}).code, 0);
  ASSERT_EQ(run({"--threads", "4", "fit", "--data", path("data"), "-o", path("f4")}).code, 0);
  for (const auto& entry : fs::directory_iterator(dir_ / "f1")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "f4" / name)) << name;
  }
  ASSERT_EQ(run({"rank", "--data", path("data"), "--fit", path("f1"), "-o", path("r1")}).code, 0);
  ASSERT_EQ(run({"rank", "--data", path("data"), "--fit", path("f4"), "-o", path("r4")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "r1" / "evaluations.tsv"), slurp(dir_ / "r4" / "evaluations.tsv"));
  EXPECT_EQ(slurp(dir_ / "r1" / "winners.tsv"), slurp(dir_ / "r4" / "winners.tsv"));
}
