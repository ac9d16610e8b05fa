#include <gtest/gtest.h>

#include <cli.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "oracles.hpp"

using namespace bezapprox;
using bezapprox::io::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string curve_text(const Matrix& P) { return io::curve_to_json(BezierCurve(P)).dump(); }

std::string parabola_text() { return R"({"dim":2,"degree":2,"controls":[[0,0],[0.5,0.5],[1,0]]})"; }

Matrix random_controls(std::uint64_t seed, int n) {
  oracle::Gen gen(seed);
  return gen.controls(2, n);
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("bezapprox_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, ElevateExample) {
  const Result r = run_cli({"elevate", "-", "--to-degree", "2"}, R"({"dim":1,"degree":1,"controls":[[0],[1]]})");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["degree"], 2);
  EXPECT_EQ(j["controls"], json::parse("[[0],[0.5],[1]]"));
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ReduceUndoesElevate) {
  const Matrix P = random_controls(100, 4);
  for (const std::string method : {"matching", "least-squares", "taylor"}) {
    const Result up = run_cli({"elevate", "--to-degree", "7"}, curve_text(P));
    ASSERT_EQ(up.code, 0);
    const Result down = run_cli({"reduce", "--to-degree", "4", "--method", method}, up.out);
    ASSERT_EQ(down.code, 0) << down.err;
    const BezierCurve back = io::curve_from_json(json::parse(down.out));
    EXPECT_LT((back.controls() - P).cwiseAbs().maxCoeff(), 1e-9) << method;
  }
}

TEST(Cli, ReduceParamsAndExitCodes) {
  const std::string text = curve_text(random_controls(101, 5));
  EXPECT_EQ(run_cli({"reduce", "--to-degree", "2", "--params", "0,0.5,1"}, text).code, 0);
  const Result dup = run_cli({"reduce", "--to-degree", "2", "--params", "0,0.5,0.5"}, text);
  EXPECT_EQ(dup.code, 2);
  EXPECT_NE(dup.err.find("DuplicateParams"), std::string::npos) << dup.err;
  EXPECT_TRUE(dup.out.empty());
  EXPECT_EQ(run_cli({"reduce", "--to-degree", "2", "--params", "0,1"}, text).code, 2);
  EXPECT_EQ(run_cli({"reduce", "--to-degree", "7"}, text).code, 3);  // DegreeOrder
  EXPECT_EQ(run_cli({"reduce", "--to-degree", "2", "--method", "bogus"}, text).code, 2);
  EXPECT_EQ(run_cli({"reduce", "--to-degree", "2", "--method", "taylor", "--params", "0,0.5,1"}, text).code, 2);
  EXPECT_EQ(run_cli({"reduce"}, text).code, 2);
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "x"}, text).code, 2);
}

TEST(Cli, InputValidation) {
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "3"}, "{not json").code, 2);
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "3"}, R"({"dim":1,"degree":1,"controls":[[0],[1]],"extra":1})").code, 2);
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "3"}, R"({"dim":2,"degree":1,"controls":[[0,0],[1]]})").code, 2);
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "3"}, R"({"dim":1,"degree":2,"controls":[[0],[1]]})").code, 2);
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "3", "/nonexistent/curve.json"}).code, 2);
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "40"}, R"({"dim":1,"degree":1,"controls":[[0],[1]]})").code, 3);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
}

TEST(Cli, NonBernsteinInput) {
  // monomial t^2 in 1-D is the Bernstein curve [0, 0, 1]
  const Result r = run_cli({"elevate", "--to-degree", "2"}, R"({"dim":1,"degree":2,"controls":[[0],[0],[1]],"basis":"monomial"})");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["controls"], json::parse("[[0],[0],[1]]"));
  // (t - 0.5) about tau = 0.5 is the line from -0.5 to 0.5
  const Result t = run_cli({"elevate", "--to-degree", "1"}, R"({"dim":1,"degree":1,"controls":[[0],[1]],"basis":"taylor","tau":0.5})");
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(json::parse(t.out)["controls"], json::parse("[[-0.5],[0.5]]"));
  EXPECT_EQ(run_cli({"elevate", "--to-degree", "1"}, R"({"dim":1,"degree":1,"controls":[[0],[1]],"basis":"taylor"})").code, 2);
}

TEST(Cli, ApproxBinaryOnElevatedLine) {
  const Matrix line = oracle::elevate_to(random_controls(102, 1), 8);
  const Result r = run_cli({"approx", "--search", "binary", "--tolerance", "1e-6", "--target-degree", "1"}, curve_text(line));
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["segments"].size(), 1u);
  EXPECT_EQ(j["sourceDegree"], 8);
  EXPECT_EQ(j["tolerance"], 1e-6);
}

TEST(Cli, ApproxRuleOfThumb) {
  const std::string text = curve_text(random_controls(103, 8));
  const Result r = run_cli({"approx", "--rule-of-thumb", "--target-degree", "2"}, text);
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["segments"].size(), 21u);
  EXPECT_EQ(j["method"], "matching");
  EXPECT_EQ(j["distances"].size(), 21u);
  EXPECT_TRUE(j["tolerance"].is_null());
  EXPECT_EQ(json::parse(run_cli({"approx", "--rule-of-thumb", "--target-degree", "1"}, text).out)["segments"].size(), 42u);
  EXPECT_EQ(run_cli({"approx", "--rule-of-thumb", "--target-degree", "3"}, text).code, 3);
  EXPECT_EQ(run_cli({"approx", "--rule-of-thumb", "--method", "taylor"}, text).code, 2);
}

TEST(Cli, ApproxCertificates) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix P = random_controls(200 + seed, 8);
    for (const std::string search : {"linear", "binary"}) {
      const Result r = run_cli({"approx", "--search", search, "--metric", "ctrlpoint", "--tolerance", "0.1"}, curve_text(P));
      ASSERT_EQ(r.code, 0) << r.err;
      const io::ChainDocument doc = io::chain_from_json(json::parse(r.out));
      EXPECT_EQ(doc.metric, "ctrlpoint");
      for (int i = 0; i < doc.chain.partition.segments(); ++i) {
        const Interval iv = doc.chain.partition.interval(i);
        const double d = oracle::max_col_dist(oracle::piece(P, iv.lo, iv.hi),
                                              oracle::elevate_to(doc.chain.segments[static_cast<std::size_t>(i)].controls(), 8));
        EXPECT_LE(d, 0.1);
        EXPECT_LE(doc.chain.distances[static_cast<std::size_t>(i)], 0.1);
      }
    }
  }
}

TEST(Cli, ApproxModesAndErrors) {
  const std::string text = curve_text(random_controls(104, 6));
  const Result p = run_cli({"approx", "--search", "partition", "--partition", "0,0.25,1"}, text);
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(json::parse(p.out)["partition"], json::parse("[0,0.25,1]"));
  EXPECT_EQ(run_cli({"approx", "--partition", "0,0.5,1", "--method", "least-squares"}, text).code, 0);
  EXPECT_EQ(run_cli({"approx", "--partition", "0,0.7,0.5,1"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx", "--search", "linear"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx", "--search", "linear", "--tolerance", "0.1", "--rule-of-thumb"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx", "--search", "diagonal", "--tolerance", "0.1"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx", "--search", "linear", "--tolerance", "-1"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx", "--search", "binary", "--tolerance", "0.1", "--metric", "nope"}, text).code, 2);
  EXPECT_EQ(run_cli({"approx", "--search", "linear", "--tolerance", "1e-9", "--max-segments", "2"}, text).code, 4);
  EXPECT_EQ(run_cli({"approx", "--search", "binary", "--tolerance", "1e-9", "--min-width", "0.1"}, text).code, 4);
  for (const std::string metric : {"l2", "frobenius", "max", "hausdorff"}) {
    const Result r = run_cli({"approx", "--search", "binary", "--tolerance", "0.05", "--metric", metric}, text);
    ASSERT_EQ(r.code, 0) << metric << r.err;
    for (const json& d : json::parse(r.out)["distances"]) EXPECT_LE(d.get<double>(), 0.05);
  }
}

TEST(Cli, ChainRoundTrip) {
  const Result r = run_cli({"approx", "--search", "binary", "--tolerance", "0.05"}, curve_text(random_controls(105, 7)));
  ASSERT_EQ(r.code, 0);
  const io::ChainDocument doc = io::chain_from_json(json::parse(r.out));
  EXPECT_EQ(io::chain_to_json(doc).dump(2) + "\n", r.out);
  const Result f = run_cli({"features", "--length"}, r.out);
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_GT(json::parse(f.out)["length"].get<double>(), 0.0);
}

TEST(Cli, FeaturesExamples) {
  const Result r = run_cli({"features", "--length", "--max-curvature", "--dist-to-point", "0.5", "0.5", "--dist-to-segment", "0",
                            "1", "1", "1", "--halfspace", "0", "1", "0", "0.1"},
                           parabola_text());
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["length"].get<double>(), 1.147794, 1e-6);
  EXPECT_NEAR(j["maxCurvature"]["value"].get<double>(), 2.0, 1e-12);
  EXPECT_NEAR(j["maxCurvature"]["t"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["distToPoint"]["distance"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(j["distToSegment"]["distance"].get<double>(), 0.75, 1e-12);
  EXPECT_NEAR(j["distToSegment"]["k"].get<double>(), 0.5, 1e-12);
  ASSERT_EQ(j["halfspaceViolations"].size(), 1u);
  EXPECT_NEAR(j["halfspaceViolations"][0][0].get<double>(), 0.1127, 1e-4);

  const Result end = run_cli({"features", "--dist-to-point", "1", "0"}, parabola_text());
  ASSERT_EQ(end.code, 0);
  EXPECT_EQ(json::parse(end.out)["distToPoint"]["distance"].get<double>(), 0.0);
}

TEST(Cli, FeaturesErrors) {
  EXPECT_EQ(run_cli({"features", "--length"}, curve_text(random_controls(106, 3))).code, 3);
  EXPECT_EQ(run_cli({"features"}, parabola_text()).code, 2);
  EXPECT_EQ(run_cli({"features", "--dist-to-point", "1"}, parabola_text()).code, 2);
  EXPECT_EQ(run_cli({"features", "--dist-to-segment", "1", "1", "1", "1"}, parabola_text()).code, 2);
  EXPECT_EQ(run_cli({"features", "--length"}, R"({"dim":3,"degree":2,"controls":[[0,0,0],[1,1,1],[2,0,0]]})").code, 0);
  EXPECT_EQ(run_cli({"features", "--max-curvature"}, R"({"dim":3,"degree":2,"controls":[[0,0,0],[1,1,1],[2,0,0]]})").code, 3);
  EXPECT_EQ(run_cli({"features", "--dist-to-point", "0", "0"}, R"({"dim":3,"degree":2,"controls":[[0,0,0],[1,1,1],[2,0,0]]})").code,
            2);
}

TEST(Cli, ExperimentExamples) {
  const Result quad = run_cli({"experiment", "--study", "error", "--trials", "1", "--degrees", "2", "--segments", "1",
                               "--features", "length"});
  ASSERT_EQ(quad.code, 0) << quad.err;
  std::istringstream is(quad.out);
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header, kCsvHeader);
  EXPECT_EQ(row.rfind("error,length,matching,,2,1,,", 0), 0u) << row;
  const double mean = std::stod(row.substr(std::string("error,length,matching,,2,1,,").size()));
  EXPECT_LT(mean, 1e-9);

  const Result scaling = run_cli({"experiment", "--study", "scaling", "--trials", "5", "--tolerances", "1000"});
  ASSERT_EQ(scaling.code, 0) << scaling.err;
  std::istringstream ss(scaling.out);
  std::getline(ss, header);
  int rows = 0;
  while (std::getline(ss, row)) {
    ++rows;
    EXPECT_NE(row.find(",1000,1,0,5,1"), std::string::npos) << row;
  }
  EXPECT_EQ(rows, 14);
}

TEST(Cli, ExperimentDeterministicFiles) {
  TempDir dir;
  const std::vector<std::string> base{"experiment", "--study", "error", "--trials", "12", "--degrees", "4,6",
                                      "--segments", "3,9", "--methods", "matching,taylor", "--dense-samples", "5000"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(run_cli(with({"--out", dir.file("a.csv")})).code, 0);
  ASSERT_EQ(run_cli(with({"--out", dir.file("b.csv")})).code, 0);
  ASSERT_EQ(run_cli(with({"--out", dir.file("c.csv"), "--jobs", "4"})).code, 0);
  const std::string a = slurp(dir.file("a.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir.file("b.csv")));
  EXPECT_EQ(a, slurp(dir.file("c.csv")));
  EXPECT_EQ(run_cli(with({"--seed", "9"})).out == a, false);
}

TEST(Cli, ExperimentErrors) {
  EXPECT_EQ(run_cli({"experiment"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "other"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "scaling", "--trials", "2", "--tolerances", "0.01,0.1"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "scaling", "--trials", "2", "--degrees", "1"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "error", "--trials", "0"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "error", "--trials", "2", "--features", "speed"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "error", "--trials", "2", "--tolerances", "0.1"}).code, 2);
  EXPECT_EQ(run_cli({"experiment", "--study", "error", "--trials", "2", "--target-degree", "3"}).code, 3);
  EXPECT_EQ(run_cli({"experiment", "--study", "error", "--trials", "2", "--out", "/nonexistent/dir/x.csv",
                     "--segments", "2", "--dense-samples", "1000"})
                .code,
            2);
}

TEST(Cli, HelpListsDefaults) {
  const Result top = run_cli({"--help"});
  EXPECT_EQ(top.code, 0);
  for (const char* cmd : {"elevate", "reduce", "approx", "features", "experiment"}) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
  }
  const Result approx = run_cli({"approx", "--help"});
  EXPECT_EQ(approx.code, 0);
  EXPECT_NE(approx.out.find("--max-segments"), std::string::npos);
  EXPECT_NE(approx.out.find("4096"), std::string::npos) << approx.out;
  EXPECT_NE(approx.out.find("ctrlpoint"), std::string::npos);
}

TEST(Cli, BuiltBinary) {
  TempDir dir;
  const std::string curve = dir.file("curve.json");
  std::ofstream(curve) << parabola_text();
  const std::string bin = BEZAPPROX_CLI_PATH;

  FILE* pipe = ::popen((bin + " features --length " + curve + " 2>/dev/null").c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = ::pclose(pipe);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_NEAR(json::parse(out)["length"].get<double>(), 1.147794, 1e-6);

  auto code = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(code("--help"), 0);
  EXPECT_EQ(code("elevate --to-degree 1 " + curve), 3);
  EXPECT_EQ(code("approx --search linear --tolerance 1e-12 --max-segments 1 " + curve), 0);
  EXPECT_EQ(code("reduce --to-degree 1 --params 0.5,0.5 " + curve), 2);
  EXPECT_EQ(code("features --length --bogus " + curve), 2);
}
