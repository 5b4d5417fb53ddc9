#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "tpl/cli.hpp"

using namespace tpl;
using json = nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "tpl");
  std::ostringstream out, err;
  int code = 0;
  const auto request = cli::parse(static_cast<int>(args.size()), args.data(), out, err, code);
  if (request) code = cli::run(*request, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(ParseComplex, Forms) {
  EXPECT_EQ(cli::parse_complex("1"), Complex(1, 0));
  EXPECT_EQ(cli::parse_complex(" -2.5 "), Complex(-2.5, 0));
  EXPECT_EQ(cli::parse_complex("1+2i"), Complex(1, 2));
  EXPECT_EQ(cli::parse_complex("3-0.5i"), Complex(3, -0.5));
  EXPECT_EQ(cli::parse_complex("2i"), Complex(0, 2));
  EXPECT_EQ(cli::parse_complex("-i"), Complex(0, -1));
  EXPECT_EQ(cli::parse_complex("1e-3+2e+1i"), Complex(1e-3, 20));
  EXPECT_THROW(cli::parse_complex("abc"), ValidationError);
  EXPECT_THROW(cli::parse_complex(""), ValidationError);
}

TEST(ParseMatrix, JsonObject) {
  const ComplexMatrix m =
      cli::parse_matrix(R"({"rows": 2, "cols": 2, "re": [[1, 0], [0, 0]], "im": [[0, 1], [-1, 0]]})");
  EXPECT_EQ(m(0, 1), Complex(0, 1));
  EXPECT_EQ(m(1, 0), Complex(0, -1));
}

TEST(ParseMatrix, ImaginaryPartOptional) {
  const ComplexMatrix m = cli::parse_matrix(R"({"rows": 1, "cols": 2, "re": [[3, 4]]})");
  EXPECT_EQ(m(0, 1), Complex(4, 0));
}

TEST(ParseMatrix, BareArrayAndCsv) {
  EXPECT_EQ(cli::parse_matrix("[[1, \"2i\"]]")(0, 1), Complex(0, 2));
  const ComplexMatrix m = cli::parse_matrix("1, 1+i\n0, 2\n");
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 1), Complex(1, 1));
}

TEST(ParseMatrix, Errors) {
  EXPECT_THROW(cli::parse_matrix("[[1, 2], [3]]"), ValidationError);
  EXPECT_THROW(cli::parse_matrix(R"({"rows": 2, "cols": 1, "re": [[1]]})"), ValidationError);
  EXPECT_THROW(cli::parse_matrix("{bad json"), ValidationError);
  EXPECT_THROW(cli::parse_matrix("1,2\n3"), ValidationError);
  EXPECT_THROW(cli::read_matrix("/nonexistent/matrix.json"), ValidationError);
}

TEST(ParseIndexSet, RangesAndSingles) {
  EXPECT_EQ(cli::parse_index_set("0:3,7", 8), (std::vector<Index>{0, 1, 2, 7}));
  EXPECT_THROW(cli::parse_index_set("0:9", 8), ValidationError);
  EXPECT_THROW(cli::parse_index_set("4:2", 8), ValidationError);
  EXPECT_THROW(cli::parse_index_set("x", 8), ValidationError);
}

TEST(ResolveSeed, Precedence) {
  cli::Request r;
  r.seed = 7;
  EXPECT_EQ(cli::resolve_seed(r), 7u);
  r.seed.reset();
  unsetenv("TPL_SEED");
  EXPECT_EQ(cli::resolve_seed(r), 42u);
  setenv("TPL_SEED", "123", 1);
  EXPECT_EQ(cli::resolve_seed(r), 123u);
  setenv("TPL_SEED", "nope", 1);
  EXPECT_THROW(cli::resolve_seed(r), ValidationError);
  unsetenv("TPL_SEED");
}

TEST(Cli, AnalyzeIdenticalFrames) {
  const Result r =
      invoke({"analyze", "--frame", "--input-p", "[[1],[0]]", "--input-q", "[[1],[0]]"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["results"]["distance"]["distance"].get<double>(), 0.0, 1e-12);
  ASSERT_EQ(j["results"]["schmidt"]["values"].size(), 1u);
  EXPECT_NEAR(j["results"]["schmidt"]["values"][0].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(j.contains("tolerances"));
  EXPECT_EQ(j["seed"], 42);
}

TEST(Cli, IdempotentScalarTwo) {
  const Result r = invoke({"idempotent", "--b", "[[2]]"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["results"]["distance"]["distance"].get<double>(), std::atan(0.5), 1e-10);
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
}

TEST(Cli, DilateFromFile) {
  const std::string path = ::testing::TempDir() + "tpl_gamma.csv";
  std::ofstream(path) << "0.5\n";
  const Result r = invoke({"dilate", "--gamma", path.c_str()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["results"]["distance"].get<double>(), std::acos(0.5), 1e-10);
  std::remove(path.c_str());
}

TEST(Cli, ConcentrationWithProlateProfile) {
  const Result r = invoke({"concentration", "--n", "8", "--set-i", "0:4", "--set-j", "0:4"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["results"]["trace"].get<double>(), 2.0, 1e-10);
  EXPECT_TRUE(j["results"].contains("prolate"));
}

TEST(Cli, CsvOutput) {
  const Result r = invoke({"idempotent", "--b", "[[1]]", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(r.out.find("request.command,idempotent"), std::string::npos);
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(invoke({"analyze", "--input-p", "/nonexistent.json", "--input-q", "x"}).code,
            cli::kExitInput);
  EXPECT_EQ(invoke({"analyze"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"dilate", "--gamma", "[[2]]"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"analyze", "--input-p", "[[1,1],[0,0]]", "--input-q", "[[1,0],[0,0]]"}).code,
            cli::kExitInput);
  EXPECT_EQ(invoke({"sinc", "--tol-spectral-match", "0.5"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"selftest", "--format", "xml"}).code, cli::kExitInput);
}

TEST(Cli, FailedChecksExitTwoAndStillReport) {
  // The lemma bound fails at n = 8; the report is written anyway.
  const Result r = invoke({"sinc", "--n-list", "8"});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_FALSE(json::parse(r.out)["checks"].empty());
}

TEST(Cli, RandomGeneratorIsSeeded) {
  const Result a = invoke({"analyze", "--input-p", "random:6:2", "--input-q", "random:6:3", "--seed", "5"});
  const Result b = invoke({"analyze", "--input-p", "random:6:2", "--input-q", "random:6:3", "--seed", "5"});
  const Result c = invoke({"analyze", "--input-p", "random:6:2", "--input-q", "random:6:3", "--seed", "6"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}
