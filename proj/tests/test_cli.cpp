#include "support.hpp"

#include "cli.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace tomoqubo;
using tomoqubo::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "tomoqubo");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void pipeline(const std::string& dir) {
  ASSERT_EQ(run({"phantom", "--dir", dir, "--size", "8", "--levels", "1", "--thresholds", "0.1"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", dir, "--projections", "3", "--noise", "0.05", "--seed", "7"}).code, 0);
  ASSERT_EQ(run({"build", "--dir", dir, "--a", "1", "--b", "1"}).code, 0);
  ASSERT_EQ(run({"solve", "--dir", dir, "--restarts", "4", "--sweeps", "300", "--seed", "3"}).code, 0);
  ASSERT_EQ(run({"reconstruct", "--dir", dir}).code, 0);
  ASSERT_EQ(run({"baseline", "--dir", dir}).code, 0);
  ASSERT_EQ(run({"compare", "--dir", dir}).code, 0);
}

}  // namespace

TEST(Cli, PhantomWritesImagesAndProvenance) {
  TempDir dir("cli");
  const std::string d = dir.path().string();
  const Outcome o = run({"phantom", "--dir", d, "--kind", "shepp-logan", "--size", "30", "--levels", "1", "--blur", "0.8"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Image img = load_image(dir.path() / "phantom.csv");
  EXPECT_EQ(img.rows(), 30);
  EXPECT_TRUE(is_quantized(img, MacLevels({1})));
  EXPECT_TRUE((load_image(dir.path() / "phantom.pgm") == img).all());
  const auto prov = nlohmann::json::parse(slurp(dir.path() / "phantom.provenance.json"));
  EXPECT_EQ(prov["command"], "phantom");
  EXPECT_EQ(prov["parameters"]["size"], 30);
  EXPECT_TRUE(prov.contains("version"));

  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "60", "--levels", "1,2,3"}).code, 0);
  const Image three = load_image(dir.path() / "phantom.csv");
  EXPECT_EQ(three.rows(), 60);
  EXPECT_TRUE(is_quantized(three, MacLevels({1, 2, 3})));
  EXPECT_EQ(three.maxCoeff(), 3.0);
  EXPECT_TRUE((load_image(dir.path() / "phantom.pgm") == three).all());
}

TEST(Cli, UsageErrors) {
  const Outcome missing = run({"phantom"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("--size"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"solve", "--restarts", "zero"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ProjectShapesAndNoiseDeterminism) {
  TempDir dir("proj");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "60", "--levels", "1,2,3"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--in", (dir.path() / "phantom.csv").string(), "--projections", "3"}).code, 0);
  EXPECT_EQ(load_sinogram(dir.path() / "sinogram.csv").rows(), 3);
  const auto geom = nlohmann::json::parse(slurp(dir.path() / "geometry.json"));
  EXPECT_EQ(geom["angles_deg"], nlohmann::json({0.0, 60.0, 120.0}));
  EXPECT_FALSE(fs::exists(dir.path() / "sinogram_noisy.csv"));

  ASSERT_EQ(run({"project", "--dir", d, "--projections", "6", "--noise", "0.05", "--seed", "7"}).code, 0);
  EXPECT_EQ(load_sinogram(dir.path() / "sinogram.csv").rows(), 6);
  const std::string first = slurp(dir.path() / "sinogram_noisy.csv");
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "6", "--noise", "0.05", "--seed", "7"}).code, 0);
  EXPECT_EQ(slurp(dir.path() / "sinogram_noisy.csv"), first);
  EXPECT_NE(first, slurp(dir.path() / "sinogram.csv"));
}

TEST(Cli, MissingInputIsIoErrorNamingPath) {
  TempDir dir("io");
  const std::string d = dir.path().string();
  const Outcome p = run({"project", "--dir", d, "--projections", "3"});
  EXPECT_EQ(p.code, 1);
  EXPECT_NE(p.err.find("phantom.csv"), std::string::npos);
  const Outcome s = run({"solve", "--dir", d});
  EXPECT_EQ(s.code, 1);
  EXPECT_NE(s.err.find("qubo.json"), std::string::npos);
  const Outcome c = run({"compare", "--dir", d});
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.err.find("phantom.csv"), std::string::npos);
}

TEST(Cli, BuildRecordsTargetEnergy) {
  TempDir dir("build");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "6", "--levels", "1,2,3"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "3"}).code, 0);
  ASSERT_EQ(run({"build", "--dir", d, "--a", "1", "--b", "2"}).code, 0);
  const auto meta = nlohmann::json::parse(slurp(dir.path() / "qubo.meta.json"));
  EXPECT_EQ(meta["b"], 2.0);
  EXPECT_EQ(meta["num_vars"], 6 * 6 * 3);
  const Image img = load_image(dir.path() / "phantom.csv");
  const Sinogram p = load_sinogram(dir.path() / "sinogram.csv");
  const double expected = -tomoqubo::testing::sum_squares(p) + 2 * tomoqubo::testing::tv_squared_loops(img);
  EXPECT_TRUE(tomoqubo::testing::near_rel(meta["target_energy"].get<double>(), expected, 1e-9));
  EXPECT_TRUE(tomoqubo::testing::near_rel(meta["truth_energy"].get<double>(), expected, 1e-6));
  EXPECT_EQ(import_qubo(dir.path() / "qubo.json").num_vars(), 108);
}

TEST(Cli, BuildValidationErrors) {
  TempDir dir("bval");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "6", "--levels", "1,2,3"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "3"}).code, 0);
  EXPECT_EQ(run({"build", "--dir", d, "--a", "0", "--b", "0"}).code, 3);
  const Outcome mismatch = run({"build", "--dir", d, "--levels", "1,2.5,3"});
  EXPECT_EQ(mismatch.code, 3);
  EXPECT_NE(mismatch.err.find("representable"), std::string::npos);
  EXPECT_EQ(run({"build", "--dir", d, "--a", "-1"}).code, 3);
}

TEST(Cli, ExactSolveRefusesLargeModels) {
  TempDir dir("exact");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "5", "--levels", "1"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "3"}).code, 0);
  ASSERT_EQ(run({"build", "--dir", d}).code, 0);
  const Outcome o = run({"solve", "--dir", d, "--exact"});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("24"), std::string::npos);
}

TEST(Cli, ExactSolveOnTinyPhantom) {
  TempDir dir("tiny");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "4", "--levels", "1"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "4"}).code, 0);
  ASSERT_EQ(run({"build", "--dir", d}).code, 0);
  ASSERT_EQ(run({"solve", "--dir", d, "--exact"}).code, 0);
  ASSERT_EQ(run({"reconstruct", "--dir", d, "--label", "exact"}).code, 0);
  EXPECT_TRUE((load_image(dir.path() / "recon_exact.csv") == load_image(dir.path() / "phantom.csv")).all());
}

TEST(Cli, FullPipelineSixteenPixels) {
  TempDir dir("full");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "16", "--levels", "1", "--thresholds", "0.1"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "4"}).code, 0);
  ASSERT_EQ(run({"build", "--dir", d, "--a", "1", "--b", "1"}).code, 0);
  ASSERT_EQ(run({"solve", "--dir", d, "--restarts", "20", "--sweeps", "1000", "--seed", "1"}).code, 0);
  ASSERT_EQ(run({"reconstruct", "--dir", d}).code, 0);
  ASSERT_EQ(run({"baseline", "--dir", d, "--method", "fbp"}).code, 0);
  const Outcome o = run({"compare", "--dir", d});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto report = nlohmann::json::parse(slurp(dir.path() / "compare.json"));
  ASSERT_EQ(report.size(), 2U);
  EXPECT_EQ(report[0]["method"], "qcstr");
  EXPECT_EQ(report[0]["abs_error"], 0.0);
  EXPECT_EQ(report[0]["error_free"], true);
  EXPECT_EQ(report[1]["method"], "fbp");
  EXPECT_GT(report[1]["abs_error"].get<double>(), 0.0);
  EXPECT_NE(o.out.find("qcstr"), std::string::npos);
}

TEST(Cli, CompareWithOnlyFbp) {
  TempDir dir("fbp");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "8"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "4"}).code, 0);
  ASSERT_EQ(run({"baseline", "--dir", d, "--method", "fbp"}).code, 0);
  const Outcome o = run({"compare", "--dir", d});
  ASSERT_EQ(o.code, 0);
  const std::string header = o.out.substr(0, o.out.find('\n'));
  EXPECT_NE(header.find("fbp"), std::string::npos);
  EXPECT_EQ(header.find("sart"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir.path() / "compare.json")).size(), 1U);
}

TEST(Cli, PipelineIsByteIdenticalOnRerun) {
  TempDir a("det_a"), b("det_b");
  pipeline(a.path().string());
  pipeline(b.path().string());
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a.path())) names.push_back(e.path().filename().string());
  EXPECT_GE(names.size(), 20U);
  for (const auto& n : names) EXPECT_EQ(slurp(a.path() / n), slurp(b.path() / n)) << n;
  // Re-running inside the same directory leaves every file unchanged too.
  std::map<std::string, std::string> before;
  for (const auto& n : names) before[n] = slurp(a.path() / n);
  pipeline(a.path().string());
  for (const auto& n : names) EXPECT_EQ(slurp(a.path() / n), before[n]) << n;
}

TEST(Cli, SolveLogsEachRestartAndTimingIsOptIn) {
  TempDir dir("log");
  const std::string d = dir.path().string();
  ASSERT_EQ(run({"phantom", "--dir", d, "--size", "6"}).code, 0);
  ASSERT_EQ(run({"project", "--dir", d, "--projections", "3"}).code, 0);
  ASSERT_EQ(run({"build", "--dir", d}).code, 0);
  const Outcome o = run({"solve", "--dir", d, "--restarts", "3", "--sweeps", "10", "--threads", "1"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 3);
  EXPECT_EQ(slurp(dir.path() / "solve.json").find("elapsed_ms"), std::string::npos);
  ASSERT_EQ(run({"solve", "--dir", d, "--restarts", "1", "--sweeps", "10", "--timing"}).code, 0);
  EXPECT_NE(slurp(dir.path() / "solve.json").find("elapsed_ms"), std::string::npos);
}
