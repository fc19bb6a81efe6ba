#include "support.hpp"

#include "tomoqubo/metrics.hpp"
#include "tomoqubo/qubo.hpp"
#include "tomoqubo/solver.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace tomoqubo;
using tomoqubo::testing::near_rel;

TEST(AbsError, Examples) {
  const Image a = Image::Constant(3, 3, 1.0);
  EXPECT_EQ(abs_error(a, a), 0.0);
  Image b = a;
  b(1, 2) = 2.0;
  EXPECT_EQ(abs_error(b, a), 1.0);
  EXPECT_THROW(abs_error(a, Image::Zero(3, 2)), std::invalid_argument);
}

TEST(AbsError, IsAMetric) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    Image x(4, 5), y(4, 5), z(4, 5);
    for (auto* img : {&x, &y, &z})
      for (auto& v : img->reshaped()) v = u(rng);
    EXPECT_GE(abs_error(x, y), 0.0);
    EXPECT_EQ(abs_error(x, y), abs_error(y, x));
    EXPECT_LE(abs_error(x, z), abs_error(x, y) + abs_error(y, z) + 1e-12);
    EXPECT_GT(abs_error(x, y), 0.0);
  }
}

TEST(TotalVariation, Examples) {
  EXPECT_EQ(tv_squared(Image::Constant(4, 4, 2.0)), 0.0);
  EXPECT_EQ(tv_absolute(Image::Constant(4, 4, 2.0)), 0.0);
  Image step(1, 2);
  step << 0, 1;
  EXPECT_EQ(tv_squared(step), 1.0);
  EXPECT_EQ(tv_absolute(step), 1.0);
  Image checker(2, 2);
  checker << 0, 1, 1, 0;
  EXPECT_EQ(tv_squared(checker), 4.0);
  EXPECT_EQ(tv_absolute(checker), 4.0);
  Image tall(3, 1);
  tall << 0, 3, 1;
  EXPECT_EQ(tv_squared(tall), 13.0);
  EXPECT_EQ(tv_absolute(tall), 5.0);
}

TEST(TotalVariation, MatchesLoopOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Image img = tomoqubo::testing::random_quantized(rng, 1 + trial % 7, 1 + trial % 5, {1, 2.5});
    EXPECT_NEAR(tv_squared(img), tomoqubo::testing::tv_squared_loops(img), 1e-12);
  }
}

TEST(TotalVariation, SquaredVersusAbsolute) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Image unit = tomoqubo::testing::random_blocks(rng, 8, 8, {1}, 4);
    EXPECT_EQ(tv_squared(unit), tv_absolute(unit));
    const Image wide = tomoqubo::testing::random_quantized(rng, 6, 6, {1, 2, 3});
    EXPECT_GE(tv_squared(wide), tv_absolute(wide));
  }
}

TEST(TargetEnergy, ZeroPhantom) {
  const auto g = ProjectionGeometry::with_default_detector(5, 5, isometric_angles(3));
  const Image zero = Image::Zero(5, 5);
  EXPECT_EQ(target_energy(zero, forward_project(zero, build_system_matrix(g)), 1, 1), 0.0);
}

TEST(TargetEnergy, MatchesGroundTruthEnergy) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 6;
    const std::vector<double> lv = trial % 2 ? std::vector<double>{1} : std::vector<double>{1, 2, 3};
    const Image img = tomoqubo::testing::random_quantized(rng, n, n, lv);
    const auto g = ProjectionGeometry::with_default_detector(n, n, isometric_angles(3 + trial % 3));
    const SystemMatrix sm = build_system_matrix(g);
    const Sinogram p = forward_project(img, sm);
    const auto scheme = EncodingScheme::mac_difference(MacLevels(lv));
    const VariableMap map(n, n, scheme.bits_per_pixel());
    const QuboModel q1 = build_q1(p, sm, scheme, map);
    const QuboModel q2 = build_q2(scheme, map);
    const Bits x = encode_ground_truth(img, scheme);
    EXPECT_TRUE(near_rel(target_energy(img, p, 1, 0), energy(q1, x), 1e-9));
    for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 3.0}, {0.5, 0.0}})
      EXPECT_TRUE(near_rel(target_energy(img, p, a, b), energy(combine(q1, q2, a, b), x), 1e-9));
  }
}

TEST(TargetEnergy, EqualsBruteForceMinimumOnFourByFour) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const Image img = tomoqubo::testing::random_blocks(rng, 4, 4, {1}, 2);
    const auto g = ProjectionGeometry::with_default_detector(4, 4, isometric_angles(3));
    const SystemMatrix sm = build_system_matrix(g);
    const Sinogram p = forward_project(img, sm);
    const auto scheme = EncodingScheme::mac_difference(MacLevels({1}));
    const VariableMap map(4, 4, 1);
    const QuboModel q = combine(build_q1(p, sm, scheme, map), build_q2(scheme, map), 1, 1);
    const SolveResult r = brute_force(q);
    EXPECT_TRUE(near_rel(r.best_energy, target_energy(img, p, 1, 1), 1e-9));
    EXPECT_TRUE((decode(r.best_bits, scheme, map) == img).all());
    ++checked;
  }
  EXPECT_EQ(checked, 6);
}

TEST(Report, ErrorFreeAndSerialization) {
  const Image truth = Image::Ones(2, 2);
  Image off = truth;
  off(0, 0) = 0.5;
  std::vector<ReconstructionReport> reports{
      make_report("qcstr", "4 projections", truth, truth, 4, 1, 1, -10.0, -10.0),
      make_report("fbp", "4 projections", off, truth, 4),
      make_report("qcstr", "noisy", off, truth, 4, 1, 1),
  };
  EXPECT_TRUE(reports[0].error_free);
  EXPECT_FALSE(reports[1].error_free);
  EXPECT_EQ(reports[1].abs_error, 0.5);

  const auto doc = nlohmann::json::parse(reports_to_json(reports));
  ASSERT_EQ(doc.size(), 3U);
  EXPECT_EQ(doc[0]["method"], "qcstr");
  EXPECT_EQ(doc[0]["achieved_energy"], -10.0);
  EXPECT_TRUE(doc[1]["target_energy"].is_null());
  EXPECT_EQ(doc[1]["error_free"], false);

  const std::string table = reports_to_table(reports);
  const std::string expected =
      "Scenario             qcstr          fbp\n"
      "4 projections         0.00         0.50\n"
      "noisy                 0.50            -\n";
  EXPECT_EQ(table, expected);
}
