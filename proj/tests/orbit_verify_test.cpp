#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "liedetect/errors.hpp"
#include "liedetect/matrix_kernel.hpp"
#include "liedetect/orbit_verify.hpp"
#include "liedetect/synth.hpp"
#include "test_support.hpp"

namespace liedetect {
namespace {

using testing::brute_hausdorff;
using testing::random_matrix;

FitResult planted_fit(const RepresentationType& rep, int n) {
  FitResult f;
  f.rep = rep;
  f.conjugator = Mat::Identity(n, n);
  f.fitted_frame = assemble_frame(rep, n);
  f.generators = group_generators(rep, n);
  return f;
}

TEST(OrbitSample, CircleFullPeriod) {
  const Frame frame = assemble_frame(so2_type({1}), 2);
  Vec x(2);
  x << 1.0, 0.0;
  const OrbitSample s = sample_orbit(frame, x, 8, 2.0 * std::numbers::pi * std::sqrt(2.0));
  ASSERT_EQ(s.points.rows(), 8);
  std::vector<double> angles;
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(s.points.row(i).norm(), 1.0, 1e-12);
    angles.push_back(std::atan2(s.points(i, 1), s.points(i, 0)));
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  EXPECT_NEAR(gap, 2.0 * std::numbers::pi / 8.0, 1e-9);
}

TEST(OrbitSample, EmptySampleIsAnError) {
  try {
    sample_orbit(assemble_frame(so2_type({1}), 2), Vec::Ones(2), 0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySample);
  }
}

TEST(OrbitSample, Su2CoverageIsConsistent) {
  const RepresentationType rep = partition_type(GroupKind::SU2, {5});
  const OrbitParametrization param = parametrization_for(planted_fit(rep, 5));
  const Vec x = default_base_point(rep, 5, 1);
  const OrbitSample a = sample_orbit(param, x, 5000, 1);
  const OrbitSample b = sample_orbit(param, x, 5000, 2);
  EXPECT_LT(hausdorff_symmetric(a.points, b.points), 0.15);
}

TEST(OrbitSample, PointsStayOnTheSphere) {
  const RepresentationType rep = torus_type(enumerate_torus_types(3, 2, 2)[4].lattice);
  const OrbitParametrization param = parametrization_for(planted_fit(rep, 6));
  const Vec x = default_base_point(rep, 6, 3);
  const OrbitSample s = sample_orbit(param, x, 300);
  for (Eigen::Index i = 0; i < s.points.rows(); ++i) EXPECT_NEAR(s.points.row(i).norm(), x.norm(), 1e-10);
}

TEST(Hausdorff, HandExamples) {
  Mat a(1, 2), b(1, 2);
  a << 0, 0;
  b << 3, 4;
  EXPECT_NEAR(hausdorff_one_sided(a, b), 5.0, 1e-12);
  std::mt19937_64 rng(1);
  const Mat big = random_matrix(20, 3, rng);
  EXPECT_NEAR(hausdorff_one_sided(big.topRows(7), big), 0.0, 1e-12);
}

TEST(Hausdorff, MatchesDoubleLoop) {
  std::mt19937_64 rng(2);
  const Mat a = random_matrix(20, 3, rng), b = random_matrix(30, 3, rng);
  EXPECT_NEAR(hausdorff_one_sided(a, b), brute_hausdorff(a, b), 1e-12);
  EXPECT_NEAR(hausdorff_symmetric(a, b), std::max(brute_hausdorff(a, b), brute_hausdorff(b, a)), 1e-12);
}

TEST(Hausdorff, EmptySet) {
  try {
    hausdorff_one_sided(Mat(0, 2), Mat::Ones(3, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySet);
  }
}

TEST(AverageMeasure, SinglePointIsOneOrbit) {
  const RepresentationType rep = so2_type({1, 2});
  const OrbitParametrization param = parametrization_for(planted_fit(rep, 4));
  Vec x(4);
  x << 0.5, 0.5, 0.5, 0.5;
  const PointCloud cloud{x.transpose(), Stage::Orthonormalized};
  const WeightedPointSet m = average_orbit_measure(cloud, param, 40, 3);
  const OrbitSample s = sample_orbit(param, x, 40, 3);
  EXPECT_LT((m.points - s.points).norm(), 1e-12);
  EXPECT_NEAR(m.weights.sum(), 1.0, 1e-12);
}

TEST(AverageMeasure, IsTheConcatenationOfOrbits) {
  const RepresentationType rep = so2_type({1, 3});
  const OrbitParametrization param = parametrization_for(planted_fit(rep, 4));
  std::mt19937_64 rng(4);
  const PointCloud cloud{random_matrix(3, 4, rng), Stage::Orthonormalized};
  const WeightedPointSet m = average_orbit_measure(cloud, param, 25, 5);
  ASSERT_EQ(m.points.rows(), 75);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const OrbitSample s = sample_orbit(param, cloud.points.row(i).transpose(), 25, 5);
    EXPECT_LT((m.points.middleRows(i * 25, 25) - s.points).norm(), 1e-12);
  }
}

TEST(Verify, ExactOrbitSucceeds) {
  const RepresentationType rep = so2_type({1, 4});
  OrbitSpec s;
  s.rep = rep;
  s.n = 4;
  s.count = 300;
  PointCloud cloud = sample_orbit_uniform(s);
  cloud.stage = Stage::Orthonormalized;
  const VerificationReport r = verify(cloud, planted_fit(rep, 4));
  EXPECT_EQ(r.verdict, Verdict::Success);
  // only the spacing of the orbit sample separates the cloud from it
  EXPECT_LT(r.hausdorff_in_to_orbit, 0.03);
  EXPECT_LT(r.hausdorff_orbit_to_in, 0.35);
  EXPECT_FALSE(r.wasserstein2.has_value());
}

TEST(Verify, WassersteinOnRequest) {
  // An evenly spaced orbit sample sits about L / (N sqrt 12) = 0.07 from the uniform measure;
  // i.i.d. points would sit about L / sqrt(6N) away.
  const RepresentationType rep = so2_type({1, 2});
  const FitResult fit = planted_fit(rep, 4);
  const OrbitSample grid = sample_orbit(parametrization_for(fit), default_base_point(rep, 4, 0), 40);
  const PointCloud cloud{grid.points, Stage::Orthonormalized};
  VerifyConfig vc;
  vc.compute_w2 = true;
  const VerificationReport r = verify(cloud, fit, vc);
  ASSERT_TRUE(r.wasserstein2.has_value());
  EXPECT_LT(*r.wasserstein2, 0.15);
}

TEST(Verify, WrongTypeFails) {
  OrbitSpec s;
  s.rep = so2_type({1, 4});
  s.n = 4;
  s.count = 300;
  PointCloud cloud = sample_orbit_uniform(s);
  cloud.stage = Stage::Orthonormalized;
  const VerificationReport r = verify(cloud, planted_fit(so2_type({0, 1}), 4));
  EXPECT_NE(r.verdict, Verdict::Success);
  EXPECT_GT(r.hausdorff_in_to_orbit, 0.35);
}

TEST(Verify, RawCloudIsRejected) {
  PointCloud cloud{Mat::Ones(4, 2), Stage::Raw};
  try {
    verify(cloud, planted_fit(so2_type({1}), 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RawCloud);
  }
}

TEST(Verify, VerdictNames) {
  EXPECT_EQ(verdict_name(Verdict::Success), "success");
  EXPECT_EQ(verdict_name(Verdict::NonTransitiveSuspected), "non-transitive-suspected");
  EXPECT_EQ(parse_base_point_mode("best"), BasePointMode::Best);
}

}  // namespace
}  // namespace liedetect
