#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "liedetect/pipeline.hpp"
#include "liedetect/report.hpp"

namespace liedetect {
namespace {

PointCloud stretched_curve(Eigen::Index count, std::uint64_t seed) {
  OrbitSpec s;
  s.rep = so2_type({1, 4});
  s.n = 4;
  s.count = count;
  s.seed = seed;
  Vec x(4);
  x << 1.0, 0.0, 1.0, 0.0;
  s.base_point = x;
  Mat stretch = Mat::Identity(4, 4);
  stretch(1, 1) = 2.0;
  s.linear_map = stretch;
  return sample_orbit_uniform(s);
}

PipelineConfig so2_config() {
  PipelineConfig c;
  c.groups = {Group{GroupKind::SO2, 1}};
  c.allow_zero = true;
  c.w_max = 4;
  return c;
}

TEST(Pipeline, StretchedCurveIsRecognised) {
  const PipelineReport r = run_pipeline(stretched_curve(300, 1), so2_config());
  ASSERT_TRUE(r.selected.has_value());
  const GroupOutcome& o = r.outcomes[*r.selected];
  ASSERT_TRUE(o.fit && o.verification);
  EXPECT_EQ(o.fit->rep.weights, (std::vector<int>{1, 4}));
  EXPECT_EQ(o.verification->verdict, Verdict::Success);
  EXPECT_EQ(r.estimated_symmetry_dimension, 1);
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Pipeline, FitIsEquivariantUnderRotation) {
  const PointCloud cloud = stretched_curve(300, 2);
  const Mat rot = haar_special_orthogonal(4, 5);
  const PipelineReport a = run_pipeline(cloud, so2_config());
  const PipelineReport b = run_pipeline(PointCloud{cloud.points * rot.transpose()}, so2_config());
  ASSERT_TRUE(a.outcomes[0].fit && b.outcomes[0].fit);
  EXPECT_EQ(a.outcomes[0].fit->rep, b.outcomes[0].fit->rep);
}

TEST(Pipeline, ConfigurationErrors) {
  PipelineConfig c = so2_config();
  c.radius = 0.1;
  c.k_neighbors = 3;
  EXPECT_THROW(validate(c), Error);
  c = so2_config();
  c.orthonormalize = false;
  c.center = true;
  EXPECT_THROW(validate(c), Error);
  c = so2_config();
  c.groups.clear();
  const PipelineReport r = run_pipeline(stretched_curve(50, 3), c);
  EXPECT_EQ(r.exit_code(), 3);
}

TEST(Pipeline, NeighbourDefaultFollowsIntrinsicDimension) {
  PipelineConfig c;
  c.groups = {Group{GroupKind::SU2, 1}};
  EXPECT_EQ(local_pca_config(c).intrinsic_dim, 3);
  EXPECT_EQ(*local_pca_config(c).k_neighbors, 8);
  c.groups = {Group{GroupKind::SO2, 1}};
  EXPECT_EQ(*local_pca_config(c).k_neighbors, 4);
  c.radius = 0.2;
  EXPECT_FALSE(local_pca_config(c).k_neighbors.has_value());
}

TEST(Pipeline, GroupsByDimension) {
  EXPECT_EQ(groups_of_dimension(1), (std::vector<Group>{Group{GroupKind::SO2, 1}}));
  EXPECT_EQ(groups_of_dimension(2), (std::vector<Group>{Group{GroupKind::Torus, 2}}));
  EXPECT_EQ(groups_of_dimension(3).size(), 2u);  // SU2 and SO3
}

TEST(Pipeline, DensityPointsReturnInInputCoordinates) {
  const PointCloud cloud = stretched_curve(200, 4);
  DensityConfig dc;
  dc.count = 100;
  const DensitySample s = density_from_input(cloud, so2_config(), dc);
  ASSERT_EQ(s.cloud.size(), 100);
  ASSERT_EQ(s.cloud.dim(), 4);
  // new points sit next to the input curve, not next to its whitened image
  EXPECT_LT(hausdorff_one_sided(s.cloud.points, cloud.points), 0.5);
}

TEST(Report, RepresentationJsonRoundTrip) {
  const std::vector<RepresentationType> reps = {so2_type({1, 4}), enumerate_torus_types(3, 2, 2)[7],
                                                partition_type(GroupKind::SU2, {3, 4}),
                                                partition_type(GroupKind::SO3, {1, 3})};
  for (const RepresentationType& r : reps) EXPECT_EQ(representation_from_json(to_json(r)), r) << r.label();
}

TEST(Report, CatalogCounts) {
  EXPECT_EQ(catalog_json(Group{GroupKind::SO2, 1}, 4, 4, true)["count"], 6);
  EXPECT_EQ(catalog_json(Group{GroupKind::Torus, 2}, 6, 2, false)["count"], 18);
  EXPECT_EQ(catalog_json(Group{GroupKind::SU2, 1}, 7, 4, false)["count"], 6);
}

TEST(Report, PipelineJsonCarriesTheVerdict) {
  const PipelineReport r = run_pipeline(stretched_curve(300, 1), so2_config());
  const nlohmann::json j = to_json(r, false);
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_EQ(j["selected"]["group"], "SO2");
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_EQ(j["config"]["orthonormalize"], true);
}

TEST(Report, CsvRoundTrip) {
  Mat m(3, 2);
  m << 1.5, -2.0, 3.25, 4.0, 1e-7, 6.0;
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "liedetect_csv_roundtrip.csv";
  write_csv(path.string(), m);
  const PointCloud back = read_csv(path.string());
  std::filesystem::remove(path);
  EXPECT_LT((back.points - m).norm(), 1e-15);
}

TEST(Report, CsvErrors) {
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "liedetect_csv_ragged.csv";
  {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    std::fputs("1,2\n3\n", f);
    std::fclose(f);
  }
  EXPECT_THROW(read_csv(path.string()), Error);
  std::filesystem::remove(path);
  EXPECT_THROW(read_csv("/nonexistent/cloud.csv"), Error);
}

TEST(Report, OrbitSpecFromJson) {
  const nlohmann::json j = {{"rep", to_json(so2_type({1, 2}))}, {"n", 4}, {"count", 25}, {"sigma", 0.01}, {"seed", 3}};
  const OrbitSpec s = orbit_spec_from_json(j);
  EXPECT_EQ(s.rep, so2_type({1, 2}));
  EXPECT_EQ(s.count, 25);
  EXPECT_DOUBLE_EQ(s.noise_sigma, 0.01);
  EXPECT_EQ(sample_orbit_uniform(s).size(), 25);
}

}  // namespace
}  // namespace liedetect
