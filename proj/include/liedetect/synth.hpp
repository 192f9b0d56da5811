#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "liedetect/orbit_verify.hpp"
#include "liedetect/rep_catalog.hpp"
#include "liedetect/types.hpp"

namespace liedetect {

// Parameters of a Haar-distributed group element: angles for SO2 / tori, a unit quaternion for SU2 / SO3.
struct GroupElement {
  Vec angles;
  Eigen::Vector4d quaternion = Eigen::Vector4d(1, 0, 0, 0);
};

GroupElement haar_element(const Group& group, std::mt19937_64& rng);

// phi(g) for the representation, built from group_generators(rep, n).
Mat representation_matrix(const RepresentationType& rep, int n, const GroupElement& g);

struct OrbitSpec {
  RepresentationType rep;
  int n = 0;
  std::optional<Vec> base_point;    // default: mass 1/sqrt(p) on each of the p blocks
  std::optional<Mat> linear_map;    // applied to every orbit point before noise (n x n)
  Eigen::Index count = 100;
  double noise_sigma = 0.0;
  Eigen::Index outliers = 0;        // uniform in [-1, 1]^n, appended after the orbit points
  std::uint64_t seed = 0;
};

Vec default_base_point(const RepresentationType& rep, int n, std::uint64_t seed);

// Generator seeded from (seed, index) alone, so samples do not depend on evaluation order.
std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index);

PointCloud sample_orbit_uniform(const OrbitSpec& spec);

enum class SamplerMode { MultiSourceLiePca, MultiSourceLieDetect, SingleSourceLieDetect };
SamplerMode parse_sampler_mode(const std::string& text);
std::string sampler_mode_name(SamplerMode mode);

// (N (l + 2) / 4)^(-1 / (l + 4))
double silverman_factor(Eigen::Index n_points, int intrinsic_dim);

// Largest distance from a point of the cloud to its nearest other point.
double max_nearest_neighbor_distance(const Mat& points);

struct DensityConfig {
  SamplerMode mode = SamplerMode::SingleSourceLieDetect;
  Eigen::Index count = 500;
  int intrinsic_dim = 1;
  std::uint64_t seed = 0;
  std::optional<double> tau;       // default: max nearest-neighbour distance of the cloud
  std::optional<Vec> sigma;        // per-generator standard deviations, default from Silverman's rule
  int max_attempts = 100;
  double stall_fraction = 0.10;
};

struct DensitySample {
  PointCloud cloud;
  Eigen::Index capped = 0;  // points that exhausted max_attempts and fell back to their source
  double tau = 0.0;
  Vec sigma;
};

// Multi-source modes draw exp(sum t_k A_k) x_i with Gaussian t and x_i uniform in the cloud, using
// param.generators as A_k. The single-source mode sweeps param's domain from one random point.
DensitySample density_sample(const PointCloud& cloud, const OrbitParametrization& param, const DensityConfig& config);

}  // namespace liedetect
