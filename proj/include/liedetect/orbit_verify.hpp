#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "liedetect/algebra_fit.hpp"
#include "liedetect/transport.hpp"
#include "liedetect/types.hpp"

namespace liedetect {

// How group elements are drawn: exp(sum t_i G_i) with t_i in [0, period_i) for Box, or
// exp(theta u.G) with (cos(theta/2), sin(theta/2) u) a point of S^3 for Haar (su(2) generators).
struct OrbitParametrization {
  enum class Domain { Box, Haar };
  Frame generators;
  Domain domain = Domain::Box;
  Vec periods;
};

OrbitParametrization parametrization_for(const FitResult& fit);

// Box domain whose side is coverage_radius in every direction; the d = 1 case is a regular grid.
OrbitParametrization box_parametrization(const Frame& frame, double coverage_radius);

// Group elements, K of them, drawn from a low-discrepancy sequence over the domain.
std::vector<Mat> orbit_elements(const OrbitParametrization& param, Eigen::Index k, std::uint64_t seed = 0);

struct OrbitSample {
  Vec base_point;
  Mat points;  // K x n
};

OrbitSample sample_orbit(const OrbitParametrization& param, const Vec& x, Eigen::Index k, std::uint64_t seed = 0);
OrbitSample sample_orbit(const Frame& frame, const Vec& x, Eigen::Index k, double coverage_radius, std::uint64_t seed = 0);

Mat apply_elements(const std::vector<Mat>& elements, const Vec& x);

// sup over rows a of A of the distance from a to the rows of B.
double hausdorff_one_sided(const Mat& a, const Mat& b);
double hausdorff_symmetric(const Mat& a, const Mat& b);

// Union of per-point orbit samples, each point of the cloud contributing weight 1/N.
WeightedPointSet average_orbit_measure(const PointCloud& cloud, const OrbitParametrization& param,
                                       Eigen::Index per_point_k, std::uint64_t seed = 0);

enum class BasePointMode { First, Best };
enum class Verdict { Success, NonTransitiveSuspected, Fail };
std::string verdict_name(Verdict v);
BasePointMode parse_base_point_mode(const std::string& text);

struct Thresholds {
  double one_sided = 0.35;
  double symmetric = 0.42;
  double reverse_one_sided = 0.70;  // HD(O -> X) bound for the non-transitive pattern
};

struct VerifyConfig {
  BasePointMode base_point = BasePointMode::First;
  Eigen::Index orbit_samples = 0;  // 0 selects a default from the group dimension
  bool compute_w2 = false;
  std::uint64_t seed = 0;
  Thresholds thresholds;
};

Eigen::Index default_orbit_samples(int group_dimension);

struct VerificationReport {
  double hausdorff_in_to_orbit = 0.0;
  double hausdorff_orbit_to_in = 0.0;
  double hausdorff_symmetric = 0.0;
  std::optional<double> wasserstein2;
  Verdict verdict = Verdict::Fail;
  bool symmetric_below_threshold = false;
  Eigen::Index base_point_index = 0;
  Eigen::Index orbit_samples = 0;
  Thresholds thresholds;
};

VerificationReport verify(const PointCloud& cloud, const FitResult& fit, const VerifyConfig& config = {});

}  // namespace liedetect
