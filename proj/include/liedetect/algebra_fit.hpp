#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liedetect/lie_pca.hpp"
#include "liedetect/optimizer.hpp"
#include "liedetect/rep_catalog.hpp"

namespace liedetect {

struct FitCandidate {
  RepresentationType rep;
  Frame base_frame;  // orthonormal, block-diagonal
};

FitCandidate make_candidate(const RepresentationType& rep, int n);

struct CandidateCost {
  RepresentationType rep;
  double cost = 0.0;
};

struct FitResult {
  RepresentationType rep;
  Mat conjugator;
  double cost = 0.0;
  std::string objective;  // "stiefel", "grassmann", "so2-closed-form", "torus-closed-form"
  Frame fitted_frame;     // O * base * O^T
  Frame generators;       // O * group_generators(rep) * O^T, with the fixed parameter domains
  std::vector<CandidateCost> all_costs;  // ascending by cost
  double reduction_residual = 0.0;       // torus closed form only
};

// sum_j |Lambda(O C_j O^T)|^2 over the candidate frame C.
double cost_stiefel(const LiePcaOperator& op, const Frame& base, const Mat& o, Mat* egrad = nullptr);

// The Stiefel cost in the coordinates of skew_basis(n): for skew A, |Lambda(A)|^2 = s^T gram s
// with s the coordinates of A. Gives the same value and gradient as cost_stiefel on skew frames
// at O(n^3) per evaluation.
struct SkewQuadratic {
  int n = 0;
  Mat gram;

  static SkewQuadratic from(const LiePcaOperator& op);
  double cost(const Frame& base, const Mat& o, Mat* egrad = nullptr) const;
};

// Squared Frobenius distance between the projections onto span(bottom) and span(O C O^T),
// i.e. 2d - 2 sum <A_i, O C_j O^T>^2.
double cost_grassmann(const Frame& bottom, const Frame& base, const Mat& o, Mat* egrad = nullptr);

// f(x, y) = |x/|x| - y/|y||^2
double normalized_gap(const Vec& x, const Vec& y);

FitResult fit_so2_closed_form(const Mat& bottom_matrix, const std::vector<RepresentationType>& types);

struct TorusFitConfig {
  OptimizerConfig optimizer{.restarts = 3, .max_iters = 3000, .gradient_norm_tol = 1e-9};
  double residual_threshold = 0.25;  // per frame element
};

// Sum over the frame of the squared norm of O^T A_i O outside the 2x2 diagonal blocks.
double off_block_cost(const Frame& frame, const Mat& o, Mat* egrad = nullptr);

// Rates rho (d x m) of the simultaneous reduction at O: rho(i, k) = (O^T A_i O)(2k+1, 2k).
Mat block_rates_at(const Frame& frame, const Mat& o);

// min over signed coordinate permutations s of |P_rates - s(P_lattice)|^2, both m x m row-span projections.
struct LatticeMatch {
  double cost = 0.0;
  std::vector<int> permutation;  // rate column a corresponds to lattice column permutation[a]
  std::vector<int> signs;
};
LatticeMatch match_lattice(const Mat& rates, const Mat& lattice_projection);

FitResult fit_torus_closed_form(const Frame& bottom_frame, const std::vector<RepresentationType>& types,
                                const TorusFitConfig& config = {});

enum class FitMode { Auto, Stiefel, Grassmann };
FitMode parse_fit_mode(const std::string& text);
std::string fit_mode_name(FitMode mode);

struct FitConfig {
  FitMode mode = FitMode::Auto;
  int w_max = 4;
  OptimizerConfig optimizer;
  TorusFitConfig torus;
  std::optional<std::vector<RepresentationType>> candidates;  // overrides the catalog
};

FitResult fit(const LiePcaOperator& op, const Group& group, int n, const FitConfig& config);

}  // namespace liedetect
