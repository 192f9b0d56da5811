#pragma once

#include <cstdint>
#include <functional>

#include "liedetect/types.hpp"

namespace liedetect {

enum class StepRule { Backtracking, Fixed };

struct OptimizerConfig {
  int restarts = 5;  // per component of O(n)
  int max_iters = 2000;
  double gradient_norm_tol = 1e-7;
  StepRule step_rule = StepRule::Backtracking;
  double fixed_step = 1e-2;
  std::uint64_t seed = 0;
  bool both_components = true;
};

// Returns f(O); when egrad is non-null it also receives the Euclidean gradient dF/dO.
using OrthogonalCost = std::function<double(const Mat& o, Mat* egrad)>;

struct OptimizeResult {
  Mat o;
  double cost = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // false when max_iters was hit
};

// Projection of a Euclidean gradient onto the tangent space of O(n) at o.
Mat riemannian_gradient(const Mat& o, const Mat& egrad);

// Q factor of a QR factorization with non-negative diagonal in R.
Mat qr_retraction(const Mat& o, const Mat& tangent);

// Haar-distributed element of SO(n) drawn from a seeded generator.
Mat haar_special_orthogonal(Eigen::Index n, std::uint64_t seed);

// Single descent run from o0. history, when given, receives the cost after every iteration.
OptimizeResult descend(const OrthogonalCost& cost, const Mat& o0, const OptimizerConfig& config,
                       std::vector<double>* history = nullptr);

// Best of config.restarts random starts on SO(n) and, if enabled, as many on the other component.
OptimizeResult optimize_orthogonal(const OrthogonalCost& cost, Eigen::Index n, const OptimizerConfig& config);

}  // namespace liedetect
