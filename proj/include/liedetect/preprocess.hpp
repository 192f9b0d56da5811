#pragma once

#include "liedetect/matrix_kernel.hpp"
#include "liedetect/types.hpp"

namespace liedetect {

Mat covariance(const PointCloud& cloud);

struct PreprocessResult {
  PointCloud cloud;         // orthonormalized, retained_dimension coordinates
  Mat whitening;            // M = sqrt(pinv(Sigma)) in input coordinates (n x n)
  Mat coordinates;          // r x n isometry applied after M (identity when r = n)
  Mat unwhitening;          // n x n, sqrt(Sigma) on the retained eigenspace
  Vec center;               // subtracted mean (zero unless centering was requested)
  int retained_dimension = 0;
  Vec covariance_spectrum;  // descending
  double epsilon = 0.0;

  // Linear map sending input points (columns) to output coordinates.
  Mat transform() const { return coordinates * whitening; }
  // Maps output-coordinate rows back to the input space.
  Mat to_input(const Mat& rows) const;
};

// epsilon <= 0 selects the default 1e-9 * (top covariance eigenvalue).
PreprocessResult orthonormalize(const PointCloud& cloud, double epsilon, bool center = false);

PointCloud project_to_dimension(const PointCloud& cloud, int target_dim);

// Epsilon halfway (geometrically) between the k-th and (k+1)-th covariance eigenvalues.
double epsilon_for_dimension(const PointCloud& cloud, int target_dim);

}  // namespace liedetect
