#pragma once

#include <functional>
#include <optional>

#include "liedetect/matrix_kernel.hpp"
#include "liedetect/types.hpp"

namespace liedetect {

struct LocalPcaConfig {
  int intrinsic_dim = 1;
  std::optional<double> radius;    // exactly one of radius / k_neighbors
  std::optional<int> k_neighbors;  // neighbours besides the centre point
};

// Neighbourhood Y of point i. The centre itself always belongs to Y.
std::vector<Eigen::Index> neighborhood(const PointCloud& cloud, Eigen::Index i, const LocalPcaConfig& config);

Mat local_covariance(const PointCloud& cloud, Eigen::Index i, const LocalPcaConfig& config);

// I minus the projection onto the top intrinsic_dim eigenvectors of the local covariance.
Mat normal_projection_estimate(const PointCloud& cloud, Eigen::Index i, const LocalPcaConfig& config);

// Exact normal projection at a point, used in place of local PCA.
using NormalProvider = std::function<Mat(const Vec& x, Eigen::Index index)>;

struct LiePcaOperator {
  int n = 0;
  Mat matrix;        // n^2 x n^2, acting on column-major vec(A)
  Vec eigenvalues;   // ascending
  Mat eigenvectors;  // columns

  Mat apply(const Mat& a) const;
  Mat eigen_matrix(Eigen::Index k) const;  // k-th eigenvector reshaped to n x n
};

inline constexpr int kMaxLiePcaDimension = 32;

LiePcaOperator build_lie_pca(const PointCloud& cloud, const LocalPcaConfig& config,
                             const NormalProvider& normals_override = nullptr);

// Ascending eigenvalues; with restrict_skew the operator is first compressed onto so(n).
Vec spectrum_report(const LiePcaOperator& op, bool restrict_skew);

// Number d of eigenvalues sitting below the first jump by gap_ratio at the bottom of the
// spectrum (the scan covers the lower half). 0 when no such jump exists.
int estimate_symmetry_dimension(const Vec& ascending, double gap_ratio = 5.0);

// Bottom d eigen-matrices, skew-symmetrized and Gram-Schmidt orthonormalized.
Frame bottom_frame(const LiePcaOperator& op, int d, bool restrict_skew = false);

// Matrix of the compression of op onto so(n) in the basis skew_basis(n).
Mat skew_restriction(const LiePcaOperator& op);

}  // namespace liedetect
