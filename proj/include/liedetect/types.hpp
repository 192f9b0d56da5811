#pragma once

#include <Eigen/Dense>
#include <vector>

namespace liedetect {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IMat = Eigen::MatrixXi;

// A tuple of n x n matrices. Frames produced by the library are skew-symmetric
// and Frobenius-orthonormal; intermediate tuples may be neither.
using Frame = std::vector<Mat>;

enum class Stage { Raw, Projected, Orthonormalized };

// Points are stored as rows.
struct PointCloud {
  Mat points;
  Stage stage = Stage::Raw;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

}  // namespace liedetect
