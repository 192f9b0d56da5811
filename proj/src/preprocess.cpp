#include "liedetect/preprocess.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

#include "liedetect/errors.hpp"

namespace liedetect {

namespace {

void require_cloud(const PointCloud& cloud) {
  if (cloud.size() < 1) throw Error(ErrorCode::EmptySet, "point cloud is empty");
  if (cloud.dim() < 1) throw Error(ErrorCode::EmptyAmbient, "point cloud has no coordinates");
  if (!cloud.points.allFinite()) throw Error(ErrorCode::InvalidMatrix, "point cloud has non-finite coordinates");
}

Vec descending(const Vec& ascending) { return ascending.reverse(); }

}  // namespace

Mat covariance(const PointCloud& cloud) {
  require_cloud(cloud);
  const Mat& x = cloud.points;
  Mat c = (x.transpose() * x) / static_cast<double>(x.rows());
  return 0.5 * (c + c.transpose());
}

PreprocessResult orthonormalize(const PointCloud& cloud, double epsilon, bool center) {
  require_cloud(cloud);
  PreprocessResult out;
  const Eigen::Index n = cloud.dim();
  out.center = Vec::Zero(n);
  PointCloud work = cloud;
  if (center) {
    out.center = cloud.points.colwise().mean().transpose();
    work.points = cloud.points.rowwise() - out.center.transpose();
  }
  const Mat sigma = covariance(work);
  const SymmetricEigen eig = symmetric_eigendecomposition(sigma);
  out.covariance_spectrum = descending(eig.values);
  const double top = eig.values(n - 1);
  if (epsilon <= 0.0) epsilon = 1e-9 * std::max(top, 0.0);
  out.epsilon = epsilon;

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = n - 1; i >= 0; --i)
    if (eig.values(i) > epsilon) kept.push_back(i);
  if (kept.empty()) throw Error(ErrorCode::DegenerateCloud, "no covariance eigenvalue exceeds epsilon");
  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
  out.retained_dimension = static_cast<int>(r);

  Mat basis(n, r);
  Vec lam(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    basis.col(k) = eig.vectors.col(kept[k]);
    lam(k) = eig.values(kept[k]);
  }
  // output covariance is I/r, so points sit near the unit sphere
  const double rr = static_cast<double>(r);
  out.whitening = basis * (lam * rr).cwiseInverse().cwiseSqrt().asDiagonal() * basis.transpose();
  out.unwhitening = basis * (lam * rr).cwiseSqrt().asDiagonal() * basis.transpose();
  out.coordinates = (r == n) ? Mat::Identity(n, n) : Mat(basis.transpose());

  out.cloud.points = work.points * out.transform().transpose();
  out.cloud.stage = Stage::Orthonormalized;
  return out;
}

Mat PreprocessResult::to_input(const Mat& rows) const {
  Mat back = rows * coordinates * unwhitening;  // unwhitening is symmetric
  return back.rowwise() + center.transpose();
}

double epsilon_for_dimension(const PointCloud& cloud, int target_dim) {
  require_cloud(cloud);
  const Eigen::Index n = cloud.dim();
  if (target_dim < 1 || target_dim > n)
    throw Error(ErrorCode::Configuration, "target dimension must lie in [1, " + std::to_string(n) + "]");
  const Vec lam = descending(symmetric_eigendecomposition(covariance(cloud)).values);
  const double above = lam(target_dim - 1);
  const double below = target_dim < n ? std::max(lam(target_dim), 0.0) : 0.0;
  if (above - below < 1e-12)
    spdlog::warn("AmbiguousCut: eigenvalues {} and {} tie at the requested cut; cutting by index", above, below);
  if (below <= 0.0) return 0.5 * above;
  return std::sqrt(above * below);
}

PointCloud project_to_dimension(const PointCloud& cloud, int target_dim) {
  require_cloud(cloud);
  const Eigen::Index n = cloud.dim();
  if (target_dim < 1 || target_dim > n)
    throw Error(ErrorCode::Configuration, "target dimension must lie in [1, " + std::to_string(n) + "]");
  const SymmetricEigen eig = symmetric_eigendecomposition(covariance(cloud));
  if (target_dim < n && eig.values(n - target_dim) - eig.values(n - target_dim - 1) < 1e-12)
    spdlog::warn("AmbiguousCut: covariance eigenvalues tie at index {}; cutting by index", target_dim);
  Mat top(n, target_dim);
  for (int k = 0; k < target_dim; ++k) top.col(k) = eig.vectors.col(n - 1 - k);
  PointCloud out;
  out.points = cloud.points * top;
  out.stage = Stage::Projected;
  return out;
}

}  // namespace liedetect
