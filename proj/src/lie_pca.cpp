#include "liedetect/lie_pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "liedetect/errors.hpp"
#include "liedetect/parallel.hpp"

namespace liedetect {

namespace {

void check_config(const PointCloud& cloud, const LocalPcaConfig& config) {
  if (config.radius.has_value() == config.k_neighbors.has_value())
    throw Error(ErrorCode::Configuration, "exactly one of radius / k_neighbors must be set");
  if (config.radius && !(*config.radius > 0.0)) throw Error(ErrorCode::Configuration, "radius must be positive");
  if (config.k_neighbors && *config.k_neighbors < 1) throw Error(ErrorCode::Configuration, "k_neighbors must be positive");
  if (config.intrinsic_dim < 1 || config.intrinsic_dim >= cloud.dim())
    throw Error(ErrorCode::Configuration, "intrinsic dimension must satisfy 1 <= l < n");
}

}  // namespace

std::vector<Eigen::Index> neighborhood(const PointCloud& cloud, Eigen::Index i, const LocalPcaConfig& config) {
  const Mat& x = cloud.points;
  const Eigen::Index n_pts = x.rows();
  Vec d2 = (x.rowwise() - x.row(i)).rowwise().squaredNorm();
  std::vector<Eigen::Index> out;
  if (config.radius) {
    const double r2 = (*config.radius) * (*config.radius);
    for (Eigen::Index j = 0; j < n_pts; ++j)
      if (j == i || d2(j) <= r2) out.push_back(j);
    return out;
  }
  const auto k = static_cast<Eigen::Index>(*config.k_neighbors);
  if (n_pts - 1 < 1) throw Error(ErrorCode::IsolatedPoint, "point " + std::to_string(i) + " has no neighbours");
  std::vector<Eigen::Index> idx;
  idx.reserve(n_pts - 1);
  for (Eigen::Index j = 0; j < n_pts; ++j)
    if (j != i) idx.push_back(j);
  const auto take = std::min<Eigen::Index>(k, static_cast<Eigen::Index>(idx.size()));
  std::partial_sort(idx.begin(), idx.begin() + take, idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return d2(a) < d2(b) || (d2(a) == d2(b) && a < b);
  });
  out.push_back(i);
  out.insert(out.end(), idx.begin(), idx.begin() + take);
  return out;
}

Mat local_covariance(const PointCloud& cloud, Eigen::Index i, const LocalPcaConfig& config) {
  check_config(cloud, config);
  if (i < 0 || i >= cloud.size()) throw Error(ErrorCode::Configuration, "centre index out of range");
  const auto nb = neighborhood(cloud, i, config);
  if (nb.empty()) throw Error(ErrorCode::IsolatedPoint, "empty neighbourhood");
  const Eigen::Index n = cloud.dim();
  Mat diff(static_cast<Eigen::Index>(nb.size()), n);
  for (size_t r = 0; r < nb.size(); ++r) diff.row(static_cast<Eigen::Index>(r)) = cloud.points.row(nb[r]) - cloud.points.row(i);
  return diff.transpose() * diff / static_cast<double>(nb.size());
}

Mat normal_projection_estimate(const PointCloud& cloud, Eigen::Index i, const LocalPcaConfig& config) {
  const Mat cov = local_covariance(cloud, i, config);
  const Eigen::Index n = cloud.dim();
  const int l = config.intrinsic_dim;
  const SymmetricEigen eig = symmetric_eigendecomposition(cov);
  const double scale = std::max(eig.values(n - 1), 0.0);
  if (!(eig.values(n - l) > 1e-12 * std::max(scale, 1e-300)) || scale == 0.0)
    throw Error(ErrorCode::TangentEstimationFailed,
                "local covariance at point " + std::to_string(i) + " has rank below " + std::to_string(l));
  const Mat tangent = eig.vectors.rightCols(l);
  return Mat::Identity(n, n) - tangent * tangent.transpose();
}

Mat LiePcaOperator::apply(const Mat& a) const {
  Eigen::Map<const Vec> v(a.data(), a.size());
  Vec w = matrix * v;
  return Eigen::Map<const Mat>(w.data(), n, n);
}

Mat LiePcaOperator::eigen_matrix(Eigen::Index k) const {
  Vec v = eigenvectors.col(k);
  return Eigen::Map<const Mat>(v.data(), n, n);
}

LiePcaOperator build_lie_pca(const PointCloud& cloud, const LocalPcaConfig& config, const NormalProvider& normals_override) {
  if (cloud.size() < 1) throw Error(ErrorCode::EmptySet, "point cloud is empty");
  const Eigen::Index n = cloud.dim();
  if (n > kMaxLiePcaDimension)
    throw Error(ErrorCode::Configuration, "LiePCA is limited to ambient dimension " + std::to_string(kMaxLiePcaDimension));
  if (!normals_override) check_config(cloud, config);
  for (Eigen::Index i = 0; i < cloud.size(); ++i)
    if (cloud.points.row(i).norm() == 0.0)
      throw Error(ErrorCode::ZeroPointInCloud, "point " + std::to_string(i) + " is the origin");

  // Normal projections are computed in parallel, the sum is accumulated in index order.
  const auto n_pts = static_cast<size_t>(cloud.size());
  std::vector<Mat> normals(n_pts);
  parallel_for(n_pts, [&](size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    normals[i] = normals_override ? normals_override(cloud.points.row(ii).transpose(), ii)
                                  : normal_projection_estimate(cloud, ii, config);
  });

  // Lambda(A) = (1/N) sum_i N_i A P_i, P_i = x x^T / |x|^2, so vec(Lambda(A)) = (1/N) sum kron(P_i, N_i) vec(A).
  const Eigen::Index n2 = n * n;
  Mat lam = Mat::Zero(n2, n2);
  for (size_t i = 0; i < n_pts; ++i) {
    const Vec u = cloud.points.row(static_cast<Eigen::Index>(i)).transpose().normalized();
    const Mat& nrm = normals[i];
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index a = 0; a < n; ++a) {
        const double w = u(a) * u(b);
        if (w != 0.0) lam.block(a * n, b * n, n, n).noalias() += w * nrm;
      }
  }
  lam /= static_cast<double>(n_pts);
  lam = 0.5 * (lam + lam.transpose());

  LiePcaOperator op;
  op.n = static_cast<int>(n);
  op.matrix = lam;
  const SymmetricEigen eig = symmetric_eigendecomposition(lam);
  op.eigenvalues = eig.values;
  op.eigenvectors = eig.vectors;
  return op;
}

Mat skew_restriction(const LiePcaOperator& op) {
  const Frame basis = skew_basis(op.n);
  const auto k = static_cast<Eigen::Index>(basis.size());
  Mat s(static_cast<Eigen::Index>(op.n) * op.n, k);
  for (Eigen::Index j = 0; j < k; ++j) s.col(j) = Eigen::Map<const Vec>(basis[j].data(), basis[j].size());
  Mat r = s.transpose() * op.matrix * s;
  return 0.5 * (r + r.transpose());
}

Vec spectrum_report(const LiePcaOperator& op, bool restrict_skew) {
  if (!restrict_skew) return op.eigenvalues;
  if (op.n < 2) return Vec(0);
  return symmetric_eigendecomposition(skew_restriction(op)).values;
}

int estimate_symmetry_dimension(const Vec& ascending, double gap_ratio) {
  const Eigen::Index len = ascending.size();
  if (len < 2) return 0;
  int best = 0;
  for (Eigen::Index d = 1; d <= len / 2; ++d) {
    const double lower = std::max(ascending(d - 1), 1e-12);
    if (ascending(d) / lower >= gap_ratio) best = static_cast<int>(d);
  }
  return best;
}

Frame bottom_frame(const LiePcaOperator& op, int d, bool restrict_skew) {
  if (d < 1) throw Error(ErrorCode::Configuration, "frame size must be positive");
  Frame raw;
  if (restrict_skew) {
    const Frame basis = skew_basis(op.n);
    const SymmetricEigen eig = symmetric_eigendecomposition(skew_restriction(op));
    if (d > eig.values.size()) throw Error(ErrorCode::DegenerateEigenframe, "not enough skew eigenvectors");
    for (int k = 0; k < d; ++k) {
      Mat m = Mat::Zero(op.n, op.n);
      for (size_t j = 0; j < basis.size(); ++j) m += eig.vectors(static_cast<Eigen::Index>(j), k) * basis[j];
      raw.push_back(m);
    }
  } else {
    if (d > op.eigenvalues.size()) throw Error(ErrorCode::DegenerateEigenframe, "not enough eigenvectors");
    for (int k = 0; k < d; ++k) raw.push_back(skew_part(op.eigen_matrix(k)));
  }
  double total = 0.0;
  for (const Mat& m : raw) total += m.norm();
  Frame out = orthonormalize_frame(raw, 1e-6 * std::max(total, 1e-300));
  if (static_cast<int>(out.size()) < d)
    throw Error(ErrorCode::DegenerateEigenframe, "bottom eigen-matrices lose rank after skew-symmetrization");
  return out;
}

}  // namespace liedetect
