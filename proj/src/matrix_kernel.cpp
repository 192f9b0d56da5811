#include "liedetect/matrix_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <unsupported/Eigen/MatrixFunctions>

#include "liedetect/errors.hpp"

namespace liedetect {

namespace {

void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidMatrix, std::string(what) + " has non-finite entries");
}

void require_square(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
}

}  // namespace

SymmetricEigen symmetric_eigendecomposition(const Mat& op) {
  require_square(op, "symmetric operator");
  require_finite(op, "symmetric operator");
  Mat sym = 0.5 * (op + op.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidMatrix, "eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat rotation_generator(double k) {
  Mat l(2, 2);
  l << 0.0, -k, k, 0.0;
  return l;
}

Mat block_diag_generator(const Vec& rates, Eigen::Index n) {
  const Eigen::Index m = rates.size();
  if (n < 0) n = 2 * m;
  if (n < 2 * m) throw Error(ErrorCode::DimensionMismatch, "ambient dimension smaller than 2m");
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < m; ++i) out.block(2 * i, 2 * i, 2, 2) = rotation_generator(rates(i));
  return out;
}

Mat SkewNormalForm::block_matrix() const {
  return block_diag_generator(block_rates, rotation.rows());
}

SkewNormalForm skew_schur_form(const Mat& a) {
  require_square(a, "skew matrix");
  require_finite(a, "skew matrix");
  const Eigen::Index n = a.rows();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorCode::NotSkewSymmetric, "A + A^T is not zero");
  const Eigen::Index m = n / 2;
  SkewNormalForm out;
  out.residual_zero = (n % 2 == 1);
  if (m == 0) {
    out.rotation = Mat::Identity(n, n);
    out.block_rates = Vec(0);
    return out;
  }

  // iA is Hermitian. An eigenvector u = p + iq of iA for the eigenvalue -alpha
  // satisfies A q = alpha p and A p = -alpha q, so (q, p) spans an L(alpha) block.
  const Mat sk = skew_part(a);
  Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * sk.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidMatrix, "eigensolver did not converge");
  Mat pairs(n, 2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::VectorXcd u = solver.eigenvectors().col(k);
    pairs.col(2 * k) = std::sqrt(2.0) * u.imag();
    pairs.col(2 * k + 1) = std::sqrt(2.0) * u.real();
  }
  // Nearest orthonormal frame; this only moves columns belonging to (near) zero rates.
  Eigen::JacobiSVD<Mat> svd(pairs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat p(n, n);
  p.leftCols(2 * m) = svd.matrixU().leftCols(2 * m) * svd.matrixV().transpose();
  if (n > 2 * m) p.col(n - 1) = svd.matrixU().col(n - 1);

  Mat b = p.transpose() * sk * p;
  std::vector<double> rates(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    double r = 0.5 * (b(2 * k + 1, 2 * k) - b(2 * k, 2 * k + 1));
    if (r < 0) {
      p.col(2 * k).swap(p.col(2 * k + 1));
      r = -r;
    }
    rates[k] = r;
  }
  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return rates[i] < rates[j]; });
  out.rotation = p;
  out.block_rates.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    out.rotation.col(2 * k) = p.col(2 * order[k]);
    out.rotation.col(2 * k + 1) = p.col(2 * order[k] + 1);
    out.block_rates(k) = rates[order[k]];
  }
  return out;
}

Mat matrix_exponential_skew(const Mat& a) {
  require_square(a, "skew matrix");
  require_finite(a, "skew matrix");
  Mat sk = skew_part(a);
  return sk.exp();
}

Mat pseudo_inverse_sqrt(const Mat& s, double rank_threshold) {
  SymmetricEigen eig = symmetric_eigendecomposition(s);
  const double top = eig.values.cwiseAbs().maxCoeff();
  if (eig.values.size() > 0 && eig.values(0) < -1e-8 * std::max(1.0, top))
    throw Error(ErrorCode::NotPSD, "negative eigenvalue " + std::to_string(eig.values(0)));
  Vec scaled = Vec::Zero(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > rank_threshold) scaled(i) = 1.0 / std::sqrt(eig.values(i));
  return eig.vectors * scaled.asDiagonal() * eig.vectors.transpose();
}

double frobenius_inner(const Mat& a, const Mat& b) { return a.cwiseProduct(b).sum(); }

Mat skew_part(const Mat& a) { return 0.5 * (a - a.transpose()); }

Frame orthonormalize_frame(const Frame& f, double tol) {
  Frame out;
  for (const Mat& m : f) {
    Mat r = m;
    // two passes keep the result orthonormal to machine precision
    for (int pass = 0; pass < 2; ++pass)
      for (const Mat& q : out) r -= frobenius_inner(q, r) * q;
    const double nrm = r.norm();
    if (nrm > tol) out.push_back(r / nrm);
  }
  return out;
}

Mat frame_gram(const Frame& f) {
  const auto d = static_cast<Eigen::Index>(f.size());
  Mat g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = frobenius_inner(f[i], f[j]);
  return g;
}

double grassmann_distance(const Frame& a, const Frame& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "frames have different sizes");
  if (a.empty()) return 0.0;
  for (const Mat& m : a)
    if (m.rows() != b.front().rows() || m.cols() != b.front().cols())
      throw Error(ErrorCode::DimensionMismatch, "frames live in different ambient spaces");
  for (const Mat& m : b)
    if (m.rows() != b.front().rows() || m.cols() != b.front().cols())
      throw Error(ErrorCode::DimensionMismatch, "frames live in different ambient spaces");
  // For orthonormal frames |P_a - P_b|^2 = 2 |b - P_a b|^2; the residual form keeps
  // full relative accuracy when the spans nearly coincide.
  double sq = 0.0;
  for (const Mat& y : b) {
    Mat r = y;
    for (const Mat& x : a) r -= frobenius_inner(x, y) * x;
    sq += r.squaredNorm();
  }
  return std::sqrt(2.0 * sq);
}

Frame skew_basis(Eigen::Index n) {
  Frame out;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = -1.0 / std::sqrt(2.0);
      e(j, i) = 1.0 / std::sqrt(2.0);
      out.push_back(e);
    }
  return out;
}

bool is_orthogonal(const Mat& o, double tol) {
  if (o.rows() != o.cols()) return false;
  return (o.transpose() * o - Mat::Identity(o.rows(), o.cols())).norm() <= tol;
}

}  // namespace liedetect
