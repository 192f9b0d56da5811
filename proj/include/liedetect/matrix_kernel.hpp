#pragma once

#include "liedetect/types.hpp"

namespace liedetect {

struct SymmetricEigen {
  Vec values;   // ascending
  Mat vectors;  // columns, orthonormal
};

SymmetricEigen symmetric_eigendecomposition(const Mat& op);

// A = P * diag(L(rates[0]), ..., L(rates[m-1]) [, 0]) * P^T with L(a) = [[0,-a],[a,0]].
struct SkewNormalForm {
  Mat rotation;
  Vec block_rates;  // ascending, non-negative
  bool residual_zero = false;

  Mat block_matrix() const;
  Mat reconstruct() const { return rotation * block_matrix() * rotation.transpose(); }
};

SkewNormalForm skew_schur_form(const Mat& a);

// The 2x2 generator [[0,-k],[k,0]].
Mat rotation_generator(double k);

// diag(L(k1), ..., L(km)), optionally padded with zero rows/cols up to size n.
Mat block_diag_generator(const Vec& rates, Eigen::Index n = -1);

Mat matrix_exponential_skew(const Mat& a);

Mat pseudo_inverse_sqrt(const Mat& s, double rank_threshold);

// Frobenius distance between the orthogonal projections onto span(a) and span(b)
// inside the space of n x n matrices.
double grassmann_distance(const Frame& a, const Frame& b);

double frobenius_inner(const Mat& a, const Mat& b);
Mat skew_part(const Mat& a);

// Gram-Schmidt in the Frobenius inner product. Matrices whose residual norm falls
// under tol are dropped, so the result can be shorter than the input.
Frame orthonormalize_frame(const Frame& f, double tol = 1e-10);

// Gram matrix of a frame in the Frobenius inner product.
Mat frame_gram(const Frame& f);

// Orthonormal basis of so(n): (E_ij - E_ji)/sqrt(2) for i < j.
Frame skew_basis(Eigen::Index n);

bool is_orthogonal(const Mat& o, double tol = 1e-10);

}  // namespace liedetect
