#include "liedetect/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "liedetect/errors.hpp"
#include "liedetect/matrix_kernel.hpp"

namespace liedetect {

Mat riemannian_gradient(const Mat& o, const Mat& egrad) {
  return o * skew_part(o.transpose() * egrad);
}

Mat qr_retraction(const Mat& o, const Mat& tangent) {
  const Mat y = o + tangent;
  Eigen::HouseholderQR<Mat> qr(y);
  Mat q = qr.householderQ() * Mat::Identity(y.rows(), y.cols());
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Mat haar_special_orthogonal(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = gauss(rng);
  Mat q = qr_retraction(Mat::Zero(n, n), g);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::OptimizerDiverged, "non-finite cost during descent");
  return v;
}

}  // namespace

OptimizeResult descend(const OrthogonalCost& cost, const Mat& o0, const OptimizerConfig& config,
                       std::vector<double>* history) {
  OptimizeResult res;
  Mat o = o0;
  Mat eg(o.rows(), o.cols());
  double f = checked(cost(o, &eg));
  Mat grad = riemannian_gradient(o, eg);
  double gnorm = grad.norm();
  double step = 1.0 / std::max(1.0, gnorm);
  Mat prev_o, prev_grad;
  int it = 0;
  bool stalled = false;
  for (; it < config.max_iters && gnorm > config.gradient_norm_tol; ++it) {
    Mat o_new;
    if (config.step_rule == StepRule::Fixed) {
      o_new = qr_retraction(o, -config.fixed_step * grad);
    } else {
      // Barzilai-Borwein guess, then Armijo backtracking keeps the sequence monotone.
      if (prev_o.size() != 0) {
        const Mat s = o - prev_o;
        const Mat y = grad - prev_grad;
        const double sy = std::abs((s.array() * y.array()).sum());
        if (sy > 1e-300) step = std::clamp(s.squaredNorm() / sy, 1e-8, 1e3);
      }
      double t = step;
      bool accepted = false;
      for (int k = 0; k < 60; ++k) {
        o_new = qr_retraction(o, -t * grad);
        const double f_new = checked(cost(o_new, nullptr));
        if (f_new <= f - 1e-4 * t * gnorm * gnorm) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
      step = t;
    }
    prev_o = o;
    prev_grad = grad;
    o = o_new;
    f = checked(cost(o, &eg));
    grad = riemannian_gradient(o, eg);
    gnorm = grad.norm();
    if (history) history->push_back(f);
  }
  res.o = o;
  res.cost = f;
  res.gradient_norm = gnorm;
  res.iterations = it;
  res.converged = gnorm <= config.gradient_norm_tol || stalled;
  return res;
}

OptimizeResult optimize_orthogonal(const OrthogonalCost& cost, Eigen::Index n, const OptimizerConfig& config) {
  if (config.restarts < 1) throw Error(ErrorCode::Configuration, "restarts must be at least 1");
  if (!(config.gradient_norm_tol > 0.0)) throw Error(ErrorCode::Configuration, "gradient tolerance must be positive");
  OptimizeResult best;
  best.cost = std::numeric_limits<double>::infinity();
  std::seed_seq seq{config.seed, static_cast<std::uint64_t>(n)};
  std::vector<std::uint64_t> seeds(static_cast<size_t>(2 * config.restarts));
  {
    std::vector<std::uint32_t> raw(seeds.size() * 2);
    seq.generate(raw.begin(), raw.end());
    for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = (static_cast<std::uint64_t>(raw[2 * i]) << 32) | raw[2 * i + 1];
  }
  const int components = config.both_components ? 2 : 1;
  for (int c = 0; c < components; ++c) {
    for (int r = 0; r < config.restarts; ++r) {
      Mat o0 = haar_special_orthogonal(n, seeds[static_cast<size_t>(c * config.restarts + r)]);
      if (c == 1) o0.row(0) = -o0.row(0);  // left factor diag(-1, 1, ..., 1)
      OptimizeResult run = descend(cost, o0, config);
      if (run.cost < best.cost) best = run;
    }
  }
  return best;
}

}  // namespace liedetect
