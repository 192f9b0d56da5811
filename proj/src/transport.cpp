#include "liedetect/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liedetect/errors.hpp"

namespace liedetect {

WeightedPointSet WeightedPointSet::uniform(const Mat& points) {
  if (points.rows() == 0) throw Error(ErrorCode::EmptySet, "empty point set");
  return {points, Vec::Constant(points.rows(), 1.0 / static_cast<double>(points.rows()))};
}

Mat squared_distance_matrix(const Mat& a, const Mat& b) {
  Mat c = (-2.0 * a * b.transpose()).colwise() + a.rowwise().squaredNorm();
  c.rowwise() += b.rowwise().squaredNorm().transpose();
  return c.cwiseMax(0.0);
}

namespace {

void check_weights(const Vec& w, const char* side) {
  if (w.size() == 0) throw Error(ErrorCode::EmptySet, std::string("empty ") + side + " measure");
  if ((w.array() < 0.0).any() || !w.allFinite())
    throw Error(ErrorCode::BadWeights, std::string(side) + " weights must be finite and non-negative");
  if (std::abs(w.sum() - 1.0) > 1e-9) throw Error(ErrorCode::BadWeights, std::string(side) + " weights do not sum to 1");
}

}  // namespace

double exact_transport_cost(const Mat& cost, const Vec& a, const Vec& b) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const Eigen::Index v_count = n + m;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double kEps = 1e-12 * std::max(a.sum(), b.sum());
  Vec supply = a;
  Vec demand = b;
  Mat flow = Mat::Zero(n, m);
  Vec pot = Vec::Zero(v_count);
  Vec dist(v_count);
  std::vector<Eigen::Index> parent(static_cast<size_t>(v_count));
  std::vector<char> done(static_cast<size_t>(v_count));

  while (supply.maxCoeff() > kEps && demand.maxCoeff() > kEps) {
    dist.setConstant(kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i)
      if (supply(i) > kEps) dist(i) = 0.0;
    Eigen::Index target = -1;
    for (;;) {
      Eigen::Index u = -1;
      double best = kInf;
      for (Eigen::Index v = 0; v < v_count; ++v)
        if (!done[static_cast<size_t>(v)] && dist(v) < best) {
          best = dist(v);
          u = v;
        }
      if (u < 0) break;
      done[static_cast<size_t>(u)] = 1;
      if (u >= n && demand(u - n) > kEps) {
        target = u;
        break;
      }
      if (u < n) {
        for (Eigen::Index j = 0; j < m; ++j) {
          const Eigen::Index v = n + j;
          if (done[static_cast<size_t>(v)]) continue;
          const double nd = dist(u) + cost(u, j) + pot(u) - pot(v);
          if (nd < dist(v)) {
            dist(v) = nd;
            parent[static_cast<size_t>(v)] = u;
          }
        }
      } else {
        const Eigen::Index j = u - n;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (flow(i, j) <= kEps || done[static_cast<size_t>(i)]) continue;
          const double nd = dist(u) - cost(i, j) + pot(u) - pot(i);
          if (nd < dist(i)) {
            dist(i) = nd;
            parent[static_cast<size_t>(i)] = u;
          }
        }
      }
    }
    if (target < 0) throw Error(ErrorCode::OptimizerDiverged, "transport solver found no augmenting path");
    const double dt = dist(target);
    for (Eigen::Index v = 0; v < v_count; ++v) pot(v) += std::min(dist(v), dt);

    double amount = demand(target - n);
    Eigen::Index v = target;
    while (parent[static_cast<size_t>(v)] >= 0) {
      const Eigen::Index p = parent[static_cast<size_t>(v)];
      if (p >= n) amount = std::min(amount, flow(v, p - n));  // backward arc p -> v
      v = p;
    }
    amount = std::min(amount, supply(v));
    const Eigen::Index source = v;
    v = target;
    while (parent[static_cast<size_t>(v)] >= 0) {
      const Eigen::Index p = parent[static_cast<size_t>(v)];
      if (p < n)
        flow(p, v - n) += amount;
      else
        flow(v, p - n) -= amount;
      v = p;
    }
    supply(source) -= amount;
    demand(target - n) -= amount;
    if (supply(source) < kEps) supply(source) = 0.0;
    if (demand(target - n) < kEps) demand(target - n) = 0.0;
  }
  return (flow.array() * cost.array()).sum();
}

namespace {

double log_sum_exp(const Eigen::Ref<const Vec>& v) {
  const double mx = v.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  return mx + std::log((v.array() - mx).exp().sum());
}

}  // namespace

double sinkhorn_transport_cost(const Mat& cost, const Vec& a, const Vec& b, double reg, int max_iters, double tolerance) {
  if (!(reg > 0.0)) throw Error(ErrorCode::Configuration, "Sinkhorn regularization must be positive");
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const Vec log_a = a.array().log();
  const Vec log_b = b.array().log();
  Vec f = Vec::Zero(n);
  Vec g = Vec::Zero(m);
  Vec tmp_m(m), tmp_n(n);
  for (int it = 0; it < max_iters; ++it) {
    for (Eigen::Index i = 0; i < n; ++i) {
      tmp_m = (g - cost.row(i).transpose()) / reg + log_b;
      f(i) = -reg * log_sum_exp(tmp_m);
    }
    double err = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      tmp_n = (f - cost.col(j)) / reg + log_a;
      const double lse = log_sum_exp(tmp_n);
      err += std::abs(std::exp(lse + g(j) / reg + log_b(j)) - b(j));
      g(j) = -reg * lse;
    }
    if (err < tolerance) break;
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lp = (f(i) + g(j) - cost(i, j)) / reg + log_a(i) + log_b(j);
      if (lp > -700.0) total += std::exp(lp) * cost(i, j);
    }
  return total;
}

double wasserstein2(const WeightedPointSet& a, const WeightedPointSet& b, const TransportOptions& options) {
  check_weights(a.weights, "source");
  check_weights(b.weights, "target");
  if (a.points.rows() != a.weights.size() || b.points.rows() != b.weights.size())
    throw Error(ErrorCode::DimensionMismatch, "weights and points disagree in count");
  if (a.points.cols() != b.points.cols()) throw Error(ErrorCode::DimensionMismatch, "point sets live in different dimensions");
  const Mat c = squared_distance_matrix(a.points, b.points);
  if (options.method == TransportMethod::Exact) return std::sqrt(std::max(0.0, exact_transport_cost(c, a.weights, b.weights)));
  double reg = options.reg;
  if (!(reg > 0.0)) {
    std::vector<double> entries(c.data(), c.data() + c.size());
    auto mid = entries.begin() + static_cast<std::ptrdiff_t>(entries.size() / 2);
    std::nth_element(entries.begin(), mid, entries.end());
    reg = 0.01 * std::max(*mid, 1e-300);
  }
  return std::sqrt(std::max(0.0, sinkhorn_transport_cost(c, a.weights, b.weights, reg, options.max_iters, options.tolerance)));
}

}  // namespace liedetect
