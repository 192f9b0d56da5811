#pragma once

#include "liedetect/types.hpp"

namespace liedetect {

struct WeightedPointSet {
  Mat points;  // rows
  Vec weights;  // non-negative, summing to 1

  static WeightedPointSet uniform(const Mat& points);
};

enum class TransportMethod { Exact, Sinkhorn };

struct TransportOptions {
  TransportMethod method = TransportMethod::Exact;
  double reg = 0.0;  // Sinkhorn only; <= 0 selects 0.01 * median squared distance
  int max_iters = 5000;
  double tolerance = 1e-9;  // marginal violation in L1
};

Mat squared_distance_matrix(const Mat& a, const Mat& b);

// Minimal transport cost sum P_ij C_ij for a dense cost matrix, by successive shortest paths.
double exact_transport_cost(const Mat& cost, const Vec& a, const Vec& b);

// Transport cost <P, C> of the entropic plan computed in the log domain.
double sinkhorn_transport_cost(const Mat& cost, const Vec& a, const Vec& b, double reg, int max_iters, double tolerance);

double wasserstein2(const WeightedPointSet& a, const WeightedPointSet& b, const TransportOptions& options = {});

}  // namespace liedetect
