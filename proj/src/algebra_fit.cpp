#include "liedetect/algebra_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "liedetect/errors.hpp"
#include "liedetect/parallel.hpp"

namespace liedetect {

FitCandidate make_candidate(const RepresentationType& rep, int n) { return {rep, assemble_frame(rep, n)}; }

double cost_stiefel(const LiePcaOperator& op, const Frame& base, const Mat& o, Mat* egrad) {
  const Eigen::Index n = o.rows();
  if (op.n != n) throw Error(ErrorCode::DimensionMismatch, "operator and conjugator sizes differ");
  if (egrad) egrad->setZero(n, n);
  double total = 0.0;
  for (const Mat& c : base) {
    const Mat conj = o * c * o.transpose();
    const Vec w = op.matrix * Eigen::Map<const Vec>(conj.data(), conj.size());
    total += w.squaredNorm();
    if (egrad) {
      const Vec lw = op.matrix * w;
      const Eigen::Map<const Mat> m(lw.data(), n, n);
      *egrad += 2.0 * (m * o * c.transpose() + m.transpose() * o * c);
    }
  }
  return total;
}

SkewQuadratic SkewQuadratic::from(const LiePcaOperator& op) {
  const Frame basis = skew_basis(op.n);
  Mat s(static_cast<Eigen::Index>(op.n) * op.n, static_cast<Eigen::Index>(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k) s.col(static_cast<Eigen::Index>(k)) = basis[k].reshaped();
  const Mat ls = op.matrix * s;
  SkewQuadratic q;
  q.n = op.n;
  q.gram = ls.transpose() * ls;
  q.gram = 0.5 * (q.gram + q.gram.transpose());
  return q;
}

double SkewQuadratic::cost(const Frame& base, const Mat& o, Mat* egrad) const {
  if (o.rows() != n) throw Error(ErrorCode::DimensionMismatch, "operator and conjugator sizes differ");
  const double r2 = std::sqrt(2.0);
  const Eigen::Index dim = gram.rows();
  if (egrad) egrad->setZero(n, n);
  double total = 0.0;
  Vec s(dim);
  for (const Mat& c : base) {
    const Mat conj = o * c * o.transpose();
    Eigen::Index k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s(k++) = (conj(i, j) - conj(j, i)) / r2;
    const Vec ks = gram * s;
    total += s.dot(ks);
    if (egrad) {
      Mat m = Mat::Zero(n, n);
      k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) {
          m(i, j) = 2.0 * ks(k) / r2;
          m(j, i) = -m(i, j);
        }
      *egrad += m * o * c.transpose() + m.transpose() * o * c;
    }
  }
  return total;
}

double cost_grassmann(const Frame& bottom, const Frame& base, const Mat& o, Mat* egrad) {
  if (bottom.size() != base.size())
    throw Error(ErrorCode::DimensionMismatch, "frames of different sizes");
  const Eigen::Index n = o.rows();
  if (egrad) egrad->setZero(n, n);
  std::vector<Mat> conj;
  conj.reserve(base.size());
  for (const Mat& c : base) conj.push_back(o * c * o.transpose());
  double sum_sq = 0.0;
  for (const Mat& a : bottom)
    for (size_t j = 0; j < base.size(); ++j) {
      const double cij = frobenius_inner(a, conj[j]);
      sum_sq += cij * cij;
      if (egrad) *egrad -= 4.0 * cij * (a * o * base[j].transpose() + a.transpose() * o * base[j]);
    }
  return std::max(0.0, 2.0 * static_cast<double>(bottom.size()) - 2.0 * sum_sq);
}

double normalized_gap(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "rate vectors of different lengths");
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw Error(ErrorCode::DegenerateEigenframe, "zero rate vector");
  return (x / nx - y / ny).squaredNorm();
}

namespace {

Frame conjugate_frame(const Frame& f, const Mat& o) {
  Frame out;
  out.reserve(f.size());
  for (const Mat& m : f) out.push_back(o * m * o.transpose());
  return out;
}

FitResult finalize(const RepresentationType& rep, const Mat& o, double cost, std::string objective,
                   std::vector<CandidateCost> all_costs) {
  const int n = static_cast<int>(o.rows());
  FitResult res;
  res.rep = rep;
  res.conjugator = o;
  res.cost = cost;
  res.objective = std::move(objective);
  res.fitted_frame = conjugate_frame(assemble_frame(rep, n), o);
  res.generators = conjugate_frame(group_generators(rep, n), o);
  std::stable_sort(all_costs.begin(), all_costs.end(),
                   [](const CandidateCost& a, const CandidateCost& b) { return a.cost < b.cost; });
  res.all_costs = std::move(all_costs);
  return res;
}

Vec weight_vector(const RepresentationType& rep) {
  Vec w(static_cast<Eigen::Index>(rep.weights.size()));
  for (size_t i = 0; i < rep.weights.size(); ++i) w(static_cast<Eigen::Index>(i)) = rep.weights[i];
  std::sort(w.data(), w.data() + w.size());
  return w;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

FitResult fit_so2_closed_form(const Mat& bottom_matrix, const std::vector<RepresentationType>& types) {
  if (types.empty()) throw Error(ErrorCode::NoCandidates, "empty SO2 candidate list");
  if (bottom_matrix.norm() == 0.0) throw Error(ErrorCode::DegenerateEigenframe, "bottom eigen-matrix is zero");
  const SkewNormalForm form = skew_schur_form(bottom_matrix);
  std::vector<CandidateCost> costs;
  costs.reserve(types.size());
  size_t best = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    const Vec k = weight_vector(types[i]);
    if (k.size() != form.block_rates.size())
      throw Error(ErrorCode::DimensionMismatch, "SO2 type " + types[i].label() + " has the wrong number of weights");
    costs.push_back({types[i], normalized_gap(form.block_rates, k)});
    if (costs.back().cost < costs[best].cost) best = i;
  }
  const double best_cost = costs[best].cost;
  return finalize(types[best], form.rotation, best_cost, "so2-closed-form", std::move(costs));
}

double off_block_cost(const Frame& frame, const Mat& o, Mat* egrad) {
  const Eigen::Index n = o.rows();
  if (egrad) egrad->setZero(n, n);
  double total = 0.0;
  for (const Mat& a : frame) {
    Mat w = o.transpose() * a * o;
    for (Eigen::Index k = 0; k + 1 < n; k += 2) w.block(k, k, 2, 2).setZero();
    if (n % 2 == 1) w(n - 1, n - 1) = 0.0;
    total += w.squaredNorm();
    if (egrad) *egrad += 2.0 * (a * o * w.transpose() + a.transpose() * o * w);
  }
  return total;
}

Mat block_rates_at(const Frame& frame, const Mat& o) {
  const Eigen::Index m = o.rows() / 2;
  Mat rates(static_cast<Eigen::Index>(frame.size()), m);
  for (size_t i = 0; i < frame.size(); ++i) {
    const Mat f = o.transpose() * frame[i] * o;
    for (Eigen::Index k = 0; k < m; ++k)
      rates(static_cast<Eigen::Index>(i), k) = 0.5 * (f(2 * k + 1, 2 * k) - f(2 * k, 2 * k + 1));
  }
  return rates;
}

namespace {

Mat row_span_projection(const Mat& rows, Eigen::Index rank) {
  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  const Mat v = svd.matrixV().leftCols(rank);
  return v * v.transpose();
}

}  // namespace

LatticeMatch match_lattice(const Mat& rates, const Mat& lattice_projection) {
  const auto m = static_cast<int>(rates.cols());
  if (lattice_projection.rows() != m) throw Error(ErrorCode::DimensionMismatch, "lattice and rate sizes differ");
  const Mat pr = row_span_projection(rates, rates.rows());
  std::vector<int> perm(static_cast<size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  LatticeMatch best;
  double best_inner = -std::numeric_limits<double>::infinity();
  const unsigned sign_masks = m > 0 ? (1u << (m - 1)) : 1u;
  do {
    for (unsigned mask = 0; mask < sign_masks; ++mask) {
      double inner = 0.0;
      for (int a = 0; a < m; ++a) {
        const double sa = (a > 0 && (mask >> (a - 1)) & 1u) ? -1.0 : 1.0;
        for (int b = 0; b < m; ++b) {
          const double sb = (b > 0 && (mask >> (b - 1)) & 1u) ? -1.0 : 1.0;
          inner += pr(a, b) * sa * sb * lattice_projection(perm[a], perm[b]);
        }
      }
      if (inner > best_inner + 1e-12) {
        best_inner = inner;
        best.permutation = perm;
        best.signs.assign(static_cast<size_t>(m), 1);
        for (int a = 1; a < m; ++a)
          if ((mask >> (a - 1)) & 1u) best.signs[static_cast<size_t>(a)] = -1;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.cost = std::max(0.0, pr.trace() + lattice_projection.trace() - 2.0 * best_inner);
  return best;
}

FitResult fit_torus_closed_form(const Frame& bottom_frame, const std::vector<RepresentationType>& types,
                                const TorusFitConfig& config) {
  if (types.empty()) throw Error(ErrorCode::NoCandidates, "empty torus candidate list");
  if (bottom_frame.size() < 2) throw Error(ErrorCode::Configuration, "torus closed form needs at least two matrices");
  const Eigen::Index n = bottom_frame.front().rows();
  const auto d = static_cast<Eigen::Index>(bottom_frame.size());

  // Simultaneous block reduction, started from the normal form of random combinations.
  const OrthogonalCost cost = [&](const Mat& o, Mat* g) { return off_block_cost(bottom_frame, o, g); };
  std::mt19937_64 rng(config.optimizer.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  OptimizeResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, config.optimizer.restarts); ++r) {
    Mat combo = Mat::Zero(n, n);
    for (const Mat& a : bottom_frame) combo += gauss(rng) * a;
    const SkewNormalForm form = skew_schur_form(skew_part(combo));
    OptimizeResult run = descend(cost, form.rotation, config.optimizer);
    if (run.cost < best.cost) best = run;
  }
  if (best.cost > config.residual_threshold * static_cast<double>(d))
    throw Error(ErrorCode::NonReducibleFrame,
                "simultaneous block reduction leaves residual " + std::to_string(best.cost));

  const Mat rates = block_rates_at(bottom_frame, best.o);
  std::vector<CandidateCost> costs;
  std::vector<LatticeMatch> matches;
  costs.reserve(types.size());
  matches.reserve(types.size());
  size_t win = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    const Mat lat = types[i].lattice.cast<double>();
    if (lat.rows() != d || lat.cols() != rates.cols())
      throw Error(ErrorCode::DimensionMismatch, "torus type " + types[i].label() + " does not match the frame");
    matches.push_back(match_lattice(rates, row_span_projection(lat, d)));
    costs.push_back({types[i], matches.back().cost});
    if (costs.back().cost < costs[win].cost) win = i;
  }

  // Block permutation and reflections carrying the winner's standard blocks onto the reduced ones.
  const LatticeMatch& mt = matches[win];
  Mat t = Mat::Zero(n, n);
  for (size_t a = 0; a < mt.permutation.size(); ++a) {
    const auto src = static_cast<Eigen::Index>(2 * mt.permutation[a]);
    const auto dst = static_cast<Eigen::Index>(2 * a);
    t(dst, src) = 1.0;
    t(dst + 1, src + 1) = mt.signs[a];
  }
  if (n % 2 == 1) t(n - 1, n - 1) = 1.0;
  const double win_cost = costs[win].cost;
  FitResult res = finalize(types[win], best.o * t, win_cost, "torus-closed-form", std::move(costs));
  res.reduction_residual = best.cost;
  return res;
}

FitMode parse_fit_mode(const std::string& text) {
  if (text == "auto") return FitMode::Auto;
  if (text == "stiefel") return FitMode::Stiefel;
  if (text == "grassmann") return FitMode::Grassmann;
  throw Error(ErrorCode::Configuration, "unknown fit mode '" + text + "'");
}

std::string fit_mode_name(FitMode mode) {
  switch (mode) {
    case FitMode::Auto: return "auto";
    case FitMode::Stiefel: return "stiefel";
    case FitMode::Grassmann: return "grassmann";
  }
  return "auto";
}

FitResult fit(const LiePcaOperator& op, const Group& group, int n, const FitConfig& config) {
  if (op.n != n) throw Error(ErrorCode::DimensionMismatch, "operator does not act on R^" + std::to_string(n));
  const std::vector<RepresentationType> types =
      config.candidates ? *config.candidates : pipeline_candidates(group, n, config.w_max);
  if (types.empty()) throw Error(ErrorCode::NoCandidates, "no candidate representation of " + group.name() + " in R^" + std::to_string(n));
  const int d = group.dimension();

  if (config.mode == FitMode::Auto && group.kind == GroupKind::SO2)
    return fit_so2_closed_form(bottom_frame(op, 1).front(), types);
  if (config.mode == FitMode::Auto && group.kind == GroupKind::Torus) {
    TorusFitConfig tc = config.torus;
    tc.optimizer.seed = config.optimizer.seed;
    return fit_torus_closed_form(bottom_frame(op, d), types, tc);
  }

  const bool stiefel = config.mode != FitMode::Grassmann;
  const Frame bottom = stiefel ? Frame{} : bottom_frame(op, d);
  const SkewQuadratic quad = stiefel ? SkewQuadratic::from(op) : SkewQuadratic{};
  std::vector<OptimizeResult> runs(types.size());
  parallel_for(types.size(), [&](size_t i) {
    const Frame base = assemble_frame(types[i], n);
    OptimizerConfig oc = config.optimizer;
    oc.seed = mix_seed(config.optimizer.seed, i);
    const OrthogonalCost cost = stiefel ? OrthogonalCost([&](const Mat& o, Mat* g) { return quad.cost(base, o, g); })
                                        : OrthogonalCost([&](const Mat& o, Mat* g) { return cost_grassmann(bottom, base, o, g); });
    runs[i] = optimize_orthogonal(cost, n, oc);
  });
  std::vector<CandidateCost> costs;
  size_t win = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    costs.push_back({types[i], runs[i].cost});
    if (runs[i].cost < runs[win].cost) win = i;
  }
  return finalize(types[win], runs[win].o, runs[win].cost, stiefel ? "stiefel" : "grassmann", std::move(costs));
}

}  // namespace liedetect
