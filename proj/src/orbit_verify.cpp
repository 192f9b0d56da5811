#include "liedetect/orbit_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/random/sobol.hpp>

#include "liedetect/errors.hpp"
#include "liedetect/parallel.hpp"

namespace liedetect {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double unit_interval(std::uint64_t v) { return std::ldexp(static_cast<double>(v >> 11), -53); }

}  // namespace

OrbitParametrization parametrization_for(const FitResult& fit) {
  OrbitParametrization p;
  p.generators = fit.generators;
  if (fit.rep.group.kind == GroupKind::SU2 || fit.rep.group.kind == GroupKind::SO3) {
    p.domain = OrbitParametrization::Domain::Haar;
  } else {
    p.domain = OrbitParametrization::Domain::Box;
    p.periods = Vec::Constant(static_cast<Eigen::Index>(fit.generators.size()), kTwoPi);
  }
  return p;
}

OrbitParametrization box_parametrization(const Frame& frame, double coverage_radius) {
  if (frame.empty()) throw Error(ErrorCode::Configuration, "empty frame");
  return {frame, OrbitParametrization::Domain::Box,
          Vec::Constant(static_cast<Eigen::Index>(frame.size()), coverage_radius)};
}

std::vector<Mat> orbit_elements(const OrbitParametrization& param, Eigen::Index k, std::uint64_t seed) {
  if (k <= 0) throw Error(ErrorCode::EmptySample, "orbit sample size must be positive");
  if (param.generators.empty()) throw Error(ErrorCode::Configuration, "parametrization has no generators");
  const auto d = static_cast<Eigen::Index>(param.generators.size());
  const Eigen::Index n = param.generators.front().rows();
  const bool haar = param.domain == OrbitParametrization::Domain::Haar;
  if (haar && d != 3) throw Error(ErrorCode::Configuration, "Haar sampling needs three su(2) generators");
  if (!haar && param.periods.size() != d) throw Error(ErrorCode::DimensionMismatch, "one period per generator is required");

  // Parameters are generated serially so the sequence does not depend on the thread count.
  Mat t(k, haar ? 3 : d);
  if (!haar && d == 1) {
    for (Eigen::Index i = 0; i < k; ++i) t(i, 0) = static_cast<double>(i) / static_cast<double>(k);
  } else {
    boost::random::sobol gen(static_cast<std::size_t>(t.cols()));
    gen.discard((1 + seed % 4096) * static_cast<std::uint64_t>(t.cols()));
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < t.cols(); ++j) t(i, j) = unit_interval(gen());
  }

  std::vector<Mat> out(static_cast<size_t>(k));
  parallel_for(static_cast<size_t>(k), [&](size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    Mat a = Mat::Zero(n, n);
    if (haar) {
      // Uniform point of S^3 from the unit cube, read as an axis-angle pair.
      const double u1 = t(i, 0), u2 = t(i, 1), u3 = t(i, 2);
      const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
      const Eigen::Vector4d q(s2 * std::cos(kTwoPi * u3), s1 * std::sin(kTwoPi * u2), s1 * std::cos(kTwoPi * u2),
                              s2 * std::sin(kTwoPi * u3));
      const Eigen::Vector3d axis = q.tail<3>();
      const double sn = axis.norm();
      const double theta = 2.0 * std::atan2(sn, q(0));
      if (sn > 0.0)
        for (int j = 0; j < 3; ++j) a += (theta * axis(j) / sn) * param.generators[static_cast<size_t>(j)];
    } else {
      for (Eigen::Index j = 0; j < d; ++j) a += (t(i, j) * param.periods(j)) * param.generators[static_cast<size_t>(j)];
    }
    out[idx] = matrix_exponential_skew(a);
  });
  return out;
}

Mat apply_elements(const std::vector<Mat>& elements, const Vec& x) {
  Mat pts(static_cast<Eigen::Index>(elements.size()), x.size());
  for (size_t i = 0; i < elements.size(); ++i) pts.row(static_cast<Eigen::Index>(i)) = (elements[i] * x).transpose();
  return pts;
}

OrbitSample sample_orbit(const OrbitParametrization& param, const Vec& x, Eigen::Index k, std::uint64_t seed) {
  if (x.norm() == 0.0) throw Error(ErrorCode::DegenerateBasePoint, "orbit base point is zero");
  return {x, apply_elements(orbit_elements(param, k, seed), x)};
}

OrbitSample sample_orbit(const Frame& frame, const Vec& x, Eigen::Index k, double coverage_radius, std::uint64_t seed) {
  return sample_orbit(box_parametrization(frame, coverage_radius), x, k, seed);
}

namespace {

// Largest nearest-neighbour distance from rows of A into columns of bt; stops once it exceeds bound.
double directed_distance(const Mat& a, const Mat& bt, double bound) {
  if (a.rows() == 0 || bt.cols() == 0) throw Error(ErrorCode::EmptySet, "Hausdorff distance of an empty set");
  if (a.cols() != bt.rows()) throw Error(ErrorCode::DimensionMismatch, "point sets live in different dimensions");
  const auto rows = static_cast<size_t>(a.rows());
  std::vector<double> nearest(rows, 0.0);
  const double bound2 = bound * bound;
  parallel_for(rows, [&](size_t i) {
    const Vec ai = a.row(static_cast<Eigen::Index>(i)).transpose();
    nearest[i] = (bt.colwise() - ai).colwise().squaredNorm().minCoeff();
  });
  double worst = 0.0;
  for (double v : nearest) {
    worst = std::max(worst, v);
    if (worst > bound2) break;
  }
  return std::sqrt(worst);
}

// Serial variant with an early exit, used inside the base point search.
double directed_distance_bounded(const Mat& a, const Mat& bt, double bound) {
  const double bound2 = bound * bound;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Vec ai = a.row(i).transpose();
    worst = std::max(worst, (bt.colwise() - ai).colwise().squaredNorm().minCoeff());
    if (worst > bound2) return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_one_sided(const Mat& a, const Mat& b) {
  return directed_distance(a, b.transpose(), std::numeric_limits<double>::infinity());
}

double hausdorff_symmetric(const Mat& a, const Mat& b) { return std::max(hausdorff_one_sided(a, b), hausdorff_one_sided(b, a)); }

WeightedPointSet average_orbit_measure(const PointCloud& cloud, const OrbitParametrization& param,
                                       Eigen::Index per_point_k, std::uint64_t seed) {
  if (per_point_k < 1) throw Error(ErrorCode::EmptySample, "per-point orbit sample size must be positive");
  if (cloud.size() == 0) throw Error(ErrorCode::EmptySet, "empty cloud");
  const std::vector<Mat> elems = orbit_elements(param, per_point_k, seed);
  const Eigen::Index n_pts = cloud.size();
  WeightedPointSet out;
  out.points.resize(n_pts * per_point_k, cloud.dim());
  for (Eigen::Index i = 0; i < n_pts; ++i)
    out.points.middleRows(i * per_point_k, per_point_k) = apply_elements(elems, cloud.points.row(i).transpose());
  out.weights = Vec::Constant(out.points.rows(), 1.0 / static_cast<double>(out.points.rows()));
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Success: return "success";
    case Verdict::NonTransitiveSuspected: return "non-transitive-suspected";
    case Verdict::Fail: return "fail";
  }
  return "fail";
}

BasePointMode parse_base_point_mode(const std::string& text) {
  if (text == "first") return BasePointMode::First;
  if (text == "best") return BasePointMode::Best;
  throw Error(ErrorCode::Configuration, "unknown base point mode '" + text + "'");
}

Eigen::Index default_orbit_samples(int group_dimension) {
  if (group_dimension <= 1) return 500;
  if (group_dimension == 2) return 3000;
  return 10000;
}

VerificationReport verify(const PointCloud& cloud, const FitResult& fit, const VerifyConfig& config) {
  if (cloud.stage == Stage::Raw)
    throw Error(ErrorCode::RawCloud, "distances are only meaningful on orthonormalized data");
  if (cloud.size() == 0) throw Error(ErrorCode::EmptySet, "empty cloud");
  if (fit.generators.empty() || fit.generators.front().rows() != cloud.dim())
    throw Error(ErrorCode::DimensionMismatch, "fitted generators do not act on the cloud's ambient space");

  VerificationReport rep;
  rep.thresholds = config.thresholds;
  const OrbitParametrization param = parametrization_for(fit);
  const Eigen::Index k = config.orbit_samples > 0 ? config.orbit_samples
                                                  : default_orbit_samples(static_cast<int>(fit.generators.size()));
  rep.orbit_samples = k;
  const std::vector<Mat> elems = orbit_elements(param, k, config.seed);

  Eigen::Index base = 0;
  if (config.base_point == BasePointMode::Best && cloud.size() > 1) {
    // Screen every point with a coarser orbit sample and keep the smallest HD(X -> O_x).
    const Eigen::Index k_coarse = std::max<Eigen::Index>(50, k / 10);
    const std::vector<Mat> coarse = orbit_elements(param, k_coarse, config.seed);
    double bound = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
      const Mat orbit = apply_elements(coarse, cloud.points.row(i).transpose());
      const double s = directed_distance_bounded(cloud.points, orbit.transpose(), bound);
      if (s < bound) {
        bound = s;
        base = i;
      }
    }
  }
  rep.base_point_index = base;
  const Mat orbit = apply_elements(elems, cloud.points.row(base).transpose());
  const double inf = std::numeric_limits<double>::infinity();
  rep.hausdorff_in_to_orbit = directed_distance(cloud.points, orbit.transpose(), inf);
  rep.hausdorff_orbit_to_in = directed_distance(orbit, cloud.points.transpose(), inf);
  rep.hausdorff_symmetric = std::max(rep.hausdorff_in_to_orbit, rep.hausdorff_orbit_to_in);
  rep.symmetric_below_threshold = rep.hausdorff_symmetric < config.thresholds.symmetric;

  if (rep.hausdorff_in_to_orbit < config.thresholds.one_sided)
    rep.verdict = Verdict::Success;
  else if (rep.hausdorff_orbit_to_in < config.thresholds.reverse_one_sided)
    rep.verdict = Verdict::NonTransitiveSuspected;
  else
    rep.verdict = Verdict::Fail;

  if (config.compute_w2) {
    // Evenly strided subsample keeps the transport problem at a few hundred by a few thousand.
    const Eigen::Index stride = std::max<Eigen::Index>(1, (cloud.size() + 499) / 500);
    PointCloud sub;
    sub.stage = cloud.stage;
    sub.points.resize((cloud.size() + stride - 1) / stride, cloud.dim());
    for (Eigen::Index i = 0, r = 0; i < cloud.size(); i += stride, ++r) sub.points.row(r) = cloud.points.row(i);
    const Eigen::Index per_point = std::max<Eigen::Index>(1, 2000 / sub.size());
    const WeightedPointSet mu_orbit = average_orbit_measure(sub, param, per_point, config.seed);
    TransportOptions opts;
    opts.method = sub.size() * mu_orbit.points.rows() <= 200 * 200 ? TransportMethod::Exact : TransportMethod::Sinkhorn;
    opts.max_iters = 2000;
    opts.tolerance = 1e-6;
    rep.wasserstein2 = wasserstein2(WeightedPointSet::uniform(sub.points), mu_orbit, opts);
  }
  return rep;
}

}  // namespace liedetect
