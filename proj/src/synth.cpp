#include "liedetect/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "liedetect/errors.hpp"
#include "liedetect/matrix_kernel.hpp"
#include "liedetect/parallel.hpp"

namespace liedetect {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

bool is_su2_like(GroupKind k) { return k == GroupKind::SU2 || k == GroupKind::SO3; }

// Coordinate ranges of the irreducible blocks and whether each one acts non-trivially.
struct Block {
  Eigen::Index offset;
  Eigen::Index size;
  bool nontrivial;
};

std::vector<Block> blocks_of(const RepresentationType& rep, int n) {
  std::vector<Block> out;
  if (is_su2_like(rep.group.kind)) {
    Eigen::Index off = 0;
    for (int p : rep.parts) {
      out.push_back({off, p, p > 1});
      off += p;
    }
    return out;
  }
  const int m = rep.min_ambient() / 2;
  for (int k = 0; k < m; ++k) {
    bool nontrivial = false;
    if (rep.group.kind == GroupKind::SO2)
      nontrivial = rep.weights[static_cast<size_t>(k)] != 0;
    else
      nontrivial = rep.lattice.col(k).cwiseAbs().sum() != 0;
    out.push_back({2 * k, 2, nontrivial});
  }
  if (n % 2 == 1) out.push_back({n - 1, 1, false});
  return out;
}

}  // namespace

std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix(splitmix(seed) ^ (index * 0xD1B54A32D192ED03ULL)));
}

GroupElement haar_element(const Group& group, std::mt19937_64& rng) {
  GroupElement g;
  if (is_su2_like(group.kind)) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Vector4d q;
    do {
      for (int i = 0; i < 4; ++i) q(i) = gauss(rng);
    } while (q.norm() < 1e-12);
    g.quaternion = q.normalized();
    return g;
  }
  std::uniform_real_distribution<double> uni(0.0, kTwoPi);
  g.angles.resize(group.kind == GroupKind::SO2 ? 1 : group.torus_dim);
  for (Eigen::Index i = 0; i < g.angles.size(); ++i) g.angles(i) = uni(rng);
  return g;
}

namespace {

// Lie algebra element whose exponential is phi(g).
Mat exponent_of(const Frame& gens, GroupKind kind, const GroupElement& g) {
  const Eigen::Index n = gens.front().rows();
  Mat a = Mat::Zero(n, n);
  if (is_su2_like(kind)) {
    // q = (cos(theta/2), sin(theta/2) u) corresponds to exp(theta u.G).
    const Eigen::Vector3d v = g.quaternion.tail<3>();
    const double s = v.norm();
    if (s > 0.0) {
      const double theta = 2.0 * std::atan2(s, g.quaternion(0));
      for (int j = 0; j < 3; ++j) a += (theta * v(j) / s) * gens[static_cast<size_t>(j)];
    }
    return a;
  }
  if (g.angles.size() != static_cast<Eigen::Index>(gens.size()))
    throw Error(ErrorCode::DimensionMismatch, "angle count does not match the group");
  for (size_t j = 0; j < gens.size(); ++j) a += g.angles(static_cast<Eigen::Index>(j)) * gens[j];
  return a;
}

}  // namespace

Mat representation_matrix(const RepresentationType& rep, int n, const GroupElement& g) {
  return matrix_exponential_skew(exponent_of(group_generators(rep, n), rep.group.kind, g));
}

Vec default_base_point(const RepresentationType& rep, int n, std::uint64_t seed) {
  const std::vector<Block> blocks = blocks_of(rep, n);
  const double mass = 1.0 / std::sqrt(static_cast<double>(blocks.size()));
  Vec x = Vec::Zero(n);
  std::mt19937_64 rng = indexed_rng(seed, std::numeric_limits<std::uint64_t>::max());
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const Block& b : blocks) {
    if (is_su2_like(rep.group.kind) && b.size > 1) {
      Vec dir(b.size);
      for (Eigen::Index i = 0; i < b.size; ++i) dir(i) = gauss(rng);
      x.segment(b.offset, b.size) = mass * dir.normalized();
    } else {
      x(b.offset) = mass;
    }
  }
  return x;
}

PointCloud sample_orbit_uniform(const OrbitSpec& spec) {
  const int n = spec.n;
  if (spec.count < 0 || spec.outliers < 0) throw Error(ErrorCode::Configuration, "negative sample count");
  if (spec.noise_sigma < 0.0) throw Error(ErrorCode::Configuration, "negative noise level");
  const Frame gens = group_generators(spec.rep, n);
  Vec x0 = spec.base_point ? *spec.base_point : default_base_point(spec.rep, n, spec.seed);
  if (x0.size() != n) throw Error(ErrorCode::DimensionMismatch, "base point has the wrong dimension");
  for (const Block& b : blocks_of(spec.rep, n))
    if (b.nontrivial && x0.segment(b.offset, b.size).norm() == 0.0)
      throw Error(ErrorCode::DegenerateBasePoint, "base point has no mass on a non-trivial irreducible block");
  if (spec.linear_map && (spec.linear_map->rows() != n || spec.linear_map->cols() != n))
    throw Error(ErrorCode::DimensionMismatch, "linear map must be n x n");

  PointCloud out;
  out.points.resize(spec.count + spec.outliers, n);
  parallel_for(static_cast<size_t>(spec.count + spec.outliers), [&](size_t idx) {
    std::mt19937_64 rng = indexed_rng(spec.seed, idx);
    const auto i = static_cast<Eigen::Index>(idx);
    if (i >= spec.count) {
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      for (int c = 0; c < n; ++c) out.points(i, c) = uni(rng);
      return;
    }
    const GroupElement g = haar_element(spec.rep.group, rng);
    const Mat a = exponent_of(gens, spec.rep.group.kind, g);
    Vec y = matrix_exponential_skew(a) * x0;
    if (spec.linear_map) y = *spec.linear_map * y;
    if (spec.noise_sigma > 0.0) {
      std::normal_distribution<double> gauss(0.0, spec.noise_sigma);
      for (int c = 0; c < n; ++c) y(c) += gauss(rng);
    }
    out.points.row(i) = y.transpose();
  });
  return out;
}

SamplerMode parse_sampler_mode(const std::string& text) {
  if (text == "multi-liepca") return SamplerMode::MultiSourceLiePca;
  if (text == "multi-liedetect") return SamplerMode::MultiSourceLieDetect;
  if (text == "single-liedetect") return SamplerMode::SingleSourceLieDetect;
  throw Error(ErrorCode::Configuration, "unknown sampler mode '" + text + "'");
}

std::string sampler_mode_name(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::MultiSourceLiePca: return "multi-liepca";
    case SamplerMode::MultiSourceLieDetect: return "multi-liedetect";
    case SamplerMode::SingleSourceLieDetect: return "single-liedetect";
  }
  return "single-liedetect";
}

double silverman_factor(Eigen::Index n_points, int intrinsic_dim) {
  const double l = intrinsic_dim;
  return std::pow(static_cast<double>(n_points) * (l + 2.0) / 4.0, -1.0 / (l + 4.0));
}

double max_nearest_neighbor_distance(const Mat& points) {
  if (points.rows() < 2) throw Error(ErrorCode::EmptySet, "need at least two points");
  const Mat pt = points.transpose();
  std::vector<double> nearest(static_cast<size_t>(points.rows()));
  parallel_for(nearest.size(), [&](size_t i) {
    Vec d2 = (pt.colwise() - pt.col(static_cast<Eigen::Index>(i))).colwise().squaredNorm().transpose();
    d2(static_cast<Eigen::Index>(i)) = std::numeric_limits<double>::infinity();
    nearest[i] = d2.minCoeff();
  });
  return std::sqrt(*std::max_element(nearest.begin(), nearest.end()));
}

DensitySample density_sample(const PointCloud& cloud, const OrbitParametrization& param, const DensityConfig& config) {
  if (cloud.size() == 0) throw Error(ErrorCode::EmptySet, "empty cloud");
  if (config.count < 1) throw Error(ErrorCode::EmptySample, "sample count must be positive");
  if (param.generators.empty()) throw Error(ErrorCode::Configuration, "no generators");
  const Eigen::Index n = cloud.dim();
  DensitySample out;
  out.cloud.stage = cloud.stage;

  if (config.mode == SamplerMode::SingleSourceLieDetect) {
    std::mt19937_64 rng = indexed_rng(config.seed, 0);
    std::uniform_int_distribution<Eigen::Index> pick(0, cloud.size() - 1);
    const Vec x1 = cloud.points.row(pick(rng)).transpose();
    out.cloud.points = sample_orbit(param, x1, config.count, config.seed).points;
    return out;
  }

  const auto d = static_cast<Eigen::Index>(param.generators.size());
  out.tau = config.tau ? *config.tau : max_nearest_neighbor_distance(cloud.points);
  if (!(out.tau > 0.0)) throw Error(ErrorCode::Configuration, "resampling threshold must be positive");
  if (config.sigma) {
    if (config.sigma->size() != d) throw Error(ErrorCode::DimensionMismatch, "one standard deviation per generator");
    out.sigma = *config.sigma;
  } else {
    // Displacement |t_k A_k x| of typical size s * RMS|x|.
    const double s = silverman_factor(cloud.size(), config.intrinsic_dim);
    const double rms_x = std::sqrt(cloud.points.rowwise().squaredNorm().mean());
    out.sigma.resize(d);
    for (Eigen::Index k = 0; k < d; ++k) {
      const double rms_ax = std::sqrt((cloud.points * param.generators[static_cast<size_t>(k)].transpose()).rowwise().squaredNorm().mean());
      out.sigma(k) = rms_ax > 0.0 ? s * rms_x / rms_ax : 0.0;
    }
  }

  const Mat xt = cloud.points.transpose();
  out.cloud.points.resize(config.count, n);
  std::vector<char> capped(static_cast<size_t>(config.count), 0);
  parallel_for(static_cast<size_t>(config.count), [&](size_t idx) {
    std::mt19937_64 rng = indexed_rng(config.seed, idx);
    std::uniform_int_distribution<Eigen::Index> pick(0, cloud.size() - 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Vec src = cloud.points.row(pick(rng)).transpose();
    Vec y = src;
    bool ok = false;
    for (int attempt = 0; attempt < config.max_attempts && !ok; ++attempt) {
      Mat a = Mat::Zero(n, n);
      for (Eigen::Index k = 0; k < d; ++k) a += (out.sigma(k) * gauss(rng)) * param.generators[static_cast<size_t>(k)];
      y = matrix_exponential_skew(skew_part(a)) * src;
      ok = std::sqrt((xt.colwise() - y).colwise().squaredNorm().minCoeff()) <= out.tau;
    }
    if (!ok) {
      y = src;
      capped[idx] = 1;
    }
    out.cloud.points.row(static_cast<Eigen::Index>(idx)) = y.transpose();
  });
  for (char c : capped) out.capped += c;
  if (static_cast<double>(out.capped) > config.stall_fraction * static_cast<double>(config.count))
    throw Error(ErrorCode::SamplerStalled,
                std::to_string(out.capped) + " of " + std::to_string(config.count) + " points hit the resampling cap");
  return out;
}

}  // namespace liedetect
