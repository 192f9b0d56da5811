#include "liedetect/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

namespace liedetect {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

StageError stage_error(const std::string& stage, const Error& e) { return {stage, e.code(), e.what()}; }

bool inapplicable(ErrorCode code) {
  return code == ErrorCode::NoAlmostFaithfulRep || code == ErrorCode::NoCandidates || code == ErrorCode::EmptyAmbient;
}

}  // namespace

void validate(const PipelineConfig& config) {
  if (config.groups.empty()) throw Error(ErrorCode::Configuration, "at least one group is required");
  if (config.epsilon && config.target_dim) throw Error(ErrorCode::Configuration, "epsilon and target dimension are exclusive");
  if (config.epsilon && !(*config.epsilon > 0.0)) throw Error(ErrorCode::Configuration, "epsilon must be positive");
  if (config.target_dim && *config.target_dim < 1) throw Error(ErrorCode::Configuration, "target dimension must be positive");
  if (config.radius && config.k_neighbors) throw Error(ErrorCode::Configuration, "radius and k-neighbours are exclusive");
  if (config.w_max < 1) throw Error(ErrorCode::Configuration, "wmax must be at least 1");
  if (!config.orthonormalize && (config.epsilon || config.target_dim || config.center))
    throw Error(ErrorCode::Configuration, "epsilon, target dimension and centering need the orthonormalization step");
  if (config.intrinsic_dim && *config.intrinsic_dim < 1) throw Error(ErrorCode::Configuration, "intrinsic dimension must be positive");
}

LocalPcaConfig local_pca_config(const PipelineConfig& config) {
  LocalPcaConfig lc;
  lc.intrinsic_dim = config.intrinsic_dim ? *config.intrinsic_dim : config.groups.front().dimension();
  if (config.radius)
    lc.radius = config.radius;
  else
    lc.k_neighbors = config.k_neighbors ? *config.k_neighbors : 2 * lc.intrinsic_dim + 2;
  return lc;
}

int PipelineReport::exit_code() const {
  if (error) return is_configuration_error(error->code) ? 3 : 4;
  if (selected) {
    const GroupOutcome& o = outcomes[*selected];
    return o.verification && o.verification->verdict == Verdict::Success ? 0 : 2;
  }
  // Nothing verified: report the first group error if every group failed that way.
  for (const GroupOutcome& o : outcomes)
    if (o.status == "ok") return 2;
  for (const GroupOutcome& o : outcomes)
    if (o.error && !is_configuration_error(o.error->code)) return 4;
  for (const GroupOutcome& o : outcomes)
    if (o.error) return 3;
  return 2;
}

std::vector<Group> groups_of_dimension(int d) {
  switch (d) {
    case 1: return {Group{GroupKind::SO2, 1}};
    case 2: return {Group{GroupKind::Torus, 2}};
    case 3: return {Group{GroupKind::SU2, 1}, Group{GroupKind::Torus, 3}};
    default: return {};
  }
}

namespace {

PreprocessResult preprocess_input(const PointCloud& input, const PipelineConfig& config) {
  if (input.size() == 0) throw Error(ErrorCode::EmptySet, "input cloud is empty");
  if (!input.points.allFinite()) throw Error(ErrorCode::InvalidMatrix, "input contains non-finite values");
  if (!config.orthonormalize) {
    const Eigen::Index n = input.dim();
    PreprocessResult pre;
    pre.cloud = PointCloud{input.points, Stage::Orthonormalized};
    pre.whitening = pre.unwhitening = pre.coordinates = Mat::Identity(n, n);
    pre.center = Vec::Zero(n);
    pre.retained_dimension = static_cast<int>(n);
    pre.covariance_spectrum = symmetric_eigendecomposition(covariance(input)).values.reverse();
    return pre;
  }
  if (!config.target_dim) return orthonormalize(input, config.epsilon ? *config.epsilon : 0.0, config.center);
  if (*config.target_dim > input.dim()) throw Error(ErrorCode::Configuration, "target dimension exceeds the ambient dimension");
  return orthonormalize(project_to_dimension(input, *config.target_dim), 0.0, config.center);
}

}  // namespace

PreparedInput prepare(const PointCloud& input, const PipelineConfig& config) {
  validate(config);
  PreprocessResult pre = preprocess_input(input, config);
  LiePcaOperator op = build_lie_pca(pre.cloud, local_pca_config(config));
  return {std::move(pre), std::move(op)};
}

PipelineReport run_pipeline(const PointCloud& input, const PipelineConfig& config) {
  PipelineReport report;
  report.config = config;
  const auto t_all = Clock::now();
  std::string stage = "config";
  try {
    validate(config);

    stage = "preprocess";
    auto t0 = Clock::now();
    report.preprocess = preprocess_input(input, config);
    report.seconds["preprocess"] = since(t0);
    const PointCloud& cloud = report.preprocess->cloud;
    const int n = static_cast<int>(cloud.dim());
    spdlog::info("preprocess: retained dimension {}", n);

    stage = "lie_pca";
    t0 = Clock::now();
    const LiePcaOperator op = build_lie_pca(cloud, local_pca_config(config));
    report.lie_pca_spectrum = op.eigenvalues;
    report.lie_pca_skew_spectrum = spectrum_report(op, true);
    report.estimated_symmetry_dimension = estimate_symmetry_dimension(*report.lie_pca_skew_spectrum, config.gap_ratio);
    for (const Group& g : groups_of_dimension(report.estimated_symmetry_dimension)) report.suggested_groups.push_back(g.name());
    report.seconds["lie_pca"] = since(t0);
    spdlog::info("lie_pca: estimated symmetry dimension {}", report.estimated_symmetry_dimension);

    for (const Group& group : config.groups) {
      GroupOutcome outcome;
      outcome.group = group;
      std::string gstage = "fit";
      try {
        auto tg = Clock::now();
        outcome.fit = fit(op, group, n, fit_config(config, group, n));
        outcome.seconds["fit"] = since(tg);
        spdlog::info("fit {}: winner {} cost {:.3e}", group.name(), outcome.fit->rep.label(), outcome.fit->cost);

        gstage = "verify";
        tg = Clock::now();
        VerifyConfig vc;
        vc.base_point = config.base_point;
        vc.orbit_samples = config.orbit_samples;
        vc.compute_w2 = config.compute_w2;
        vc.seed = config.seed;
        vc.thresholds = config.thresholds;
        outcome.verification = verify(cloud, *outcome.fit, vc);
        outcome.seconds["verify"] = since(tg);
        outcome.status = "ok";
      } catch (const Error& e) {
        outcome.status = inapplicable(e.code()) ? "inapplicable" : "error";
        outcome.error = stage_error(gstage, e);
        spdlog::warn("{} {}: {}", group.name(), gstage, e.what());
      }
      report.outcomes.push_back(std::move(outcome));
    }

    // Selection: smallest HD(X -> O) among successful verdicts.
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < report.outcomes.size(); ++i) {
      const auto& v = report.outcomes[i].verification;
      if (!v || v->verdict != Verdict::Success) continue;
      if (v->hausdorff_in_to_orbit < best) {
        best = v->hausdorff_in_to_orbit;
        report.selected = i;
      }
    }
    if (!report.selected && report.outcomes.size() == 1 && report.outcomes.front().verification) report.selected = 0;
    if (report.selected && report.outcomes.size() > 1) {
      std::vector<std::string> also;
      for (size_t i = 0; i < report.outcomes.size(); ++i) {
        const auto& v = report.outcomes[i].verification;
        if (i != *report.selected && v && v->verdict == Verdict::Success) also.push_back(report.outcomes[i].group.name());
      }
      for (const std::string& g : also) report.notes.push_back("group " + g + " also passes the one-sided threshold");
      bool su2 = false, so3 = false;
      for (const GroupOutcome& o : report.outcomes)
        if (o.verification && o.verification->verdict == Verdict::Success) {
          su2 |= o.group.kind == GroupKind::SU2;
          so3 |= o.group.kind == GroupKind::SO3;
        }
      if (su2 && so3 && n % 2 == 1)
        report.notes.push_back("SU2 and SO3 share their irreducible representations in odd dimension; the choice between them is not determined by the data");
    }
  } catch (const Error& e) {
    report.error = stage_error(stage, e);
    spdlog::error("{}: {}", stage, e.what());
  }
  report.seconds["total"] = since(t_all);
  return report;
}

FitConfig fit_config(const PipelineConfig& config, const Group& group, int n) {
  FitConfig fc;
  fc.mode = config.mode;
  fc.w_max = config.w_max;
  fc.optimizer = config.optimizer;
  fc.optimizer.seed = config.seed;
  if (group.kind == GroupKind::SO2 && config.allow_zero) fc.candidates = enumerate_so2_types(n / 2, config.w_max, true, true);
  return fc;
}

DensitySample density_from_input(const PointCloud& input, const PipelineConfig& config, DensityConfig density) {
  validate(config);
  const PreparedInput prep = prepare(input, config);
  const Group& g = config.groups.front();
  const int n = prep.op.n;
  density.intrinsic_dim = local_pca_config(config).intrinsic_dim;
  OrbitParametrization param;
  if (density.mode == SamplerMode::MultiSourceLiePca) {
    param = box_parametrization(bottom_frame(prep.op, g.dimension()), 1.0);
  } else {
    const FitResult f = fit(prep.op, g, n, fit_config(config, g, n));
    param = parametrization_for(f);
    if (density.mode == SamplerMode::MultiSourceLieDetect) param.generators = f.fitted_frame;
  }
  DensitySample sample = density_sample(prep.preprocess.cloud, param, density);
  sample.cloud.points = prep.preprocess.to_input(sample.cloud.points);
  sample.cloud.stage = input.stage;
  return sample;
}

PipelineReport run_group_list(const PointCloud& input, const PipelineConfig& config) {
  if (config.groups.empty()) {
    PipelineReport report;
    report.config = config;
    report.error = StageError{"config", ErrorCode::Configuration, "group list mode needs at least one group"};
    return report;
  }
  return run_pipeline(input, config);
}

}  // namespace liedetect
