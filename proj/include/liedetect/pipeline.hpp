#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liedetect/algebra_fit.hpp"
#include "liedetect/errors.hpp"
#include "liedetect/lie_pca.hpp"
#include "liedetect/orbit_verify.hpp"
#include "liedetect/preprocess.hpp"
#include "liedetect/synth.hpp"

namespace liedetect {

struct PipelineConfig {
  std::string input_path;
  std::vector<Group> groups;
  int w_max = 4;
  bool allow_zero = false;  // SO2 catalog: admit zero weights
  std::optional<double> epsilon;
  std::optional<int> target_dim;
  bool center = false;
  bool orthonormalize = true;  // false: the input is taken as already orthonormal (Step 1 skipped)
  std::optional<int> intrinsic_dim;  // default: dimension of the first group
  std::optional<double> radius;
  std::optional<int> k_neighbors;    // default 2l + 2 for intrinsic dimension l
  FitMode mode = FitMode::Auto;
  OptimizerConfig optimizer;
  Eigen::Index orbit_samples = 0;
  BasePointMode base_point = BasePointMode::First;
  bool compute_w2 = false;
  std::uint64_t seed = 0;
  double gap_ratio = 5.0;
  Thresholds thresholds;
};

// Checks the configuration and throws Error(Configuration) when it is inconsistent.
void validate(const PipelineConfig& config);

LocalPcaConfig local_pca_config(const PipelineConfig& config);

struct StageError {
  std::string stage;
  ErrorCode code = ErrorCode::Configuration;
  std::string message;
};

struct GroupOutcome {
  Group group;
  std::string status;  // "ok", "inapplicable", "error"
  std::optional<StageError> error;
  std::optional<FitResult> fit;
  std::optional<VerificationReport> verification;
  std::map<std::string, double> seconds;
};

struct PipelineReport {
  PipelineConfig config;
  std::optional<PreprocessResult> preprocess;
  std::optional<Vec> lie_pca_spectrum;
  std::optional<Vec> lie_pca_skew_spectrum;
  int estimated_symmetry_dimension = 0;
  std::vector<std::string> suggested_groups;
  std::vector<GroupOutcome> outcomes;
  std::optional<size_t> selected;  // index into outcomes
  std::vector<std::string> notes;
  std::optional<StageError> error;  // failure before any group was tried
  std::map<std::string, double> seconds;

  // 0 success, 2 fail, 3 configuration error, 4 numerical error.
  int exit_code() const;
};

// Steps 1 and 2 alone: orthonormalized cloud and LiePCA operator.
struct PreparedInput {
  PreprocessResult preprocess;
  LiePcaOperator op;
};
PreparedInput prepare(const PointCloud& input, const PipelineConfig& config);

FitConfig fit_config(const PipelineConfig& config, const Group& group, int n);

// Steps 1 to 3 on the input, then new points on the detected orbit for the first group,
// returned in input coordinates.
DensitySample density_from_input(const PointCloud& input, const PipelineConfig& config, DensityConfig density);

// Compact Lie groups supported here whose dimension equals d.
std::vector<Group> groups_of_dimension(int d);

PipelineReport run_pipeline(const PointCloud& input, const PipelineConfig& config);

// Same as run_pipeline; kept separate because the group list is mandatory here.
PipelineReport run_group_list(const PointCloud& input, const PipelineConfig& config);

}  // namespace liedetect
