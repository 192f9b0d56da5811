#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "liedetect/parallel.hpp"
#include "liedetect/report.hpp"

using namespace liedetect;

namespace {

struct CommonOptions {
  std::string input;
  bool header = false;
  std::string out;
  std::string group;
  std::string groups;
  int wmax = 4;
  bool allow_zero = false;
  double epsilon = 0.0;
  int target_dim = 0;
  bool center = false;
  bool skip_orthonormalization = false;
  int intrinsic_dim = 0;
  double radius = 0.0;
  int k_neighbors = 0;
  std::string mode = "auto";
  long orbit_samples = 0;
  std::string base_point = "first";
  bool w2 = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  int restarts = 5;
  double gap_ratio = 5.0;
};

void add_input_options(CLI::App* app, CommonOptions& o) {
  app->add_option("--input", o.input, "CSV point cloud, one point per row")->required()->check(CLI::ExistingFile);
  app->add_flag("--header", o.header, "skip the first line of the CSV");
  auto* eps = app->add_option("--epsilon", o.epsilon, "covariance eigenvalue cut of the orthonormalization");
  auto* td = app->add_option("--target-dim", o.target_dim, "keep this many principal directions");
  eps->excludes(td);
  app->add_flag("--center", o.center, "subtract the mean before orthonormalizing");
  app->add_flag("--skip-orthonormalization", o.skip_orthonormalization, "treat the input as already orthonormal");
  app->add_option("--intrinsic-dim", o.intrinsic_dim, "dimension l of the orbit (default: group dimension)");
  auto* r = app->add_option("--radius", o.radius, "local PCA radius");
  auto* k = app->add_option("--k-neighbors", o.k_neighbors, "local PCA neighbour count (default 2l+2, l the intrinsic dimension)");
  r->excludes(k);
}

void add_fit_options(CLI::App* app, CommonOptions& o) {
  app->add_option("--wmax", o.wmax, "largest weight in the Abelian catalogs")->check(CLI::PositiveNumber);
  app->add_flag("--allow-zero", o.allow_zero, "SO2 catalog admits zero weights");
  app->add_option("--mode", o.mode, "objective")->check(CLI::IsMember({"auto", "stiefel", "grassmann"}));
  app->add_option("--orbit-samples", o.orbit_samples, "points of the reconstructed orbit (0: default)");
  app->add_option("--base-point", o.base_point, "base point of the orbit")->check(CLI::IsMember({"first", "best"}));
  app->add_flag("--w2", o.w2, "also compute the Wasserstein-2 distance");
  app->add_option("--restarts", o.restarts, "random starts per component of O(n)")->check(CLI::PositiveNumber);
  app->add_option("--gap-ratio", o.gap_ratio, "eigenvalue ratio marking the end of the LiePCA kernel");
}

std::vector<Group> parse_groups(const std::string& list) {
  std::vector<Group> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(Group::parse(item));
  return out;
}

PipelineConfig make_config(const CommonOptions& o) {
  PipelineConfig c;
  c.input_path = o.input;
  if (!o.group.empty()) c.groups = {Group::parse(o.group)};
  if (!o.groups.empty() && o.groups != "auto") c.groups = parse_groups(o.groups);
  c.w_max = o.wmax;
  c.allow_zero = o.allow_zero;
  if (o.epsilon > 0.0) c.epsilon = o.epsilon;
  if (o.target_dim > 0) c.target_dim = o.target_dim;
  c.center = o.center;
  c.orthonormalize = !o.skip_orthonormalization;
  if (o.intrinsic_dim > 0) c.intrinsic_dim = o.intrinsic_dim;
  if (o.radius > 0.0) c.radius = o.radius;
  if (o.k_neighbors > 0) c.k_neighbors = o.k_neighbors;
  c.mode = parse_fit_mode(o.mode);
  c.orbit_samples = o.orbit_samples;
  c.base_point = parse_base_point_mode(o.base_point);
  c.compute_w2 = o.w2;
  c.seed = o.seed;
  c.optimizer.restarts = o.restarts;
  c.gap_ratio = o.gap_ratio;
  return c;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + out + "'");
  f << text << '\n';
}

void emit_csv(const std::string& out, const Mat& rows) {
  if (out.empty() || out == "-")
    write_csv(std::cout, rows);
  else
    write_csv(out, rows);
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Configuration, "cannot parse integer '" + item + "'");
    }
  }
  return out;
}

// "a,b,c;d,e,f" -> rows of a lattice basis
IMat parse_lattice(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_ints(row));
  if (rows.empty()) throw Error(ErrorCode::Configuration, "empty lattice");
  IMat lat(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(ErrorCode::Configuration, "ragged lattice");
    for (size_t j = 0; j < rows[i].size(); ++j) lat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return lat;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("liedetect");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LIEDETECT_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Detects representation orbits of compact Lie groups in point clouds"};
  app.require_subcommand(1);
  CommonOptions o;
  app.add_option("--threads", o.threads, "worker thread cap (0: all cores)");
  app.add_option("--seed", o.seed, "random seed");

  auto* detect = app.add_subcommand("detect", "run the full pipeline for one group");
  add_input_options(detect, o);
  add_fit_options(detect, o);
  detect->add_option("--group", o.group, "SO2, T2, T3, SU2 or SO3")->required();
  detect->add_option("--out", o.out, "report path (default: stdout)");
  std::string orbit_csv;
  detect->add_option("--orbit-csv", orbit_csv, "also write the reconstructed orbit, in orthonormalized coordinates");

  auto* multi = app.add_subcommand("detect-multi", "run the pipeline for a list of groups and pick one");
  add_input_options(multi, o);
  add_fit_options(multi, o);
  multi->add_option("--groups", o.groups, "comma separated list, or 'auto' to use the LiePCA dimension estimate")->required();
  multi->add_option("--out", o.out, "report path (default: stdout)");

  auto* list = app.add_subcommand("list-reps", "print the catalog of representation types");
  int list_n = 0;
  list->add_option("--group", o.group, "group")->required();
  list->add_option("--n", list_n, "ambient dimension")->required()->check(CLI::PositiveNumber);
  list->add_option("--wmax", o.wmax, "largest weight")->check(CLI::PositiveNumber);
  list->add_flag("--allow-zero", o.allow_zero, "SO2: admit zero weights");
  list->add_option("--out", o.out, "JSON path (default: stdout)");

  auto* synth = app.add_subcommand("synth", "sample a representation orbit");
  std::string spec_path, weights, parts, lattice, truth_path;
  int synth_n = 0;
  long count = 100, outliers = 0;
  double sigma = 0.0;
  synth->add_option("--spec", spec_path, "JSON orbit spec")->check(CLI::ExistingFile);
  synth->add_option("--group", o.group, "group of an inline spec");
  synth->add_option("--weights", weights, "SO2 weights, e.g. 1,4");
  synth->add_option("--lattice", lattice, "torus lattice rows, e.g. 0,1,1;2,-2,1");
  synth->add_option("--parts", parts, "SU2 / SO3 partition, e.g. 3,4");
  synth->add_option("--n", synth_n, "ambient dimension (default: minimal)");
  synth->add_option("--count", count, "number of orbit points");
  synth->add_option("--sigma", sigma, "Gaussian noise level");
  synth->add_option("--outliers", outliers, "uniform outliers in [-1,1]^n");
  synth->add_option("--out", o.out, "CSV path (default: stdout)");
  synth->add_option("--truth", truth_path, "sidecar JSON with the ground truth");

  auto* density = app.add_subcommand("density-sample", "draw new points on the detected orbit");
  add_input_options(density, o);
  add_fit_options(density, o);
  std::string sampler = "single-liedetect";
  long density_count = 500;
  density->add_option("--group", o.group, "group")->required();
  density->add_option("--sampler", sampler, "sampling paradigm")
      ->check(CLI::IsMember({"multi-liepca", "multi-liedetect", "single-liedetect"}));
  density->add_option("--count", density_count, "points to generate")->check(CLI::PositiveNumber);
  density->add_option("--out", o.out, "CSV path (default: stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "print the LiePCA eigenvalues");
  add_input_options(spectrum, o);
  bool skew = false;
  spectrum->add_option("--group", o.group, "group whose dimension sets the default intrinsic dimension");
  spectrum->add_flag("--skew", skew, "restrict the operator to skew-symmetric matrices");
  spectrum->add_option("--out", o.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    set_thread_limit(o.threads);
    if (detect->parsed() || multi->parsed()) {
      PipelineConfig c = make_config(o);
      const PointCloud input = read_csv(o.input, o.header);
      if (multi->parsed() && o.groups == "auto") {
        c.groups = {Group{GroupKind::SO2, 1}};
        const PreparedInput prep = prepare(input, c);
        const int d = estimate_symmetry_dimension(spectrum_report(prep.op, true), c.gap_ratio);
        c.groups = groups_of_dimension(d);
        if (c.groups.empty())
          throw Error(ErrorCode::NoCandidates, "no supported group of dimension " + std::to_string(d));
        spdlog::info("auto groups for dimension {}", d);
      }
      const PipelineReport report = multi->parsed() ? run_group_list(input, c) : run_pipeline(input, c);
      emit(o.out, to_json(report).dump(2));
      if (!orbit_csv.empty() && report.selected) {
        const GroupOutcome& g = report.outcomes[*report.selected];
        if (g.fit && g.verification) {
          const PointCloud& cloud = report.preprocess->cloud;
          const Vec x = cloud.points.row(g.verification->base_point_index).transpose();
          write_csv(orbit_csv, sample_orbit(parametrization_for(*g.fit), x, g.verification->orbit_samples, c.seed).points);
        }
      }
      return report.exit_code();
    }
    if (list->parsed()) {
      emit(o.out, catalog_json(Group::parse(o.group), list_n, o.wmax, o.allow_zero).dump(2));
      return 0;
    }
    if (synth->parsed()) {
      OrbitSpec spec;
      if (!spec_path.empty()) {
        std::ifstream f(spec_path);
        spec = orbit_spec_from_json(nlohmann::json::parse(f));
      } else {
        if (o.group.empty()) throw Error(ErrorCode::Configuration, "synth needs --spec or --group");
        const Group g = Group::parse(o.group);
        if (g.kind == GroupKind::SO2)
          spec.rep = so2_type(parse_ints(weights));
        else if (g.kind == GroupKind::Torus)
          spec.rep = torus_type(parse_lattice(lattice));
        else
          spec.rep = partition_type(g.kind, parse_ints(parts));
        spec.n = synth_n > 0 ? synth_n : spec.rep.min_ambient();
        spec.count = count;
        spec.noise_sigma = sigma;
        spec.outliers = outliers;
        spec.seed = o.seed;
      }
      const PointCloud cloud = sample_orbit_uniform(spec);
      emit_csv(o.out, cloud.points);
      if (!truth_path.empty()) {
        nlohmann::json truth{{"schema", kReportSchema}, {"rep", to_json(spec.rep)}, {"n", spec.n}, {"count", spec.count},
                             {"sigma", spec.noise_sigma}, {"outliers", spec.outliers}, {"seed", spec.seed}};
        emit(truth_path, truth.dump(2));
      }
      return 0;
    }
    if (density->parsed()) {
      PipelineConfig c = make_config(o);
      const PointCloud input = read_csv(o.input, o.header);
      DensityConfig dc;
      dc.mode = parse_sampler_mode(sampler);
      dc.count = density_count;
      dc.seed = c.seed;
      const DensitySample sample = density_from_input(input, c, dc);
      emit_csv(o.out, sample.cloud.points);
      return 0;
    }
    if (spectrum->parsed()) {
      PipelineConfig c = make_config(o);
      if (c.groups.empty()) c.groups = {Group{GroupKind::SO2, 1}};
      const PreparedInput prep = prepare(read_csv(o.input, o.header), c);
      const Vec ev = spectrum_report(prep.op, skew);
      emit_csv(o.out, ev);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return is_configuration_error(e.code()) ? 3 : 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "Configuration: " << e.what() << '\n';
    return 3;
  }
  return 3;
}
