#include "liedetect/report.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "liedetect/errors.hpp"

namespace liedetect {

using nlohmann::json;

PointCloud read_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  if (skip_header && std::getline(in, line)) ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const char* begin = field.c_str();
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(begin, &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == begin || (end && *end != '\0') || errno == ERANGE)
        throw Error(ErrorCode::Io, path + ":" + std::to_string(line_no) + ": cannot parse '" + field + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::Io, path + ":" + std::to_string(line_no) + ": expected " + std::to_string(rows.front().size()) + " columns");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Io, "'" + path + "' contains no points");
  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) cloud.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return cloud;
}

void write_csv(std::ostream& out, const Mat& rows) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) out << (j ? "," : "") << rows(i, j);
    out << '\n';
  }
}

void write_csv(const std::string& path, const Mat& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  write_csv(out, rows);
}

namespace {

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

Mat mat_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty()) return Mat();
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(ErrorCode::Configuration, "ragged matrix in JSON");
    for (size_t k = 0; k < rows[i].size(); ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  }
  return m;
}

json error_json(const StageError& e) { return {{"stage", e.stage}, {"code", error_name(e.code)}, {"message", e.message}}; }

}  // namespace

json to_json(const RepresentationType& rep) {
  json j{{"group", rep.group.name()}, {"label", rep.label()}};
  switch (rep.group.kind) {
    case GroupKind::SO2: j["weights"] = rep.weights; break;
    case GroupKind::Torus: {
      json rows = json::array();
      for (Eigen::Index i = 0; i < rep.lattice.rows(); ++i) {
        std::vector<int> r;
        for (Eigen::Index k = 0; k < rep.lattice.cols(); ++k) r.push_back(rep.lattice(i, k));
        rows.push_back(r);
      }
      j["lattice"] = rows;
      break;
    }
    default: j["parts"] = rep.parts; break;
  }
  return j;
}

RepresentationType representation_from_json(const json& j) {
  try {
    const Group g = Group::parse(j.at("group").get<std::string>());
    switch (g.kind) {
      case GroupKind::SO2: return so2_type(j.at("weights").get<std::vector<int>>());
      case GroupKind::Torus: {
        const auto rows = j.at("lattice").get<std::vector<std::vector<int>>>();
        if (rows.empty()) throw Error(ErrorCode::Configuration, "empty lattice");
        IMat lat(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
        for (size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != rows.front().size()) throw Error(ErrorCode::Configuration, "ragged lattice");
          for (size_t k = 0; k < rows[i].size(); ++k) lat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
        if (static_cast<int>(rows.size()) != g.torus_dim)
          throw Error(ErrorCode::Configuration, "lattice rank does not match " + g.name());
        return torus_type(lat);
      }
      default: return partition_type(g.kind, j.at("parts").get<std::vector<int>>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Configuration, std::string("bad representation JSON: ") + e.what());
  }
}

json to_json(const VerificationReport& v) {
  json j{{"hausdorff_in_to_orbit", v.hausdorff_in_to_orbit},
         {"hausdorff_orbit_to_in", v.hausdorff_orbit_to_in},
         {"hausdorff_symmetric", v.hausdorff_symmetric},
         {"verdict", verdict_name(v.verdict)},
         {"symmetric_below_threshold", v.symmetric_below_threshold},
         {"base_point_index", v.base_point_index},
         {"orbit_samples", v.orbit_samples},
         {"thresholds",
          {{"one_sided", v.thresholds.one_sided},
           {"symmetric", v.thresholds.symmetric},
           {"reverse_one_sided", v.thresholds.reverse_one_sided}}}};
  j["wasserstein2"] = v.wasserstein2 ? json(*v.wasserstein2) : json(nullptr);
  return j;
}

json to_json(const FitResult& fit, bool include_matrices) {
  json costs = json::array();
  for (const CandidateCost& c : fit.all_costs) costs.push_back({{"rep", c.rep.label()}, {"cost", c.cost}});
  json j{{"rep", to_json(fit.rep)}, {"cost", fit.cost}, {"objective", fit.objective}, {"all_costs", costs}};
  if (fit.objective == "torus-closed-form") j["reduction_residual"] = fit.reduction_residual;
  if (include_matrices) {
    j["conjugator"] = mat_json(fit.conjugator);
    json gens = json::array();
    for (const Mat& g : fit.generators) gens.push_back(mat_json(g));
    j["generators"] = gens;
  }
  return j;
}

json to_json(const PipelineReport& report, bool include_timings) {
  const PipelineConfig& c = report.config;
  json groups = json::array();
  for (const Group& g : c.groups) groups.push_back(g.name());
  json config{{"input", c.input_path},
              {"groups", groups},
              {"wmax", c.w_max},
              {"allow_zero", c.allow_zero},
              {"center", c.center},
              {"orthonormalize", c.orthonormalize},
              {"mode", fit_mode_name(c.mode)},
              {"orbit_samples", c.orbit_samples},
              {"base_point", c.base_point == BasePointMode::Best ? "best" : "first"},
              {"w2", c.compute_w2},
              {"seed", c.seed},
              {"gap_ratio", c.gap_ratio},
              {"restarts", c.optimizer.restarts}};
  config["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
  config["target_dim"] = c.target_dim ? json(*c.target_dim) : json(nullptr);
  config["intrinsic_dim"] = c.intrinsic_dim ? json(*c.intrinsic_dim) : json(nullptr);
  config["radius"] = c.radius ? json(*c.radius) : json(nullptr);
  config["k_neighbors"] = c.k_neighbors ? json(*c.k_neighbors) : json(nullptr);

  json j{{"schema", kReportSchema}, {"tool_version", kToolVersion}, {"config", config}};
  json stages = json::object();
  if (report.preprocess) {
    stages["preprocess"] = {{"retained_dimension", report.preprocess->retained_dimension},
                            {"epsilon", report.preprocess->epsilon},
                            {"covariance_spectrum", vec_json(report.preprocess->covariance_spectrum)}};
  }
  if (report.lie_pca_spectrum) {
    stages["lie_pca"] = {{"spectrum", vec_json(*report.lie_pca_spectrum)},
                         {"skew_spectrum", vec_json(*report.lie_pca_skew_spectrum)},
                         {"estimated_symmetry_dimension", report.estimated_symmetry_dimension},
                         {"suggested_groups", report.suggested_groups}};
  }
  j["stages"] = stages;

  json outcomes = json::array();
  for (const GroupOutcome& o : report.outcomes) {
    json g{{"group", o.group.name()}, {"status", o.status}};
    if (o.error) g["error"] = error_json(*o.error);
    if (o.fit) g["fit"] = to_json(*o.fit);
    if (o.verification) g["verification"] = to_json(*o.verification);
    if (include_timings) g["seconds"] = o.seconds;
    outcomes.push_back(g);
  }
  j["groups"] = outcomes;
  if (report.selected) {
    const GroupOutcome& o = report.outcomes[*report.selected];
    j["selected"] = {{"group", o.group.name()},
                     {"rep", o.fit ? to_json(o.fit->rep) : json(nullptr)},
                     {"verdict", o.verification ? verdict_name(o.verification->verdict) : "fail"}};
  } else {
    j["selected"] = nullptr;
  }
  j["notes"] = report.notes;
  j["error"] = report.error ? error_json(*report.error) : json(nullptr);
  j["exit_code"] = report.exit_code();
  if (include_timings) j["seconds"] = report.seconds;
  return j;
}

json catalog_json(const Group& group, int n, int w_max, bool allow_zero) {
  std::vector<RepresentationType> types;
  if (group.kind == GroupKind::SO2 && allow_zero)
    types = enumerate_so2_types(n / 2, w_max, true, true);
  else
    types = pipeline_candidates(group, n, w_max);
  json list = json::array();
  for (const RepresentationType& t : types) {
    json e = to_json(t);
    e["ambient_dimension"] = n;
    list.push_back(e);
  }
  return {{"schema", kReportSchema}, {"group", group.name()}, {"n", n}, {"wmax", w_max}, {"count", types.size()}, {"types", list}};
}

OrbitSpec orbit_spec_from_json(const json& j) {
  try {
    OrbitSpec spec;
    spec.rep = representation_from_json(j.at("rep"));
    spec.n = j.value("n", spec.rep.min_ambient());
    spec.count = j.value("count", static_cast<Eigen::Index>(100));
    spec.noise_sigma = j.value("sigma", 0.0);
    spec.outliers = j.value("outliers", static_cast<Eigen::Index>(0));
    spec.seed = j.value("seed", static_cast<std::uint64_t>(0));
    if (j.contains("base_point")) {
      const auto v = j.at("base_point").get<std::vector<double>>();
      spec.base_point = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    if (j.contains("linear_map")) spec.linear_map = mat_from_json(j.at("linear_map"));
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Configuration, std::string("bad orbit spec: ") + e.what());
  }
}

}  // namespace liedetect
