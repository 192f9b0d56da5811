#pragma once

#include <string>

#include <json.hpp>

#include "liedetect/pipeline.hpp"
#include "liedetect/synth.hpp"

namespace liedetect {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "1";

PointCloud read_csv(const std::string& path, bool skip_header = false);
void write_csv(const std::string& path, const Mat& rows);
void write_csv(std::ostream& out, const Mat& rows);

nlohmann::json to_json(const RepresentationType& rep);
RepresentationType representation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerificationReport& v);
nlohmann::json to_json(const FitResult& fit, bool include_matrices = false);
nlohmann::json to_json(const PipelineReport& report, bool include_timings = true);

nlohmann::json catalog_json(const Group& group, int n, int w_max, bool allow_zero);

// Orbit spec files: {"rep": {...}, "n": 4, "count": 300, "sigma": 0.01, "outliers": 0, "seed": 1,
// "base_point": [...], "linear_map": [[...], ...]}
OrbitSpec orbit_spec_from_json(const nlohmann::json& j);

}  // namespace liedetect
