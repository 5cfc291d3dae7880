#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "stcov/generators.hpp"
#include "stcov/gneiting.hpp"
#include "stcov/necessary.hpp"
#include "stcov/spectral.hpp"
#include "stcov/tapering.hpp"
#include "stcov/temporal.hpp"

namespace stcov::io {

using json = nlohmann::json;

// Descriptors. Parsers throw ParseError naming the offending key.
//   generator: {"family": "exponential", "params": {"scale": 1}}
//   temporal:  {"family": "pnorm_power", "l": 1, "params": {"p": 2, "alpha": 1, "c": 1}}
//   kernel:    {"d": 2, "generator": {...}, "temporal": {...}, "rho_p": 2}
// rho_p accepts a number or the string "inf".
Generator generator_from_json(const json& j);
json to_json(const Generator& g);
TemporalStructure temporal_from_json(const json& j);
json to_json(const TemporalStructure& h);
HomogeneousNorm norm_from_json(const json& j);
json to_json(const HomogeneousNorm& rho);
SpaceTimeKernel kernel_from_json(const json& j);
json to_json(const SpaceTimeKernel& k);

/// Parses a file; syntax errors report "path:line:column".
json load_json_file(const std::string& path);
/// Parses text; `origin` prefixes the diagnostic.
json parse_json(const std::string& text, const std::string& origin);

/// Rows `x1..xd,t1..tl` (and a trailing `z` when with_values). Blank lines
/// and lines starting with '#' are skipped, as is a leading header row.
/// Errors report "path:line: field k".
struct PointData {
  SpaceTimePoints points;
  Eigen::VectorXd values;
};
PointData read_points_csv(std::istream& in, int d, int l, bool with_values, const std::string& origin);
PointData read_points_csv(const std::string& path, int d, int l, bool with_values);

/// Header `s,value,error`, one sample per row, shortest round-trip doubles.
void write_curve_csv(std::ostream& out, const SpectralCurve& curve);
std::string format_double(double v);

json to_json(const SpectralCurve& c);
json to_json(const PermissibilityVerdict& v);
json to_json(const PdVerification& v);
json to_json(const NecessaryConditionReport& r);
json to_json(const LemmaCheck& r);
json to_json(const KrigingResult& r);

}  // namespace stcov::io
