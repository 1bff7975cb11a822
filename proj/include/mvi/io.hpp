#pragma once

#include "mvi/mdmvt.hpp"

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace mvi {

inline constexpr const char* kVersion = "1.0.0";

nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const Polytope& P);
Point point_from_json(const nlohmann::json& j);
Polytope polytope_from_json(const nlohmann::json& j);

/// A problem file: the problem itself plus optional tent/K overrides used by
/// the sampling commands.
struct SpecFile {
  ProblemSpec problem;
  nlohmann::json function;
  std::optional<std::pair<double, double>> tent;  // (r, s)
  std::optional<double> K;
};

/// Throws spec_error on any malformed or inconsistent field.
SpecFile spec_from_json(const nlohmann::json& j);
SpecFile load_spec(const std::string& path);
nlohmann::json spec_to_json(const ProblemSpec& ps);

/// Parses "default" or a comma-separated list of positive reals.
std::vector<double> parse_schedule(const std::string& text);

nlohmann::json certificate_to_json(const Certificate& c, const ProblemSpec& ps,
                                   const VerifyReport& report);
nlohmann::json report_to_json(const VerifyReport& report);

/// xi and p of a certificate file.
std::pair<Point, Point> certificate_points(const nlohmann::json& j);

/// One row per grid point: coordinates, psi(x), phi_K(x).
void write_samples_csv(std::ostream& os, const std::vector<Point>& grid, const SupConvSpec& sc,
                       bool with_phi);

/// Rows (n, eps_n, u..., g(u), residual); residual is nan where no pair was found.
void write_trace_csv(std::ostream& os, const std::vector<EkelandPoint>& points,
                     const std::vector<double>& residuals);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace mvi
