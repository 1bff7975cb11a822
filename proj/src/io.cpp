#include "mvi/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mvi {

nlohmann::json to_json(const Point& p) { return std::vector<double>(p.data(), p.data() + p.size()); }

nlohmann::json to_json(const Polytope& P) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : P.vertices()) out.push_back(to_json(v));
  return out;
}

Point point_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Point::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) throw spec_error("expected a nonempty coordinate array");
  Point p(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw spec_error("coordinates must be numbers");
    p(Eigen::Index(i)) = j[i].get<double>();
  }
  return p;
}

Polytope polytope_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw spec_error("a polytope is a nonempty array of vertices");
  std::vector<Point> verts;
  for (const auto& v : j) verts.push_back(point_from_json(v));
  try {
    return Polytope(std::move(verts));
  } catch (const std::invalid_argument& e) {
    throw spec_error(e.what());
  }
}

namespace {

double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw spec_error(std::string("missing field: ") + key);
  if (!j.at(key).is_number()) throw spec_error(std::string("field must be a number: ") + key);
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw spec_error(std::string("field must be finite: ") + key);
  return v;
}

}  // namespace

std::vector<double> parse_schedule(const std::string& text) {
  if (text == "default") return default_schedule();
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) throw spec_error("bad schedule entry: " + item);
    out.push_back(v);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0) || (i > 0 && !(out[i] < out[i - 1]))) {
      throw spec_error("schedule must be positive and strictly decreasing");
    }
  }
  if (out.empty()) throw spec_error("empty schedule");
  return out;
}

SpecFile spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw spec_error("spec must be a JSON object");
  if (!j.contains("function")) throw spec_error("missing field: function");
  std::optional<TestFunction> f;
  try {
    f = catalog::from_json(j.at("function"));
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(std::string("function: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw spec_error(std::string("function: ") + e.what());
  }
  if (!j.contains("A") || !j.contains("B")) throw spec_error("missing field: A or B");
  Polytope A = polytope_from_json(j.at("A"));
  Polytope B = polytope_from_json(j.at("B"));
  if (A.dim() != B.dim() || A.dim() != f->dim()) throw spec_error("dimensions of function, A and B differ");

  int resolution = 101;
  if (j.contains("resolution")) {
    if (!j.at("resolution").is_number_integer()) throw spec_error("resolution must be an integer");
    resolution = j.at("resolution").get<int>();
    if (resolution < 2) throw spec_error("resolution must be >= 2");
  }
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw spec_error("seed must be a nonnegative integer");
    seed = j.at("seed").get<std::uint64_t>();
  }

  ProblemSpec ps{*f, A, B, number(j, "delta"), number(j, "mu"), number(j, "s"), number(j, "epsilon"),
                 resolution, seed};
  if (!(ps.delta > 0.0)) throw spec_error("delta must be > 0");
  if (!(ps.epsilon > 0.0)) throw spec_error("epsilon must be > 0");
  if (j.contains("schedule")) {
    if (j.at("schedule").is_string()) {
      ps.schedule = parse_schedule(j.at("schedule").get<std::string>());
    } else {
      std::string text;
      for (const auto& v : j.at("schedule")) {
        if (!v.is_number()) throw spec_error("schedule entries must be numbers");
        text += (text.empty() ? "" : ",") + format_double(v.get<double>());
      }
      ps.schedule = parse_schedule(text);
    }
  }
  if (j.contains("tol")) {
    ps.tol = number(j, "tol");
    if (!(ps.tol > 0.0)) throw spec_error("tol must be > 0");
  }

  SpecFile out{ps, j.at("function"), std::nullopt, std::nullopt};
  if (j.contains("tent")) {
    const auto& t = j.at("tent");
    if (!t.is_object()) throw spec_error("tent must be an object with r and s");
    out.tent = std::make_pair(number(t, "r"), number(t, "s"));
    if (out.tent->first == out.tent->second) throw spec_error("tent: r must differ from s");
  }
  if (j.contains("K")) {
    out.K = number(j, "K");
    if (!(*out.K > 0.0)) throw spec_error("K must be > 0");
  }
  return out;
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(path + ": " + e.what());
  }
  return spec_from_json(j);
}

nlohmann::json spec_to_json(const ProblemSpec& ps) {
  return {{"function", {{"id", ps.f.id()}, {"params", ps.f.params()}}},
          {"A", to_json(ps.A)},
          {"B", to_json(ps.B)},
          {"delta", ps.delta},
          {"mu", ps.mu},
          {"s", ps.s},
          {"epsilon", ps.epsilon},
          {"resolution", ps.resolution},
          {"seed", ps.seed},
          {"schedule", ps.schedule},
          {"tol", ps.tol}};
}

namespace {

nlohmann::json inequality_json(const Inequality& q) {
  return {{"lhs", q.lhs}, {"rhs", q.rhs}, {"slack", q.slack()}};
}

nlohmann::json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"lower", e.lower}, {"argmin", to_json(e.argmin)}};
}

}  // namespace

nlohmann::json report_to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"ok", c.ok}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"detail", c.detail}});
  }
  return {{"valid", report.valid}, {"checks", checks}};
}

nlohmann::json certificate_to_json(const Certificate& c, const ProblemSpec& ps,
                                   const VerifyReport& report) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["spec"] = spec_to_json(ps);
  j["xi"] = to_json(c.xi);
  j["p"] = to_json(c.p);
  j["inequalities"] = {{"value_bound", inequality_json(c.value_bound)},
                       {"norm_bound", inequality_json(c.norm_bound)},
                       {"slope_gap", inequality_json(c.slope_gap)}};
  j["params"] = {{"r", c.params.r},
                 {"s1", c.params.s1},
                 {"delta1", c.params.delta1},
                 {"K", c.params.K},
                 {"j", c.params.j}};
  j["estimates"] = {{"inf_A", estimate_json(c.estimates.r)},
                    {"inf_C", estimate_json(c.estimates.inf_C)},
                    {"inf_B_delta", estimate_json(c.estimates.inf_Bd)},
                    {"inf_AB", estimate_json(c.estimates.inf_AB)}};
  j["diagnostics"] = {{"n", c.n},
                      {"eps_n", c.eps_n},
                      {"u", to_json(c.u)},
                      {"g_u", c.g_u},
                      {"evp_worst", c.evp_worst},
                      {"y", to_json(c.y)},
                      {"q", to_json(c.q)},
                      {"residual", c.residual},
                      {"separation", c.separation},
                      {"eps_bar", c.eps_bar},
                      {"interior_margin", c.interior_margin},
                      {"c_n", c.c_n},
                      {"boundary_margin", c.boundary_margin},
                      {"inf_g", c.inf_g},
                      {"bound_g", c.bound_g},
                      {"rejected", c.rejected}};
  j["tolerances"] = {{"evp", ps.tol},
                     {"inf_g", ps.tol},
                     {"boundary", kBoundaryTol},
                     {"K_margin", 1e-9},
                     {"uv_margin", 1e-9},
                     {"residual_factor", 10.0},
                     {"subgradient_match", 1e-8}};
  j["verification"] = report_to_json(report);
  j["valid"] = report.valid;
  return j;
}

std::pair<Point, Point> certificate_points(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("xi") || !j.contains("p")) throw spec_error("certificate: missing xi or p");
  return {point_from_json(j.at("xi")), point_from_json(j.at("p"))};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_samples_csv(std::ostream& os, const std::vector<Point>& grid, const SupConvSpec& sc,
                       bool with_phi) {
  const auto n = sc.dim();
  for (Eigen::Index j = 0; j < n; ++j) os << "x" << j + 1 << ",";
  os << "psi" << (with_phi ? ",phi" : "") << "\n";
  for (const auto& x : grid) {
    for (Eigen::Index j = 0; j < n; ++j) os << format_double(x(j)) << ",";
    os << format_double(psi_eval(x, sc.tent()).value);
    if (with_phi) os << "," << format_double(phi_value(x, sc));
    os << "\n";
  }
}

void write_trace_csv(std::ostream& os, const std::vector<EkelandPoint>& points,
                     const std::vector<double>& residuals) {
  if (points.empty()) return;
  const auto n = points.front().u.size();
  os << "n,eps_n";
  for (Eigen::Index j = 0; j < n; ++j) os << ",u" << j + 1;
  os << ",g_u,residual\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << i << "," << format_double(points[i].eps);
    for (Eigen::Index j = 0; j < n; ++j) os << "," << format_double(points[i].u(j));
    os << "," << format_double(points[i].value) << ","
       << format_double(i < residuals.size() ? residuals[i] : std::nan("")) << "\n";
  }
}

}  // namespace mvi
