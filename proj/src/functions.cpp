#include "mvi/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json point_json(const Point& p) {
  return std::vector<double>(p.data(), p.data() + p.size());
}

Point parse_point(const nlohmann::json& j, const char* what) {
  if (j.is_number()) return Point::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) throw std::invalid_argument(std::string(what) + ": expected a number array");
  Point p(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p(Eigen::Index(i)) = j[i].get<double>();
  return p;
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& j, const char* what) {
  if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw std::invalid_argument(std::string(what) + ": expected a matrix");
  const auto rows = Eigen::Index(j.size());
  const auto cols = Eigen::Index(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (Eigen::Index(j[std::size_t(i)].size()) != cols) throw std::invalid_argument(std::string(what) + ": ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = j[std::size_t(i)][std::size_t(k)].get<double>();
  }
  return M;
}

double spectral_norm(const Eigen::MatrixXd& Q) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(Q).singularValues()(0);
}

}  // namespace

Domain Domain::polytope(Polytope P) {
  Domain d(Kind::polytope);
  d.polytope_ = std::move(P);
  return d;
}

Domain Domain::half_space(Point normal, double offset) {
  if (!(normal.norm() > 0.0)) throw std::invalid_argument("half_space: zero normal");
  Domain d(Kind::half_space);
  d.normal_ = std::move(normal);
  d.offset_ = offset;
  return d;
}

Domain Domain::inflated_hull(InflatedHull C) {
  if (!(C.delta > 0.0)) throw std::invalid_argument("inflated_hull: delta must be > 0");
  Domain d(Kind::inflated_hull);
  d.inflated_ = std::move(C);
  return d;
}

bool Domain::contains(const Point& x, double tol) const {
  switch (kind_) {
    case Kind::all_space: return true;
    case Kind::polytope: return distance_to_hull(x, *polytope_, *polytope_) <= tol;
    case Kind::half_space: return normal_.dot(x) <= offset_ + tol * normal_.norm();
    case Kind::inflated_hull:
      return distance_to_hull(x, inflated_->A, inflated_->B) <= inflated_->delta + tol;
  }
  return false;
}

Location Domain::locate(const Point& x, double tol) const {
  switch (kind_) {
    case Kind::all_space: return Location::interior;
    case Kind::half_space: {
      const double signed_dist = (normal_.dot(x) - offset_) / normal_.norm();
      if (signed_dist < -tol) return Location::interior;
      return signed_dist > tol ? Location::exterior : Location::boundary;
    }
    case Kind::inflated_hull:
      return classify_point(x, inflated_->A, inflated_->B, inflated_->delta, tol);
    case Kind::polytope: {
      if (distance_to_hull(x, *polytope_, *polytope_) > tol) return Location::exterior;
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        for (double sign : {1.0, -1.0}) {
          const Point probe = x + sign * tol * Point::Unit(x.size(), j);
          if (distance_to_hull(probe, *polytope_, *polytope_) > 1e-12) return Location::boundary;
        }
      }
      return Location::interior;
    }
  }
  return Location::exterior;
}

nlohmann::json Domain::to_json() const {
  switch (kind_) {
    case Kind::all_space: return {{"type", "all"}};
    case Kind::polytope: {
      nlohmann::json verts = nlohmann::json::array();
      for (const auto& v : polytope_->vertices()) verts.push_back(point_json(v));
      return {{"type", "polytope"}, {"vertices", verts}};
    }
    case Kind::half_space: return {{"type", "halfspace"}, {"normal", point_json(normal_)}, {"offset", offset_}};
    case Kind::inflated_hull: return {{"type", "inflated_hull"}, {"delta", inflated_->delta}};
  }
  return {};
}

TestFunction::TestFunction(std::string id, nlohmann::json params, Eigen::Index dim, ValueFn value,
                           SubgradFn subgrad, LipschitzFn lipschitz, bool convex, Domain domain)
    : id_(std::move(id)),
      params_(std::move(params)),
      dim_(dim),
      value_(std::move(value)),
      subgrad_(std::move(subgrad)),
      lipschitz_(std::move(lipschitz)),
      convex_(convex),
      domain_(std::move(domain)) {
  if (dim_ < 1) throw dimension_error("TestFunction: dimension must be >= 1");
}

double TestFunction::value(const Point& x) const {
  require_dim(x, dim_, id_.c_str());
  return value_(x);
}

std::vector<Point> TestFunction::subgrad(const Point& x) const {
  require_dim(x, dim_, id_.c_str());
  return subgrad_(x);
}

namespace catalog {

TestFunction linear(Point a, double b) {
  const auto n = a.size();
  nlohmann::json params = {{"a", point_json(a)}, {"b", b}};
  const double lip = a.norm();
  return TestFunction(
      "linear", params, n, [a, b](const Point& x) { return a.dot(x) + b; },
      [a](const Point&) { return std::vector<Point>{a}; }, [lip](double) { return lip; }, true);
}

TestFunction quadratic(Eigen::MatrixXd Q, Point a, double c) {
  const auto n = a.size();
  if (Q.rows() != n || Q.cols() != n) throw dimension_error("quadratic: Q and a disagree");
  Q = 0.5 * (Q + Q.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  if (eig.eigenvalues().minCoeff() < -1e-12) throw std::invalid_argument("quadratic: Q must be PSD");
  nlohmann::json qj = nlohmann::json::array();
  for (Eigen::Index i = 0; i < n; ++i) qj.push_back(point_json(Q.row(i).transpose()));
  nlohmann::json params = {{"Q", qj}, {"a", point_json(a)}, {"c", c}};
  const double qn = spectral_norm(Q), an = a.norm();
  return TestFunction(
      "quadratic", params, n, [Q, a, c](const Point& x) { return 0.5 * x.dot(Q * x) + a.dot(x) + c; },
      [Q, a](const Point& x) { return std::vector<Point>{Q * x + a}; },
      [qn, an](double R) { return qn * R + an; }, true);
}

TestFunction norm(Point center, double scale) {
  const auto n = center.size();
  if (!(scale > 0.0)) throw std::invalid_argument("norm: scale must be > 0");
  nlohmann::json params = {{"center", point_json(center)}, {"scale", scale}};
  return TestFunction(
      "norm", params, n, [center, scale](const Point& x) { return scale * (x - center).norm(); },
      [center, scale](const Point& x) {
        const Point d = x - center;
        const double r = d.norm();
        if (r > 1e-14) return std::vector<Point>{scale / r * d};
        // extreme points of the unit ball along the axes
        std::vector<Point> reps;
        for (Eigen::Index j = 0; j < d.size(); ++j) {
          reps.push_back(-scale * Point::Unit(d.size(), j));
          reps.push_back(scale * Point::Unit(d.size(), j));
        }
        return reps;
      },
      [scale](double) { return scale; }, true);
}

TestFunction max_affine(std::vector<Point> slopes, std::vector<double> offsets) {
  if (slopes.empty() || slopes.size() != offsets.size()) {
    throw std::invalid_argument("max_affine: need matching nonempty slopes and offsets");
  }
  const auto n = slopes.front().size();
  double lip = 0.0;
  nlohmann::json sj = nlohmann::json::array();
  for (const auto& s : slopes) {
    if (s.size() != n) throw dimension_error("max_affine: slopes differ in dimension");
    lip = std::max(lip, s.norm());
    sj.push_back(point_json(s));
  }
  nlohmann::json params = {{"slopes", sj}, {"offsets", offsets}};
  auto pieces = [slopes, offsets](const Point& x) {
    Eigen::VectorXd v(Eigen::Index(slopes.size()));
    for (std::size_t i = 0; i < slopes.size(); ++i) v(Eigen::Index(i)) = slopes[i].dot(x) + offsets[i];
    return v;
  };
  return TestFunction(
      "max_affine", params, n, [pieces](const Point& x) { return pieces(x).maxCoeff(); },
      [pieces, slopes](const Point& x) {
        const Eigen::VectorXd v = pieces(x);
        const double top = v.maxCoeff();
        std::vector<Point> active;
        for (std::size_t i = 0; i < slopes.size(); ++i) {
          if (v(Eigen::Index(i)) < top - 1e-9 * std::max(1.0, std::abs(top))) continue;
          const bool seen = std::any_of(active.begin(), active.end(),
                                        [&](const Point& q) { return (q - slopes[i]).norm() <= 1e-14; });
          if (!seen) active.push_back(slopes[i]);
        }
        return active;
      },
      [lip](double) { return lip; }, true);
}

TestFunction sin_quad(double amplitude, Point w, Eigen::MatrixXd Q, Point a) {
  const auto n = w.size();
  if (a.size() != n || Q.rows() != n || Q.cols() != n) throw dimension_error("sin_quad: shapes disagree");
  Q = 0.5 * (Q + Q.transpose()).eval();
  nlohmann::json qj = nlohmann::json::array();
  for (Eigen::Index i = 0; i < n; ++i) qj.push_back(point_json(Q.row(i).transpose()));
  nlohmann::json params = {{"amplitude", amplitude}, {"w", point_json(w)}, {"Q", qj}, {"a", point_json(a)}};
  const double base = std::abs(amplitude) * w.norm() + a.norm();
  const double qn = spectral_norm(Q);
  return TestFunction(
      "sin_quad", params, n,
      [amplitude, w, Q, a](const Point& x) {
        return amplitude * std::sin(w.dot(x)) + 0.5 * x.dot(Q * x) + a.dot(x);
      },
      [amplitude, w, Q, a](const Point& x) {
        return std::vector<Point>{amplitude * std::cos(w.dot(x)) * w + Q * x + a};
      },
      [base, qn](double R) { return base + qn * R; }, false);
}

TestFunction restricted(const TestFunction& f, Domain domain, BoundaryRule rule) {
  nlohmann::json params = f.params();
  if (domain.kind() != Domain::Kind::inflated_hull) params["domain"] = domain.to_json();
  return TestFunction(
      f.id(), params, f.dim(),
      [f, domain](const Point& x) { return domain.contains(x) ? f.value(x) : kInf; },
      [f, domain, rule](const Point& x) {
        if (rule == BoundaryRule::empty) {
          return domain.locate(x) == Location::interior ? f.subgrad(x) : std::vector<Point>{};
        }
        return domain.contains(x) ? f.subgrad(x) : std::vector<Point>{};
      },
      [f](double R) { return f.lipschitz(R); }, f.convex(), domain);
}

TestFunction from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("id")) throw std::invalid_argument("function: missing id");
  const std::string id = spec.at("id").get<std::string>();
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  TestFunction f = [&]() {
    if (id == "linear") return linear(parse_point(params.at("a"), "a"), params.value("b", 0.0));
    if (id == "quadratic") {
      return quadratic(parse_matrix(params.at("Q"), "Q"), parse_point(params.at("a"), "a"),
                       params.value("c", 0.0));
    }
    if (id == "norm") return norm(parse_point(params.at("center"), "center"), params.value("scale", 1.0));
    if (id == "max_affine") {
      std::vector<Point> slopes;
      for (const auto& s : params.at("slopes")) slopes.push_back(parse_point(s, "slopes"));
      return max_affine(std::move(slopes), params.at("offsets").get<std::vector<double>>());
    }
    if (id == "sin_quad") {
      return sin_quad(params.at("amplitude").get<double>(), parse_point(params.at("w"), "w"),
                      parse_matrix(params.at("Q"), "Q"), parse_point(params.at("a"), "a"));
    }
    throw std::invalid_argument("unknown function id: " + id);
  }();
  if (!params.contains("domain")) return f;
  const auto& d = params.at("domain");
  const std::string type = d.at("type").get<std::string>();
  if (type == "polytope") {
    std::vector<Point> verts;
    for (const auto& v : d.at("vertices")) verts.push_back(parse_point(v, "vertices"));
    return restricted(f, Domain::polytope(Polytope(std::move(verts))));
  }
  if (type == "halfspace") {
    return restricted(f, Domain::half_space(parse_point(d.at("normal"), "normal"), d.at("offset").get<double>()));
  }
  if (type == "all") return f;
  throw std::invalid_argument("unknown domain type: " + type);
}

}  // namespace catalog

double f_eval(const TestFunction& f, const Point& x) { return f.value(x); }

std::vector<Point> f_subgrad(const TestFunction& f, const Point& x) { return f.subgrad(x); }

bool eps_subdiff_check(const TestFunction& f, const Point& x, const Point& p, double eps,
                       const std::vector<Point>& grid, double tol_check) {
  const double fx = f.value(x);
  if (!std::isfinite(fx)) throw std::domain_error("eps_subdiff_check: f(x) = +inf");
  for (const auto& z : grid) {
    const double fz = f.value(z);
    if (!std::isfinite(fz)) continue;
    if (p.dot(z - x) > fz - fx + eps + tol_check) return false;
  }
  return true;
}

}  // namespace mvi
