#include "mvi/cli.hpp"

#include "mvi/io.hpp"
#include "mvi/oracles.hpp"
#include "mvi/problems.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

namespace mvi {

namespace {

struct Overrides {
  std::optional<double> tol;
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> schedule;
};

void apply(const Overrides& o, ProblemSpec& ps) {
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw spec_error("--tol must be > 0");
    ps.tol = *o.tol;
  }
  if (o.resolution) {
    if (*o.resolution < 2) throw spec_error("--resolution must be >= 2");
    ps.resolution = *o.resolution;
  }
  if (o.seed) ps.seed = *o.seed;
  if (o.schedule) ps.schedule = parse_schedule(*o.schedule);
}

// Tent heights and K: from the spec file when given, else from the pipeline rule.
SupConvSpec sampling_spec(const SpecFile& sf) {
  const ProblemSpec& ps = sf.problem;
  std::optional<PipelineParams> params;
  auto pipeline = [&]() -> const PipelineParams& {
    if (!params) {
      const Estimates est = estimate_infima(ps);
      validate(ps, est);
      params = choose_params(ps, est);
    }
    return *params;
  };
  const double r = sf.tent ? sf.tent->first : pipeline().r;
  const double s = sf.tent ? sf.tent->second : pipeline().s1;
  const double K = sf.K ? *sf.K : pipeline().K;
  return SupConvSpec(TentSpec(ps.A, ps.B, r, s), K);
}

void write_json(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void print_report(const VerifyReport& rep, std::ostream& os) {
  for (const auto& c : rep.checks) {
    os << (c.ok ? "ok   " : "FAIL ") << c.name << ": lhs=" << format_double(c.lhs)
       << " rhs=" << format_double(c.rhs) << " (" << c.detail << ")\n";
  }
}

int cmd_certificate(const std::string& spec_path, const Overrides& o, const std::string& out_path,
                    const std::string& trace_path, std::ostream& out, std::ostream& err) {
  SpecFile sf = load_spec(spec_path);
  apply(o, sf.problem);
  const ProblemSpec& ps = sf.problem;
  Certificate cert;
  try {
    cert = run(ps);
  } catch (const pipeline_error& e) {
    err << "no certificate: " << e.what() << "\n";
    return 1;
  }
  const VerifyReport rep = verify_certificate(cert, ps);
  write_json(certificate_to_json(cert, ps, rep), out_path, out);
  if (!trace_path.empty()) {
    std::ofstream f(trace_path);
    if (!f) throw std::runtime_error("cannot write " + trace_path);
    write_trace_csv(f, cert.trace, cert.residuals);
  }
  if (!rep.valid) {
    err << "certificate failed verification\n";
    print_report(rep, err);
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& cert_path, const std::string& spec_path, const Overrides& o,
               std::ostream& out, std::ostream& err) {
  SpecFile sf = load_spec(spec_path);
  apply(o, sf.problem);
  std::ifstream in(cert_path);
  if (!in) throw spec_error("cannot open " + cert_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(cert_path + ": " + e.what());
  }
  const auto [xi, p] = certificate_points(j);
  const VerifyReport rep = verify_certificate(xi, p, sf.problem);
  print_report(rep, rep.valid ? out : err);
  out << (rep.valid ? "valid" : "invalid") << "\n";
  return rep.valid ? 0 : 1;
}

int cmd_eval(bool phi, const std::string& spec_path, const Overrides& o, int grid_res,
             const std::string& out_path, std::ostream& out) {
  SpecFile sf = load_spec(spec_path);
  apply(o, sf.problem);
  if (grid_res < 2) throw spec_error("--grid must be >= 2");
  const SupConvSpec sc = sampling_spec(sf);
  const ProblemSpec& ps = sf.problem;
  const auto grid = phi ? sample_set(ps.A, ps.B, ps.delta, grid_res) : sample_set(ps.A, ps.B, 0.0, grid_res);
  if (out_path.empty() || out_path == "-") {
    write_samples_csv(out, grid, sc, phi);
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    write_samples_csv(f, grid, sc, phi);
  }
  return 0;
}

struct Tally {
  std::ostream& out;
  int failed = 0;

  void line(const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    if (!ok) ++failed;
  }
};

void selftest_problem(const SuiteProblem& sp, const Overrides& o, Tally& t) {
  SpecFile sf = spec_from_json(nlohmann::json::parse(sp.json));
  apply(o, sf.problem);
  const ProblemSpec& ps = sf.problem;
  const std::string tag = sp.name + " ";

  Certificate cert;
  try {
    cert = run(ps);
  } catch (const std::exception& e) {
    t.line(tag + "certificate", false, e.what());
    return;
  }
  const VerifyReport rep = verify_certificate(cert, ps);
  t.line(tag + "certificate", rep.valid && cert.value_bound.holds() && cert.norm_bound.holds() && cert.slope_gap.holds(),
         "slacks " + format_double(cert.value_bound.slack()) + ", " + format_double(cert.norm_bound.slack()) + ", " +
             format_double(cert.slope_gap.slack()));
  t.line(tag + "boundary decay", cert.boundary_margin > 0.0, "margin " + format_double(cert.boundary_margin));

  const SupConvSpec sc(TentSpec(ps.A, ps.B, cert.params.r, cert.params.s1), cert.params.K);
  const double lo = std::min(cert.params.r, cert.params.s1), hi = std::max(cert.params.r, cert.params.s1);
  const auto hull = sample_set(ps.A, ps.B, 0.0, 21);
  double worst_range = 0.0, worst_major = 0.0;
  for (const auto& x : hull) {
    if (distance_to_hull(x, ps.A, ps.B) > 1e-12) continue;
    const double phi = phi_value(x, sc);
    const double psi = psi_eval(x, sc.tent()).value;
    worst_range = std::max({worst_range, lo - phi, phi - hi});
    worst_major = std::max(worst_major, psi - phi);
  }
  t.line(tag + "phi range on [A,B]", worst_range <= 1e-6, "worst " + format_double(worst_range));
  t.line(tag + "phi >= psi", worst_major <= 1e-8, "worst " + format_double(worst_major));

  std::mt19937_64 rng(ps.seed);
  const auto box = sample_set(ps.A, ps.B, ps.delta, 2);
  Point blo = box.front(), bhi = box.front();
  for (const auto& b : box) {
    blo = blo.cwiseMin(b);
    bhi = bhi.cwiseMax(b);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&]() {
    Point x(blo.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = blo(j) + unif(rng) * (bhi(j) - blo(j));
    return x;
  };
  double worst_lip = 0.0, worst_conc = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Point x = draw(), y = draw();
    const double fx = phi_value(x, sc), fy = phi_value(y, sc), fm = phi_value(0.5 * (x + y), sc);
    worst_lip = std::max(worst_lip, std::abs(fx - fy) - sc.K() * (x - y).norm());
    worst_conc = std::max(worst_conc, 0.5 * (fx + fy) - fm);
  }
  t.line(tag + "phi K-Lipschitz", worst_lip <= 1e-6, "worst " + format_double(worst_lip));
  t.line(tag + "phi concave", worst_conc <= 1e-6, "worst " + format_double(worst_conc));

  const int res = ps.A.dim() == 1 ? 2001 : 101;
  const double step = oracles::brute_step(sc.tent(), res);
  double worst_psi = 0.0;
  for (const auto& x : hull) {
    if (distance_to_hull(x, ps.A, ps.B) > 1e-12) continue;
    worst_psi = std::max(worst_psi, std::abs(psi_eval(x, sc.tent()).value - oracles::psi_brute(x, sc.tent(), res)));
  }
  const double psi_tol = 2.0 * step * (std::abs(cert.params.r - cert.params.s1) / diameter(ps.A, ps.B) + 1.0) + 1e-12;
  t.line(tag + "psi matches brute force", worst_psi <= psi_tol, "worst " + format_double(worst_psi));
}

int cmd_selftest(const Overrides& o, std::ostream& out) {
  Tally t{out};
  for (const auto& sp : suite_problems()) selftest_problem(sp, o, t);
  out << (t.failed == 0 ? "selftest passed" : "selftest failed: " + std::to_string(t.failed) + " checks") << "\n";
  return t.failed == 0 ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certificates for the multidirectional mean value inequality", "mvi"};
  app.require_subcommand(1);
  Overrides o;
  double tol = 0.0;
  int resolution = 0;
  std::uint64_t seed = 0;
  std::string schedule;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Tolerance of the domination check and of inf g");
    sub->add_option("--resolution", resolution, "Grid resolution per axis");
    sub->add_option("--seed", seed, "Seed for the random search directions");
    sub->add_option("--schedule", schedule, "Comma-separated decreasing eps_n, or 'default'");
  };

  std::string spec_path, cert_path, out_path, trace_path;
  int grid_res = 101;

  auto* certificate = app.add_subcommand("certificate", "Run the construction and write a certificate");
  certificate->add_option("spec", spec_path, "Problem spec JSON")->required();
  certificate->add_option("--out", out_path, "Certificate output (stdout by default)");
  certificate->add_option("--trace", trace_path, "CSV trace of the Ekeland iterates");
  add_common(certificate);

  auto* verify = app.add_subcommand("verify", "Recheck a certificate against its problem");
  verify->add_option("certificate", cert_path, "Certificate JSON")->required();
  verify->add_option("spec", spec_path, "Problem spec JSON")->required();
  add_common(verify);

  CLI::App* eval[2];
  for (int k = 0; k < 2; ++k) {
    eval[k] = app.add_subcommand(k == 0 ? "eval-psi" : "eval-phi", k == 0 ? "Sample psi on [A,B]" : "Sample psi and phi_K on C");
    eval[k]->add_option("spec", spec_path, "Problem spec JSON")->required();
    eval[k]->add_option("--grid", grid_res, "Grid resolution per axis");
    eval[k]->add_option("--out", out_path, "CSV output (stdout by default)");
    add_common(eval[k]);
  }

  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite on the bundled problems");
  add_common(selftest);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--tol")) o.tol = tol;
    if (sub->count("--resolution")) o.resolution = resolution;
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--schedule")) o.schedule = schedule;
  }

  try {
    if (*certificate) return cmd_certificate(spec_path, o, out_path, trace_path, out, err);
    if (*verify) return cmd_verify(cert_path, spec_path, o, out, err);
    if (*eval[0]) return cmd_eval(false, spec_path, o, grid_res, out_path, out);
    if (*eval[1]) return cmd_eval(true, spec_path, o, grid_res, out_path, out);
    if (*selftest) return cmd_selftest(o, out);
  } catch (const spec_error& e) {
    err << "malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mvi
