#include "hjcone/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hjcone/csv.hpp"
#include "hjcone/fd.hpp"
#include "hjcone/sampling.hpp"

namespace hjcone {

using nlohmann::ordered_json;

namespace {

void deliver(const std::string& text, const std::string& out_path,
             std::string* captured) {
  if (captured) *captured = text;
  if (!out_path.empty())
    atomic_write_file(out_path, text);
  else
    std::cout << text;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json")
    throw std::invalid_argument("format must be \"csv\" or \"json\"");
}

std::vector<std::pair<Formula, std::string>> formulas_of(const Scenario& sc) {
  std::vector<std::pair<Formula, std::string>> out;
  if (sc.formula == "hopf_lax" || sc.formula == "both")
    out.emplace_back(Formula::HopfLax, "hopf_lax");
  if (sc.formula == "hopf" || sc.formula == "both")
    out.emplace_back(Formula::Hopf, "hopf");
  return out;
}

double conj_radius_auto(const HamiltonianSpec& H, double znorm) {
  double W = 1.0 + znorm;
  if (H.local_lip) {
    for (int d = 0; d < 12 && H.local_lip(W) < znorm + 1.0; ++d) W *= 2.0;
  } else {
    W = 4.0 * (1.0 + znorm);
  }
  return 2.0 * W;
}

/// Clamped multilinear read of an FD field at an off-node point.
double interp_fd(const FdResult& r, const Point& x) {
  const int n = r.grid.nodes_per_axis();
  const double h = r.grid.h;
  auto locate = [&](double c, int& i0, double& w) {
    double u = c / h;
    i0 = static_cast<int>(std::floor(u));
    i0 = std::max(0, std::min(i0, n - 2));
    w = std::max(0.0, std::min(u - i0, 1.0));
  };
  int i0;
  double wi;
  locate(x[0], i0, wi);
  if (r.grid.dim == 1)
    return (1 - wi) * r.at(i0) + wi * r.at(i0 + 1);
  int j0;
  double wj;
  locate(x[1], j0, wj);
  return (1 - wi) * ((1 - wj) * r.at(i0, j0) + wj * r.at(i0, j0 + 1)) +
         wi * ((1 - wj) * r.at(i0 + 1, j0) + wj * r.at(i0 + 1, j0 + 1));
}

}  // namespace

int cmd_solve(const Scenario& sc, const std::string& out_path,
              const std::string& format, std::string* captured) {
  check_format(format);
  const int dim = sc.cone.ambient_dim();
  const VariationalSolver solver = sc.make_solver();
  const std::vector<Point> pts = sc.eval_points();

  std::vector<std::string> header = {"formula", "t"};
  for (int i = 0; i < dim; ++i) header.push_back("x_" + std::to_string(i + 1));
  header.insert(header.end(), {"value", "residual", "diverged"});
  CsvWriter csv(header);
  ordered_json jrows = ordered_json::array();

  for (const auto& [formula, fname] : formulas_of(sc)) {
    if (formula == Formula::Hopf && !sc.make_initial_spec().flags.convex_on_C) {
      std::cerr << "note: skipping hopf (initial condition not declared convex)\n";
      continue;
    }
    for (double t : sc.times) {
      for (const Point& x : pts) {
        const SolutionSample s =
            formula == Formula::Hopf ? solver.hopf(t, x) : solver.hopf_lax(t, x);
        if (s.diverged) {
          std::cerr << "warning: " << fname << " diverged at t=" << t << " x=(";
          for (int i = 0; i < dim; ++i)
            std::cerr << (i ? "," : "") << x[i];
          std::cerr << ")\n";
        }
        std::vector<std::string> row = {fname, CsvWriter::num(t)};
        for (int i = 0; i < dim; ++i) row.push_back(CsvWriter::num(x[i]));
        row.push_back(CsvWriter::num(s.value));
        row.push_back(CsvWriter::num(s.residual));
        row.push_back(CsvWriter::flag(s.diverged));
        csv.add_row(row);
        ordered_json jr;
        jr["formula"] = fname;
        jr["t"] = t;
        jr["x"] = x;
        jr["value"] = s.value;
        jr["residual"] = s.residual;
        jr["diverged"] = s.diverged;
        jrows.push_back(std::move(jr));
      }
    }
  }
  deliver(format == "csv" ? csv.str() : jrows.dump(2) + "\n", out_path, captured);
  return 0;
}

int cmd_verify(const Scenario& sc, const std::vector<std::string>& suites,
               const std::string& out_path, const std::string& format,
               std::vector<CheckReport>* captured) {
  check_format(format);
  const std::vector<std::string> all = suite_names();
  std::vector<std::string> run = suites.empty() ? all : suites;
  for (const auto& s : run)
    if (std::find(all.begin(), all.end(), s) == all.end())
      throw std::invalid_argument("unknown verify suite: " + s);

  std::cout << "# suite -> property\n";
  for (const auto& [s, p] : property_map())
    if (std::find(run.begin(), run.end(), s) != run.end())
      std::cout << "#   " << s << ": " << p << "\n";

  std::vector<CheckReport> reports;
  for (const auto& s : run) {
    std::vector<CheckReport> rs = run_suite(s, sc);
    for (auto& r : rs) {
      if (r.skipped)
        std::cout << "[skip] " << r.check_name << " (" << r.skip_reason << ")\n";
      else
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.check_name
                  << "  max_violation=" << CsvWriter::num(r.max_violation)
                  << " tol=" << CsvWriter::num(r.tolerance)
                  << " samples=" << r.samples_used << "\n";
      reports.push_back(std::move(r));
    }
  }
  if (captured) *captured = reports;

  CsvWriter csv({"check", "samples", "max_violation", "tolerance", "result",
                 "skip_reason", "seed", "elapsed_s"});
  ordered_json jrows = ordered_json::array();
  for (const auto& r : reports) {
    csv.add_row({r.check_name, CsvWriter::num(static_cast<long>(r.samples_used)),
                 CsvWriter::num(r.max_violation), CsvWriter::num(r.tolerance),
                 r.skipped ? "skip" : (r.pass ? "pass" : "fail"), r.skip_reason,
                 std::to_string(r.seed), CsvWriter::num(r.elapsed_s)});
    ordered_json jr;
    jr["check"] = r.check_name;
    jr["property"] = r.property;
    jr["samples"] = r.samples_used;
    jr["max_violation"] = r.max_violation;
    jr["tolerance"] = r.tolerance;
    jr["result"] = r.skipped ? "skip" : (r.pass ? "pass" : "fail");
    if (r.skipped) jr["skip_reason"] = r.skip_reason;
    jr["seed"] = r.seed;
    jr["elapsed_s"] = r.elapsed_s;
    jrows.push_back(std::move(jr));
  }
  if (!out_path.empty())
    atomic_write_file(out_path,
                      format == "csv" ? csv.str() : jrows.dump(2) + "\n");
  return all_passed(reports) ? 0 : 1;
}

int cmd_convergence(const Scenario& sc, const std::vector<double>& hs,
                    const std::string& out_path, const std::string& format,
                    std::string* captured) {
  check_format(format);
  if (hs.empty())
    throw std::invalid_argument("convergence: need at least one grid spacing");
  for (double h : hs)
    if (!(h > 0)) throw std::invalid_argument("convergence: spacings must be > 0");
  if (!sc.fd)
    throw std::invalid_argument(
        "convergence: scenario has no fd configuration");
  const FdConfig fc = *sc.fd;
  const int dim = sc.cone.ambient_dim();

  const HamiltonianSpec F = sc.make_extended_hamiltonian();
  if (!std::isfinite(F.global_lip))
    throw std::invalid_argument(
        "convergence: the extended Hamiltonian must be globally Lipschitz "
        "(use the \"clip\" or \"lip\" extension)");

  // outermost coordinate among the evaluation points
  double xmax = 0.0;
  for (const Point& x : sc.eval_points())
    for (double c : x) xmax = std::max(xmax, c);
  if (xmax <= 0) xmax = 1.0;

  // dissipation speed: alpha_i = L / sqrt(a_i); bound with the smallest weight
  double min_w = 1.0;
  if (sc.cone.kind() == ConeKind::Product)
    for (double w : sc.cone.weights()) min_w = std::min(min_w, w);
  const double speed = F.global_lip / std::sqrt(min_w) * dim;

  const double hc = *std::max_element(hs.begin(), hs.end());

  // shared comparison points: coarsest-grid nodes inside the point range
  std::vector<Point> cmp;
  {
    const double target = xmax + fc.T * speed + 2.0 * hc;
    const int ncmp1 = static_cast<int>(std::floor(xmax / hc + 1e-9)) + 1;
    (void)target;
    if (dim == 1) {
      const int stride = std::max(1, ncmp1 / 17);
      for (int i = 0; i < ncmp1; i += stride) cmp.push_back({i * hc});
    } else {
      const int stride = std::max(1, ncmp1 / 5);
      for (int i = 0; i < ncmp1; i += stride)
        for (int j = 0; j < ncmp1; j += stride)
          cmp.push_back({i * hc, j * hc});
    }
  }

  // variational reference at the horizon
  const bool use_hopf = sc.formula == "hopf";
  const VariationalSolver solver = sc.make_solver();
  std::vector<double> ref(cmp.size());
  for (size_t i = 0; i < cmp.size(); ++i) {
    const SolutionSample s =
        use_hopf ? solver.hopf(fc.T, cmp[i]) : solver.hopf_lax(fc.T, cmp[i]);
    ref[i] = s.value;
  }

  CsvWriter csv({"h", "nodes", "max_error", "order"});
  ordered_json jrows = ordered_json::array();
  double prev_h = 0.0, prev_err = 0.0;
  bool have_prev = false;
  for (double h : hs) {
    GridSpec g;
    g.dim = dim;
    g.h = h;
    const double want =
        fc.extent > 0 ? fc.extent : xmax + fc.T * speed + 2.0 * hc;
    g.extent = std::ceil(want / h - 1e-9) * h;
    g.T = fc.T;
    g.cfl = fc.cfl;
    const FdResult r = solve_fd(F, sc.make_initial_spec(), sc.cone, g);
    double err = 0.0;
    for (size_t i = 0; i < cmp.size(); ++i)
      err = std::max(err, std::fabs(interp_fd(r, cmp[i]) - ref[i]));

    std::string order;
    if (have_prev && err > 1e-12 && prev_err > 1e-12 && h != prev_h)
      order = CsvWriter::num(std::log(prev_err / err) / std::log(prev_h / h));
    csv.add_row({CsvWriter::num(h), CsvWriter::num(static_cast<long>(g.nodes_per_axis())),
                 CsvWriter::num(err), order});
    ordered_json jr;
    jr["h"] = h;
    jr["nodes"] = g.nodes_per_axis();
    jr["max_error"] = err;
    if (!order.empty())
      jr["order"] = std::log(prev_err / err) / std::log(prev_h / h);
    jrows.push_back(std::move(jr));
    prev_h = h;
    prev_err = err;
    have_prev = true;
  }
  deliver(format == "csv" ? csv.str() : jrows.dump(2) + "\n", out_path, captured);
  return 0;
}

int cmd_conjugate(const Scenario& sc, double radius, const std::string& out_path,
                  const std::string& format, std::string* captured) {
  check_format(format);
  const int dim = sc.cone.ambient_dim();
  const HamiltonianSpec H = sc.make_hamiltonian_spec();
  OptimizerConfig opt = sc.optimizer;
  opt.seed = subseed(sc.seed, "conjugate-cmd");

  std::vector<std::string> header;
  for (int i = 0; i < dim; ++i) header.push_back("y_" + std::to_string(i + 1));
  header.push_back("value");
  for (int i = 0; i < dim; ++i)
    header.push_back("argmax_" + std::to_string(i + 1));
  header.insert(header.end(), {"residual", "diverged"});
  CsvWriter csv(header);
  ordered_json jrows = ordered_json::array();

  for (const Point& y : sc.eval_points()) {
    const double R = radius > 0 ? radius : conj_radius_auto(H, norm(sc.cone, y));
    const ConjugateResult r = monotone_conjugate(H.evaluator, sc.cone, y, R, opt);
    if (r.diverged) {
      std::cerr << "warning: conjugate diverged at y=(";
      for (int i = 0; i < dim; ++i) std::cerr << (i ? "," : "") << y[i];
      std::cerr << ") with radius " << R << "\n";
    }
    std::vector<std::string> row;
    for (int i = 0; i < dim; ++i) row.push_back(CsvWriter::num(y[i]));
    row.push_back(CsvWriter::num(r.value));
    for (int i = 0; i < dim; ++i) row.push_back(CsvWriter::num(r.argmax[i]));
    row.push_back(CsvWriter::num(r.residual));
    row.push_back(CsvWriter::flag(r.diverged));
    csv.add_row(row);
    ordered_json jr;
    jr["y"] = y;
    jr["value"] = r.value;
    jr["argmax"] = r.argmax;
    jr["residual"] = r.residual;
    jr["diverged"] = r.diverged;
    jrows.push_back(std::move(jr));
  }
  deliver(format == "csv" ? csv.str() : jrows.dump(2) + "\n", out_path, captured);
  return 0;
}

int cmd_distance(const Scenario& sc, const std::string& out_path,
                 const std::string& format, std::string* captured) {
  check_format(format);
  const int dim = sc.cone.ambient_dim();
  std::vector<std::string> header;
  for (int i = 0; i < dim; ++i) header.push_back("x_" + std::to_string(i + 1));
  header.insert(header.end(), {"distance", "inside"});
  CsvWriter csv(header);
  ordered_json jrows = ordered_json::array();

  for (const Point& x : sc.eval_points()) {
    const bool inside = contains(sc.cone, x);
    double d;
    if (inside) {
      d = boundary_distance(sc.cone, x);
    } else {
      // signed convention: negative ambient distance to the cone
      const Point px = project(sc.cone, x);
      Point diff(dim);
      for (int i = 0; i < dim; ++i) diff[i] = x[i] - px[i];
      d = -norm(sc.cone, diff);
    }
    std::vector<std::string> row;
    for (int i = 0; i < dim; ++i) row.push_back(CsvWriter::num(x[i]));
    row.push_back(CsvWriter::num(d));
    row.push_back(CsvWriter::flag(inside));
    csv.add_row(row);
    ordered_json jr;
    jr["x"] = x;
    jr["distance"] = d;
    jr["inside"] = inside;
    jrows.push_back(std::move(jr));
  }
  deliver(format == "csv" ? csv.str() : jrows.dump(2) + "\n", out_path, captured);
  return 0;
}

}  // namespace hjcone
