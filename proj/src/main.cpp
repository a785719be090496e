#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pentasing/classify.hpp"
#include "pentasing/json_io.hpp"
#include "pentasing/optimize.hpp"
#include "pentasing/pedal.hpp"
#include "pentasing/sigma.hpp"

namespace {

using namespace pentasing;

struct GlobalOpts {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool quiet = false;
};

// comment lines carry the run report; data rows stay machine-readable
void note(const GlobalOpts& g, const std::string& line) {
  if (!g.quiet) std::cout << "# " << line << "\n";
}

std::string fmt8(double v) {
  if (std::abs(v) < 0.5e-8) v = 0.0;  // below print resolution; avoid "-0"
  char b[64];
  std::snprintf(b, sizeof b, "%.8f", v);
  return b;
}

std::string fmt_resid(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

std::string echo_command(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

CanonicalDesign load_canonical(const GlobalOpts& g, const std::string& path,
                               std::string* shown_name = nullptr) {
  const DesignFile f = load_design(path);
  if (shown_name) *shown_name = f.name.empty() ? path : f.name;
  const CanonicalDesign cd = canonicalize(f.design);
  note(g, "design: " + (f.name.empty() ? path : f.name) +
              (cd.is_planar ? " (planar base)" : " (non-planar base)"));
  if (!cd.provenance.identity)
    note(g,
         "note: design was not in canonical form; a leg renumbering / rigid "
         "motion / platform reparametrization was applied and --pose values "
         "are interpreted in the canonical frame");
  return cd;
}

// CSV row for the distance verb; empty strings mark inapplicable fields
void print_distance_row(const std::string& mode, const Pose& pose,
                        const std::string& l1, const std::string& l2,
                        const std::string& mu, double distance,
                        double residual) {
  const auto x = pose.as_array();
  std::cout << mode;
  for (double c : x) std::cout << ',' << fmt8(c);
  std::cout << ',' << l1 << ',' << l2 << ',' << mu << ',' << fmt8(distance)
            << ',' << fmt_resid(residual) << "\n";
}

Pose read_pose(const GlobalOpts& g, const std::vector<double>& p) {
  Vec3 o{p[0], p[1], p[2]};
  const Vec3 pos{p[3], p[4], p[5]};
  const double len = norm(o);
  if (std::abs(len - 1.0) >= 1e-6)
    throw parse_error("--pose orientation must be a unit vector (|i| = " +
                      std::to_string(len) + ")");
  if (len != 1.0) {
    o = (1.0 / len) * o;
    note(g, "note: orientation normalized (|i| deviated by " +
                fmt_resid(std::abs(len - 1.0)) + ")");
  }
  return Pose::euclidean(o, pos);
}

int cmd_classify(const GlobalOpts& g, const std::string& file) {
  const CanonicalDesign cd = load_canonical(g, file);
  const Classification c = classify(cd);
  std::cout << "verdict: " << c.verdict_name() << "\n";
  switch (c.verdict) {
    case Family::ArchitectureSingular:
      std::cout << "rank: " << c.arch.rank << "\n";
      std::cout << "witness: " << c.witness << "\n";
      break;
    case Family::PositionLinear:
      std::cout << "alpha: " << fmt8(c.alpha) << "\n";
      std::cout << "beta: " << fmt8(c.beta) << "\n";
      std::cout << "kappa_residual: " << fmt_resid(c.kappa_residual) << "\n";
      std::cout << "vanish_residual: " << fmt_resid(c.vanish_residual) << "\n";
      break;
    case Family::OrientationLinear:
      std::cout << "item: " << c.item << "\n";
      std::cout << "alpha: " << fmt8(c.alpha) << "\n";
      std::cout << "beta: " << fmt8(c.beta) << "\n";
      std::cout << "kappa_residual: " << fmt_resid(c.kappa_residual) << "\n";
      std::cout << "vanish_residual: " << fmt_resid(c.vanish_residual) << "\n";
      break;
    case Family::Generic:
      std::cout << "witness: " << c.witness << "\n";
      break;
  }
  return 0;
}

int cmd_sigma(const GlobalOpts& g, const std::string& file,
              const std::string& format) {
  const CanonicalDesign cd = load_canonical(g, file);
  const MultiPoly sigma = sigma_polynomial(cd);
  if (sigma.is_zero())
    note(g,
         "warning: singularity polynomial vanishes identically "
         "(architecture-singular design)");
  if (format == "text")
    std::cout << sigma.to_text() << "\n";
  else
    std::cout << sigma.to_csv();
  return 0;
}

int cmd_distance(const GlobalOpts& g, const std::string& file,
                 const std::vector<double>& pose_in, const std::string& mode,
                 bool all, int starts, int iters,
                 std::optional<int> expect_roots) {
  const CanonicalDesign cd = load_canonical(g, file);
  const Pose pose = read_pose(g, pose_in);
  note(g, "query: mode=" + mode);

  // CLI-level guard so a loosened/tightened --tol is honored before the
  // library's own pinned gate fires
  {
    const MultiPoly sigma = sigma_polynomial(cd);
    const auto x = pose.as_array();
    if (std::abs(sigma.evaluate(x)) <= g.tol * sigma.eval_scale(x))
      throw singular_query("query pose lies on the singularity set");
  }

  std::cout << "mode,u,v,w,px,py,pz,lambda1,lambda2,mu,distance,residual\n";
  std::size_t found = 0;
  if (mode == "fixed-orientation" || mode == "fixed-position") {
    const MultiPoly sigma = sigma_polynomial(cd);
    const auto sols = mode == "fixed-orientation"
                          ? fixed_orientation_pedals(cd, pose)
                          : fixed_position_pedals(cd, pose);
    found = sols.size();
    for (const auto& s : sols) {
      print_distance_row(mode, s.pose, "", "", "", s.distance,
                         std::abs(evaluate(sigma, s.pose)));
      if (!all) break;
    }
  } else {
    const LagrangeMode lm = mode == "euclidean" ? LagrangeMode::Euclidean
                                                : LagrangeMode::Equiform;
    SolverSettings settings;
    settings.seed = g.seed;
    settings.starts = starts;
    settings.max_iterations = iters;
    settings.expected_roots = expect_roots;
    const SolveReport report =
        solve_critical_points(build_lagrange(cd, pose, lm), settings);
    found = report.points.size();
    for (const auto& cp : report.points) {
      const bool euclid = lm == LagrangeMode::Euclidean;
      print_distance_row(mode, cp.pose, euclid ? fmt8(cp.lambda1) : "",
                         fmt8(cp.lambda2), fmt8(cp.mu), cp.distance,
                         cp.residual);
      if (!all) break;
    }
    note(g, "solver: " + std::to_string(report.converged_runs) +
                " converged runs, " + std::to_string(found) +
                " distinct critical points, " +
                std::to_string(report.singular_eliminations) +
                " singular eliminations");
    if (report.status == SolveStatus::BudgetExhausted) {
      std::cerr << "error: found " << found << " roots, expected at least "
                << *expect_roots << " (budget exhausted)\n";
      return 5;
    }
  }
  if (expect_roots && static_cast<int>(found) < *expect_roots &&
      (mode == "fixed-orientation" || mode == "fixed-position")) {
    std::cerr << "error: found " << found << " pedal points, expected at least "
              << *expect_roots << "\n";
    return 5;
  }
  return 0;
}

int cmd_sample_surface(const GlobalOpts& g, const std::string& file,
                       const std::string& fix, const std::vector<double>& at,
                       int grid, std::optional<double> band,
                       const std::string& out_path) {
  const CanonicalDesign cd = load_canonical(g, file);
  const MultiPoly sigma = sigma_polynomial(cd);
  const Vec3 at_v{at[0], at[1], at[2]};

  std::ofstream out(out_path);
  if (!out) throw error("cannot open output file '" + out_path + "'");
  std::size_t rows = 0;

  if (fix == "orientation") {
    const MultiPoly q = restrict_orientation(sigma, at_v);
    const int deg = q.position_degree();
    std::vector<std::pair<std::string, std::array<double, 4>>> planes;
    auto coeffs_of = [](const MultiPoly& lin) {
      std::array<double, 4> a{0, 0, 0, 0};
      MultiPoly::Expo e{0, 0, 0, 0, 0, 0};
      a[3] = lin.coeff(e);
      for (int k = 0; k < 3; ++k) {
        e.fill(0);
        e[static_cast<std::size_t>(MultiPoly::PX + k)] = 1;
        a[static_cast<std::size_t>(k)] = lin.coeff(e);
      }
      return a;
    };
    if (deg == 1) {
      planes.emplace_back("plane", coeffs_of(q));
    } else if (deg == 2) {
      PlanePair pp;
      try {
        pp = factor_planes(q, MultiPoly::PZ);
      } catch (const not_factorable&) {
        throw unsupported_family(
            "restricted quadric does not split into planes");
      }
      planes.emplace_back("base plane pz = 0",
                          std::array<double, 4>{0, 0, 1, 0});
      planes.emplace_back("affine plane", pp.affine);
    } else {
      throw unsupported_family("restriction is not a plane arrangement");
    }

    out << "branch,px,py,pz\n";
    for (const auto& [name, a] : planes) {
      const Vec3 n{a[0], a[1], a[2]};
      const double nn = dot(n, n);
      if (nn <= 0) continue;
      const Vec3 origin_foot = -(a[3] / nn) * n;
      // in-plane orthonormal axes, gridded over [-5,5]^2
      const Vec3 nh = (1.0 / std::sqrt(nn)) * n;
      Vec3 seed_axis = std::abs(nh[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
      Vec3 e1 = cross(nh, seed_axis);
      e1 = (1.0 / norm(e1)) * e1;
      const Vec3 e2 = cross(nh, e1);
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          const double s = -5.0 + 10.0 * i / (grid - 1);
          const double t = -5.0 + 10.0 * j / (grid - 1);
          const Vec3 p = origin_foot + s * e1 + t * e2;
          out << name << ',' << fmt8(p[0]) << ',' << fmt8(p[1]) << ','
              << fmt8(p[2]) << "\n";
          ++rows;
        }
    }
  } else {  // fix == "position"
    const MultiPoly q = restrict_position(sigma, at_v);
    const double eps = band ? *band : 1e-6 * q.max_abs_coeff();
    const std::size_t n = static_cast<std::size_t>(grid) * grid;
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    out << "u,v,w,sigma,flag\n";
    for (std::size_t k = 0; k < n; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = 2.0 * kPi * golden * static_cast<double>(k);
      const std::array<double, 6> x{r * std::cos(phi), r * std::sin(phi), z,
                                    at_v[0], at_v[1], at_v[2]};
      const double val = q.evaluate({x[0], x[1], x[2], 0, 0, 0});
      out << fmt8(x[0]) << ',' << fmt8(x[1]) << ',' << fmt8(x[2]) << ','
          << fmt_resid(val) << ',' << (std::abs(val) < eps ? 1 : 0) << "\n";
      ++rows;
    }
  }
  note(g, "wrote " + std::to_string(rows) + " rows to " + out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear pentapod singularity analysis"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "solver / sampling seed")
      ->envname("PENTASING_SEED");
  app.add_option("--tol", g.tol, "singular-query guard tolerance (relative)")
      ->capture_default_str();
  app.add_flag("--quiet", g.quiet, "suppress # comment lines");

  std::string file, format = "csv", mode, fix, out_path;
  std::vector<double> pose_in, at;
  bool all = false;
  int starts = 4096, iters = 100, grid = 200;
  std::optional<int> expect_roots;
  std::optional<double> band;

  auto* c_classify = app.add_subcommand("classify", "design family verdict");
  c_classify->add_option("file", file, "design JSON file")->required();

  auto* c_sigma = app.add_subcommand("sigma", "export singularity polynomial");
  c_sigma->add_option("file", file, "design JSON file")->required();
  c_sigma->add_option("--format", format, "csv or text")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "text"}));

  auto* c_dist = app.add_subcommand("distance", "nearest singular pose");
  c_dist->add_option("file", file, "design JSON file")->required();
  c_dist->add_option("--pose", pose_in, "query pose u v w px py pz")
      ->expected(6)
      ->required();
  c_dist->add_option("--mode", mode, "restriction / motion mode")
      ->check(CLI::IsMember(
          {"fixed-orientation", "fixed-position", "euclidean", "equiform"}))
      ->required();
  c_dist->add_flag("--all", all, "print every solution, not just the nearest");
  c_dist->add_option("--starts", starts, "Newton multistart count")
      ->capture_default_str();
  c_dist->add_option("--iters", iters, "Newton iteration cap")
      ->capture_default_str();
  c_dist->add_option("--expect-roots", expect_roots,
                     "exit 5 when fewer solutions are found");

  auto* c_surf = app.add_subcommand("sample-surface",
                                    "sample the restricted singularity set");
  c_surf->add_option("file", file, "design JSON file")->required();
  c_surf->add_option("--fix", fix, "which pose block stays fixed")
      ->check(CLI::IsMember({"orientation", "position"}))
      ->required();
  c_surf->add_option("--at", at, "the fixed orientation / position")
      ->expected(3)
      ->required();
  c_surf->add_option("--grid", grid, "grid resolution n (n^2 samples)")
      ->capture_default_str();
  c_surf->add_option("--band", band, "|sigma| threshold for flagged points");
  c_surf->add_option("--out", out_path, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every usage error maps onto the same exit
    // code as a malformed design file
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    note(g, "command: " + echo_command(argc, argv));
    if (c_classify->parsed())
      rc = cmd_classify(g, file);
    else if (c_sigma->parsed())
      rc = cmd_sigma(g, file, format);
    else if (c_dist->parsed())
      rc = cmd_distance(g, file, pose_in, mode, all, starts, iters,
                        expect_roots);
    else
      rc = cmd_sample_surface(g, file, fix, at, grid, band, out_path);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 2;
  } catch (const singular_query& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 3;
  } catch (const unsupported_family& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 4;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 1;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  note(g, "elapsed_ms: " + std::to_string(ms));
  return rc;
}
