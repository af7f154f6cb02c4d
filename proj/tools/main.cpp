// Command line driver: solve sweeps with log/VTK/CSV artifacts,
// convergence summaries, geometry export and validation.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "igabem/assembly.hpp"
#include "igabem/h2.hpp"
#include "igabem/operators.hpp"
#include "igabem/shapes.hpp"
#include "igabem/solver.hpp"
#include "igabem/util.hpp"
#include "igabem/vtk.hpp"

namespace fs = std::filesystem;
using namespace igabem;

namespace {

struct RunConfig {
  std::string geometry = "sphere";
  double sphere_radius = 1.0;
  std::vector<double> sphere_center{0, 0, 0};
  std::string pde = "laplace";
  std::vector<double> wavenumber{3, 0};
  std::vector<int> degree_range{1, 1};
  std::vector<int> level_range{0, 2};
  int knot_repetition = 1;
  int multipole_degree = 8;
  double eta = 1.6;
  int quad_order = 0;  // 0: defaults per degree
  double tol = 1e-8;
  bool dense_oracle = false;
  std::string out = "out";

  // manufactured data
  std::vector<double> source{0, 0, 2};        // scalar point source
  std::vector<double> dipole_pos{1, 1, 0};    // Maxwell dipole
  std::vector<double> dipole_dir{0, 0, 0.01};
  double grid_radius = -1;  // default depends on kind
  int grid_n = 10;
  std::vector<double> grid_center{0, 0, 0};
};

Eigen::Vector3d vec3(const std::vector<double>& v) {
  return Eigen::Vector3d(v[0], v[1], v[2]);
}

std::shared_ptr<const Geometry> load_geom(const RunConfig& cfg) {
  if (cfg.geometry == "sphere")
    return std::make_shared<Geometry>(
        make_sphere(cfg.sphere_radius, vec3(cfg.sphere_center)));
  return std::make_shared<Geometry>(load_geometry(cfg.geometry));
}

Pde make_pde(const RunConfig& cfg) {
  const cplx k(cfg.wavenumber[0], cfg.wavenumber[1]);
  if (cfg.pde == "laplace") return Pde::laplace();
  if (cfg.pde == "helmholtz") return Pde::helmholtz(k);
  if (cfg.pde == "maxwell") return Pde::maxwell(k);
  throw CLI::ValidationError("--pde must be laplace, helmholtz or maxwell");
}

std::string kind_name(const Pde& pde) {
  switch (pde.kind) {
    case Pde::Kind::LaplaceSingle: return "LaplaceSingle";
    case Pde::Kind::HelmholtzSingle: return "HelmholtzSingle";
    case Pde::Kind::MaxwellSingle: return "MaxwellSingle";
  }
  return "?";
}

// discrete L2(Gamma) distance of two densities on nested discretizations,
// integrated on the finer element grid
template <typename Vec>
double density_l2_diff(const Discretization& da, const Vec& ra, const Discretization& db,
                       const Vec& rb) {
  const Discretization& fine = da.level() >= db.level() ? da : db;
  const int nq = fine.degree() + 3;
  const auto& rule = gauss_rule(nq);
  const bool vec = fine.pde().is_vector();
  double acc = 0;
  for (int e = 0; e < fine.element_count(); ++e) {
    const auto& el = fine.element(e);
    for (int b = 0; b < nq; ++b)
      for (int a = 0; a < nq; ++a) {
        const double u = el.origin.x() + el.h * rule.nodes[a];
        const double v = el.origin.y() + el.h * rule.nodes[b];
        const auto f = fine.geometry().frame(el.patch, u, v);
        const double w =
            rule.weights[a] * rule.weights[b] * f.sqrt_g * el.h * el.h;
        if (vec) {
          if constexpr (std::is_same_v<Vec, Eigen::VectorXcd>) {
            acc += w * (eval_current(da, ra, el.patch, u, v) -
                        eval_current(db, rb, el.patch, u, v))
                           .squaredNorm();
          }
        } else {
          acc += w * std::norm(eval_density(da, ra, el.patch, u, v) -
                               eval_density(db, rb, el.patch, u, v));
        }
      }
  }
  return std::sqrt(acc);
}

struct CellResult {
  double error = 0, t_mat = 0;
  bool ok = false;
};

// one sweep cell; returns the solved density through `rho`
template <typename Scalar>
CellResult run_cell(const RunConfig& cfg, const Discretization& disc,
                    const std::vector<Eigen::Vector3d>& grid, const std::string& tag,
                    Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rho) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Pde& pde = disc.pde();
  CellResult res;

  Vec b;
  if constexpr (std::is_same_v<Scalar, double>) {
    const Eigen::Vector3d src = vec3(cfg.source);
    b = compute_rhs(
        disc, [&](const Eigen::Vector3d& x) { return laplace_point_source(x, src); },
        cfg.quad_order);
  } else {
    if (pde.is_vector()) {
      const Eigen::Vector3d pos = vec3(cfg.dipole_pos), dir = vec3(cfg.dipole_dir);
      b = compute_rhs_maxwell(
          disc,
          [&](const Eigen::Vector3d& x) { return maxwell_dipole(x, pos, dir, pde.kappa); },
          cfg.quad_order);
    } else {
      const Eigen::Vector3d src = vec3(cfg.source);
      b = compute_rhs_complex(
          disc,
          [&](const Eigen::Vector3d& x) { return helmholtz_point_source(x, src, pde.kappa); },
          cfg.quad_order);
    }
  }

  AssemblyOptions qopts;
  qopts.far_order = cfg.quad_order;
  qopts.sing_order = cfg.quad_order;
  SolverOptions sopts;
  sopts.tol = cfg.tol;
  // first-kind systems need long recurrences once refined
  sopts.restart = 200;
  sopts.max_iter = 5000;

  const auto t0 = std::chrono::steady_clock::now();
  SolveStats stats;
  if (cfg.dense_oracle) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a;
    if constexpr (std::is_same_v<Scalar, double>)
      a = assemble_dense(disc, qopts);
    else
      a = assemble_dense_complex(disc, qopts);
    res.t_mat = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::tie(rho, stats) = gmres(make_operator<Scalar>(a), b, sopts);
  } else {
    H2Options hopts{cfg.multipole_degree, cfg.eta, qopts};
    H2Matrix<Scalar> h(disc, hopts);
    res.t_mat = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    LinearOperator<Scalar> op{disc.dof_count(), [&h](const Vec& x) { return h.apply(x); }};
    std::tie(rho, stats) = gmres(op, b, sopts);
  }
  if (!stats.converged) {
    std::cerr << "  [" << tag << "] gmres did not converge (residual " << stats.residual
              << ")\n";
    return res;
  }

  // potential on the evaluation grid vs the manufactured field
  Eigen::MatrixXcd values;
  double err = 0;
  if constexpr (std::is_same_v<Scalar, double>) {
    const Eigen::Vector3d src = vec3(cfg.source);
    const Eigen::VectorXd pot = eval_potential(disc, rho, grid);
    values.resize(1, grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      values(0, i) = pot[i];
      err = std::max(err, std::abs(pot[i] - laplace_point_source(grid[i], src)));
    }
  } else if (pde.is_vector()) {
    const Eigen::Vector3d pos = vec3(cfg.dipole_pos), dir = vec3(cfg.dipole_dir);
    const Eigen::Matrix3Xcd field = eval_maxwell_potential(disc, rho, grid);
    values = field;
    for (size_t i = 0; i < grid.size(); ++i)
      err = std::max(
          err, (field.col(i) - maxwell_dipole(grid[i], pos, dir, pde.kappa)).norm());
  } else {
    const Eigen::Vector3d src = vec3(cfg.source);
    const Eigen::VectorXcd pot = eval_potential(disc, rho, grid);
    values.resize(1, grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      values(0, i) = pot[i];
      err = std::max(err,
                     std::abs(pot[i] - helmholtz_point_source(grid[i], src, pde.kappa)));
    }
  }
  res.error = err;
  res.ok = true;

  write_density_vtk(disc, rho, (fs::path(cfg.out) / ("density_" + tag + ".vtk")).string());
  write_potential_csv(grid, values,
                      (fs::path(cfg.out) / ("potential_" + tag + ".csv")).string());
  return res;
}

template <typename Scalar>
int run_sweep(const RunConfig& cfg, bool print_orders) {
  const auto geom = load_geom(cfg);
  const Pde pde = make_pde(cfg);
  const double grid_radius =
      cfg.grid_radius > 0 ? cfg.grid_radius : (pde.is_vector() ? 6.0 : 0.5);
  const auto grid = make_sphere_grid(grid_radius, cfg.grid_n, vec3(cfg.grid_center));
  fs::create_directories(cfg.out);

  int failures = 0;
  for (int p = cfg.degree_range[0]; p <= cfg.degree_range[1]; ++p) {
    std::vector<LogRow> rows;
    std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> densities;
    std::vector<std::unique_ptr<Discretization>> discs;
    for (int l = cfg.level_range[0]; l <= cfg.level_range[1]; ++l) {
      const std::string tag =
          kind_name(pde) + "_P" + std::to_string(p) + "_L" + std::to_string(l);
      try {
        auto disc = std::make_unique<Discretization>(geom, pde, p, cfg.knot_repetition, l);
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rho;
        const CellResult res = run_cell<Scalar>(cfg, *disc, grid, tag, rho);
        if (!res.ok) {
          ++failures;
          continue;
        }
        std::cout << tag << ": dofs=" << disc->dof_count() << " error=" << res.error
                  << " t_mat=" << res.t_mat << "s\n";
        rows.push_back({l, res.error, 0.0, res.t_mat});
        densities.push_back(std::move(rho));
        discs.push_back(std::move(disc));
      } catch (const std::exception& ex) {
        std::cerr << tag << " failed: " << ex.what() << "\n";
        ++failures;
      }
    }
    // density self-convergence against the next finer level; the finest
    // row keeps 0 (no finer reference exists)
    for (size_t i = 0; i + 1 < densities.size(); ++i)
      rows[i].error_rho =
          density_l2_diff(*discs[i + 1], densities[i + 1], *discs[i], densities[i]);
    if (!rows.empty())
      write_log(rows, (fs::path(cfg.out) / (kind_name(pde) + "_" + std::to_string(p) +
                                            ".log"))
                          .string());
    if (print_orders && rows.size() > 1) {
      std::cout << "estimated orders, P=" << p << ":";
      for (size_t i = 0; i + 1 < rows.size(); ++i)
        std::cout << ' ' << std::log2(rows[i].error / rows[i + 1].error);
      std::cout << '\n';
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, bool print_orders) {
  if (cfg.pde == "laplace") return run_sweep<double>(cfg, print_orders);
  return run_sweep<cplx>(cfg, print_orders);
}

int cmd_check_geometry(const RunConfig& cfg) {
  const auto geom = load_geom(cfg);
  std::cout << "patches: " << geom->patch_count() << '\n';
  std::cout << "identified edges: " << geom->edge_idents().size() << '\n';
  std::cout << "closed: " << (geom->is_closed() ? "yes" : "no") << '\n';
  std::cout << "surface area (order 12): " << geom->surface_area(12) << '\n';
  const auto violations = geom->check_matching();
  for (const auto& v : violations)
    std::cout << "matching violation: patches " << v.patch_a << "," << v.patch_b
              << " deviation " << v.max_deviation << '\n';
  std::cout << (violations.empty() ? "matching condition satisfied"
                                   : "matching condition VIOLATED")
            << '\n';
  return violations.empty() ? 0 : 1;
}

int cmd_export_geometry(const RunConfig& cfg, const std::string& vtk_path,
                        const std::string& text_path, int subdiv) {
  const auto geom = load_geom(cfg);
  if (!vtk_path.empty()) write_geometry_vtk(*geom, subdiv, vtk_path);
  if (!text_path.empty()) save_geometry(*geom, text_path);
  if (vtk_path.empty() && text_path.empty()) {
    std::cerr << "export-geometry: nothing to do (use --vtk and/or --text)\n";
    return 1;
  }
  return 0;
}

void add_common_flags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--geometry", cfg.geometry,
                  "geometry file, or the builtin name 'sphere'");
  app->add_option("--sphere-radius", cfg.sphere_radius, "builtin sphere radius");
  app->add_option("--sphere-center", cfg.sphere_center, "builtin sphere center")
      ->expected(3);
}

void add_solve_flags(CLI::App* app, RunConfig& cfg) {
  add_common_flags(app, cfg);
  app->add_option("--pde", cfg.pde, "laplace | helmholtz | maxwell");
  app->add_option("--wavenumber", cfg.wavenumber, "RE IM")->expected(2);
  app->add_option("--degree-range", cfg.degree_range, "A B")->expected(2);
  app->add_option("--level-range", cfg.level_range, "A B")->expected(2);
  app->add_option("--knot-repetition", cfg.knot_repetition);
  app->add_option("--multipole-degree", cfg.multipole_degree,
                  "interpolation points per direction");
  app->add_option("--eta", cfg.eta, "admissibility parameter");
  app->add_option("--quad-order", cfg.quad_order, "1D Gauss order (0: defaults)");
  app->add_option("--tol", cfg.tol, "solver tolerance");
  app->add_flag("--dense-oracle", cfg.dense_oracle, "dense assembly instead of H2");
  app->add_option("--out", cfg.out, "output directory");
  app->add_option("--source", cfg.source, "scalar point-source location")->expected(3);
  app->add_option("--dipole-pos", cfg.dipole_pos, "Maxwell dipole location")->expected(3);
  app->add_option("--dipole-dir", cfg.dipole_dir, "Maxwell dipole moment")->expected(3);
  app->add_option("--grid-radius", cfg.grid_radius, "evaluation sphere radius");
  app->add_option("--grid-n", cfg.grid_n, "latitudes/longitudes of the grid");
  app->add_option("--grid-center", cfg.grid_center, "evaluation sphere center")
      ->expected(3);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isogeometric Galerkin BEM driver"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* solve = app.add_subcommand("solve", "run a (P, L) sweep and emit artifacts");
  add_solve_flags(solve, cfg);
  auto* conv = app.add_subcommand("convergence",
                                  "solve sweep plus estimated convergence orders");
  add_solve_flags(conv, cfg);
  auto* check = app.add_subcommand("check-geometry", "validate a geometry file");
  add_common_flags(check, cfg);
  auto* expo = app.add_subcommand("export-geometry", "write VTK and/or text format");
  add_common_flags(expo, cfg);
  std::string vtk_path, text_path;
  int subdiv = 16;
  expo->add_option("--vtk", vtk_path, "VTK output path");
  expo->add_option("--text", text_path, "geometry text output path");
  expo->add_option("--subdiv", subdiv, "tessellation subdivisions per direction");

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed()) return cmd_solve(cfg, false);
    if (conv->parsed()) return cmd_solve(cfg, true);
    if (check->parsed()) return cmd_check_geometry(cfg);
    if (expo->parsed()) return cmd_export_geometry(cfg, vtk_path, text_path, subdiv);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
