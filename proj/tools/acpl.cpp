#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acpl/checkpoint.hpp"
#include "acpl/config.hpp"
#include "acpl/diagnostics.hpp"
#include "acpl/error.hpp"
#include "acpl/experiments.hpp"
#include "acpl/lift.hpp"
#include "acpl/mesh.hpp"
#include "acpl/report.hpp"
#include "acpl/solver.hpp"
#include "acpl/spectrum.hpp"

namespace {

using J = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string default_out_dir() {
  const char* env = std::getenv("ACPL_OUT");
  return env && *env ? env : ".";
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// the manifest is the only artifact carrying wall-clock data, written last
void write_manifest(const std::string& dir, J m) {
  std::filesystem::create_directories(dir);
  acpl::write_text_atomic(dir + "/manifest.json", m.dump(2) + "\n");
}

J energy_json(const acpl::EnergyReport& e) {
  return J{{"dirichlet", e.dirichlet}, {"potential", e.potential}, {"total", e.total}};
}

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              std::optional<uint64_t> seed, int threads) {
  auto t0 = Clock::now();
  acpl::RunConfig cfg = acpl::parse_config(config_path);
  if (seed) cfg.solver.seed = *seed;

  acpl::GridSpec grid = cfg.make_grid();
  acpl::BoundaryManifold gamma = cfg.make_gamma();
  acpl::SeamSurface seam = acpl::build_seam(grid, gamma);
  auto gauge = std::make_shared<acpl::GaugeField>(acpl::gauge_field_from_seam(grid, seam));
  acpl::FixedBc bc = acpl::make_bc(grid, cfg.solver.bc);

  std::vector<double> u0;
  const std::vector<double>* u0p = nullptr;
  if (cfg.solver.init == acpl::InitMode::Checkpoint) {
    acpl::GaugeSection ck = acpl::load_checkpoint(cfg.init_checkpoint);
    const acpl::GridSpec& cg = ck.grid();
    if (cg.n != grid.n || cg.dims != grid.dims || cg.h != grid.h)
      acpl::fail(acpl::Err::InvalidConfig, "init checkpoint grid differs from the config grid");
    u0 = std::move(ck.u);
    u0p = &u0;
  }

  acpl::ContinuationResult cont = acpl::continuation(gauge, seam, bc, cfg.solver, u0p);
  const acpl::GaugeSection& sf = cont.stages.back().section;

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> artifacts;

  acpl::save_checkpoint(sf, out_dir + "/checkpoint.acpl");
  artifacts.push_back(out_dir + "/checkpoint.acpl");
  if (!gamma.components.empty()) {
    acpl::save_boundary(gamma, out_dir + "/gamma.txt");
    artifacts.push_back(out_dir + "/gamma.txt");
  }

  J jst = J::array();
  bool all_ok = true;
  for (size_t i = 0; i < cont.stages.size(); ++i) {
    const acpl::SolveResult& st = cont.stages[i];
    bool ok = st.status == acpl::SolveStatus::Converged;
    all_ok = all_ok && ok;
    jst.push_back(J{{"eps", cfg.solver.eps_schedule[i]},
                    {"iters", st.iters},
                    {"converged", ok},
                    {"energy", energy_json(acpl::energy(st.section))},
                    {"residual_sup", acpl::el_residual(st.section).sup}});
  }
  J je{{"competitor_energy", cont.competitor_energy},
       {"energy_bound_ok", cont.energy_bound_ok},
       {"stages", jst}};
  acpl::write_text(out_dir + "/energy.json", je.dump(2) + "\n");
  artifacts.push_back(out_dir + "/energy.json");

  acpl::Csv trace;
  trace.header({"stage", "iter", "energy", "residual_sup", "tau"});
  for (size_t i = 0; i < cont.stages.size(); ++i)
    for (size_t k = 0; k < cont.stages[i].trace.size(); ++k) {
      const acpl::IterRec& r = cont.stages[i].trace[k];
      trace.row({double(i), double(k + 1), r.energy, r.res_sup, r.tau});
    }
  acpl::write_text(out_dir + "/trace.csv", trace.text);
  artifacts.push_back(out_dir + "/trace.csv");

  write_manifest(out_dir, J{{"command", "solve"},
                            {"config", acpl::config_to_text(cfg)},
                            {"seed", cfg.solver.seed},
                            {"threads", threads},
                            {"artifacts", artifacts},
                            {"status", all_ok ? "converged" : "max_iters"},
                            {"wall_seconds", seconds_since(t0)}});
  return all_ok ? 0 : 2;
}

acpl::Vec3 parse_point(const std::string& s) {
  acpl::Vec3 p{};
  double vals[3] = {0, 0, 0};
  int got = 0;
  size_t at = 0;
  while (got < 3 && at < s.size()) {
    size_t next = s.find(',', at);
    std::string tok = s.substr(at, next == std::string::npos ? next : next - at);
    char* end = nullptr;
    vals[got] = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      acpl::fail(acpl::Err::InvalidConfig, "bad point coordinate '" + tok + "'");
    ++got;
    if (next == std::string::npos) break;
    at = next + 1;
  }
  if (got < 2) acpl::fail(acpl::Err::InvalidConfig, "point needs at least two coordinates");
  p.x = vals[0];
  p.y = vals[1];
  p.z = vals[2];
  return p;
}

int cmd_diagnose(const std::string& ckpt, const std::string& gamma_path,
                 const std::string& out_dir, bool want_energy, bool want_discrepancy,
                 bool want_mesh, const std::string& mono_point, double mono_lambda,
                 double mono_r_lo, double mono_r_max, int mono_nr, int spectrum_k,
                 int threads) {
  auto t0 = Clock::now();
  acpl::GaugeSection s = acpl::load_checkpoint(ckpt);
  const acpl::GridSpec& grid = s.grid();

  acpl::BoundaryManifold gamma;
  gamma.n = grid.n;
  bool have_gamma = false;
  if (!gamma_path.empty()) {
    gamma = acpl::load_boundary(gamma_path);
    if (gamma.n != grid.n)
      acpl::fail(acpl::Err::InvalidConfig, "gamma dimension differs from the checkpoint grid");
    have_gamma = !gamma.components.empty();
  }

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> artifacts;

  if (want_energy) {
    J j{{"eps", s.eps},
        {"energy", energy_json(acpl::energy(s))},
        {"residual_sup", acpl::el_residual(s).sup}};
    acpl::write_text(out_dir + "/energy.json", j.dump(2) + "\n");
    artifacts.push_back(out_dir + "/energy.json");
  }

  if (want_discrepancy) {
    acpl::DiscrepancyField D = acpl::discrepancy(s);
    double sup_abs_xi = 0;
    for (double x : D.xi) sup_abs_xi = std::max(sup_abs_xi, std::abs(x));
    J j{{"sup_xi_pos", D.whole.sup_pos},
        {"sup_xi_abs", sup_abs_xi},
        {"l1_xi_pos", D.whole.l1_pos},
        {"l1_xi_neg", D.whole.l1_neg},
        {"l1_xi_abs", D.whole.l1_abs}};
    if (have_gamma) {
      std::vector<double> rho = acpl::gamma_distance_field(grid, gamma);
      acpl::XiNorms in = acpl::xi_norms(grid, D.xi, &rho, 4 * s.eps);
      j["interior_delta"] = 4 * s.eps;
      j["interior_sup_xi_pos"] = in.sup_pos;
      j["interior_l1_xi"] = in.l1_abs;
    }
    acpl::write_text(out_dir + "/discrepancy.json", j.dump(2) + "\n");
    artifacts.push_back(out_dir + "/discrepancy.json");
  }

  if (want_mesh) {
    acpl::NodalMesh mesh = acpl::extract_nodal_set(s);
    acpl::MeshTopology topo = acpl::mesh_topology(mesh);
    acpl::write_obj(mesh, out_dir + "/mesh.obj");
    artifacts.push_back(out_dir + "/mesh.obj");
    J j{{"components", topo.components},
        {"euler", topo.euler},
        {"boundary_loops", topo.boundary_loops},
        {"genus", topo.genus_total},
        {"measure", topo.measure},
        {"open_curves", topo.open_curves},
        {"closed_curves", topo.closed_curves},
        {"skipped_cells", mesh.skipped_cells}};
    acpl::write_text(out_dir + "/mesh.json", j.dump(2) + "\n");
    artifacts.push_back(out_dir + "/mesh.json");
  }

  if (!mono_point.empty()) {
    acpl::Vec3 p = parse_point(mono_point);
    double wall = HUGE_VAL;
    acpl::Vec3 lo = grid.box_min(), hi = grid.box_max();
    for (int a = 0; a < grid.n; ++a) wall = std::min({wall, p[a] - lo[a], hi[a] - p[a]});
    double r_lo = mono_r_lo > 0 ? mono_r_lo : 4 * s.eps;
    double r_max = mono_r_max > 0 ? mono_r_max : wall - 2 * grid.h;
    if (have_gamma) {
      acpl::TubularRadius tub = acpl::tubular_radius(gamma, &grid);
      if (mono_r_max <= 0) r_max = std::min(r_max, tub.delta0);
    }
    acpl::MonotonicityProfile prof = acpl::monotonicity_profile(
        s, p, mono_lambda, r_lo, r_max, mono_nr, have_gamma ? &gamma : nullptr);
    acpl::Csv csv;
    csv.header({"r", "E", "M"});
    for (size_t i = 0; i < prof.radii.size(); ++i)
      csv.row({prof.radii[i], prof.ball_energy[i], prof.values[i]});
    acpl::write_text(out_dir + "/monotonicity.csv", csv.text);
    artifacts.push_back(out_dir + "/monotonicity.csv");
    J j{{"point", J::array({p.x, p.y, p.z})},
        {"lambda", mono_lambda},
        {"r_lo", r_lo},
        {"r_max", r_max},
        {"monotone", prof.monotone},
        {"worst_rel_drop", prof.worst_rel_drop},
        {"lambda_hat_fit", acpl::fit_lambda_hat(prof)}};
    acpl::write_text(out_dir + "/monotonicity.json", j.dump(2) + "\n");
    artifacts.push_back(out_dir + "/monotonicity.json");
  }

  if (spectrum_k > 0) {
    acpl::SpectrumReport spec = acpl::hessian_spectrum(s, nullptr, spectrum_k);
    J j{{"eigenvalues", spec.eigenvalues},
        {"residuals", spec.residuals},
        {"morse_index", spec.morse_index},
        {"tol_eig", spec.tol_eig},
        {"lanczos_steps", spec.lanczos_steps}};
    acpl::write_text(out_dir + "/spectrum.json", j.dump(2) + "\n");
    artifacts.push_back(out_dir + "/spectrum.json");
  }

  write_manifest(out_dir, J{{"command", "diagnose"},
                            {"checkpoint", ckpt},
                            {"threads", threads},
                            {"artifacts", artifacts},
                            {"wall_seconds", seconds_since(t0)}});
  return 0;
}

int cmd_experiment(const std::string& name, const std::string& out_base, uint64_t seed,
                   int threads, std::vector<double> eps_list, int64_t grid_nodes, double hflag,
                   double R, double d, double half_side, double tol, int64_t max_iters,
                   bool no_refine, bool no_spectrum) {
  auto t0 = Clock::now();
  acpl::ExperimentOptions opt;
  opt.seed = seed;
  opt.out_dir = out_base + "/" + name;
  opt.tol_r = tol;
  opt.max_iters = max_iters;
  opt.with_refinement = !no_refine;
  opt.with_spectrum = !no_spectrum;

  acpl::ExperimentReport rep;
  if (name == "heteroclinic1d") {
    double eps = eps_list.empty() ? 0.1 : eps_list.front();
    double h = hflag > 0 ? hflag : eps / 8;
    rep = acpl::run_heteroclinic_1d(eps, h, opt);
  } else if (name == "puncture2d") {
    std::vector<double> sched = eps_list.empty() ? std::vector<double>{0.2, 0.1, 0.05} : eps_list;
    int64_t nodes = grid_nodes > 0 ? grid_nodes : 321;
    rep = acpl::run_puncture_2d(sched, nodes, half_side, opt);
  } else if (name == "disk3d") {
    std::vector<double> sched = eps_list.empty() ? std::vector<double>{0.2, 0.1, 0.05} : eps_list;
    int64_t nodes = grid_nodes > 0 ? grid_nodes : 128;
    rep = acpl::run_disk_3d(R, sched, nodes, opt);
  } else if (name == "catenoid") {
    double eps = eps_list.empty() ? 0.1 : eps_list.front();
    int64_t nodes = grid_nodes > 0 ? grid_nodes : 128;
    rep = acpl::run_catenoid(R, d, eps, nodes, opt);
  } else {
    std::cerr << "unknown experiment '" << name
              << "' (heteroclinic1d, puncture2d, disk3d, catenoid)\n";
    return 1;
  }

  int passed = 0;
  for (const auto& v : rep.verdicts) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << "  measured "
              << acpl::format_g17(v.measured);
    if (!v.detail.empty()) std::cout << "  (" << v.detail << ")";
    std::cout << "\n";
    passed += v.pass;
  }
  std::cout << rep.scenario << ": " << passed << "/" << rep.verdicts.size()
            << " checks passed\n";

  write_manifest(opt.out_dir, J{{"command", "experiment"},
                                {"name", name},
                                {"seed", seed},
                                {"threads", threads},
                                {"artifacts", rep.artifacts},
                                {"verdicts_passed", passed},
                                {"verdicts_total", rep.verdicts.size()},
                                {"wall_seconds", seconds_since(t0)}});
  return rep.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gauged Allen-Cahn minimizers and soap-film diagnostics"};
  app.require_subcommand(1);

  std::string out_dir = default_out_dir();
  int threads = 1;
  app.add_option("--out-dir", out_dir, "directory for artifacts (default $ACPL_OUT or .)");
  app.add_option("--threads", threads, "worker threads (results are independent of this)");

  auto* solve = app.add_subcommand("solve", "minimize the energy from a config file");
  std::string config_path;
  uint64_t seed_flag = 0;
  bool seed_given = false;
  solve->add_option("--config", config_path, "run configuration")->required();
  solve->add_option("--seed", seed_flag, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });

  auto* diag = app.add_subcommand("diagnose", "inspect a checkpoint");
  std::string ckpt_path, gamma_path, mono_point;
  bool want_energy = false, want_disc = false, want_mesh = false;
  double mono_lambda = 0, mono_r_lo = 0, mono_r_max = 0;
  int mono_nr = 24, spectrum_k = 0;
  diag->add_option("checkpoint", ckpt_path, "checkpoint file")->required();
  diag->add_option("--gamma", gamma_path, "boundary file for distance-based diagnostics");
  diag->add_flag("--energy", want_energy, "energy and residual summary");
  diag->add_flag("--discrepancy", want_disc, "xi norms");
  diag->add_flag("--nodal-mesh", want_mesh, "extract the zero-set mesh (OBJ + topology)");
  diag->add_option("--monotonicity", mono_point, "profile center 'x,y[,z]' (CSV r,E,M)");
  diag->add_option("--lambda", mono_lambda, "monotonicity exponent (default 0)");
  diag->add_option("--r-lo", mono_r_lo, "smallest profile radius (default 4 eps)");
  diag->add_option("--r-max", mono_r_max, "largest profile radius (default to the wall)");
  diag->add_option("--nr", mono_nr, "number of profile radii");
  diag->add_option("--spectrum", spectrum_k, "lowest k Hessian eigenvalues");

  auto* exp = app.add_subcommand("experiment", "run a named scenario");
  std::string exp_name;
  uint64_t exp_seed = 1;
  std::vector<double> eps_list;
  int64_t grid_nodes = 0, exp_max_iters = 0;
  double hflag = 0, Rflag = 1.0, dflag = 0.5, half_side = 1.0, tol = 0;
  bool no_refine = false, no_spectrum = false;
  exp->add_option("name", exp_name, "heteroclinic1d | puncture2d | disk3d | catenoid")
      ->required();
  exp->add_option("--seed", exp_seed, "random seed");
  exp->add_option("--eps", eps_list, "epsilon schedule (largest first)");
  exp->add_option("--grid", grid_nodes, "nodes per side");
  exp->add_option("--h", hflag, "grid spacing (heteroclinic1d)");
  exp->add_option("--R", Rflag, "ring radius");
  exp->add_option("--d", dflag, "ring separation (catenoid)");
  exp->add_option("--half-side", half_side, "box half side (puncture2d)");
  exp->add_option("--tol", tol, "residual tolerance override");
  exp->add_option("--max-iters", exp_max_iters, "iteration cap override");
  exp->add_flag("--no-refine", no_refine, "skip the half-h comparison runs");
  exp->add_flag("--no-spectrum", no_spectrum, "skip the Hessian checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(config_path, out_dir,
                       seed_given ? std::optional<uint64_t>(seed_flag) : std::nullopt, threads);
    if (diag->parsed())
      return cmd_diagnose(ckpt_path, gamma_path, out_dir, want_energy, want_disc, want_mesh,
                          mono_point, mono_lambda, mono_r_lo, mono_r_max, mono_nr, spectrum_k,
                          threads);
    if (exp->parsed())
      return cmd_experiment(exp_name, out_dir, exp_seed, threads, eps_list, grid_nodes, hflag,
                            Rflag, dflag, half_side, tol, exp_max_iters, no_refine, no_spectrum);
  } catch (const acpl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
