#include "coherence/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "coherence/experiments.hpp"
#include "coherence/measures.hpp"
#include "coherence/parallel.hpp"
#include "coherence/sdp.hpp"
#include "coherence/states.hpp"
#include "coherence/validation.hpp"

namespace coherence::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for unreadable or invalid input; maps to kBadInput.
struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct CommonOptions {
  std::uint64_t seed = 1;
  unsigned threads = default_thread_count();
  bool verbose = false;
};

struct Options {
  CommonOptions common;
  std::string state_file;
  double tol = 1e-8;
  int max_iter = 200;
  std::size_t samples = 0;
  std::string out_dir = ".";
  std::vector<double> grid;
  std::string phi = "coherent";
  int dim = 10;
  std::vector<int> n_list;
  int n_qubits = 2;
};

void add_common(CLI::App* cmd, CommonOptions& c) {
  cmd->add_option("--seed", c.seed, "Random seed (recorded in every output)");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", c.verbose, "Diagnostic output (solver traces as CSV on stderr)");
}

DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open state file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw BadInput("cannot parse '" + path + "': " + e.what());
  }
  try {
    return density_from_json(j);
  } catch (const std::exception& e) {
    throw BadInput("invalid state in '" + path + "': " + e.what());
  }
}

void prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw BadInput("cannot create output directory '" + dir + "'");
}

void write_outputs(const std::string& dir, const std::string& stem, const std::string& csv,
                   nlohmann::json meta) {
  const fs::path base(dir);
  std::ofstream(base / (stem + ".csv")) << csv;
  std::ofstream(base / (stem + ".json")) << meta.dump(2) << '\n';
}

nlohmann::json metadata(const std::string& verb, const SweepConfig& cfg, double seconds) {
  return nlohmann::json{{"command", verb},
                        {"config", config_to_json(cfg)},
                        {"git_revision", git_revision()},
                        {"wall_time_seconds", seconds}};
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SweepConfig sweep_config(Experiment e, const Options& o) {
  SweepConfig cfg = default_config(e);
  cfg.seed = o.common.seed;
  cfg.threads = o.common.threads;
  if (o.samples > 0) cfg.samples = o.samples;
  if (!o.grid.empty()) cfg.grid = o.grid;
  return cfg;
}

int cmd_measure(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state_file);
  sdp::SolveOptions solve_options;
  solve_options.tol = o.tol;
  solve_options.max_iter = o.max_iter;
  if (o.common.verbose) solve_options.trace = &std::cerr;
  const MeasureValue l1 = l1_coherence(rho);
  const MeasureValue rel = rel_entropy_coherence(rho);
  const MeasureValue rc = roc(rho, solve_options);
  out << "dimension = " << rho.dim() << '\n';
  out << "L1 = " << num(l1.value) << '\n';
  out << "RelativeEntropy = " << num(rel.value) << '\n';
  out << "ROC = " << num(rc.value) << '\n';
  out << "ROC method = " << to_string(rc.method) << '\n';
  out << "SDP gap = " << (rc.certificate_gap ? num(*rc.certificate_gap) : std::string("n/a")) << '\n';
  out << "seed = " << o.common.seed << '\n';
  return kOk;
}

int cmd_roc_solve(const Options& o, std::ostream& out) {
  const DensityMatrix rho = load_state(o.state_file);
  sdp::SolveOptions solve_options;
  solve_options.tol = o.tol;
  solve_options.max_iter = o.max_iter;
  if (o.common.verbose) solve_options.trace = &std::cerr;
  const sdp::RocSolution sol = sdp::solve(sdp::build(rho), solve_options);
  const sdp::CertificateReport report = sdp::verify_certificates(sol, rho);

  std::vector<double> y_re, y_im;
  for (Eigen::Index r = 0; r < sol.dual_y.rows(); ++r)
    for (Eigen::Index c = 0; c < sol.dual_y.cols(); ++c) {
      y_re.push_back(sol.dual_y(r, c).real());
      y_im.push_back(sol.dual_y(r, c).imag());
    }
  nlohmann::json j{
      {"status", sdp::to_string(sol.status)},
      {"roc", sol.roc()},
      {"primal_value", sol.primal_value},
      {"dual_value", sol.dual_value},
      {"gap", sol.gap},
      {"iterations", sol.iterations},
      {"primal_diag", std::vector<double>(sol.primal_diag.data(),
                                          sol.primal_diag.data() + sol.primal_diag.size())},
      {"dual_y", {{"re", y_re}, {"im", y_im}}},
      {"primal_residual", sol.primal_residual},
      {"dual_residual", sol.dual_residual},
      {"certificates",
       {{"primal_feasibility_violation", report.primal_feasibility_violation},
        {"dual_feasibility_violation", report.dual_feasibility_violation},
        {"gap", report.gap}}},
      {"tol", o.tol},
      {"seed", o.common.seed},
  };
  out << j.dump(2) << '\n';
  return sol.status == sdp::SolveStatus::Optimal ? kOk : kSolverFailure;
}

int cmd_fig1(const Options& o, std::ostream& out) {
  SweepConfig cfg = sweep_config(Experiment::SubadditivitySweep, o);
  cfg.n_qubits = o.n_qubits;
  if (o.phi == "coherent")
    cfg.pure_state = PureStateChoice::MaximallyCoherent;
  else if (o.phi == "entangled")
    cfg.pure_state = PureStateChoice::MaximallyEntangled;
  else
    throw BadInput("--phi must be 'coherent' or 'entangled'");
  cfg.validate();
  prepare_out_dir(o.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  SweepStats stats;
  const auto records = run_subadditivity_sweep(cfg, &stats);
  std::ostringstream csv;
  write_sweep_csv(csv, cfg, records);
  nlohmann::json meta = metadata("fig1", cfg, elapsed(t0));
  const auto transition = transition_point(records);
  meta["transition_point"] = transition ? nlohmann::json(*transition) : nlohmann::json(nullptr);
  meta["redraws"] = stats.redraws;
  write_outputs(o.out_dir, "fig1", csv.str(), meta);
  out << "transition point = " << (transition ? num(*transition) : std::string("none")) << '\n';
  out << "wrote " << (fs::path(o.out_dir) / "fig1.csv").string() << '\n';
  return kOk;
}

int cmd_ordering(const Options& o, std::ostream& out, bool over_rank) {
  const std::string verb = over_rank ? "fig3" : "fig2";
  SweepConfig cfg =
      sweep_config(over_rank ? Experiment::OrderingVsRank : Experiment::OrderingVsDimension, o);
  cfg.dim = o.dim;
  if (over_rank && o.grid.empty()) {
    cfg.grid.clear();
    for (int r = 1; r <= o.dim; ++r) cfg.grid.push_back(r);
  }
  cfg.validate();
  prepare_out_dir(o.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  SweepStats stats;
  const auto records = over_rank ? run_ordering_vs_rank(cfg, &stats) : run_ordering_vs_dimension(cfg, &stats);
  std::ostringstream csv;
  write_sweep_csv(csv, cfg, records);
  nlohmann::json meta = metadata(verb, cfg, elapsed(t0));
  meta["redraws"] = stats.redraws;
  write_outputs(o.out_dir, verb, csv.str(), meta);
  out << "wrote " << (fs::path(o.out_dir) / (verb + ".csv")).string() << '\n';
  return kOk;
}

int cmd_theorem1(const Options& o, std::ostream& out) {
  SweepConfig cfg = sweep_config(Experiment::Theorem1Check, o);
  if (!o.n_list.empty()) cfg.grid.assign(o.n_list.begin(), o.n_list.end());
  cfg.validate();
  prepare_out_dir(o.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_theorem1_check(cfg);
  std::ostringstream csv;
  write_theorem1_csv(csv, cfg, rows);
  double worst = 0.0, worst_lambda = -1e300;
  for (const auto& r : rows) {
    worst = std::max(worst, r.difference);
    worst_lambda = std::max(worst_lambda, r.lambda);
  }
  nlohmann::json meta = metadata("theorem1", cfg, elapsed(t0));
  meta["max_abs_difference"] = worst;
  meta["max_lambda"] = worst_lambda;
  write_outputs(o.out_dir, "theorem1", csv.str(), meta);
  out << "max |SDP - k(1-2^-n)| = " << num(worst) << '\n';
  out << "max Lambda = " << num(worst_lambda) << '\n';
  out << "wrote " << (fs::path(o.out_dir) / "theorem1.csv").string() << '\n';
  return kOk;
}

int cmd_result2(const Options& o, std::ostream& out) {
  SweepConfig cfg = sweep_config(Experiment::Result2Check, o);
  cfg.validate();
  prepare_out_dir(o.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_result2_check(cfg);
  std::ostringstream csv;
  write_result2_csv(csv, cfg, rows);
  write_outputs(o.out_dir, "result2", csv.str(), metadata("result2", cfg, elapsed(t0)));
  for (MeasureKind m : kAllMeasures) {
    double worst = 0.0;
    for (const auto& r : rows)
      if (r.measure == m) worst = std::max(worst, r.max_deviation);
    out << to_string(m) << " max deviation = " << num(worst) << '\n';
  }
  out << "wrote " << (fs::path(o.out_dir) / "result2.csv").string() << '\n';
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  ValidationConfig cfg;
  cfg.seed = o.common.seed;
  cfg.threads = o.common.threads;
  cfg.instances = o.samples > 0 ? o.samples : 100;
  bool all = true;
  for (const auto& r : run_axiom_suite(cfg)) {
    out << (r.passed() ? "PASS" : "FAIL") << "  " << r.name << "  (instances " << r.instances
        << ", failures " << r.failures << ", worst " << num(r.worst) << ", tolerance "
        << num(r.tolerance) << ")\n";
    all = all && r.passed();
  }
  out << "seed = " << o.common.seed << '\n';
  return all ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum coherence measures: l1-norm, relative entropy and robustness of coherence"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Options o;

  auto* measure = app.add_subcommand("measure", "Print all three coherence measures of a state");
  measure->add_option("state", o.state_file, "Density-matrix JSON file")->required();
  measure->add_option("--tol", o.tol, "Relative duality-gap tolerance of the ROC solve");
  measure->add_option("--max-iter", o.max_iter, "Newton step limit of the ROC solve");

  auto* roc_solve = app.add_subcommand("roc-solve", "Solve the ROC program and print certificates");
  roc_solve->add_option("state", o.state_file, "Density-matrix JSON file")->required();
  roc_solve->add_option("--tol", o.tol, "Relative duality-gap tolerance");
  roc_solve->add_option("--max-iter", o.max_iter, "Newton step limit");

  auto add_sweep_options = [&](CLI::App* cmd, const std::string& grid_help,
                               std::size_t default_samples) {
    cmd->add_option("--samples", o.samples, "Samples per sweep point (0 = default " +
                                                std::to_string(default_samples) + ")");
    cmd->add_option("--out", o.out_dir, "Output directory for CSV and JSON metadata");
    cmd->add_option("--grid", o.grid, grid_help)->delimiter(',');
  };

  auto* fig1 = app.add_subcommand("fig1", "Sub-additivity fraction of mixed Sigma-family states vs p");
  add_sweep_options(fig1, "Mixing weights p (default 51 points on [0,1])", 1000);
  fig1->add_option("--phi", o.phi, "Mixing pure state")->check(CLI::IsMember({"coherent", "entangled"}));
  fig1->add_option("--n", o.n_qubits, "Qubit count")->check(CLI::Range(1, 6));

  auto* fig2 = app.add_subcommand("fig2", "Ordering-violation fractions vs dimension");
  add_sweep_options(fig2, "Dimensions (default 2..10)", 10000);

  auto* fig3 = app.add_subcommand("fig3", "Ordering-violation fractions vs rank");
  add_sweep_options(fig3, "Ranks (default 1..dim)", 10000);
  fig3->add_option("--dim", o.dim, "State dimension")->check(CLI::Range(2, 64));

  auto* theorem1 = app.add_subcommand("theorem1", "Compare SDP ROC of the Sigma family with k(1-2^-n)");
  add_sweep_options(theorem1, "Qubit counts (alias of --n)", 20);
  theorem1->add_option("--n", o.n_list, "Qubit counts (default 1,2,3,4)")->delimiter(',');

  auto* result2 = app.add_subcommand("result2", "Incoherent-ancilla invariance check");
  add_sweep_options(result2, "Subsystem dimensions (default 2,3,4)", 100);

  auto* validate = app.add_subcommand("validate", "Run the sampled measure-axiom suite");
  validate->add_option("--samples", o.samples, "Instances per property (0 = default 100)");

  for (CLI::App* cmd : {measure, roc_solve, fig1, fig2, fig3, theorem1, result2, validate})
    add_common(cmd, o.common);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kBadInput;
  }

  try {
    if (*measure) return cmd_measure(o, out);
    if (*roc_solve) return cmd_roc_solve(o, out);
    if (*fig1) return cmd_fig1(o, out);
    if (*fig2) return cmd_ordering(o, out, false);
    if (*fig3) return cmd_ordering(o, out, true);
    if (*theorem1) return cmd_theorem1(o, out);
    if (*result2) return cmd_result2(o, out);
    if (*validate) return cmd_validate(o, out);
  } catch (const BadInput& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const SolverFailure& e) {
    err << "error: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const ExperimentError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const sdp::SdpError& e) {
    err << "error: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const StateError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace coherence::cli
