#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "msdg/mesh.hpp"
#include "msdg/runge_kutta.hpp"
#include "msdg/schemes.hpp"

namespace msdg {

using SpaceTimeFn = std::function<double(double x, double t)>;

struct ObserverConfig {
  bool energy = true;
  bool error = true;
  long stride = 100;                   // steps between energy/error samples
  std::vector<double> snapshot_times;  // empty: snapshots at 0 and T
  int points_per_cell = 10;
};

// One experiment. JSON schema documented in README.md; presets live in presets/.
struct ExperimentConfig {
  std::string name;
  Model model = Model::wave;
  ModelParams params;
  FluxScalars flux;
  nlohmann::json problem;  // {"type": ..., problem-specific fields}
  double x_left = 0.0, x_right = 0.0;
  bool domain_auto = true;  // take the domain from the problem
  std::vector<int> Ns{40};
  MeshPattern pattern = MeshPattern::uniform;
  int k = 1;
  std::string integrator = "auto";  // "auto" = order k+1 (capped at 5)
  double filter_strength = 0.0;
  int filter_exponent = 4;
  double dt_ratio = 0.01;  // dt = ratio * smallest cell width
  double dt_absolute = 0.0;
  double T = 1.0;
  ObserverConfig observers;
  std::string output_dir;
  std::uint64_t seed = 0;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
// A path to a JSON file, or the name of a built-in preset.
ExperimentConfig load_config(const std::string& path_or_preset);

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);
// Writes every preset as <dir>/<name>.json.
void export_presets(const std::string& dir);

// Initial data, exact solution and source derived from cfg.problem.
struct Problem {
  std::vector<RealFn> initial;  // one per evolved field
  SpaceTimeFn exact_u;          // empty when unknown
  SpaceTimeFn exact_aux;        // exact counterpart of scheme.auxiliary()
  SourceFn source;
  double x_left = 0.0, x_right = 0.0;  // natural domain
};
Problem make_problem(const ExperimentConfig& cfg);

Mesh1D make_mesh(const ExperimentConfig& cfg, int N);
double time_step(const ExperimentConfig& cfg, const Mesh1D& mesh);
// Time stepper for cfg; the SSP path applies the filter and re-projects onto
// the consistent subspace after each stage.
Stepper make_experiment_stepper(const ExperimentConfig& cfg, const ReducedScheme& scheme);

// log(e_{i-1}/e_i)/log(N_i/N_{i-1}); first entry NaN. Throws ConfigError on e <= 0.
std::vector<double> compute_order(const std::vector<double>& errors, const std::vector<int>& Ns);

struct ConvergenceRow {
  int N = 0;
  double err_u = std::numeric_limits<double>::quiet_NaN();
  double order_u = std::numeric_limits<double>::quiet_NaN();
  double err_aux = std::numeric_limits<double>::quiet_NaN();
  double order_aux = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  std::string note;
};
struct ConvergenceTable {
  std::string aux_name;
  std::vector<ConvergenceRow> rows;
  std::string csv() const;
  bool any_diverged() const;
};
ConvergenceTable run_convergence(const ExperimentConfig& cfg);

struct EnergySample {
  double t, E, dE, charge;
};
struct SimulationResult {
  Vec state;
  double t = 0.0;
  long steps = 0;
  bool diverged = false;
  std::string message;
  std::vector<EnergySample> energy;
  std::vector<std::pair<double, double>> error;  // (t, L2 error of u)
  std::vector<std::string> files;
  std::shared_ptr<ReducedScheme> scheme;
  double max_abs_dE() const;
};
// Runs cfg at cfg.Ns.front(). Writes CSVs when cfg.output_dir is set (or `out_dir` overrides it).
SimulationResult run_simulation(const ExperimentConfig& cfg, const std::string& out_dir = "");

// Named flux presets swept by the verification harness.
struct FluxPreset {
  Model model;
  FluxScalars scalars;
  std::string label;
};
const std::vector<FluxPreset>& flux_presets();
std::string flux_label(Model m, const FluxScalars& f);

struct VerificationSpec {
  std::vector<Model> models;  // empty: all
  std::vector<int> Ns{4, 8};
  std::vector<int> ks{1, 2};
  int draws = 20;
  std::uint64_t seed = 1;
  double tol = 1e-10;
};
struct VerificationRow {
  Model model;
  std::string flux;
  int N, k;
  std::uint64_t seed;
  double residual_ms, residual_energy;
};
struct VerificationReport {
  std::vector<VerificationRow> rows;
  std::vector<std::string> skipped;         // configurations the scheme unexpectedly rejects (reason attached)
  std::vector<std::string> not_applicable;  // combinations the flux family excludes by construction
  double tol = 0.0;
  double max_ms = 0.0, max_energy = 0.0;
  bool passed() const { return max_ms <= tol && max_energy <= tol && skipped.empty(); }
  std::string csv() const;
};
VerificationReport run_verification(const VerificationSpec& spec);

}  // namespace msdg
