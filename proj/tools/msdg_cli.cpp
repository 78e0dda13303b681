// msdg: command-line front end for the DG solver.
//   msdg convergence <config> [-o file]
//   msdg simulate <config> [-o dir]
//   msdg verify [--model M] [--tol T] [-o file]
//   msdg list-presets [--export dir]
// Exit codes: 0 ok, 2 config error, 3 divergence, 4 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "msdg/errors.hpp"
#include "msdg/harness.hpp"

namespace {

constexpr int kConfigError = 2, kDiverged = 3, kVerifyFailed = 4;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw msdg::ConfigError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-symplectic DG solver for 1D Hamiltonian PDEs"};
  app.require_subcommand(1);

  std::string config, out;
  auto* conv = app.add_subcommand("convergence", "Mesh-refinement study; prints the convergence CSV");
  conv->add_option("config", config, "Config JSON file or preset name")->required();
  conv->add_option("-o,--output", out, "Write the CSV here instead of stdout");

  std::string sim_config, sim_out;
  auto* sim = app.add_subcommand("simulate", "Time-dependent run with energy/error/snapshot CSVs");
  sim->add_option("config", sim_config, "Config JSON file or preset name")->required();
  sim->add_option("-o,--output", sim_out, "Output directory (overrides the config)");

  std::string model, ver_out;
  double tol = 1e-10;
  int draws = 20;
  auto* ver = app.add_subcommand("verify", "Pointwise structure-preservation sweep");
  ver->add_option("--model", model, "Restrict to one model");
  ver->add_option("--tol", tol, "Relative residual tolerance");
  ver->add_option("--draws", draws, "Random draws per configuration");
  ver->add_option("-o,--output", ver_out, "Write the CSV here instead of stdout");

  std::string export_dir;
  auto* list = app.add_subcommand("list-presets", "List built-in experiment presets");
  list->add_option("--export", export_dir, "Also write each preset as JSON into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*conv) {
      const auto table = msdg::run_convergence(msdg::load_config(config));
      emit(table.csv(), out);
      for (const auto& r : table.rows)
        if (r.diverged) std::cerr << "N=" << r.N << " diverged: " << r.note << "\n";
      return table.any_diverged() ? kDiverged : 0;
    }
    if (*sim) {
      const auto cfg = msdg::load_config(sim_config);
      const auto r = msdg::run_simulation(cfg, sim_out);
      for (const auto& f : r.files) std::cout << f << "\n";
      std::fprintf(stderr, "t=%.6g steps=%ld max|dE|=%.3e\n", r.t, r.steps, r.max_abs_dE());
      if (r.diverged) {
        std::cerr << "diverged: " << r.message << "\n";
        return kDiverged;
      }
      return 0;
    }
    if (*ver) {
      msdg::VerificationSpec spec;
      if (!model.empty()) spec.models = {msdg::parse_model(model)};
      spec.tol = tol;
      spec.draws = draws;
      const auto rep = msdg::run_verification(spec);
      emit(rep.csv(), ver_out);
      for (const auto& s : rep.not_applicable) std::cerr << "not applicable: " << s << "\n";
      for (const auto& s : rep.skipped) std::cerr << "skipped " << s << "\n";
      std::fprintf(stderr, "max residual_ms=%.3e residual_energy=%.3e tol=%.1e -> %s\n", rep.max_ms, rep.max_energy,
                   tol, rep.passed() ? "PASS" : "FAIL");
      return rep.passed() ? 0 : kVerifyFailed;
    }
    if (*list) {
      for (const auto& n : msdg::preset_names()) std::cout << n << "\n";
      if (!export_dir.empty()) msdg::export_presets(export_dir);
      return 0;
    }
  } catch (const msdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const msdg::SingularMatrixError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const msdg::BlowUpError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
