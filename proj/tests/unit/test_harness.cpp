#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "msdg/errors.hpp"
#include "msdg/harness.hpp"

using namespace msdg;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("compute_order") {
  const auto o = compute_order({1e-2, 2.5e-3, 6.25e-4}, {10, 20, 40});
  CHECK(std::isnan(o[0]));
  CHECK(o[1] == doctest::Approx(2.0));
  CHECK(o[2] == doctest::Approx(2.0));
  CHECK(compute_order({8e-3, 1e-3}, {10, 20})[1] == doctest::Approx(3.0));
  CHECK(compute_order({1e-3, 1e-3}, {41, 81})[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(compute_order({1e-3, 0.0}, {10, 20}), ConfigError);
}

TEST_CASE("configs round-trip through JSON") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto c = preset(name);
    const json j = to_json(c);
    const auto back = config_from_json(j);
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("config parsing: lengths, defaults and strict keys") {
  json j = {{"model", "wave"}, {"domain", {0, "2pi"}}, {"N", 8}, {"T", "0.5pi"}};
  auto c = config_from_json(j);
  CHECK(c.x_right == doctest::Approx(2 * M_PI));
  CHECK(c.T == doctest::Approx(M_PI / 2));
  CHECK(c.Ns == std::vector<int>{8});
  CHECK(c.integrator == "auto");
  CHECK_THROWS_AS(config_from_json({{"model", "wave"}, {"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"model", "wave"}, {"dt", {{"ratio", 0.1}, {"cfl", 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"model", "wave"}, {"domain", {1, 0}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"model", "wave"}, {"T", "tau"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"N", 4}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"model", "wave"}, {"k", 12}}), ConfigError);
  CHECK_THROWS_AS(preset("no_such_preset"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("time step follows the smallest cell") {
  json j = {{"model", "wave"}, {"domain", {0, 3}}, {"N", 4}, {"mesh", "two_one_alternating"}, {"dt", {{"ratio", 0.1}}}};
  const auto c = config_from_json(j);
  const auto mesh = make_mesh(c, 4);
  CHECK(time_step(c, mesh) == doctest::Approx(0.1 * mesh.min_width()));
}

TEST_CASE("filter without the SSP integrator is a config error") {
  auto c = preset("ch_single_peakon");
  c.integrator = "rk4";
  const auto mesh = make_mesh(c, 10);
  const auto pr = make_problem(c);
  const auto sc = build_reduced_scheme(c.model, mesh, c.k, c.params, c.flux);
  CHECK_THROWS_AS(make_experiment_stepper(c, *sc), ConfigError);
}

TEST_CASE("small convergence study: central wave P2 is third order") {
  auto c = preset("wave_accuracy_central_k2");
  c.Ns = {10, 20, 40};
  const auto t = run_convergence(c);
  REQUIRE(t.rows.size() == 3);
  CHECK_FALSE(t.any_diverged());
  CHECK(t.rows[2].order_u == doctest::Approx(3.0).epsilon(0.1));
  CHECK(t.csv().rfind("N,err_u,order_u,err_aux,order_aux\n", 0) == 0);
}

TEST_CASE("simulation writes the documented CSV files") {
  auto c = preset("nls_charge");
  c.T = 0.01;
  c.Ns = {8};
  c.observers.stride = 10;
  const fs::path dir = fs::temp_directory_path() / "msdg_unit_sim";
  fs::remove_all(dir);
  const auto r = run_simulation(c, dir.string());
  CHECK_FALSE(r.diverged);
  CHECK(r.t == doctest::Approx(0.01));
  std::ifstream e(dir / "energy.csv");
  std::string header;
  std::getline(e, header);
  CHECK(header == "t,E_h,delta_E_h,charge");
  CHECK(fs::exists(dir / "snapshot_t0.csv"));
  CHECK(fs::exists(dir / "snapshot_t0.01.csv"));
  std::ifstream s(dir / "snapshot_t0.csv");
  std::getline(s, header);
  CHECK(header.rfind("x,u,", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("exported presets load back by path") {
  const fs::path dir = fs::temp_directory_path() / "msdg_unit_presets";
  fs::remove_all(dir);
  export_presets(dir.string());
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    CHECK(to_json(load_config((dir / (name + ".json")).string())) == to_json(preset(name)));
  }
  fs::remove_all(dir);
}
