#include "msdg/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "msdg/errors.hpp"
#include "msdg/exact.hpp"
#include "msdg/verification.hpp"

namespace msdg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

// Numbers, numeric strings, or strings like "2pi", "-pi", "0.5pi".
double parse_length(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    try {
      size_t used = 0;
      const double a = std::stod(s, &used);
      if (used == s.size()) return a;
    } catch (const std::exception&) {
    }
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
      const std::string head = s.substr(0, s.size() - 2);
      if (head.empty() || head == "+") return kPi;
      if (head == "-") return -kPi;
      try {
        size_t used = 0;
        const double a = std::stod(head, &used);
        if (used == head.size()) return a * kPi;
      } catch (const std::exception&) {
      }
    }
  }
  throw ConfigError("expected a number or a multiple of pi (e.g. \"2pi\"), got " + j.dump());
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

int model_field_count(Model m) { return m == Model::wave || m == Model::nls ? 2 : 1; }

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown field '" + it.key() + "' in " + where);
  }
}

Polynomial parse_potential(const json& j) {
  if (j.is_string()) return named_potential(j.get<std::string>());
  if (j.is_array()) return Polynomial{j.get<std::vector<double>>()};
  throw ConfigError("potential must be a name or a coefficient list");
}

std::vector<std::pair<double, double>> parse_waves(const json& p) {
  if (!p.contains("waves") || !p["waves"].is_array() || p["waves"].empty())
    throw ConfigError("problem needs a nonempty 'waves' list of [c, x0] pairs");
  std::vector<std::pair<double, double>> w;
  for (const auto& e : p["waves"]) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("each wave is a [c, x0] pair");
    w.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return w;
}

json scalars_json(Model m, const FluxScalars& f) {
  switch (m) {
    case Model::wave: return {{"a11", f.a11}, {"a13", f.a13}, {"a33", f.a33}, {"beta", f.beta}};
    case Model::kdv: return {{"alpha1", f.alpha1}, {"alpha2", f.alpha2}};
    case Model::bbm: return {{"alpha0", f.alpha0}, {"alpha1", f.alpha1}, {"alpha2", f.alpha2}};
    case Model::ch: return {{"alpha0", f.alpha0}};
    case Model::nls: return {{"alpha", f.alpha}};
    case Model::bbm_kdv: return json::object();
  }
  return json::object();
}

FluxScalars parse_scalars(const json& j) {
  FluxScalars f;
  reject_unknown(j, {"a11", "a13", "a33", "beta", "alpha0", "alpha1", "alpha2", "alpha"}, "flux");
  f.a11 = get_or(j, "a11", 0.0);
  f.a13 = get_or(j, "a13", 0.0);
  f.a33 = get_or(j, "a33", 0.0);
  f.beta = get_or(j, "beta", 0.0);
  f.alpha0 = get_or(j, "alpha0", 0.0);
  f.alpha1 = get_or(j, "alpha1", 0.0);
  f.alpha2 = get_or(j, "alpha2", 0.0);
  f.alpha = get_or(j, "alpha", 0.0);
  return f;
}

void write_csv(const fs::path& path, const std::string& text, std::vector<std::string>& files) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  files.push_back(path.string());
}

std::string time_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

// ---------------------------------------------------------------- config I/O

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"name", "model", "params", "flux", "problem", "domain", "N", "mesh", "k", "integrator", "filter",
                  "dt", "T", "observers", "output", "seed"},
                 "config");
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", "experiment");
  if (!j.contains("model")) throw ConfigError("config needs a 'model'");
  c.model = parse_model(j["model"].get<std::string>());
  c.params = default_params(c.model);
  if (j.contains("params")) {
    const json& p = j["params"];
    reject_unknown(p, {"V", "eta", "eps", "sigma", "nu", "alpha"}, "params");
    if (p.contains("V")) c.params.V = parse_potential(p["V"]);
    c.params.eta = get_or(p, "eta", c.params.eta);
    c.params.eps = get_or(p, "eps", c.params.eps);
    c.params.sigma = get_or(p, "sigma", c.params.sigma);
    c.params.nu = get_or(p, "nu", c.params.nu);
    c.params.alpha = get_or(p, "alpha", c.params.alpha);
  }
  validate_params(c.model, c.params);
  if (j.contains("flux")) c.flux = parse_scalars(j["flux"]);
  validate_flux_scalars(c.model, c.flux);
  c.problem = j.value("problem", json{{"type", "modes"}});
  if (!c.problem.contains("type")) throw ConfigError("problem needs a 'type'");
  if (j.contains("domain") && !(j["domain"].is_string() && j["domain"] == "auto")) {
    const json& d = j["domain"];
    if (!d.is_array() || d.size() != 2) throw ConfigError("domain must be [left, right] or \"auto\"");
    c.x_left = parse_length(d[0]);
    c.x_right = parse_length(d[1]);
    if (!(c.x_right > c.x_left)) throw ConfigError("domain must satisfy left < right");
    c.domain_auto = false;
  }
  if (j.contains("N")) {
    if (j["N"].is_array())
      c.Ns = j["N"].get<std::vector<int>>();
    else
      c.Ns = {j["N"].get<int>()};
  }
  if (c.Ns.empty()) throw ConfigError("N list is empty");
  for (int n : c.Ns)
    if (n < 1) throw ConfigError("N must be positive");
  c.pattern = parse_mesh_pattern(get_or<std::string>(j, "mesh", "uniform"));
  if (c.pattern == MeshPattern::custom) throw ConfigError("mesh must be uniform or two_one_alternating");
  c.k = get_or(j, "k", 1);
  if (c.k < 0 || c.k > 8) throw ConfigError("k must lie in [0, 8]");
  c.integrator = get_or<std::string>(j, "integrator", "auto");
  if (c.integrator != "auto") make_tableau(c.integrator);
  if (j.contains("filter")) {
    const json& f = j["filter"];
    reject_unknown(f, {"strength", "exponent"}, "filter");
    c.filter_strength = get_or(f, "strength", 0.0);
    c.filter_exponent = get_or(f, "exponent", 4);
    if (!(c.filter_strength >= 0.0) || c.filter_exponent < 1) throw ConfigError("filter needs strength >= 0, exponent >= 1");
  }
  if (j.contains("dt")) {
    const json& d = j["dt"];
    reject_unknown(d, {"ratio", "absolute"}, "dt");
    c.dt_ratio = get_or(d, "ratio", 0.0);
    c.dt_absolute = get_or(d, "absolute", 0.0);
    if (!(c.dt_ratio > 0.0) && !(c.dt_absolute > 0.0)) throw ConfigError("dt needs a positive 'ratio' or 'absolute'");
  }
  c.T = j.contains("T") ? parse_length(j["T"]) : 1.0;
  if (!(c.T >= 0.0)) throw ConfigError("T must be nonnegative");
  if (j.contains("observers")) {
    const json& o = j["observers"];
    reject_unknown(o, {"energy", "error", "stride", "snapshots", "points_per_cell"}, "observers");
    c.observers.energy = get_or(o, "energy", true);
    c.observers.error = get_or(o, "error", true);
    c.observers.stride = get_or(o, "stride", 100L);
    c.observers.points_per_cell = get_or(o, "points_per_cell", 10);
    if (o.contains("snapshots"))
      for (const auto& t : o["snapshots"]) c.observers.snapshot_times.push_back(parse_length(t));
    if (c.observers.stride < 1 || c.observers.points_per_cell < 10)
      throw ConfigError("observers need stride >= 1 and points_per_cell >= 10");
  }
  c.output_dir = get_or<std::string>(j, "output", "");
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["model"] = to_string(c.model);
  j["params"] = {{"V", c.params.V.c}, {"eta", c.params.eta}, {"eps", c.params.eps},
                 {"sigma", c.params.sigma}, {"nu", c.params.nu}, {"alpha", c.params.alpha}};
  j["flux"] = scalars_json(c.model, c.flux);
  j["problem"] = c.problem;
  if (c.domain_auto)
    j["domain"] = "auto";
  else
    j["domain"] = {c.x_left, c.x_right};
  j["N"] = c.Ns;
  j["mesh"] = to_string(c.pattern);
  j["k"] = c.k;
  j["integrator"] = c.integrator;
  j["filter"] = {{"strength", c.filter_strength}, {"exponent", c.filter_exponent}};
  j["dt"] = c.dt_absolute > 0.0 ? json{{"absolute", c.dt_absolute}} : json{{"ratio", c.dt_ratio}};
  j["T"] = c.T;
  j["observers"] = {{"energy", c.observers.energy},
                    {"error", c.observers.error},
                    {"stride", c.observers.stride},
                    {"snapshots", c.observers.snapshot_times},
                    {"points_per_cell", c.observers.points_per_cell}};
  j["output"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig load_config(const std::string& path_or_preset) {
  if (!fs::exists(path_or_preset)) {
    for (const auto& n : preset_names())
      if (n == path_or_preset) return preset(n);
    throw ConfigError("no config file or preset named '" + path_or_preset + "'");
  }
  std::ifstream in(path_or_preset);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path_or_preset + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
}

// ---------------------------------------------------------------- presets

namespace {

json base(const std::string& name, const std::string& model, int k, json N, double T, double ratio) {
  return {{"name", name}, {"model", model}, {"k", k}, {"N", N}, {"T", T}, {"dt", {{"ratio", ratio}}},
          {"output", "out/" + name}};
}

std::map<std::string, json> build_presets() {
  std::map<std::string, json> p;
  const json wave_acc = {{"type", "wave_exp_sin"}};
  for (int k : {0, 1, 2, 3, 4}) {
    json c = base("wave_accuracy_central_k" + std::to_string(k), "wave", k, {40, 80, 160}, 1.0, 0.01);
    c["problem"] = wave_acc;
    p[c["name"]] = c;
    c["name"] = "wave_accuracy_central_k" + std::to_string(k) + "_nonuniform";
    c["mesh"] = "two_one_alternating";
    c["output"] = "out/" + c["name"].get<std::string>();
    p[c["name"]] = c;
  }
  const std::vector<std::pair<std::string, json>> wave_fluxes = {
      {"1_0_0_0", {{"a11", 1.0}}},
      {"0_0_m1_0", {{"a33", -1.0}}},
      {"1_0_m1_0", {{"a11", 1.0}, {"a33", -1.0}}},
      {"0_eighth_0_0", {{"a13", 0.125}}},
      {"0_0_0_1", {{"beta", 1.0}}},
      {"0_0_0_m1", {{"beta", -1.0}}}};
  for (const auto& [tag, flux] : wave_fluxes) {
    json c = base("wave_flux_" + tag + "_k1", "wave", 1, {40, 80, 160, 320}, 1.0, 0.01);
    c["problem"] = wave_acc;
    c["flux"] = flux;
    p[c["name"]] = c;
    c = base("wave_flux_" + tag + "_k2_nonuniform", "wave", 2, {40, 80, 160, 320}, 1.0, 0.01);
    c["problem"] = wave_acc;
    c["flux"] = flux;
    c["mesh"] = "two_one_alternating";
    p[c["name"]] = c;
  }
  for (const auto& [tag, flux] : std::vector<std::pair<std::string, json>>{
           {"central", json::object()}, {"0_half_0_0", {{"a13", 0.5}}}, {"1_0_m1_0", {{"a11", 1.0}, {"a33", -1.0}}},
           {"0_0_0_1", {{"beta", 1.0}}}}) {
    json c = base("wave_longtime_" + tag, "wave", 3, 100, 200 * kPi, 0.01);
    c["T"] = "200pi";
    c["problem"] = {{"type", "wave_sin_cos"}};
    c["flux"] = flux;
    c["integrator"] = "rk5";
    c["observers"] = {{"stride", 1000}, {"snapshots", {"0", "100pi", "200pi"}}};
    p[c["name"]] = c;
  }

  const json cnoidal = {{"type", "cnoidal"}, {"m", 0.9}};
  auto bbm_acc = [&](const std::string& name, int k, json N, json flux, const std::string& mesh) {
    json c = base(name, "bbm", k, N, 1.0, 0.5);
    c["problem"] = cnoidal;
    c["flux"] = flux;
    c["mesh"] = mesh;
    c["params"] = {{"sigma", 0.01}};
    p[name] = c;
  };
  for (const std::string mesh : {"uniform", "two_one_alternating"}) {
    const std::string sfx = mesh == "uniform" ? "" : "_nonuniform";
    bbm_acc("bbm_cnoidal_central_k1" + sfx, 1, {40, 80, 160, 320}, json::object(), mesh);
    bbm_acc("bbm_cnoidal_central_k2" + sfx, 2, {40, 80, 160, 320}, json::object(), mesh);
    bbm_acc("bbm_cnoidal_0_half_k2" + sfx, 2, {41, 81, 161, 321}, {{"alpha1", 0.5}}, mesh);
    bbm_acc("bbm_cnoidal_quarter_0_k1" + sfx, 1, {40, 80, 160, 320, 640}, {{"alpha0", 0.25}}, mesh);
    bbm_acc("bbm_cnoidal_quarter_0_k2" + sfx, 2, {40, 80, 160, 320, 640}, {{"alpha0", 0.25}}, mesh);
  }
  {
    json c = base("bbm_energy_e3", "bbm", 2, 10, 5000.0, 0.01);
    c["problem"] = cnoidal;
    c["params"] = {{"sigma", 0.01}};
    c["integrator"] = "rk5";
    c["observers"] = {{"stride", 1000}, {"snapshots", {0, 200, 1000, 3000, 5000}}};
    p[c["name"]] = c;
  }
  const double sig = 0.11 * 0.11;
  auto soliton = [&](const std::string& name, json waves, double T, double L, int N) {
    json c = base(name, "bbm", 4, N, T, 0.05);
    c["problem"] = {{"type", "bbm_solitons"}, {"waves", waves}};
    c["params"] = {{"sigma", sig}};
    c["domain"] = {-L, L};
    c["integrator"] = "rk5";
    json snaps = json::array();
    for (int i = 0; i <= 10; ++i) snaps.push_back(T * i / 10);
    c["observers"] = {{"stride", 200}, {"snapshots", snaps}};
    p[name] = c;
  };
  soliton("bbm_single_soliton", {{0.2, -2.0}}, 20, 5, 200);
  soliton("bbm_two_soliton", {{0.75, -12.0}, {0.25, -6.0}}, 30, 15, 600);
  soliton("bbm_four_soliton", {{0.25, -1.0}, {0.5, -3.0}, {0.75, -5.0}, {1.25, -13.0}}, 20, 15, 600);

  for (int a0 : {0, 3})
    for (int k : {1, 2})
      for (const std::string mesh : {"uniform", "two_one_alternating"}) {
        const std::string name = "ch_accuracy_alpha0_" + std::to_string(a0) + "_k" + std::to_string(k) +
                                 (mesh == "uniform" ? "" : "_nonuniform");
        json c = base(name, "ch", k, {40, 80, 160, 320}, 1.0, 0.01);
        c["problem"] = {{"type", "ch_fabricated"}};
        c["flux"] = {{"alpha0", a0}};
        c["mesh"] = mesh;
        p[name] = c;
      }
  auto peakon = [&](const std::string& name, json waves, double T) {
    json c = base(name, "ch", 4, 400, T, 0.01);
    c["problem"] = {{"type", "ch_peakons"}, {"waves", waves}};
    c["domain"] = {0.0, 30.0};
    c["integrator"] = "ssprk3";
    c["filter"] = {{"strength", kDefaultFilterStrength}, {"exponent", 4}};
    json snaps = json::array();
    for (int i = 0; i <= 10; ++i) snaps.push_back(T * i / 10);
    c["observers"] = {{"stride", 500}, {"snapshots", snaps}};
    p[name] = c;
  };
  peakon("ch_single_peakon", {{1.0, -10.0}}, 20);
  peakon("ch_two_peakon", {{2.0, -5.0}, {1.0, 5.0}}, 18);
  peakon("ch_three_peakon", {{2.0, -5.0}, {1.0, -3.0}, {0.8, -1.0}}, 6);
  peakon("ch_peakon_antipeakon", {{1.0, -2.0}, {-1.0, 2.0}}, 10);
  // the collision needs much heavier damping to get through
  p["ch_peakon_antipeakon"]["filter"] = {{"strength", 50.0}, {"exponent", 2}};
  {
    json c = base("nls_charge", "nls", 3, 20, 1.0, 0.001);
    c["domain"] = {0, "2pi"};
    c["problem"] = {{"type", "modes"},
                    {"fields", {{{{"amp", 1.0}, {"wavenumber", 1}, {"phase", 0.5 * kPi}}},
                                {{{"amp", 0.5}, {"wavenumber", 2}, {"phase", 0.0}}}}}};
    c["observers"] = {{"stride", 100}};
    p[c["name"]] = c;
  }
  return p;
}

const std::map<std::string, json>& presets_table() {
  static const std::map<std::string, json> t = build_presets();
  return t;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> n;
  for (const auto& [k, v] : presets_table()) n.push_back(k);
  return n;
}

ExperimentConfig preset(const std::string& name) {
  const auto& t = presets_table();
  const auto it = t.find(name);
  if (it == t.end()) throw ConfigError("unknown preset '" + name + "'");
  return config_from_json(it->second);
}

void export_presets(const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& [name, j] : presets_table()) {
    std::ofstream out(fs::path(dir) / (name + ".json"));
    if (!out) throw ConfigError("cannot write presets to " + dir);
    out << j.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------- problems

Problem make_problem(const ExperimentConfig& cfg) {
  const json& p = cfg.problem;
  const std::string type = p.at("type").get<std::string>();
  Problem pr;
  auto need = [&](std::initializer_list<Model> ok) {
    for (Model m : ok)
      if (m == cfg.model) return;
    throw ConfigError("problem '" + type + "' does not apply to model " + to_string(cfg.model));
  };
  auto lift = [](SpaceTimeFn f) { return RealFn([f](double x) { return f(x, 0.0); }); };

  if (type == "wave_exp_sin" || type == "wave_sin_cos") {
    need({Model::wave});
    pr.x_left = 0.0;
    pr.x_right = 2 * kPi;
    if (type == "wave_exp_sin") {
      pr.exact_u = [](double x, double t) { return std::exp(std::sin(x + t)); };
      pr.exact_aux = [](double x, double t) { return std::cos(x + t) * std::exp(std::sin(x + t)); };
      pr.initial = {lift(pr.exact_u), lift(pr.exact_aux)};  // u_t = u_x for this right-moving wave
    } else {
      pr.exact_u = [](double x, double t) { return 0.5 * (std::sin(std::cos(x + t)) + std::sin(std::cos(x - t))); };
      pr.exact_aux = [](double x, double t) {
        return -0.5 * (std::cos(std::cos(x + t)) * std::sin(x + t) + std::cos(std::cos(x - t)) * std::sin(x - t));
      };
      pr.initial = {lift(pr.exact_u), [](double) { return 0.0; }};
    }
  } else if (type == "cnoidal") {
    need({Model::bbm});
    const double m = get_or(p, "m", 0.9), c = get_or(p, "c", (2 * m - 1) / (3 * m)), x0 = get_or(p, "x0", 0.0);
    const double sigma = cfg.params.sigma;
    pr.x_left = 0.0;
    pr.x_right = cnoidal_period(m, sigma);
    pr.exact_u = [=](double x, double t) { return exact_cnoidal(x, t, c, x0, m, sigma); };
    pr.exact_aux = [=](double x, double t) { return exact_cnoidal_dx(x, t, c, x0, m, sigma); };
    pr.initial = {lift(pr.exact_u)};
  } else if (type == "ch_fabricated") {
    need({Model::ch});
    pr.x_left = 0.0;
    pr.x_right = 2 * kPi;
    pr.exact_u = [](double x, double t) { return std::sin(x + t); };
    pr.exact_aux = [](double x, double t) { return std::cos(x + t); };
    pr.source = ch_fabricated_source;
    pr.initial = {lift(pr.exact_u)};
  } else if (type == "bbm_solitons") {
    need({Model::bbm});
    const auto waves = parse_waves(p);
    const double sigma = cfg.params.sigma;
    pr.x_left = -15.0;
    pr.x_right = 15.0;
    pr.initial = {[=](double x) {
      double s = 0.0;
      for (auto [c, x0] : waves) s += exact_bbm_soliton(x, 0.0, c, x0, sigma);
      return s;
    }};
    if (waves.size() == 1) {
      const auto [c, x0] = waves[0];
      pr.exact_u = [=](double x, double t) { return exact_bbm_soliton(x, t, c, x0, sigma); };
      pr.exact_aux = [=](double x, double t) { return exact_bbm_soliton_dx(x, t, c, x0, sigma); };
    }
  } else if (type == "ch_peakons") {
    need({Model::ch});
    const auto waves = parse_waves(p);
    pr.x_left = 0.0;
    pr.x_right = 30.0;
    const double L = cfg.domain_auto ? 30.0 : cfg.x_right - cfg.x_left;
    pr.initial = {[=](double x) {
      double s = 0.0;
      for (auto [c, x0] : waves) s += exact_ch_peakon(x, 0.0, L, c, x0);
      return s;
    }};
    if (waves.size() == 1) {
      const auto [c, x0] = waves[0];
      pr.exact_u = [=](double x, double t) { return exact_ch_peakon(x, t, L, c, x0); };
    }
  } else if (type == "modes") {
    // field_i(x) = offset_i + sum amp sin(wavenumber * 2 pi (x - left) / L + phase)
    pr.x_left = 0.0;
    pr.x_right = 2 * kPi;
    const double left = cfg.domain_auto ? pr.x_left : cfg.x_left;
    const double L = cfg.domain_auto ? 2 * kPi : cfg.x_right - cfg.x_left;
    const json fields = p.value("fields", json::array());
    const std::vector<double> offsets = p.value("offsets", std::vector<double>{});
    const int nf = model_field_count(cfg.model);
    if (static_cast<int>(fields.size()) > nf) throw ConfigError("modes: more fields than the model evolves");
    for (int i = 0; i < nf; ++i) {
      std::vector<std::array<double, 3>> terms;
      if (i < static_cast<int>(fields.size()))
        for (const auto& t : fields[i])
          terms.push_back({get_or(t, "amp", 1.0), get_or(t, "wavenumber", 1.0), get_or(t, "phase", 0.0)});
      const double off = i < static_cast<int>(offsets.size()) ? offsets[i] : 0.0;
      pr.initial.push_back([=](double x) {
        double s = off;
        for (const auto& t : terms) s += t[0] * std::sin(t[1] * 2 * kPi * (x - left) / L + t[2]);
        return s;
      });
    }
  } else {
    throw ConfigError("unknown problem type '" + type + "'");
  }
  if (cfg.model == Model::kdv && pr.exact_aux) {
    const double eps = cfg.params.eps;
    pr.exact_aux = [f = pr.exact_aux, eps](double x, double t) { return eps * f(x, t); };
  }
  return pr;
}

Mesh1D make_mesh(const ExperimentConfig& cfg, int N) {
  double a = cfg.x_left, b = cfg.x_right;
  if (cfg.domain_auto) {
    const Problem pr = make_problem(cfg);
    a = pr.x_left;
    b = pr.x_right;
  }
  return build_mesh(a, b, N, cfg.pattern);
}

double time_step(const ExperimentConfig& cfg, const Mesh1D& mesh) {
  return cfg.dt_absolute > 0.0 ? cfg.dt_absolute : cfg.dt_ratio * mesh.min_width();
}

Stepper make_experiment_stepper(const ExperimentConfig& cfg, const ReducedScheme& scheme) {
  RhsFn rhs = [&scheme](double t, const Vec& y) { return scheme.rhs(t, y); };
  if (cfg.integrator == "ssprk3") {
    StabilizationFilter f{cfg.filter_strength, cfg.filter_exponent, cfg.k};
    if (!f.active()) return make_stepper(rhs, make_tableau("ssprk3"));
    return make_ssprk3_stepper(rhs, [f, &scheme](Vec& y, double dt) {
      f.apply(y, dt);
      y = scheme.make_consistent(y);
    });
  }
  if (cfg.filter_strength > 0.0) throw ConfigError("the stabilization filter requires integrator \"ssprk3\"");
  const ButcherTableau tab = cfg.integrator == "auto" ? tableau_of_order(std::min(cfg.k + 1, 5)) : make_tableau(cfg.integrator);
  return make_stepper(rhs, tab);
}

// ---------------------------------------------------------------- convergence

std::vector<double> compute_order(const std::vector<double>& errors, const std::vector<int>& Ns) {
  if (errors.size() != Ns.size()) throw ConfigError("compute_order: errors and N lists differ in length");
  std::vector<double> o(errors.size(), kNaN);
  for (size_t i = 0; i < errors.size(); ++i)
    if (!(errors[i] > 0.0)) throw ConfigError("compute_order: errors must be positive");
  for (size_t i = 1; i < errors.size(); ++i) {
    if (Ns[i] == Ns[i - 1]) throw ConfigError("compute_order: repeated N");
    o[i] = std::log(errors[i - 1] / errors[i]) / std::log(static_cast<double>(Ns[i]) / Ns[i - 1]);
  }
  return o;
}

std::string ConvergenceTable::csv() const {
  std::ostringstream s;
  s << "N,err_u,order_u,err_aux,order_aux\n";
  for (const auto& r : rows) {
    if (r.diverged) {
      s << r.N << ",diverged,,diverged,\n";
      continue;
    }
    s << r.N << "," << fmt(r.err_u) << "," << fmt(r.order_u) << "," << fmt(r.err_aux) << "," << fmt(r.order_aux) << "\n";
  }
  return s.str();
}

bool ConvergenceTable::any_diverged() const {
  for (const auto& r : rows)
    if (r.diverged) return true;
  return false;
}

namespace {

std::unique_ptr<ReducedScheme> build_for(const ExperimentConfig& cfg, const Mesh1D& mesh, const Problem& pr) {
  auto scheme = build_reduced_scheme(cfg.model, mesh, cfg.k, cfg.params, cfg.flux);
  if (pr.source) scheme->set_source(pr.source);
  return scheme;
}

}  // namespace

ConvergenceTable run_convergence(const ExperimentConfig& cfg) {
  const Problem pr = make_problem(cfg);
  if (!pr.exact_u) throw ConfigError("convergence study needs a problem with a known exact solution");
  ConvergenceTable table;
  for (int N : cfg.Ns) {
    ConvergenceRow row;
    row.N = N;
    try {
      const Mesh1D mesh = make_mesh(cfg, N);
      auto scheme = build_for(cfg, mesh, pr);
      table.aux_name = scheme->auxiliary_name();
      const Vec s0 = scheme->initial_state(pr.initial);
      const auto res = integrate(make_experiment_stepper(cfg, *scheme), s0, time_step(cfg, mesh), cfg.T);
      const double T = cfg.T;
      row.err_u = l2_error(*scheme->space(), scheme->field(res.state, 0), [&](double x) { return pr.exact_u(x, T); });
      if (pr.exact_aux)
        row.err_aux = l2_error(*scheme->space(), scheme->auxiliary(res.state), [&](double x) { return pr.exact_aux(x, T); });
      if (!std::isfinite(row.err_u)) throw BlowUpError("non-finite error", res.steps, T);
    } catch (const BlowUpError& e) {
      row.diverged = true;
      row.note = e.what();
    }
    table.rows.push_back(row);
  }
  // orders between consecutive non-diverged rows
  for (size_t i = 1; i < table.rows.size(); ++i) {
    const auto &a = table.rows[i - 1];
    auto& b = table.rows[i];
    if (a.diverged || b.diverged) continue;
    if (a.err_u > 0 && b.err_u > 0) b.order_u = compute_order({a.err_u, b.err_u}, {a.N, b.N})[1];
    if (a.err_aux > 0 && b.err_aux > 0) b.order_aux = compute_order({a.err_aux, b.err_aux}, {a.N, b.N})[1];
  }
  return table;
}

// ---------------------------------------------------------------- simulation

double SimulationResult::max_abs_dE() const {
  double m = 0.0;
  for (const auto& e : energy) m = std::max(m, std::abs(e.dE));
  return m;
}

SimulationResult run_simulation(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Problem pr = make_problem(cfg);
  const Mesh1D mesh = make_mesh(cfg, cfg.Ns.front());
  SimulationResult r;
  r.scheme = build_for(cfg, mesh, pr);
  const ReducedScheme& scheme = *r.scheme;
  const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
  const bool nls = cfg.model == Model::nls;
  const Vec s0 = scheme.initial_state(pr.initial);
  const double E0 = scheme.energy(s0);
  std::vector<double> snaps = cfg.observers.snapshot_times;
  if (snaps.empty()) snaps = {0.0, cfg.T};
  std::sort(snaps.begin(), snaps.end());
  size_t next_snap = 0;
  std::vector<std::pair<double, Vec>> snapshots;

  auto record = [&](long, double t, const Vec& y) {
    if (cfg.observers.energy) {
      const double E = scheme.energy(y);
      r.energy.push_back({t, E, E - E0, nls ? nls_charge(scheme, y) : kNaN});
    }
    if (cfg.observers.error && pr.exact_u)
      r.error.emplace_back(t, l2_error(*scheme.space(), scheme.field(y, 0), [&](double x) { return pr.exact_u(x, t); }));
  };
  const long stride = cfg.observers.stride;
  Observer obs = [&](long step, double t, const Vec& y) {
    if (step % stride == 0 || t == cfg.T) record(step, t, y);
    // first step at or past each requested time; files are named by the request
    while (next_snap < snaps.size() && t >= snaps[next_snap] - 1e-12) {
      snapshots.emplace_back(snaps[next_snap], y);
      ++next_snap;
    }
    r.state = y;
    r.t = t;
    r.steps = step;
  };
  try {
    integrate(make_experiment_stepper(cfg, scheme), s0, time_step(cfg, mesh), cfg.T, {obs}, 1);
  } catch (const BlowUpError& e) {
    r.diverged = true;
    r.message = e.what();
  }

  if (!dir.empty()) {
    fs::create_directories(dir);
    if (cfg.observers.energy) {
      std::ostringstream s;
      s << "t,E_h,delta_E_h" << (nls ? ",charge" : "") << "\n";
      for (const auto& e : r.energy) {
        s << fmt(e.t) << "," << fmt(e.E) << "," << fmt(e.dE);
        if (nls) s << "," << fmt(e.charge);
        s << "\n";
      }
      write_csv(fs::path(dir) / "energy.csv", s.str(), r.files);
    }
    if (cfg.observers.error && pr.exact_u) {
      std::ostringstream s;
      s << "t,l2_error\n";
      for (const auto& [t, e] : r.error) s << fmt(t) << "," << fmt(e) << "\n";
      write_csv(fs::path(dir) / "error.csv", s.str(), r.files);
    }
    const auto names = scheme.field_names();
    for (const auto& [t, y] : snapshots) {
      std::vector<std::vector<double>> cols;
      std::vector<double> x, v;
      std::string header = "x,u";
      for (int f = 0; f < scheme.fields(); ++f) {
        sample(*scheme.space(), scheme.field(y, f), cfg.observers.points_per_cell, x, v);
        cols.push_back(v);
        if (f > 0) header += "," + names[f];
      }
      sample(*scheme.space(), scheme.auxiliary(y), cfg.observers.points_per_cell, x, v);
      cols.push_back(v);
      header += "," + scheme.auxiliary_name();
      std::ostringstream s;
      s << header << "\n";
      for (size_t i = 0; i < x.size(); ++i) {
        s << fmt(x[i]);
        for (const auto& c : cols) s << "," << fmt(c[i]);
        s << "\n";
      }
      write_csv(fs::path(dir) / ("snapshot_t" + time_tag(t) + ".csv"), s.str(), r.files);
    }
  }
  return r;
}

// ---------------------------------------------------------------- verification

std::string flux_label(Model m, const FluxScalars& f) {
  std::string out;
  const json j = scalars_json(m, f);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const double v = it.value().get<double>();
    if (v == 0.0) continue;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%s=%g", out.empty() ? "" : ";", it.key().c_str(), v);
    out += buf;
  }
  return out.empty() ? "central" : out;
}

const std::vector<FluxPreset>& flux_presets() {
  static const std::vector<FluxPreset> presets = [] {
    std::vector<FluxPreset> v;
    auto add = [&](Model m, FluxScalars f) { v.push_back({m, f, flux_label(m, f)}); };
    for (auto [a11, a13, a33, beta] : std::vector<std::array<double, 4>>{{0, 0, 0, 0},
                                                                         {0, 0.5, 0, 0},
                                                                         {1, 0, 0, 0},
                                                                         {0, 0, -1, 0},
                                                                         {1, 0, -1, 0},
                                                                         {0, 0.125, 0, 0},
                                                                         {0, 0, 0, 1},
                                                                         {0, 0, 0, -1}}) {
      FluxScalars f;
      f.a11 = a11, f.a13 = a13, f.a33 = a33, f.beta = beta;
      add(Model::wave, f);
    }
    for (double a2 : {0.0, 0.5, -0.5}) {
      FluxScalars f;
      f.alpha2 = a2;
      add(Model::kdv, f);
    }
    {
      FluxScalars f;
      add(Model::bbm, f);
      f.alpha0 = 0.25;
      add(Model::bbm, f);
      FluxScalars g;
      g.alpha1 = 0.5;
      add(Model::bbm, g);
    }
    for (double a0 : {0.0, 3.0}) {
      FluxScalars f;
      f.alpha0 = a0;
      add(Model::ch, f);
    }
    for (double a : {0.0, 0.5}) {
      FluxScalars f;
      f.alpha = a;
      add(Model::nls, f);
    }
    add(Model::bbm_kdv, FluxScalars{});
    return v;
  }();
  return presets;
}

std::string VerificationReport::csv() const {
  std::ostringstream s;
  s << "model,flux,N,k,seed,residual_ms,residual_energy\n";
  for (const auto& r : rows)
    s << to_string(r.model) << "," << r.flux << "," << r.N << "," << r.k << "," << r.seed << "," << fmt(r.residual_ms)
      << "," << fmt(r.residual_energy) << "\n";
  return s.str();
}

VerificationReport run_verification(const VerificationSpec& spec) {
  VerificationReport rep;
  rep.tol = spec.tol;
  for (const auto& fp : flux_presets()) {
    if (!spec.models.empty() && std::find(spec.models.begin(), spec.models.end(), fp.model) == spec.models.end())
      continue;
    ModelParams mp = default_params(fp.model);
    if (fp.model == Model::wave) mp.V = named_potential("cubic");  // exercise the nonlinear tangent path
    // the alpha1 != 0 BBM scheme is only invertible for even k and odd N
    const bool bbm_alt = fp.model == Model::bbm && fp.scalars.alpha1 != 0.0;
    for (int k : spec.ks) {
      if (bbm_alt && k % 2) {
        rep.not_applicable.push_back(to_string(fp.model) + " " + fp.label + " k=" + std::to_string(k) + ": needs even k");
        continue;
      }
      for (int N0 : spec.Ns) {
        const int N = bbm_alt && N0 % 2 == 0 ? N0 + 1 : N0;
        std::unique_ptr<ReducedScheme> scheme;
        try {
          scheme = build_reduced_scheme(fp.model, build_mesh(0.0, 2.0, N, MeshPattern::uniform), k, mp, fp.scalars);
        } catch (const SingularMatrixError& e) {
          rep.skipped.push_back(to_string(fp.model) + " " + fp.label + " N=" + std::to_string(N) +
                                " k=" + std::to_string(k) + ": " + e.what());
          continue;
        }
        for (int d = 0; d < spec.draws; ++d) {
          const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(d);
          std::mt19937_64 gen(seed);
          std::normal_distribution<double> nd(0.0, 0.5);
          auto draw = [&] {
            Vec v(scheme->state_size());
            for (auto& x : v) x = nd(gen);
            return scheme->make_consistent(v);
          };
          const Vec s = draw(), a = draw(), b = draw();
          VerificationRow row{fp.model, fp.label, N, k, seed, multisymplectic_residual(*scheme, s, a, b).relative(),
                              local_energy_residual(*scheme, s).relative()};
          rep.max_ms = std::max(rep.max_ms, row.residual_ms);
          rep.max_energy = std::max(rep.max_energy, row.residual_energy);
          rep.rows.push_back(row);
        }
      }
    }
  }
  return rep;
}

}  // namespace msdg
