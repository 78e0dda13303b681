#include "msdg/runge_kutta.hpp"

#include <cmath>

#include "msdg/errors.hpp"

namespace msdg {

namespace {

ButcherTableau build(std::string name, int order, std::vector<std::vector<double>> a, std::vector<double> b) {
  const int s = static_cast<int>(b.size());
  ButcherTableau t;
  t.name = std::move(name);
  t.order = order;
  t.a = Eigen::MatrixXd::Zero(s, s);
  t.b = Eigen::VectorXd::Map(b.data(), s);
  t.c = Eigen::VectorXd::Zero(s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < i; ++j) t.a(i, j) = a[i][j];
  t.c = t.a.rowwise().sum();
  return t;
}

void check_finite(const Vec& y, long step, double t) {
  if (!y.allFinite()) throw BlowUpError("non-finite state at step " + std::to_string(step), step, t);
}

}  // namespace

std::vector<std::string> tableau_names() { return {"euler", "heun", "ssprk3", "rk4", "rk5"}; }

ButcherTableau make_tableau(const std::string& name) {
  if (name == "euler") return build(name, 1, {{}}, {1.0});
  if (name == "heun") return build(name, 2, {{}, {1.0}}, {0.5, 0.5});
  if (name == "ssprk3") return build(name, 3, {{}, {1.0}, {0.25, 0.25}}, {1.0 / 6, 1.0 / 6, 2.0 / 3});
  if (name == "rk4") return build(name, 4, {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}}, {1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6});
  if (name == "rk5")  // Dormand-Prince fifth-order weights (the FSAL stage has zero weight and is dropped)
    return build(name, 5,
                 {{},
                  {1.0 / 5},
                  {3.0 / 40, 9.0 / 40},
                  {44.0 / 45, -56.0 / 15, 32.0 / 9},
                  {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
                  {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656}},
                 {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84});
  throw ConfigError("unknown time integrator '" + name + "'");
}

ButcherTableau tableau_of_order(int p) {
  if (p < 1 || p > 5) throw ConfigError("no shipped RK tableau of order " + std::to_string(p));
  return make_tableau(tableau_names()[p - 1]);
}

Vec rk_step(const RhsFn& rhs, double t, const Vec& y, double dt, const ButcherTableau& tab, long step) {
  if (!(dt > 0.0)) throw ConfigError("rk_step: dt must be positive");
  const int s = tab.stages();
  std::vector<Vec> k(s);
  for (int i = 0; i < s; ++i) {
    Vec yi = y;
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) != 0.0) yi += (dt * tab.a(i, j)) * k[j];
    k[i] = rhs(t + tab.c[i] * dt, yi);
  }
  Vec out = y;
  for (int i = 0; i < s; ++i)
    if (tab.b[i] != 0.0) out += (dt * tab.b[i]) * k[i];
  check_finite(out, step, t + dt);
  return out;
}

void StabilizationFilter::apply(Vec& y, double dt) const {
  if (!active()) return;
  const int nb = degree + 1;
  Eigen::VectorXd damp(nb);
  for (int i = 0; i < nb; ++i)
    damp[i] = std::exp(-strength * std::pow(static_cast<double>(i) / degree, 2 * exponent) * dt);
  for (Eigen::Index n = 0; n < y.size(); ++n) y[n] *= damp[n % nb];
}

Vec ssprk3_step(const RhsFn& rhs, double t, const Vec& y, double dt, const StageHook& hook, long step) {
  if (!(dt > 0.0)) throw ConfigError("ssprk3_step: dt must be positive");
  Vec y1 = y + dt * rhs(t, y);
  if (hook) hook(y1, dt);
  Vec y2 = 0.75 * y + 0.25 * (y1 + dt * rhs(t + dt, y1));
  if (hook) hook(y2, dt);
  Vec out = (1.0 / 3) * y + (2.0 / 3) * (y2 + dt * rhs(t + 0.5 * dt, y2));
  if (hook) hook(out, dt);
  check_finite(out, step, t + dt);
  return out;
}

Vec ssprk3_step_stabilized(const RhsFn& rhs, double t, const Vec& y, double dt, const StabilizationFilter& filter,
                           long step) {
  return ssprk3_step(rhs, t, y, dt, [&filter](Vec& v, double h) { filter.apply(v, h); }, step);
}

Stepper make_stepper(const RhsFn& rhs, const ButcherTableau& tab) {
  return [rhs, tab](double t, const Vec& y, double dt, long step) { return rk_step(rhs, t, y, dt, tab, step); };
}

Stepper make_ssprk3_stepper(const RhsFn& rhs, StageHook hook) {
  return [rhs, hook](double t, const Vec& y, double dt, long step) { return ssprk3_step(rhs, t, y, dt, hook, step); };
}

IntegrationResult integrate(const Stepper& stepper, const Vec& y0, double dt, double T,
                            const std::vector<Observer>& observers, long stride) {
  if (!(T >= 0.0)) throw ConfigError("integrate: final time must be nonnegative");
  if (!(dt > 0.0)) throw ConfigError("integrate: dt must be positive");
  if (stride < 1) stride = 1;
  auto notify = [&](long n, double t, const Vec& y) {
    for (const auto& o : observers) o(n, t, y);
  };
  IntegrationResult r{y0, 0.0, 0};
  notify(0, 0.0, r.state);
  // step count fixed up front so t_n = n dt exactly, with a shortened final step
  const double ratio = T / dt;
  long full = static_cast<long>(std::floor(ratio));
  if (full > 0 && ratio - full < 1e-9) --full;  // avoid a sliver step from rounding
  const long total = T > 0.0 ? full + 1 : 0;
  for (long n = 0; n < total; ++n) {
    const double t = n * dt;
    const double h = n + 1 == total ? T - t : dt;
    r.state = stepper(t, r.state, h, n + 1);
    r.steps = n + 1;
    r.time = n + 1 == total ? T : (n + 1) * dt;
    if (r.steps % stride == 0 || r.steps == total) notify(r.steps, r.time, r.state);
  }
  return r;
}

}  // namespace msdg
