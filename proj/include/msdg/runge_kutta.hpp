#pragma once

#include <functional>
#include <string>
#include <vector>

#include "msdg/dg_space.hpp"

namespace msdg {

// Explicit Butcher tableau: a strictly lower triangular.
struct ButcherTableau {
  std::string name;
  Eigen::MatrixXd a;
  Eigen::VectorXd b, c;
  int order = 0;
  int stages() const { return static_cast<int>(b.size()); }
};

// "euler", "heun", "ssprk3", "rk4", "rk5". Throws ConfigError otherwise.
ButcherTableau make_tableau(const std::string& name);
// Tableau of order p in 1..5.
ButcherTableau tableau_of_order(int p);
std::vector<std::string> tableau_names();

using RhsFn = std::function<Vec(double t, const Vec& y)>;
// Applied to the state after each stage (stabilization, constraint projection).
using StageHook = std::function<void(Vec& y, double dt)>;

// One explicit RK step from (t, y). Throws BlowUpError if the result is not finite.
Vec rk_step(const RhsFn& rhs, double t, const Vec& y, double dt, const ButcherTableau& tab, long step = 0);

// Strength used by the peakon presets: enough to keep them stable, small
// enough that smooth solutions are perturbed at the 1e-9 level.
inline constexpr double kDefaultFilterStrength = 0.01;

// Exponential modal damping: coefficient of Legendre mode i is scaled by
// exp(-s (i/k)^(2q) dt). Works on any state made of stacked DG vectors.
struct StabilizationFilter {
  double strength = 0.0;
  int exponent = 4;
  int degree = 0;

  void apply(Vec& y, double dt) const;
  bool active() const { return strength > 0.0 && degree > 0; }
};

// Shu-Osher SSPRK3, with `hook` (if set) applied after each stage.
Vec ssprk3_step(const RhsFn& rhs, double t, const Vec& y, double dt, const StageHook& hook = {}, long step = 0);
Vec ssprk3_step_stabilized(const RhsFn& rhs, double t, const Vec& y, double dt, const StabilizationFilter& filter,
                           long step = 0);

using Stepper = std::function<Vec(double t, const Vec& y, double dt, long step)>;
Stepper make_stepper(const RhsFn& rhs, const ButcherTableau& tab);
Stepper make_ssprk3_stepper(const RhsFn& rhs, StageHook hook);

using Observer = std::function<void(long step, double t, const Vec& y)>;

struct IntegrationResult {
  Vec state;
  double time = 0.0;
  long steps = 0;
};

// Fixed-step march to T with the last step shortened to land exactly on T.
// Observers fire at t=0, every `stride` steps, and at T.
IntegrationResult integrate(const Stepper& stepper, const Vec& y0, double dt, double T,
                            const std::vector<Observer>& observers = {}, long stride = 1);

}  // namespace msdg
