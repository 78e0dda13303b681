#include <cmath>

#include "doctest.h"
#include "msdg/errors.hpp"
#include "msdg/runge_kutta.hpp"

using namespace msdg;

namespace {

// y' = [y1, -y0] rotation; exact: rotation by angle t
Vec rotation(double, const Vec& y) { return (Vec(2) << y[1], -y[0]).finished(); }

double rk_error(const ButcherTableau& tab, int steps) {
  const Vec y0 = (Vec(2) << 1.0, 0.0).finished();
  const auto r = integrate(make_stepper(rotation, tab), y0, 1.0 / steps, 1.0);
  return std::hypot(r.state[0] - std::cos(1.0), r.state[1] + std::sin(1.0));
}

}  // namespace

TEST_CASE("tableaus are consistent and reach their nominal order") {
  for (const auto& name : tableau_names()) {
    CAPTURE(name);
    const auto tab = make_tableau(name);
    CHECK(tab.b.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i < tab.stages(); ++i) CHECK(tab.c[i] == doctest::Approx(tab.a.row(i).sum()));
    const double ratio = rk_error(tab, 20) / rk_error(tab, 40);
    CHECK(std::log2(ratio) == doctest::Approx(tab.order).epsilon(0.08));
  }
  CHECK(tableau_of_order(4).name == "rk4");
  CHECK_THROWS_AS(tableau_of_order(6), ConfigError);
  CHECK_THROWS_AS(make_tableau("rk9"), ConfigError);
}

TEST_CASE("one RK4 step on y' = y matches the 4th-order Taylor polynomial") {
  const Vec y = Vec::Ones(1);
  const double h = 0.1;
  const Vec out = rk_step([](double, const Vec& v) { return v; }, 0.0, y, h, make_tableau("rk4"));
  CHECK(out[0] == doctest::Approx(1 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24).epsilon(1e-15));
}

TEST_CASE("ssprk3 step equals the Butcher form and the hook runs per stage") {
  const Vec y = (Vec(2) << 0.3, -1.2).finished();
  const Vec a = ssprk3_step(rotation, 0.0, y, 0.05);
  const Vec b = rk_step(rotation, 0.0, y, 0.05, make_tableau("ssprk3"));
  CHECK((a - b).norm() < 1e-15);
  int calls = 0;
  ssprk3_step(rotation, 0.0, y, 0.05, [&](Vec&, double) { ++calls; });
  CHECK(calls == 3);
}

TEST_CASE("stabilization filter") {
  StabilizationFilter off{0.0, 4, 3};
  const Vec y = Vec::LinSpaced(8, -2, 5);
  CHECK((ssprk3_step_stabilized(rotation, 0, y.head(2), 0.1, off) - ssprk3_step(rotation, 0, y.head(2), 0.1)).norm() ==
        0.0);
  Vec z = y;
  off.apply(z, 0.1);
  CHECK(z == y);
  StabilizationFilter f{5.0, 2, 3};
  z = y;
  f.apply(z, 0.1);
  for (int n = 0; n < 8; ++n) {
    CHECK(std::abs(z[n]) <= std::abs(y[n]));
    if (n % 4 == 0) CHECK(z[n] == y[n]);  // cell means untouched
  }
  CHECK(z[3] == doctest::Approx(y[3] * std::exp(-0.5)));
}

TEST_CASE("integrate lands exactly on T and notifies observers") {
  const Vec y0 = (Vec(2) << 1.0, 0.0).finished();
  auto step = make_stepper(rotation, make_tableau("rk4"));
  std::vector<double> seen;
  Observer obs = [&](long, double t, const Vec&) { seen.push_back(t); };
  auto r = integrate(step, y0, 0.3, 1.0, {obs}, 2);
  CHECK(r.time == 1.0);
  CHECK(r.steps == 4);
  CHECK(seen == std::vector<double>{0.0, 0.6, 1.0});
  seen.clear();
  r = integrate(step, y0, 0.1, 0.0, {obs});
  CHECK(r.steps == 0);
  CHECK(r.state == y0);
  CHECK(seen == std::vector<double>{0.0});
  // T an exact multiple of dt up to rounding: no sliver step
  r = integrate(step, y0, 0.1, 0.3);
  CHECK(r.steps == 3);
  CHECK_THROWS_AS(integrate(step, y0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(integrate(step, y0, 0.1, -1.0), ConfigError);
}

TEST_CASE("blow-up is reported with the step") {
  auto grow = [](double, const Vec& v) { return Vec(v.array().square() * 1e200); };
  const Vec y0 = Vec::Constant(1, 1e200);
  try {
    integrate(make_stepper(grow, make_tableau("euler")), y0, 1.0, 5.0);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& e) {
    CHECK(e.step == 1);
  }
}
