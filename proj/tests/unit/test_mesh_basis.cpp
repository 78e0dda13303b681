#include <cmath>
#include <numbers>

#include "doctest.h"
#include "msdg/dg_space.hpp"
#include "msdg/errors.hpp"
#include "msdg/mesh.hpp"
#include "msdg/quadrature.hpp"

using namespace msdg;

TEST_CASE("gauss rule integrates monomials up to degree 2n-1") {
  for (int n = 1; n <= 12; ++n) {
    const auto q = gauss_legendre(n);
    CHECK(q.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.nodes[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("legendre values match the standard library") {
  double p[8], dp[8];
  for (double xi : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    legendre(7, xi, p, dp);
    for (int i = 0; i <= 7; ++i) CHECK(p[i] == doctest::Approx(std::legendre(i, xi)).epsilon(1e-13));
  }
}

TEST_CASE("two-to-one mesh alternates widths and covers the domain") {
  const auto m = build_mesh(0.0, 3.0, 4, MeshPattern::two_one_alternating);
  CHECK(m.num_cells() == 4);
  CHECK(m.width(0) == doctest::Approx(2 * m.width(1)));  // cells numbered from 1: the odd ones are wide
  CHECK(m.right() == doctest::Approx(3.0));
  CHECK(m.locate(m.edges()[2], Side::left) == 1);
  CHECK(m.locate(m.edges()[2], Side::right) == 2);
  CHECK(m.wrap(3.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(build_mesh(0.0, 1.0, 0, MeshPattern::uniform), ConfigError);
}

TEST_CASE("basis is orthonormal, so the mass matrix is the identity") {
  const auto sp = make_space(build_mesh(0.0, 1.0, 4, MeshPattern::two_one_alternating), 3);
  for (Eigen::Index a = 0; a < sp->dofs(); ++a)
    for (Eigen::Index b = 0; b < sp->dofs(); ++b) {
      const Arr fa = sp->to_nodal(Vec::Unit(sp->dofs(), a)), fb = sp->to_nodal(Vec::Unit(sp->dofs(), b));
      CHECK(std::abs(sp->integrate(fa * fb) - (a == b)) < 1e-13);
    }
}

TEST_CASE("projection reproduces polynomials of degree <= k") {
  for (int k = 0; k <= 4; ++k) {
    const auto sp = make_space(build_mesh(-1.0, 2.0, 6, MeshPattern::two_one_alternating), k);
    auto f = [k](double x) { return std::pow(x - 0.3, k) + 0.5; };
    const Vec c = project(*sp, f);
    for (double x : {-0.9, -0.2, 0.45, 1.1, 1.95}) CHECK(std::abs(sp->eval(c, x, Side::left) - f(x)) < 1e-13);
  }
}

TEST_CASE("projection error converges at order k+1") {
  auto f = [](double x) { return std::sin(x); };
  for (int k = 0; k <= 3; ++k) {
    const auto e = [&](int N) {
      const DgSpace sp(build_mesh(0, 2 * std::numbers::pi, N, MeshPattern::uniform), k);
      return l2_error(sp, project(sp, f), f);
    };
    const double order = std::log2(e(20) / e(40));
    CHECK(order == doctest::Approx(k + 1).epsilon(0.05));
  }
}

TEST_CASE("traces, jumps and means") {
  const DgSpace sp(build_mesh(0.0, 1.0, 4, MeshPattern::uniform), 2);
  const Vec c = project(sp, [](double x) { return x; });  // sawtooth: jump -1 at the wrap
  CHECK(sp.jump(c, 0) == doctest::Approx(-1.0));
  CHECK(std::abs(sp.jump(c, 2)) < 1e-13);
  CHECK(sp.average(c, 4) == doctest::Approx(0.5));
  CHECK(sp.mean(c) == doctest::Approx(0.5));
  CHECK(sp.mean(sp.constant(3.0)) == doctest::Approx(3.0));
}
