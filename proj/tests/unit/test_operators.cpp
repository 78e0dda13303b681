#include <cmath>
#include <random>

#include "../common/dense_oracle.hpp"
#include "doctest.h"
#include "msdg/errors.hpp"

using namespace msdg;
using Eigen::MatrixXd;
using oracle::Oracle;

namespace {

const std::pair<int, int> kCases[] = {{2, 0}, {2, 1}, {3, 2}, {4, 1}};

double maxdiff(const MatrixXd& a, const MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }
double reldiff(const MatrixXd& a, const MatrixXd& b) { return maxdiff(a, b) / std::max(1.0, b.cwiseAbs().maxCoeff()); }

}  // namespace

TEST_CASE("D_alpha, L, compositions and products match dense oracles") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (auto pattern : {MeshPattern::uniform, MeshPattern::two_one_alternating})
    for (auto [N, k] : kCases) {
      CAPTURE(N);
      CAPTURE(k);
      if (pattern == MeshPattern::two_one_alternating && N % 2) continue;
      const Mesh1D mesh = build_mesh(-0.5, 1.5, N, pattern);
      const auto sp = make_space(mesh, k);
      const Oracle o{mesh, k};
      for (double a : {0.0, 0.25, -0.5, 0.5}) CHECK(maxdiff(assemble_D(sp, a).dense(), o.D(a)) < 1e-12);
      const auto L = assemble_L(sp);
      CHECK(maxdiff(L.dense(), o.L()) < 1e-12);
      const auto D0 = assemble_D(sp, 0.0), Dq = assemble_D(sp, 0.25);
      CHECK(reldiff((D0 * L * Dq).dense(), o.D(0) * o.L() * o.D(0.25)) < 1e-12);
      CHECK(maxdiff((D0 + 0.5 * L).dense(), o.D(0.5)) < 1e-12);
      CHECK(maxdiff(shift_identity(D0, 2.0).dense(), o.D(0) + 2.0 * MatrixXd::Identity(sp->dofs(), sp->dofs())) < 1e-12);
      Vec u(sp->dofs()), v(sp->dofs());
      for (auto& x : u) x = g(rng);
      for (auto& x : v) x = g(rng);
      CHECK((project_product(*sp, {u, v}) - o.product(u, v)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("D_alpha algebra: D_alpha = D_0 + alpha L, adjoint and skew identities") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k : {0, 1, 3}) {
    const auto sp = make_space(build_mesh(0, 1, 6, MeshPattern::two_one_alternating), k);
    const auto D0 = assemble_D(sp, 0.0), L = assemble_L(sp);
    for (double a : {0.1, -0.3}) {
      CHECK(maxdiff(assemble_D(sp, a).dense(), (D0 + a * L).dense()) < 1e-13);
      // <D_a u, v> = -<u, D_{-a} v>
      CHECK(maxdiff(assemble_D(sp, a).dense(), -assemble_D(sp, -a).dense().transpose()) < 1e-12);
    }
    CHECK(maxdiff(D0.dense(), -D0.dense().transpose()) < 1e-12);
    CHECK(maxdiff(L.dense(), L.dense().transpose()) < 1e-12);
    Vec u(sp->dofs());
    for (auto& x : u) x = g(rng);
    double jumps = 0;
    for (int e = 0; e < sp->cells(); ++e) jumps += std::pow(sp->jump(u, e), 2);
    CHECK(u.dot(L * u) == doctest::Approx(-jumps).epsilon(1e-12));
    CHECK((D0 * sp->constant(1.0)).norm() < 1e-12);
    CHECK(maxdiff(compose(D0, BlockOperator::identity(sp)).dense(), D0.dense()) < 1e-15);
  }
}

TEST_CASE("operators differentiate smooth data at the expected order") {
  auto err = [](int N, int k) {
    const auto sp = make_space(build_mesh(0, 2 * M_PI, N, MeshPattern::uniform), k);
    const Vec du = assemble_D(sp, 0.5) * project(*sp, [](double x) { return std::sin(x); });
    return l2_error(*sp, du, [](double x) { return std::cos(x); });
  };
  // one-sided flux: order k
  for (int k : {1, 2}) CHECK(std::log2(err(20, k) / err(40, k)) == doctest::Approx(k).epsilon(0.1));
}

TEST_CASE("solvers: identity, singular detection, zero-mean and pseudo-inverse") {
  const auto sp = make_space(build_mesh(0, 1, 5, MeshPattern::uniform), 1);
  Vec b = Vec::LinSpaced(sp->dofs(), -1, 1);
  CHECK((factorize(BlockOperator::identity(sp)).solve(b) - b).norm() < 1e-14);
  CHECK_THROWS_AS(factorize(assemble_D(sp, 0.0)), SingularMatrixError);
  // D_{1/2} on periodic data has exactly the constants as kernel
  const auto D = assemble_D(sp, 0.5);
  const auto zm = zero_mean_inverse(D);
  Vec f = project(*sp, [](double x) { return std::cos(2 * M_PI * x); });
  const Vec u = zm.solve(f);
  CHECK((D * u - f).norm() < 1e-12);
  CHECK(std::abs(sp->mean(u)) < 1e-12);
  // central D_0, k=1: constants and sawtooth in the kernel; pinv gives the minimum-norm solution
  const auto D0 = assemble_D(sp, 0.0);
  const auto pi = pseudo_inverse(D0);
  CHECK(pi.kernel().cols() == 2);
  f = D0 * b;
  const Vec x = pi.solve(f);
  CHECK((D0 * x - f).norm() < 1e-10);
  CHECK((pi.kernel().transpose() * x).norm() < 1e-10);
  const MatrixXd pinv_dense = D0.dense().completeOrthogonalDecomposition().pseudoInverse();
  CHECK((pinv_dense * f - x).norm() < 1e-10);
}

TEST_CASE("D_0 kernel: constants plus the sawtooth for k=1") {
  for (int N : {4, 5, 8}) {
    const auto sp = make_space(build_mesh(0, 1, N, MeshPattern::uniform), 1);
    CHECK(null_space(assemble_D(sp, 0.0)).cols() == 2);
  }
}
