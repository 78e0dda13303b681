#include <chrono>
#include <random>

#include "doctest.h"
#include "msdg/errors.hpp"
#include "msdg/flux.hpp"
#include "msdg/systems.hpp"

using namespace msdg;

namespace {

struct Draw {
  std::mt19937_64 rng;
  std::normal_distribution<double> g;
  explicit Draw(unsigned s) : rng(s) {}
  Mat mat(int m) {
    Mat a(m, m);
    for (auto& x : a.reshaped()) x = g(rng);
    return a;
  }
  VecM vec(int m) {
    VecM v(m);
    for (auto& x : v) x = g(rng);
    return v;
  }
};

}  // namespace

TEST_CASE("trace identities hold for random K, A, B over 10^4 trials") {
  Draw d(2024);
  std::uniform_int_distribution<int> pick_m(2, 6);
  double worst = 0, worst_flux = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = pick_m(d.rng);
    const Mat R = d.mat(m), S = d.mat(m), T = d.mat(m);
    const Mat K = R - R.transpose();
    FluxSpec spec{S + S.transpose(), trial % 2 ? Mat(T - T.transpose()) : Mat::Zero(m, m)};
    InterfaceTraces z{d.vec(m), d.vec(m), d.vec(m), d.vec(m)};
    InterfaceTraces zb{d.vec(m), d.vec(m), d.vec(m), d.vec(m)};
    // flux by hand: K{z} + A[z] + B[z_t]
    const VecM hand = K * z.average() + spec.A * z.jump() + spec.B * (z.dt_plus - z.dt_minus);
    worst_flux = std::max(worst_flux, (hand - eval_flux(z, K, spec)).cwiseAbs().maxCoeff());
    const auto r = lemma31_residuals(z, zb, K, spec);
    worst = std::max({worst, std::abs(r.minus), std::abs(r.plus)});
    const auto same = lemma31_residuals(z, z, K, spec);
    worst = std::max({worst, std::abs(same.minus), std::abs(same.plus)});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(worst <= 1e-13 * 10);  // entries are O(10); the identities are exact up to roundoff
  CHECK(worst_flux < 1e-13);
  CHECK(secs < 5.0);
}

TEST_CASE("flux validation flags asymmetric A and non-antisymmetric B") {
  Mat A = Mat::Identity(3, 3), B = Mat::Zero(3, 3);
  CHECK(validate_flux_spec({A, B}).ok);
  A(0, 1) = 1;
  CHECK_FALSE(validate_flux_spec({A, B}).ok);
  A(0, 1) = 0;
  B(0, 0) = 1;
  CHECK_FALSE(validate_flux_spec({A, B}).ok);
}

TEST_CASE("K decomposition reconstructs K for every model") {
  for (Model m : all_models()) {
    CAPTURE(to_string(m));
    const auto sys = make_system(m, default_params(m));
    const auto& dec = sys.decomposition;
    CHECK((dec.Q * dec.Q.transpose() - Mat::Identity(sys.m, sys.m)).norm() < 1e-13);
    CHECK((dec.Q * sys.K * dec.Q.transpose() - dec.block_form()).norm() < 1e-13);
    for (int i = 0; i < dec.pairs(); ++i) CHECK(dec.Lambda(i, i) >= 0.0);
  }
}

TEST_CASE("random skew K decompositions") {
  Draw d(5);
  for (int m = 2; m <= 6; ++m) {
    const Mat R = d.mat(m);
    const Mat K = R - R.transpose();
    const auto dec = decompose_K(K);
    CHECK((dec.Q * K * dec.Q.transpose() - dec.block_form()).norm() < 1e-12 * K.norm());
  }
  CHECK_THROWS(decompose_K(Mat::Identity(2, 2)));
}

TEST_CASE("alternating A at alpha=1/2 gives one-sided traces for the wave system") {
  const auto sys = make_system(Model::wave, default_params(Model::wave));
  const Mat A = alternating_A(sys.decomposition, 0.5);
  CHECK((A - A.transpose()).norm() < 1e-14);
  Draw d(9);
  const VecM zm = d.vec(sys.m), zp = d.vec(sys.m);
  const VecM f = eval_flux(zm, zp, {}, {}, sys.K, {A, Mat::Zero(sys.m, sys.m)});
  // each nonzero flux component is K applied to a one-sided trace
  const VecM km = sys.K * zm, kp = sys.K * zp;
  int one_sided = 0;
  for (int i = 0; i < sys.m; ++i) {
    if (std::abs(km[i]) + std::abs(kp[i]) < 1e-14) continue;
    one_sided += std::abs(f[i] - km[i]) < 1e-12 || std::abs(f[i] - kp[i]) < 1e-12;
  }
  int active = 0;
  for (int i = 0; i < sys.m; ++i) active += std::abs(km[i]) + std::abs(kp[i]) > 1e-14;
  CHECK(one_sided == active);
}

TEST_CASE("flux scalars outside the allowed family are rejected") {
  FluxScalars f;
  f.alpha = 0.7;
  CHECK_THROWS_AS(validate_flux_scalars(Model::nls, f), ConfigError);
  FluxScalars g;
  g.alpha1 = 0.3;
  CHECK_THROWS_AS(validate_flux_scalars(Model::bbm_kdv, g), ConfigError);
}
