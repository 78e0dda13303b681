#pragma once

#include <functional>
#include <string>
#include <vector>

#include "msdg/flux.hpp"

namespace msdg {

enum class Model { wave, kdv, bbm, ch, nls, bbm_kdv };

Model parse_model(const std::string& name);
std::string to_string(Model m);
const std::vector<Model>& all_models();

// Polynomial in u with coefficients c[0] + c[1] u + c[2] u^2 + ...
struct Polynomial {
  std::vector<double> c;
  double operator()(double u) const;
  Polynomial derivative() const;
  int degree() const;
};

// Physical parameters. Unused fields are ignored by models that do not need them.
//   wave: V;  kdv: eta, eps;  bbm: sigma, V;  nls: alpha;  bbm_kdv: sigma, nu, V.
struct ModelParams {
  Polynomial V;
  double eta = 1.0;
  double eps = 1.0;
  double sigma = 1e-2;
  double nu = 1.0;
  double alpha = 2.0;
};

ModelParams default_params(Model m);
// Named potentials: "zero" and "cubic" (u^3 / 6).
Polynomial named_potential(const std::string& name);
void validate_params(Model m, const ModelParams& p);

// Scalar shortcuts for the flux family, per model:
//   wave (a11, a13, a33, beta); kdv (alpha1, alpha2); bbm (alpha0, alpha1, alpha2);
//   ch (alpha0); nls (alpha, in [-1/2, 1/2]); bbm_kdv: central only.
struct FluxScalars {
  double a11 = 0, a13 = 0, a33 = 0, beta = 0;
  double alpha0 = 0, alpha1 = 0, alpha2 = 0;
  double alpha = 0;
};
void validate_flux_scalars(Model m, const FluxScalars& f);

// M z_t + K z_x = grad S(z).
struct MultiSymplecticSystem {
  Model model;
  int m = 0;
  Mat M, K;
  std::vector<std::string> names;
  std::function<double(const VecM&)> S;
  std::function<VecM(const VecM&)> grad_S;
  std::function<Mat(const VecM&)> hess_S;
  int S_degree = 2;  // polynomial degree of S
  KDecomposition decomposition;

  int index(const std::string& name) const;
};

MultiSymplecticSystem make_system(Model model, const ModelParams& params);
// Expands the scalar shortcuts into the (A, B) pair.
FluxSpec make_flux(Model model, const ModelParams& params, const FluxScalars& scalars);

}  // namespace msdg
