#include "msdg/systems.hpp"

#include <algorithm>
#include <cmath>

#include "msdg/errors.hpp"

namespace msdg {

namespace {
const std::vector<std::pair<Model, std::string>> kNames = {{Model::wave, "wave"}, {Model::kdv, "kdv"},
                                                           {Model::bbm, "bbm"},   {Model::ch, "ch"},
                                                           {Model::nls, "nls"},   {Model::bbm_kdv, "bbm_kdv"}};
}

Model parse_model(const std::string& name) {
  for (const auto& [m, n] : kNames)
    if (n == name) return m;
  throw ConfigError("unknown model '" + name + "'");
}

std::string to_string(Model m) {
  for (const auto& [mm, n] : kNames)
    if (mm == m) return n;
  return "?";
}

const std::vector<Model>& all_models() {
  static const std::vector<Model> v{Model::wave, Model::kdv, Model::bbm, Model::ch, Model::nls, Model::bbm_kdv};
  return v;
}

double Polynomial::operator()(double u) const {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * u + *it;
  return r;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (size_t i = 1; i < c.size(); ++i) d.c.push_back(static_cast<double>(i) * c[i]);
  return d;
}

int Polynomial::degree() const {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (c[i] != 0.0) return i;
  return 0;
}

Polynomial named_potential(const std::string& name) {
  if (name == "zero") return {};
  if (name == "cubic") return {{0.0, 0.0, 0.0, 1.0 / 6.0}};
  throw ConfigError("unknown potential '" + name + "' (expected zero, cubic or a coefficient list)");
}

ModelParams default_params(Model m) {
  ModelParams p;
  switch (m) {
    case Model::wave: break;
    case Model::kdv: break;
    case Model::bbm: p.V = {{0.0, 0.0, 0.0, 1.0 / 6.0}}; break;
    case Model::ch: break;
    case Model::nls: break;
    case Model::bbm_kdv:
      p.sigma = 1.0;
      p.V = {{0.0, 0.0, 0.0, -1.0 / 6.0}};
      break;
  }
  return p;
}

void validate_params(Model m, const ModelParams& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  for (double c : p.V.c)
    if (!finite(c)) throw ConfigError("potential coefficients must be finite");
  switch (m) {
    case Model::kdv:
      if (!finite(p.eta) || !finite(p.eps) || p.eps == 0.0) throw ConfigError("kdv: eps must be nonzero");
      break;
    case Model::bbm:
      if (!(p.sigma > 0.0)) throw ConfigError("bbm: sigma must be positive");
      break;
    case Model::bbm_kdv:
      if (!(p.sigma > 0.0) || !finite(p.nu)) throw ConfigError("bbm_kdv: sigma must be positive");
      break;
    case Model::nls:
      if (!finite(p.alpha)) throw ConfigError("nls: alpha must be finite");
      break;
    default: break;
  }
}

void validate_flux_scalars(Model m, const FluxScalars& f) {
  const double all[] = {f.a11, f.a13, f.a33, f.beta, f.alpha0, f.alpha1, f.alpha2, f.alpha};
  for (double x : all)
    if (!std::isfinite(x) || std::abs(x) > 10.0) throw ConfigError("flux scalars must be finite with |value| <= 10");
  auto only = [&](std::initializer_list<const double*> allowed) {
    const double* fields[] = {&f.a11, &f.a13, &f.a33, &f.beta, &f.alpha0, &f.alpha1, &f.alpha2, &f.alpha};
    for (const double* p : fields)
      if (*p != 0.0 && std::find(allowed.begin(), allowed.end(), p) == allowed.end())
        throw ConfigError("flux scalar not used by model " + to_string(m));
  };
  switch (m) {
    case Model::wave: only({&f.a11, &f.a13, &f.a33, &f.beta}); break;
    case Model::kdv: only({&f.alpha1, &f.alpha2}); break;
    case Model::bbm: only({&f.alpha0, &f.alpha1, &f.alpha2}); break;
    case Model::ch: only({&f.alpha0}); break;
    case Model::nls:
      only({&f.alpha});
      if (std::abs(f.alpha) > 0.5) throw ConfigError("nls: alternating parameter must lie in [-1/2, 1/2]");
      break;
    case Model::bbm_kdv: only({}); break;
  }
}

int MultiSymplecticSystem::index(const std::string& name) const {
  for (int i = 0; i < m; ++i)
    if (names[i] == name) return i;
  throw ConfigError("no component named '" + name + "'");
}

MultiSymplecticSystem make_system(Model model, const ModelParams& p) {
  validate_params(model, p);
  MultiSymplecticSystem s;
  s.model = model;
  const Polynomial V = p.V, dV = V.derivative(), d2V = dV.derivative();
  auto init = [&](int m, std::vector<std::string> names) {
    s.m = m;
    s.M = Mat::Zero(m, m);
    s.K = Mat::Zero(m, m);
    s.names = std::move(names);
  };
  auto skew = [](Mat& X, int i, int j, double v) {
    X(i, j) = v;
    X(j, i) = -v;
  };
  switch (model) {
    case Model::wave: {  // (u, v, w)
      init(3, {"u", "v", "w"});
      skew(s.M, 1, 0, 1.0);
      skew(s.K, 0, 2, 1.0);
      s.S = [V](const VecM& z) { return 0.5 * (z[1] * z[1] - z[2] * z[2]) - V(z[0]); };
      s.grad_S = [dV](const VecM& z) { return VecM((VecM(3) << -dV(z[0]), z[1], -z[2]).finished()); };
      s.hess_S = [d2V](const VecM& z) {
        Mat H = Mat::Zero(3, 3);
        H(0, 0) = -d2V(z[0]);
        H(1, 1) = 1.0;
        H(2, 2) = -1.0;
        return H;
      };
      s.S_degree = std::max(2, V.degree());
      break;
    }
    case Model::kdv: {  // (phi, u, v, w)
      init(4, {"phi", "u", "v", "w"});
      const double eta = p.eta, eps = p.eps;
      skew(s.M, 0, 1, 0.5);
      skew(s.K, 0, 3, 1.0);
      skew(s.K, 2, 1, eps);
      s.S = [eta](const VecM& z) { return 0.5 * z[2] * z[2] - z[1] * z[3] + eta / 6.0 * z[1] * z[1] * z[1]; };
      s.grad_S = [eta](const VecM& z) {
        return VecM((VecM(4) << 0.0, -z[3] + 0.5 * eta * z[1] * z[1], z[2], -z[1]).finished());
      };
      s.hess_S = [eta](const VecM& z) {
        Mat H = Mat::Zero(4, 4);
        H(1, 1) = eta * z[1];
        H(1, 3) = H(3, 1) = -1.0;
        H(2, 2) = 1.0;
        return H;
      };
      s.S_degree = 3;
      break;
    }
    case Model::bbm: {  // (phi, u, v, w, p)
      init(5, {"phi", "u", "v", "w", "p"});
      const double sg = p.sigma;
      skew(s.M, 1, 0, 0.5);
      skew(s.M, 2, 1, 0.5 * sg);
      skew(s.K, 4, 0, 1.0);
      skew(s.K, 3, 1, 0.5 * sg);
      s.S = [V, sg](const VecM& z) { return z[1] * z[4] - V(z[1]) + 0.5 * sg * z[2] * z[3]; };
      s.grad_S = [dV, sg](const VecM& z) {
        return VecM((VecM(5) << 0.0, z[4] - dV(z[1]), 0.5 * sg * z[3], 0.5 * sg * z[2], z[1]).finished());
      };
      s.hess_S = [d2V, sg](const VecM& z) {
        Mat H = Mat::Zero(5, 5);
        H(1, 1) = -d2V(z[1]);
        H(1, 4) = H(4, 1) = 1.0;
        H(2, 3) = H(3, 2) = 0.5 * sg;
        return H;
      };
      s.S_degree = std::max(2, V.degree());
      break;
    }
    case Model::ch: {  // (u, phi, rho, v, w)
      init(5, {"u", "phi", "rho", "v", "w"});
      skew(s.M, 0, 1, 0.5);
      skew(s.M, 2, 0, 0.5);
      skew(s.K, 3, 0, 1.0);
      skew(s.K, 1, 4, 1.0);
      s.S = [](const VecM& z) {
        const double u = z[0], r = z[2];
        return -z[4] * u - 0.5 * u * u * u - 0.5 * u * r * r + r * z[3];
      };
      s.grad_S = [](const VecM& z) {
        const double u = z[0], r = z[2];
        return VecM((VecM(5) << -z[4] - 1.5 * u * u - 0.5 * r * r, 0.0, -u * r + z[3], r, -u).finished());
      };
      s.hess_S = [](const VecM& z) {
        Mat H = Mat::Zero(5, 5);
        H(0, 0) = -3.0 * z[0];
        H(0, 2) = H(2, 0) = -z[2];
        H(0, 4) = H(4, 0) = -1.0;
        H(2, 2) = -z[0];
        H(2, 3) = H(3, 2) = 1.0;
        return H;
      };
      s.S_degree = 3;
      break;
    }
    case Model::nls: {  // (p, q, v, w)
      init(4, {"p", "q", "v", "w"});
      const double a = p.alpha;
      skew(s.M, 0, 1, 1.0);
      skew(s.K, 2, 0, 1.0);
      skew(s.K, 3, 1, 1.0);
      s.S = [a](const VecM& z) {
        const double r = z[0] * z[0] + z[1] * z[1];
        return 0.5 * (z[2] * z[2] + z[3] * z[3] + 0.5 * a * r * r);
      };
      s.grad_S = [a](const VecM& z) {
        const double r = z[0] * z[0] + z[1] * z[1];
        return VecM((VecM(4) << a * r * z[0], a * r * z[1], z[2], z[3]).finished());
      };
      s.hess_S = [a](const VecM& z) {
        const double r = z[0] * z[0] + z[1] * z[1];
        Mat H = Mat::Zero(4, 4);
        H(0, 0) = a * (r + 2.0 * z[0] * z[0]);
        H(1, 1) = a * (r + 2.0 * z[1] * z[1]);
        H(0, 1) = H(1, 0) = 2.0 * a * z[0] * z[1];
        H(2, 2) = H(3, 3) = 1.0;
        return H;
      };
      s.S_degree = 4;
      break;
    }
    case Model::bbm_kdv: {  // (u, theta, phi, w, rho, v)
      init(6, {"u", "theta", "phi", "w", "rho", "v"});
      const double sg = p.sigma, nu = p.nu;
      skew(s.M, 0, 1, 0.5 * sg);
      skew(s.M, 2, 0, 0.5);
      skew(s.K, 0, 4, 0.5 * sg);
      skew(s.K, 0, 5, nu);
      skew(s.K, 3, 2, 1.0);
      s.S = [V, sg, nu](const VecM& z) {
        return z[0] * z[3] - V(z[0]) - 0.5 * nu * z[5] * z[5] - 0.5 * sg * z[1] * z[4];
      };
      s.grad_S = [dV, sg, nu](const VecM& z) {
        return VecM((VecM(6) << z[3] - dV(z[0]), -0.5 * sg * z[4], 0.0, z[0], -0.5 * sg * z[1], -nu * z[5]).finished());
      };
      s.hess_S = [d2V, sg, nu](const VecM& z) {
        Mat H = Mat::Zero(6, 6);
        H(0, 0) = -d2V(z[0]);
        H(0, 3) = H(3, 0) = 1.0;
        H(1, 4) = H(4, 1) = -0.5 * sg;
        H(5, 5) = -nu;
        return H;
      };
      s.S_degree = std::max(2, V.degree());
      break;
    }
  }
  s.decomposition = decompose_K(s.K);
  return s;
}

FluxSpec make_flux(Model model, const ModelParams& p, const FluxScalars& f) {
  validate_flux_scalars(model, f);
  const MultiSymplecticSystem sys = make_system(model, p);
  FluxSpec spec = FluxSpec::zero(sys.m);
  auto sym = [&](int i, int j, double v) { spec.A(i, j) = spec.A(j, i) = v; };
  switch (model) {
    case Model::wave:
      spec.A(0, 0) = f.a11;
      sym(0, 2, f.a13);
      spec.A(2, 2) = f.a33;
      spec.B(0, 1) = -f.beta;
      spec.B(1, 0) = f.beta;
      break;
    case Model::kdv:
      sym(0, 3, f.alpha1);
      sym(1, 2, p.eps * f.alpha2);
      break;
    case Model::bbm:
      sym(0, 1, f.alpha0);
      sym(0, 4, f.alpha1);
      sym(1, 3, 0.5 * p.sigma * f.alpha2);
      break;
    case Model::ch: sym(0, 1, f.alpha0); break;
    case Model::nls: spec.A = alternating_A(sys.decomposition, f.alpha); break;
    case Model::bbm_kdv: break;
  }
  return spec;
}

}  // namespace msdg
