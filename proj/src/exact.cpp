#include "msdg/exact.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "msdg/errors.hpp"

namespace msdg {

double elliptic_K(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw ConfigError("elliptic_K: m must lie in [0, 1)");
  double a = 1.0, b = std::sqrt(1.0 - m);
  while (std::abs(a - b) > 1e-16 * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

JacobiTriple jacobi_sn_cn_dn(double u, double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("jacobi elliptic functions: m must lie in [0, 1]");
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (m == 1.0) return {std::tanh(u), 1.0 / std::cosh(u), 1.0 / std::cosh(u)};
  std::vector<double> a{1.0}, c{std::sqrt(m)};
  double b = std::sqrt(1.0 - m);
  while (std::abs(c.back()) > 1e-15 && a.size() < 64) {
    const double an = 0.5 * (a.back() + b);
    c.push_back(0.5 * (a.back() - b));
    b = std::sqrt(a.back() * b);
    a.push_back(an);
  }
  const int n = static_cast<int>(a.size()) - 1;
  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i >= 1; --i) phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  const double sn = std::sin(phi);
  return {sn, std::cos(phi), std::sqrt(1.0 - m * sn * sn)};
}

double jacobi_cn(double u, double m) { return jacobi_sn_cn_dn(u, m).cn; }

double cnoidal_period(double m, double sigma) {
  if (!(m > 0.5 && m < 1.0)) throw ConfigError("cnoidal: m must lie in (1/2, 1)");
  return 4.0 * elliptic_K(m) * std::sqrt(sigma * (2.0 * m - 1.0));
}

double exact_cnoidal(double x, double t, double c, double x0, double m, double sigma) {
  if (!(m > 0.5 && m < 1.0)) throw ConfigError("cnoidal: m must lie in (1/2, 1)");
  const double cn = jacobi_cn((x - c * t - x0) / std::sqrt(4.0 * (2.0 * m - 1.0) * sigma), m);
  return 3.0 * m * c / (2.0 * m - 1.0) * cn * cn;
}

double exact_cnoidal_dx(double x, double t, double c, double x0, double m, double sigma) {
  if (!(m > 0.5 && m < 1.0)) throw ConfigError("cnoidal: m must lie in (1/2, 1)");
  const double scale = 1.0 / std::sqrt(4.0 * (2.0 * m - 1.0) * sigma);
  const auto j = jacobi_sn_cn_dn((x - c * t - x0) * scale, m);
  return -6.0 * m * c / (2.0 * m - 1.0) * j.cn * j.sn * j.dn * scale;
}

double exact_bbm_soliton_dx(double x, double t, double c, double x0, double sigma) {
  const double kappa = 0.5 / std::sqrt(sigma), arg = kappa * (x - x0 - c * t);
  const double s = 1.0 / std::cosh(arg);
  return -6.0 * c * kappa * s * s * std::tanh(arg);
}

double exact_bbm_soliton(double x, double t, double c, double x0, double sigma) {
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(1.0 / sigma) * (x - x0 - c * t));
  return 3.0 * c * s * s;
}

double exact_ch_peakon(double x, double t, double x_r, double c, double x0) {
  if (!(x_r > 0.0)) throw ConfigError("peakon: period must be positive");
  const double s = x - x0 - c * t;
  return c / std::cosh(0.5 * x_r) * std::cosh(-s + x_r * std::floor(s / x_r + 0.5));
}

double ch_fabricated_source(double x, double t) {
  // u_t - u_xxt + 3 u u_x - 2 u_x u_xx - u u_xxx for u = sin(x + t)
  return 2.0 * std::cos(x + t) + 3.0 * std::sin(2.0 * (x + t));
}

}  // namespace msdg
