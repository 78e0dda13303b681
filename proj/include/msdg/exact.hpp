#pragma once

namespace msdg {

// Complete elliptic integral of the first kind, parameter m in [0, 1).
double elliptic_K(double m);
struct JacobiTriple {
  double sn, cn, dn;
};
// Jacobi elliptic sn, cn, dn (u | m) by descending Landen / AGM.
JacobiTriple jacobi_sn_cn_dn(double u, double m);
double jacobi_cn(double u, double m);

// BBM cnoidal wave (3mc/(2m-1)) cn^2((x - ct - x0)/sqrt(4(2m-1)sigma); m), m in (1/2, 1).
double exact_cnoidal(double x, double t, double c, double x0, double m, double sigma);
double exact_cnoidal_dx(double x, double t, double c, double x0, double m, double sigma);
// Spatial period 4K(m) sqrt(sigma(2m-1)) of the cnoidal wave.
double cnoidal_period(double m, double sigma);

// BBM solitary wave 3c sech^2(0.5 sqrt(1/sigma)(x - x0 - ct)).
double exact_bbm_soliton(double x, double t, double c, double x0, double sigma);
double exact_bbm_soliton_dx(double x, double t, double c, double x0, double sigma);

// Periodic CH peakon on a period x_r, taken literally from the closed form:
//   c / cosh(x_r/2) * cosh(-(s) + x_r floor(s/x_r + 1/2)),  s = x - x0 - ct.
double exact_ch_peakon(double x, double t, double x_r, double c, double x0);

// Source making u = sin(x + t) an exact CH solution.
double ch_fabricated_source(double x, double t);

}  // namespace msdg
