#pragma once
// Brute-force dense assemblies of the DG operators, written directly from the
// weak forms with std::legendre as the basis. Shared by unit and acceptance tests.
#include <cmath>

#include "msdg/mesh.hpp"
#include "msdg/operators.hpp"

namespace msdg::oracle {

using Eigen::MatrixXd;

struct Oracle {
  Mesh1D mesh;
  int k;
  int N() const { return mesh.num_cells(); }
  int nb() const { return k + 1; }
  int idx(int j, int i) const { return j * nb() + i; }
  double phi(int j, int i, double xi) const { return std::sqrt((2 * i + 1) / mesh.width(j)) * std::legendre(i, xi); }
  // P_i' = sum of (2m+1) P_m over m = i-1, i-3, ...
  double dphi(int j, int i, double xi) const {
    double d = 0;
    for (int m = i - 1; m >= 0; m -= 2) d += (2 * m + 1) * std::legendre(m, xi);
    return std::sqrt((2 * i + 1) / mesh.width(j)) * d * 2 / mesh.width(j);
  }
  // integral over cell j of f(xi) dx, 10-point Gauss
  template <class F>
  double cell_int(int j, F f) const {
    static const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                                0.9739065285171717};
    static const double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                0.0666713443086881};
    double s = 0;
    for (int q = 0; q < 5; ++q) s += w[q] * (f(x[q]) + f(-x[q]));
    return s * mesh.width(j) / 2;
  }
  MatrixXd D(double alpha) const {
    MatrixXd M = MatrixXd::Zero(N() * nb(), N() * nb());
    for (int j = 0; j < N(); ++j)
      for (int r = 0; r < nb(); ++r)
        for (int c = 0; c < nb(); ++c) M(idx(j, r), idx(j, c)) -= cell_int(j, [&](double xi) { return phi(j, c, xi) * dphi(j, r, xi); });
    // edge e between cell e-1 (minus side) and cell e (plus side); uhat = {u} + alpha [u]
    for (int e = 0; e < N(); ++e) {
      const int jm = (e - 1 + N()) % N(), jp = e;
      for (int c = 0; c < nb(); ++c) {
        const double wm = 0.5 - alpha, wp = 0.5 + alpha;  // weights of u^- and u^+
        for (int r = 0; r < nb(); ++r) {
          // + uhat phi^- for the cell left of the edge, - uhat phi^+ for the cell right of it
          M(idx(jm, r), idx(jm, c)) += wm * phi(jm, c, 1) * phi(jm, r, 1);
          M(idx(jm, r), idx(jp, c)) += wp * phi(jp, c, -1) * phi(jm, r, 1);
          M(idx(jp, r), idx(jm, c)) -= wm * phi(jm, c, 1) * phi(jp, r, -1);
          M(idx(jp, r), idx(jp, c)) -= wp * phi(jp, c, -1) * phi(jp, r, -1);
        }
      }
    }
    return M;
  }
  MatrixXd L() const {
    MatrixXd M = MatrixXd::Zero(N() * nb(), N() * nb());
    for (int e = 0; e < N(); ++e) {
      const int jm = (e - 1 + N()) % N(), jp = e;
      for (int c = 0; c < nb(); ++c)
        for (int r = 0; r < nb(); ++r) {
          // [u] = u^+ - u^-, tested with phi^- on the left cell and -phi^+ on the right cell
          M(idx(jm, r), idx(jp, c)) += phi(jp, c, -1) * phi(jm, r, 1);
          M(idx(jm, r), idx(jm, c)) -= phi(jm, c, 1) * phi(jm, r, 1);
          M(idx(jp, r), idx(jp, c)) -= phi(jp, c, -1) * phi(jp, r, -1);
          M(idx(jp, r), idx(jm, c)) += phi(jm, c, 1) * phi(jp, r, -1);
        }
    }
    return M;
  }
  // Pi(u v) coefficients
  Vec product(const Vec& u, const Vec& v) const {
    Vec out = Vec::Zero(N() * nb());
    auto val = [&](const Vec& c, int j, double xi) {
      double s = 0;
      for (int i = 0; i < nb(); ++i) s += c[idx(j, i)] * phi(j, i, xi);
      return s;
    };
    for (int j = 0; j < N(); ++j)
      for (int r = 0; r < nb(); ++r)
        out[idx(j, r)] = cell_int(j, [&](double xi) { return val(u, j, xi) * val(v, j, xi) * phi(j, r, xi); });
    return out;
  }
};

}  // namespace msdg::oracle
