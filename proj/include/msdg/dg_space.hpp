#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "msdg/mesh.hpp"
#include "msdg/quadrature.hpp"

namespace msdg {

using Vec = Eigen::VectorXd;
using Arr = Eigen::ArrayXd;
using RealFn = std::function<double(double)>;

// Quadrature points needed so that Pi of a degree-`d` polynomial in u_h is exact.
int quadrature_points_for(int k, int nonlinear_degree);

// Piecewise polynomials of degree k on a periodic mesh, with the per-cell
// L2-orthonormal Legendre basis phi_i = sqrt((2i+1)/h_j) P_i(xi).
// Coefficient layout: index j*(k+1) + i. The mass matrix is the identity.
class DgSpace {
 public:
  DgSpace(Mesh1D mesh, int k, int quad_points = 0);

  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return k_; }
  int modes() const { return k_ + 1; }
  int cells() const { return mesh_.num_cells(); }
  Eigen::Index dofs() const { return static_cast<Eigen::Index>(cells()) * modes(); }
  const QuadratureRule& quad() const { return quad_; }
  int nq() const { return quad_.size(); }

  // Orthonormal reference modes sqrt((2i+1)/2) P_i at the quadrature nodes: modes x nq.
  const Eigen::MatrixXd& ref_values() const { return ref_val_; }
  const Eigen::MatrixXd& ref_derivs() const { return ref_der_; }
  // Reference mode values at xi = -1 and xi = +1.
  const Vec& ref_left() const { return ref_left_; }
  const Vec& ref_right() const { return ref_right_; }
  double scale(int j) const { return std::sqrt(2.0 / mesh_.width(j)); }

  // Physical basis traces of cell j: phi_i(x_{j-1/2}^+) and phi_i(x_{j+1/2}^-).
  Vec basis_left(int j) const { return scale(j) * ref_left_; }
  Vec basis_right(int j) const { return scale(j) * ref_right_; }

  // Values at all quadrature nodes (cell-major), of u_h and of d/dx u_h.
  Arr to_nodal(const Vec& c) const;
  Arr to_nodal_dx(const Vec& c) const;
  // L2 projection of nodal data sampled at the quadrature nodes.
  Vec from_nodal(const Arr& f) const;
  Arr nodal_x() const;
  Arr nodal_weights() const;  // physical weights: h_j/2 * w_q
  double integrate(const Arr& nodal) const { return (nodal * nodal_weights()).sum(); }

  // Interface traces at edge e (0..N, periodic): u^- from the left cell, u^+ from the right.
  double trace_minus(const Vec& c, int e) const;
  double trace_plus(const Vec& c, int e) const;
  double jump(const Vec& c, int e) const { return trace_plus(c, e) - trace_minus(c, e); }
  double average(const Vec& c, int e) const { return 0.5 * (trace_plus(c, e) + trace_minus(c, e)); }

  double eval(const Vec& c, double x, Side side) const;
  double eval_in_cell(const Vec& c, int j, double xi) const;

  // Coefficients of the constant function 1 and the mean of u_h.
  Vec constant(double value) const;
  double mean(const Vec& c) const;

 private:
  Mesh1D mesh_;
  int k_;
  QuadratureRule quad_;
  Eigen::MatrixXd ref_val_, ref_der_;
  Vec ref_left_, ref_right_;
};

using SpacePtr = std::shared_ptr<const DgSpace>;

SpacePtr make_space(Mesh1D mesh, int k, int quad_points = 0);

// A DG field: coefficients on a shared space.
struct DgFunction {
  SpacePtr space;
  Vec coeffs;

  double operator()(double x, Side side) const { return space->eval(coeffs, x, side); }
  double trace_minus(int e) const { return space->trace_minus(coeffs, e); }
  double trace_plus(int e) const { return space->trace_plus(coeffs, e); }
};

// L2 projection of f (over-integrated with at least k+4 points per cell).
Vec project(const DgSpace& space, const RealFn& f, int quad_points = 0);
DgFunction project(const SpacePtr& space, const RealFn& f);

// One factor of a pointwise product: either a DG field or a function of x.
struct ProductFactor {
  const Vec* field = nullptr;
  RealFn fn;
  ProductFactor(const Vec& v) : field(&v) {}
  ProductFactor(RealFn f) : fn(std::move(f)) {}
};
// Pi(prod factors), using the space quadrature.
Vec project_product(const DgSpace& space, const std::vector<ProductFactor>& factors);

double l2_norm(const DgSpace& space, const Vec& c);
double l2_error(const DgSpace& space, const Vec& c, const RealFn& exact, int quad_points = 0);

// Samples (x, u_h(x)) at `per_cell` equispaced points inside every cell.
void sample(const DgSpace& space, const Vec& c, int per_cell, std::vector<double>& x, std::vector<double>& u);

}  // namespace msdg
