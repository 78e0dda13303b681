#include "msdg/dg_space.hpp"

#include <cmath>

#include "msdg/errors.hpp"

namespace msdg {

int quadrature_points_for(int k, int nonlinear_degree) {
  // Pi(p(u_h)) with deg p = d integrates a degree (d+1)k polynomial.
  const int d = std::max(nonlinear_degree, 2);
  return std::max(k + 2, ((d + 1) * k + 2) / 2);
}

namespace {

void reference_tables(int k, const QuadratureRule& q, Eigen::MatrixXd& val, Eigen::MatrixXd& der) {
  val.resize(k + 1, q.size());
  der.resize(k + 1, q.size());
  std::vector<double> p(k + 1), dp(k + 1);
  for (int s = 0; s < q.size(); ++s) {
    legendre(k, q.nodes[s], p.data(), dp.data());
    for (int i = 0; i <= k; ++i) {
      const double n = std::sqrt((2.0 * i + 1.0) / 2.0);
      val(i, s) = n * p[i];
      der(i, s) = n * dp[i];
    }
  }
}

}  // namespace

DgSpace::DgSpace(Mesh1D mesh, int k, int quad_points) : mesh_(std::move(mesh)), k_(k) {
  if (k < 0 || k > 12) throw ConfigError("polynomial degree must lie in [0, 12]");
  const int n = quad_points > 0 ? quad_points : quadrature_points_for(k, 2);
  quad_ = gauss_legendre(n);
  reference_tables(k, quad_, ref_val_, ref_der_);
  ref_left_.resize(k + 1);
  ref_right_.resize(k + 1);
  for (int i = 0; i <= k; ++i) {
    const double n_i = std::sqrt((2.0 * i + 1.0) / 2.0);
    ref_right_[i] = n_i;
    ref_left_[i] = (i % 2 ? -1.0 : 1.0) * n_i;
  }
}

SpacePtr make_space(Mesh1D mesh, int k, int quad_points) {
  return std::make_shared<const DgSpace>(std::move(mesh), k, quad_points);
}

Arr DgSpace::to_nodal(const Vec& c) const {
  const int N = cells(), nb = modes(), n = nq();
  Arr out(static_cast<Eigen::Index>(N) * n);
  for (int j = 0; j < N; ++j)
    out.segment(j * n, n) = (ref_val_.transpose() * c.segment(j * nb, nb)).array() * scale(j);
  return out;
}

Arr DgSpace::to_nodal_dx(const Vec& c) const {
  const int N = cells(), nb = modes(), n = nq();
  Arr out(static_cast<Eigen::Index>(N) * n);
  for (int j = 0; j < N; ++j)
    out.segment(j * n, n) =
        (ref_der_.transpose() * c.segment(j * nb, nb)).array() * (scale(j) * 2.0 / mesh_.width(j));
  return out;
}

Vec DgSpace::from_nodal(const Arr& f) const {
  const int N = cells(), nb = modes(), n = nq();
  Vec c(dofs());
  for (int j = 0; j < N; ++j) {
    const Vec wf = (f.segment(j * n, n) * quad_.weights.array()).matrix();
    c.segment(j * nb, nb) = (ref_val_ * wf) * (0.5 * mesh_.width(j) * scale(j));
  }
  return c;
}

Arr DgSpace::nodal_x() const {
  const int N = cells(), n = nq();
  Arr x(static_cast<Eigen::Index>(N) * n);
  for (int j = 0; j < N; ++j)
    for (int s = 0; s < n; ++s) x[j * n + s] = mesh_.center(j) + 0.5 * mesh_.width(j) * quad_.nodes[s];
  return x;
}

Arr DgSpace::nodal_weights() const {
  const int N = cells(), n = nq();
  Arr w(static_cast<Eigen::Index>(N) * n);
  for (int j = 0; j < N; ++j) w.segment(j * n, n) = quad_.weights.array() * (0.5 * mesh_.width(j));
  return w;
}

double DgSpace::trace_minus(const Vec& c, int e) const {
  const int N = cells();
  const int j = ((e - 1) % N + N) % N;
  return scale(j) * ref_right_.dot(c.segment(j * modes(), modes()));
}

double DgSpace::trace_plus(const Vec& c, int e) const {
  const int j = e % cells();
  return scale(j) * ref_left_.dot(c.segment(j * modes(), modes()));
}

double DgSpace::eval_in_cell(const Vec& c, int j, double xi) const {
  std::vector<double> p(k_ + 1);
  legendre(k_, xi, p.data(), nullptr);
  double s = 0;
  for (int i = 0; i <= k_; ++i) s += c[j * modes() + i] * std::sqrt((2.0 * i + 1.0) / 2.0) * p[i];
  return s * scale(j);
}

double DgSpace::eval(const Vec& c, double x, Side side) const {
  const double y = mesh_.wrap(x);
  const int j = mesh_.locate(y, side);
  double xi = 2.0 * (y - mesh_.edges()[j]) / mesh_.width(j) - 1.0;
  // x on the periodic seam evaluated from the left cell: xi = +1
  if (j == cells() - 1 && y == mesh_.left()) xi = 1.0;
  return eval_in_cell(c, j, xi);
}

Vec DgSpace::constant(double value) const {
  Vec c = Vec::Zero(dofs());
  for (int j = 0; j < cells(); ++j) c[j * modes()] = value * std::sqrt(mesh_.width(j));
  return c;
}

double DgSpace::mean(const Vec& c) const {
  double s = 0;
  for (int j = 0; j < cells(); ++j) s += c[j * modes()] * std::sqrt(mesh_.width(j));
  return s / mesh_.length();
}

Vec project(const DgSpace& space, const RealFn& f, int quad_points) {
  const int k = space.degree();
  const QuadratureRule q = gauss_legendre(quad_points > 0 ? quad_points : std::min(32, k + 6));
  Eigen::MatrixXd val, der;
  reference_tables(k, q, val, der);
  const auto& m = space.mesh();
  Vec c(space.dofs());
  Vec fq(q.size());
  for (int j = 0; j < space.cells(); ++j) {
    for (int s = 0; s < q.size(); ++s) fq[s] = f(m.center(j) + 0.5 * m.width(j) * q.nodes[s]) * q.weights[s];
    c.segment(j * space.modes(), space.modes()) = val * fq * (0.5 * m.width(j) * space.scale(j));
  }
  return c;
}

DgFunction project(const SpacePtr& space, const RealFn& f) { return {space, project(*space, f)}; }

Vec project_product(const DgSpace& space, const std::vector<ProductFactor>& factors) {
  if (factors.empty()) return space.constant(1.0);
  Arr prod = Arr::Ones(static_cast<Eigen::Index>(space.cells()) * space.nq());
  Arr x;
  for (const auto& f : factors) {
    if (f.field) {
      if (f.field->size() != space.dofs()) throw DimensionError("project_product: factor lives on another space");
      prod *= space.to_nodal(*f.field);
    } else {
      if (x.size() == 0) x = space.nodal_x();
      prod *= x.unaryExpr([&](double t) { return f.fn(t); });
    }
  }
  return space.from_nodal(prod);
}

double l2_norm(const DgSpace& /*space*/, const Vec& c) { return c.norm(); }

double l2_error(const DgSpace& space, const Vec& c, const RealFn& exact, int quad_points) {
  const int k = space.degree();
  const QuadratureRule q = gauss_legendre(quad_points > 0 ? quad_points : std::min(32, k + 4));
  Eigen::MatrixXd val, der;
  reference_tables(k, q, val, der);
  const auto& m = space.mesh();
  double s = 0;
  for (int j = 0; j < space.cells(); ++j) {
    const Vec uq = val.transpose() * c.segment(j * space.modes(), space.modes()) * space.scale(j);
    for (int p = 0; p < q.size(); ++p) {
      const double d = uq[p] - exact(m.center(j) + 0.5 * m.width(j) * q.nodes[p]);
      s += 0.5 * m.width(j) * q.weights[p] * d * d;
    }
  }
  return std::sqrt(s);
}

void sample(const DgSpace& space, const Vec& c, int per_cell, std::vector<double>& x, std::vector<double>& u) {
  x.clear();
  u.clear();
  const auto& m = space.mesh();
  for (int j = 0; j < space.cells(); ++j)
    for (int s = 0; s < per_cell; ++s) {
      const double xi = -1.0 + (2.0 * s + 1.0) / per_cell;  // cell-interior midpoints
      x.push_back(m.center(j) + 0.5 * m.width(j) * xi);
      u.push_back(space.eval_in_cell(c, j, xi));
    }
}

}  // namespace msdg
