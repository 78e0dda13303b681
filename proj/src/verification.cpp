#include "msdg/verification.hpp"

#include <algorithm>
#include <cmath>

#include "msdg/errors.hpp"

namespace msdg {

Jet trajectory_jet(const ReducedScheme& scheme, const Vec& s0, const std::vector<Vec>& tangents, int order) {
  const int nd = static_cast<int>(tangents.size());
  Jet s(0, nd, s0.size());
  s(0, 0) = s0;
  for (int d = 0; d < nd; ++d) s(0, d + 1) = tangents[d];
  for (int i = 0; i < order; ++i) {
    const Jet r = scheme.rhs(s);  // order i
    Jet next(i + 1, nd, s0.size());
    for (int a = 0; a <= i; ++a)
      for (int d = 0; d <= nd; ++d) next(a, d) = s(a, d);
    for (int d = 0; d <= nd; ++d) next(i + 1, d) = r(i, d) / (i + 1.0);
    s = next;
  }
  return s;
}

Vec tangent_rhs(const ReducedScheme& scheme, const Vec& s, const Vec& ds) {
  Jet j(0, 1, s.size());
  j(0, 0) = s;
  j(0, 1) = ds;
  return scheme.rhs(j)(0, 1);
}

namespace {

using Fields = std::vector<Vec>;  // m components

// z and its time derivatives, coefficient (order, direction), as plain fields.
struct Expansion {
  std::vector<Jet> z;  // m components
  Fields at(int order, int dir) const {
    Fields f;
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= i;
    for (const auto& c : z) f.push_back(fact * c.get(order, dir));
    return f;
  }
};

Expansion expand(const ReducedScheme& scheme, const Vec& s, const std::vector<Vec>& tangents, int z_order) {
  const Jet sj = trajectory_jet(scheme, s, tangents, z_order + 1);
  Expansion e;
  e.z = scheme.reconstruct(sj, derivative(sj));
  for (auto& c : e.z) c = truncate(c, z_order);
  return e;
}

Mat nodal_matrix(const DgSpace& sp, const Fields& f, bool dx = false) {
  Mat out(sp.dofs() > 0 ? sp.cells() * sp.nq() : 0, static_cast<Eigen::Index>(f.size()));
  for (size_t i = 0; i < f.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = dx ? sp.to_nodal_dx(f[i]) : sp.to_nodal(f[i]);
  return out;
}

Fields apply_all(const BlockOperator& op, const Fields& f) {
  Fields out;
  for (const auto& v : f) out.push_back(op.apply(v));
  return out;
}

// sum_b C(a, b) f_b for every row a
Fields mix(const Mat& C, const Fields& f) {
  Fields out(C.rows(), Vec::Zero(f[0].size()));
  for (Eigen::Index a = 0; a < C.rows(); ++a)
    for (Eigen::Index b = 0; b < C.cols(); ++b)
      if (C(a, b) != 0.0) out[a] += C(a, b) * f[b];
  return out;
}

// per-cell integral of (C f) . g
Vec cell_bilinear(const DgSpace& sp, const Mat& C, const Fields& f, const Fields& g) {
  const int nb = sp.modes();
  Vec out = Vec::Zero(sp.cells());
  for (Eigen::Index a = 0; a < C.rows(); ++a)
    for (Eigen::Index b = 0; b < C.cols(); ++b) {
      if (C(a, b) == 0.0) continue;
      for (int j = 0; j < sp.cells(); ++j) out[j] += C(a, b) * f[b].segment(j * nb, nb).dot(g[a].segment(j * nb, nb));
    }
  return out;
}

Vec cell_integrals(const DgSpace& sp, const Arr& nodal) {
  const Arr w = sp.nodal_weights() * nodal;
  Vec out(sp.cells());
  for (int j = 0; j < sp.cells(); ++j) out[j] = w.segment(j * sp.nq(), sp.nq()).sum();
  return out;
}

InterfaceTraces traces(const DgSpace& sp, const Fields& z, const Fields* zt, int e) {
  const auto m = static_cast<Eigen::Index>(z.size());
  InterfaceTraces t{VecM(m), VecM(m), {}, {}};
  if (zt) {
    t.dt_minus.resize(m);
    t.dt_plus.resize(m);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    t.minus[i] = sp.trace_minus(z[i], e);
    t.plus[i] = sp.trace_plus(z[i], e);
    if (zt) {
      t.dt_minus[i] = sp.trace_minus((*zt)[i], e);
      t.dt_plus[i] = sp.trace_plus((*zt)[i], e);
    }
  }
  return t;
}

double max_abs(const Fields& f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

double DgResidual::relative() const {
  double r = base;
  for (double t : tangents) r = std::max(r, t);
  return r / std::max(1.0, scale);
}

DgResidual dg_residual(const ReducedScheme& scheme, const Vec& s, const std::vector<Vec>& tangents) {
  const DgSpace& sp = *scheme.space();
  const auto& sys = scheme.system();
  const FluxSpec& fl = scheme.flux();
  const BlockOperator D0 = assemble_D(scheme.space(), 0.0), L = assemble_L(scheme.space());
  const Expansion ex = expand(scheme, s, tangents, 1);
  const int m = sys.m;
  const Mat zn = nodal_matrix(sp, ex.at(0, 0));
  DgResidual out;
  for (int d = 0; d <= static_cast<int>(tangents.size()); ++d) {
    const Fields z = ex.at(0, d), zt = ex.at(1, d);
    const std::vector<Fields> terms = {mix(sys.M, zt), mix(sys.K, apply_all(D0, z)), mix(fl.A, apply_all(L, z)),
                                       mix(fl.B, apply_all(L, zt))};
    // Pi grad S(z) (base) or Pi hess S(z) dz (tangent), pointwise at quadrature nodes
    Mat g(zn.rows(), m);
    const Mat dzn = d == 0 ? Mat() : nodal_matrix(sp, z);
    for (Eigen::Index q = 0; q < zn.rows(); ++q) {
      const VecM zq = zn.row(q).transpose();
      const VecM gq = d == 0 ? sys.grad_S(zq) : VecM(sys.hess_S(zq) * dzn.row(q).transpose());
      g.row(q) = gq.transpose();
    }
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vec src = sp.from_nodal(g.col(i).array());
      Vec r = -src;
      for (const auto& t : terms) r += t[i];
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
      out.scale = std::max(out.scale, src.cwiseAbs().maxCoeff());
    }
    for (const auto& t : terms) out.scale = std::max(out.scale, max_abs(t));
    if (d == 0)
      out.base = worst;
    else
      out.tangents.push_back(worst);
  }
  return out;
}

ConservationReport multisymplectic_residual(const ReducedScheme& scheme, const Vec& s, const Vec& ds, const Vec& dsb) {
  const DgSpace& sp = *scheme.space();
  const auto& sys = scheme.system();
  const FluxSpec& fl = scheme.flux();
  const Expansion ex = expand(scheme, s, {ds, dsb}, 1);
  const Fields dz = ex.at(0, 1), dzt = ex.at(1, 1), db = ex.at(0, 2), dbt = ex.at(1, 2);
  const int N = sp.cells();
  ConservationReport r;
  // d/dt int_Ij M dz . dzb
  const Vec vol_a = cell_bilinear(sp, sys.M, dzt, db), vol_b = cell_bilinear(sp, sys.M, dz, dbt);
  r.cell_quantity = cell_bilinear(sp, sys.M, dz, db);
  Vec Fe(N), Be(N), dBe(N);
  for (int e = 0; e < N; ++e) {
    const InterfaceTraces tz = traces(sp, dz, &dzt, e), tb = traces(sp, db, &dbt, e);
    Fe[e] = interface_form_F(tz, tb, sys.K, fl);
    Be[e] = (fl.B * tb.jump()).dot(tz.jump());
    dBe[e] = (fl.B * tb.dt_jump()).dot(tz.jump()) + (fl.B * tb.jump()).dot(tz.dt_jump());
  }
  r.residual.resize(N);
  r.flux_left.resize(N);
  r.flux_right.resize(N);
  for (int j = 0; j < N; ++j) {
    const int er = (j + 1) % N, el = j;
    const double domega = vol_a[j] + vol_b[j] + 0.5 * dBe[er] + 0.5 * dBe[el];
    r.cell_quantity[j] += 0.5 * Be[er] + 0.5 * Be[el];
    r.flux_right[j] = Fe[er];
    r.flux_left[j] = Fe[el];
    r.residual[j] = domega - Fe[er] + Fe[el];
    r.scale = std::max({r.scale, std::abs(vol_a[j]), std::abs(vol_b[j]), std::abs(dBe[er]), std::abs(Fe[er])});
  }
  r.max_abs = r.residual.cwiseAbs().maxCoeff();
  return r;
}

ConservationReport local_energy_residual(const ReducedScheme& scheme, const Vec& s) {
  const DgSpace& sp = *scheme.space();
  const auto& sys = scheme.system();
  const FluxSpec& fl = scheme.flux();
  const Mat& K = sys.K;
  const Expansion ex = expand(scheme, s, {}, 2);
  const Fields z = ex.at(0, 0), zt = ex.at(1, 0), ztt = ex.at(2, 0);
  const int N = sp.cells();
  const Mat zn = nodal_matrix(sp, z), ztn = nodal_matrix(sp, zt);
  const Mat zxn = nodal_matrix(sp, z, true), zxtn = nodal_matrix(sp, zt, true);
  Arr dS(zn.rows()), dK(zn.rows()), E(zn.rows());
  for (Eigen::Index q = 0; q < zn.rows(); ++q) {
    const VecM zq = zn.row(q).transpose(), ztq = ztn.row(q).transpose();
    const VecM zxq = zxn.row(q).transpose(), zxtq = zxtn.row(q).transpose();
    dS[q] = sys.grad_S(zq).dot(ztq);
    dK[q] = -0.5 * ((K * zxtq).dot(zq) + (K * zxq).dot(ztq));
    E[q] = sys.S(zq) - 0.5 * (K * zxq).dot(zq);
  }
  const Vec dvol_S = cell_integrals(sp, dS), dvol_K = cell_integrals(sp, dK), vol = cell_integrals(sp, E);
  // per edge: K^z.z^-, K^z.z^+, their time derivatives, B terms, F(z, z_t)
  Vec kzm(N), kzp(N), dkzm(N), dkzp(N), Bq(N), dBq(N), Fe(N);
  for (int e = 0; e < N; ++e) {
    const InterfaceTraces tz = traces(sp, z, &zt, e), tt = traces(sp, zt, &ztt, e);
    const VecM kz = eval_flux(tz, K, fl), kzt = eval_flux(tt, K, fl);
    kzm[e] = kz.dot(tz.minus);
    kzp[e] = kz.dot(tz.plus);
    dkzm[e] = kzt.dot(tz.minus) + kz.dot(tt.minus);
    dkzp[e] = kzt.dot(tz.plus) + kz.dot(tt.plus);
    Bq[e] = (fl.B * tt.jump()).dot(tz.jump());
    dBq[e] = (fl.B * tt.dt_jump()).dot(tz.jump()) + (fl.B * tt.jump()).dot(tz.dt_jump());
    Fe[e] = interface_form_F(tz, tt, K, fl);
  }
  ConservationReport r;
  r.residual.resize(N);
  r.cell_quantity.resize(N);
  r.flux_left.resize(N);
  r.flux_right.resize(N);
  for (int j = 0; j < N; ++j) {
    const int er = (j + 1) % N, el = j;
    r.cell_quantity[j] = vol[j] - (0.5 * kzm[er] + 0.25 * Bq[er]) + (0.5 * kzp[el] - 0.25 * Bq[el]);
    const double dE = dvol_S[j] + dvol_K[j] - (0.5 * dkzm[er] + 0.25 * dBq[er]) + (0.5 * dkzp[el] - 0.25 * dBq[el]);
    r.flux_right[j] = Fe[er];
    r.flux_left[j] = Fe[el];
    r.residual[j] = dE + 0.5 * Fe[er] - 0.5 * Fe[el];
    r.scale = std::max({r.scale, std::abs(dvol_S[j]), std::abs(dvol_K[j]), std::abs(dkzm[er]), std::abs(dkzp[el]),
                        std::abs(Fe[er])});
  }
  r.max_abs = r.residual.cwiseAbs().maxCoeff();
  return r;
}

double energy_general(const ReducedScheme& scheme, const Vec& s) {
  const DgSpace& sp = *scheme.space();
  const auto& sys = scheme.system();
  const FluxSpec& fl = scheme.flux();
  const Fields z = scheme.reconstruct(s);
  const Mat zn = nodal_matrix(sp, z), zxn = nodal_matrix(sp, z, true);
  Arr E(zn.rows());
  for (Eigen::Index q = 0; q < zn.rows(); ++q) {
    const VecM zq = zn.row(q).transpose();
    E[q] = sys.S(zq) - 0.5 * (sys.K * zxn.row(q).transpose()).dot(zq);
  }
  double e = sp.integrate(E);
  for (int i = 0; i < sp.cells(); ++i) {
    const InterfaceTraces t = traces(sp, z, nullptr, i);
    e += 0.5 * (sys.K * t.average() + fl.A * t.jump()).dot(t.jump());
  }
  return e;
}

bool corollary_hypotheses(const MultiSymplecticSystem& sys, const FluxSpec& fl) {
  const int p = sys.decomposition.pairs(), m = sys.m;
  const Mat MQt = sys.M * sys.decomposition.Q.transpose();
  if (MQt.rightCols(p).cwiseAbs().maxCoeff() > 1e-13) return false;
  if (!fl.has_B()) return true;
  // B = beta M for some beta
  const double mm = sys.M.squaredNorm();
  if (mm == 0.0) return false;
  const double beta = (fl.B.array() * sys.M.array()).sum() / mm;
  (void)m;
  return (fl.B - beta * sys.M).cwiseAbs().maxCoeff() <= 1e-13;
}

CorollaryEnergy energy_corollary(const ReducedScheme& scheme, const Vec& s) {
  const DgSpace& sp = *scheme.space();
  const auto& sys = scheme.system();
  const FluxSpec& fl = scheme.flux();
  const KDecomposition& kd = sys.decomposition;
  CorollaryEnergy c;
  c.A_tilde = kd.Q.transpose() * kd.signature() * kd.Q * fl.A;
  c.A_tilde_symmetric_part = 0.5 * (c.A_tilde + c.A_tilde.transpose()).cwiseAbs().maxCoeff();
  c.applicable = corollary_hypotheses(sys, fl);
  const int p = kd.pairs();
  const Mat Qv = kd.Q.bottomRows(p);
  const Mat Pv = Qv.transpose() * Qv;  // projector onto the v-directions
  const Fields z = scheme.reconstruct(s);
  const Mat zn = nodal_matrix(sp, z);
  Arr f(zn.rows());
  for (Eigen::Index q = 0; q < zn.rows(); ++q) {
    const VecM zq = zn.row(q).transpose();
    f[q] = sys.S(zq) - sys.grad_S(zq).dot(Pv * zq);
  }
  c.energy = sp.integrate(f);
  for (int e = 0; e < sp.cells(); ++e) {
    const InterfaceTraces t = traces(sp, z, nullptr, e);
    c.energy += 0.5 * (c.A_tilde * t.jump()).dot(t.jump());
  }
  return c;
}

}  // namespace msdg
