#include "msdg/flux.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "msdg/errors.hpp"

namespace msdg {

FluxValidation validate_flux_spec(const FluxSpec& s) {
  FluxValidation v{true, 0.0, 0.0};
  if (s.A.rows() != s.A.cols() || s.B.rows() != s.B.cols() || s.A.rows() != s.B.rows())
    throw DimensionError("validate_flux_spec: A and B must be square of equal size");
  if (s.A.size()) v.asymmetry_A = (s.A - s.A.transpose()).cwiseAbs().maxCoeff();
  if (s.B.size()) v.symmetry_B = (s.B + s.B.transpose()).cwiseAbs().maxCoeff();
  v.ok = v.asymmetry_A <= 1e-14 && v.symmetry_B <= 1e-14;
  return v;
}

Mat KDecomposition::block_form() const {
  const int p = pairs();
  Mat J = Mat::Zero(m, m);
  J.block(0, m - p, p, p) = -Lambda.transpose();
  J.block(m - p, 0, p, p) = Lambda;
  return J;
}

Mat KDecomposition::signature() const {
  const int p = pairs();
  Mat S = Mat::Identity(m, m);
  S.block(m - p, m - p, p, p) *= -1.0;
  return S;
}

namespace {

// Orthonormal basis of span(cols) with the columns of `against` projected out.
Mat orth(const Mat& cols, double tol = 1e-10) {
  Mat out(cols.rows(), 0);
  for (int c = 0; c < cols.cols(); ++c) {
    VecM v = cols.col(c);
    for (int i = 0; i < out.cols(); ++i) v -= out.col(i).dot(v) * out.col(i);
    for (int i = 0; i < out.cols(); ++i) v -= out.col(i).dot(v) * out.col(i);
    const double n = v.norm();
    if (n > tol) {
      out.conservativeResize(Eigen::NoChange, out.cols() + 1);
      out.col(out.cols() - 1) = v / n;
    }
  }
  return out;
}

// Greedy pairing inside an invariant subspace W: u = normalized projection of the
// lowest-index axis, v = K u / |K u|, then deflate span(u, v).
void pair_up(const Mat& K, Mat W, bool kernel, std::vector<VecM>& us, std::vector<VecM>& vs, std::vector<double>& lam,
             std::vector<VecM>& mids) {
  const int m = static_cast<int>(K.rows());
  while (W.cols() > 0) {
    if (kernel && W.cols() == 1) {
      mids.push_back(W.col(0));
      break;
    }
    auto first_axis_dir = [m](const Mat& B) {
      for (int a = 0; a < m; ++a) {
        VecM p = B * B.row(a).transpose();
        if (p.norm() > 1e-6) return VecM(p.normalized());
      }
      return VecM(B.col(0));
    };
    const VecM u = first_axis_dir(W);
    VecM v;
    double l = 0.0;
    if (kernel) {
      v = first_axis_dir(orth(W - u * (u.transpose() * W)));
    } else {
      v = K * u;
      l = v.norm();
      v /= l;
    }
    Mat both(m, 2);
    both << u, v;
    Mat rem = W - both * (both.transpose() * W);
    W = orth(rem);
    us.push_back(u);
    vs.push_back(v);
    lam.push_back(l);
  }
}

}  // namespace

KDecomposition decompose_K(const Mat& K) {
  if (K.rows() != K.cols()) throw DimensionError("decompose_K: K must be square");
  const int m = static_cast<int>(K.rows());
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  if ((K + K.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("decompose_K: K is not anti-symmetric");
  // -K^2 is symmetric positive semidefinite; its eigenspaces are K-invariant.
  Eigen::SelfAdjointEigenSolver<Mat> es(-(K * K));
  const VecM ev = es.eigenvalues();
  const Mat V = es.eigenvectors();
  std::vector<VecM> us, vs, mids;
  std::vector<double> lam;
  const double tol = 1e-10 * scale * scale;
  // cluster eigenvalues (ascending order)
  int start = 0;
  std::vector<std::pair<int, int>> clusters;
  for (int i = 1; i <= m; ++i)
    if (i == m || std::abs(ev[i] - ev[start]) > 1e-9 * std::max(1.0, std::abs(ev[start]))) {
      clusters.emplace_back(start, i);
      start = i;
    }
  for (auto [a, b] : clusters) {
    const bool kernel = std::abs(ev[a]) <= tol;
    pair_up(K, V.middleCols(a, b - a), kernel, us, vs, lam, mids);
  }
  // order pairs: nonzero pairs by their dominant axis, kernel pairs last
  const int p = static_cast<int>(us.size());
  std::vector<int> order(p);
  for (int i = 0; i < p; ++i) order[i] = i;
  auto key = [&](int i) {
    int axis;
    us[i].cwiseAbs().maxCoeff(&axis);
    return std::make_pair(lam[i] == 0.0 ? 1 : 0, axis);
  };
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return key(x) < key(y); });
  KDecomposition d;
  d.m = m;
  d.Q = Mat::Zero(m, m);
  d.Lambda = Mat::Zero(p, p);
  for (int r = 0; r < p; ++r) {
    const int i = order[r];
    VecM u = us[i], v = vs[i];
    // sign canonicalization: the dominant entry of u is positive (flip u and v together)
    int axis;
    u.cwiseAbs().maxCoeff(&axis);
    if (u[axis] < 0) {
      u = -u;
      v = -v;
    }
    d.Q.row(r) = u.transpose();
    d.Q.row(m - p + r) = v.transpose();
    d.Lambda(r, r) = lam[i];
  }
  if (m % 2 == 1) {
    if (mids.size() != 1) throw ConfigError("decompose_K: inconsistent kernel pairing");
    VecM w = mids[0];
    int axis;
    w.cwiseAbs().maxCoeff(&axis);
    if (w[axis] < 0) w = -w;
    d.Q.row(p) = w.transpose();
  }
  return d;
}

Mat alternating_A(const KDecomposition& d, double alpha) {
  if (!(std::abs(alpha) <= 0.5)) throw ConfigError("alternating_A: alpha must lie in [-1/2, 1/2]");
  const int p = d.pairs(), m = d.m;
  Mat J = Mat::Zero(m, m);
  J.block(0, m - p, p, p) = d.Lambda.transpose();
  J.block(m - p, 0, p, p) = d.Lambda;
  Mat A = alpha * d.Q.transpose() * J * d.Q;
  return 0.5 * (A + A.transpose());
}

VecM InterfaceTraces::dt_jump() const {
  if (dt_minus.size() == 0) return VecM::Zero(minus.size());
  return dt_plus - dt_minus;
}

VecM eval_flux(const VecM& zm, const VecM& zp, const VecM& dzm, const VecM& dzp, const Mat& K, const FluxSpec& s) {
  const auto m = K.rows();
  if (zm.size() != m || zp.size() != m || s.A.rows() != m) throw DimensionError("eval_flux: dimension mismatch");
  VecM f = K * (0.5 * (zm + zp)) + s.A * (zp - zm);
  if (s.has_B()) {
    if (dzm.size() != m || dzp.size() != m) throw DimensionError("eval_flux: B != 0 needs time-derivative traces");
    f += s.B * (dzp - dzm);
  }
  return f;
}

VecM eval_flux(const InterfaceTraces& z, const Mat& K, const FluxSpec& s) {
  return eval_flux(z.minus, z.plus, z.dt_minus, z.dt_plus, K, s);
}

double interface_form_F(const InterfaceTraces& z, const InterfaceTraces& zb, const Mat& K, const FluxSpec& s) {
  const double avg_kzzb = 0.5 * ((K * z.minus).dot(zb.minus) + (K * z.plus).dot(zb.plus));
  return avg_kzzb - eval_flux(z, K, s).dot(zb.average()) + eval_flux(zb, K, s).dot(z.average());
}

double interface_form_F(const VecM& zm, const VecM& zp, const VecM& zbm, const VecM& zbp, const Mat& K,
                        const FluxSpec& s) {
  if (s.has_B()) throw DimensionError("interface_form_F: B != 0 needs time-derivative traces");
  return interface_form_F(InterfaceTraces{zm, zp, {}, {}}, InterfaceTraces{zbm, zbp, {}, {}}, K, s);
}

LemmaResiduals lemma31_residuals(const InterfaceTraces& z, const InterfaceTraces& zb, const Mat& K, const FluxSpec& s) {
  const VecM kz = eval_flux(z, K, s), kzb = eval_flux(zb, K, s);
  const double F = interface_form_F(z, zb, K, s);
  double dB = 0.0;  // d/dt (B[zb].[z]) by the product rule
  if (s.has_B()) dB = (s.B * zb.dt_jump()).dot(z.jump()) + (s.B * zb.jump()).dot(z.dt_jump());
  LemmaResiduals r;
  r.minus = (K * z.minus).dot(zb.minus) - kz.dot(zb.minus) + kzb.dot(z.minus) - F + 0.5 * dB;
  r.plus = (K * z.plus).dot(zb.plus) - kz.dot(zb.plus) + kzb.dot(z.plus) - F - 0.5 * dB;
  return r;
}

}  // namespace msdg
