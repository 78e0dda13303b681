#pragma once

#include <Eigen/Dense>

namespace msdg {

using Mat = Eigen::MatrixXd;
using VecM = Eigen::VectorXd;

// Interface flux  K{z} + A[z] + B[z]_t  with A symmetric and B anti-symmetric.
struct FluxSpec {
  Mat A;
  Mat B;
  int m() const { return static_cast<int>(A.rows()); }
  bool has_B() const { return B.size() > 0 && B.cwiseAbs().maxCoeff() > 0.0; }
  static FluxSpec zero(int m) { return {Mat::Zero(m, m), Mat::Zero(m, m)}; }
};

struct FluxValidation {
  bool ok;
  double asymmetry_A;  // max |A - A^T|
  double symmetry_B;   // max |B + B^T|
};
FluxValidation validate_flux_spec(const FluxSpec& spec);

// Orthogonal Q and diagonal Lambda with  Q K Q^T = [[0,0,-Lambda^T],[0,0,0],[Lambda,0,0]]
// (middle row/column present only for odd m). Canonical choice: Lambda >= 0 on the
// diagonal; each u-direction is the normalized projection of the lowest-index
// coordinate axis onto its invariant plane, and the paired v-direction is K u / |K u|.
struct KDecomposition {
  Mat Q;
  Mat Lambda;
  int m = 0;
  int pairs() const { return static_cast<int>(Lambda.rows()); }
  bool odd() const { return m % 2 == 1; }
  // The block form [[0,0,-Lambda^T],[0,0,0],[Lambda,0,0]].
  Mat block_form() const;
  // diag(I, 1, -I) in Q-coordinates (used by the simplified energy).
  Mat signature() const;
};

KDecomposition decompose_K(const Mat& K);

// alpha Q^T [[0,0,Lambda^T],[0,0,0],[Lambda,0,0]] Q;  alpha in [-1/2, 1/2].
Mat alternating_A(const KDecomposition& d, double alpha);

// Traces of a field at one interface; dt_* are the traces of its time derivative.
struct InterfaceTraces {
  VecM minus, plus;
  VecM dt_minus, dt_plus;  // may be empty when B = 0
  VecM jump() const { return plus - minus; }
  VecM average() const { return 0.5 * (plus + minus); }
  VecM dt_jump() const;
};

VecM eval_flux(const VecM& zm, const VecM& zp, const VecM& dzm, const VecM& dzp, const Mat& K, const FluxSpec& spec);
VecM eval_flux(const InterfaceTraces& z, const Mat& K, const FluxSpec& spec);

// F(z, zb) = {K z . zb} - K^z . {zb} + K^zb . {z}
double interface_form_F(const InterfaceTraces& z, const InterfaceTraces& zb, const Mat& K, const FluxSpec& spec);
double interface_form_F(const VecM& zm, const VecM& zp, const VecM& zbm, const VecM& zbp, const Mat& K,
                        const FluxSpec& spec);

struct LemmaResiduals {
  double minus;
  double plus;
};
// Residuals of the two one-sided trace identities (zero for any data).
LemmaResiduals lemma31_residuals(const InterfaceTraces& z, const InterfaceTraces& zb, const Mat& K, const FluxSpec& spec);

}  // namespace msdg
