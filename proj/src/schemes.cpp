#include "msdg/schemes.hpp"

#include <cmath>

#include "msdg/errors.hpp"

namespace msdg {

ReducedScheme::ReducedScheme(Model model, const Mesh1D& mesh, int k, const ModelParams& params,
                             const FluxScalars& scalars)
    : params_(params),
      scalars_(scalars),
      sys_(make_system(model, params)),
      flux_(make_flux(model, params, scalars)),
      sp_(make_space(mesh, k, quadrature_points_for(k, sys_.S_degree - 1))),
      D0_(assemble_D(sp_, 0.0)),
      L_(assemble_L(sp_)) {}

Vec ReducedScheme::rhs(const Vec& s) const { return rhs(Jet(s)).base(); }

Vec ReducedScheme::rhs(double t, const Vec& s) const {
  Vec r = rhs(s);
  if (source_) {
    const Arr x = sp_->nodal_x();
    Arr f(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) f[i] = source_(x[i], t);
    r += source_velocity(sp_->from_nodal(f));
  }
  return r;
}

Vec ReducedScheme::source_velocity(const Vec&) const {
  throw ConfigError("model " + to_string(model()) + " does not accept a source term");
}

std::vector<Vec> ReducedScheme::reconstruct(const Vec& s) const {
  const Jet sj(s);
  const auto z = reconstruct(sj, Jet(rhs(s)));
  std::vector<Vec> out;
  for (const auto& c : z) out.push_back(c.base());
  return out;
}

Vec ReducedScheme::make_consistent(const Vec& s) const {
  if (constraints_.cols() == 0) return s;
  return s - constraints_ * (constraints_.transpose() * s);
}

Vec ReducedScheme::initial_state(const std::vector<RealFn>& f) const {
  if (static_cast<int>(f.size()) != fields())
    throw ConfigError("initial_state: expected " + std::to_string(fields()) + " initial fields");
  Vec s(state_size());
  for (int i = 0; i < fields(); ++i) s.segment(i * dofs(), dofs()) = project(*sp_, f[i]);
  return s;
}

Jet ReducedScheme::project_poly(const Jet& u, const Polynomial& p) const {
  return from_nodal(*sp_, polynomial(to_nodal(*sp_, u), p.c));
}

Jet ReducedScheme::project_product(const Jet& a, const Jet& b) const {
  return from_nodal(*sp_, to_nodal(*sp_, a) * to_nodal(*sp_, b));
}

double ReducedScheme::jump_sum(const Vec& a, const Vec& b) const {
  double s = 0.0;
  for (int e = 0; e < sp_->cells(); ++e) s += sp_->jump(a, e) * sp_->jump(b, e);
  return s;
}

double ReducedScheme::integrate_poly(const Vec& u, const Polynomial& p) const {
  return sp_->integrate(sp_->to_nodal(u).unaryExpr([&](double x) { return p(x); }));
}

namespace {

// Orthonormal basis of span(ker) + span(L ker).
Eigen::MatrixXd with_lifted(const Eigen::MatrixXd& ker, const BlockOperator& L) {
  Eigen::MatrixXd both(ker.rows(), 2 * ker.cols());
  both << ker, L.matrix() * ker;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(both);
  qr.setThreshold(1e-10);
  const auto r = qr.rank();
  return Eigen::MatrixXd(qr.householderQ()) * Eigen::MatrixXd::Identity(ker.rows(), r);
}

LinearSolver factorize_named(const BlockOperator& op, const std::string& what) {
  try {
    return factorize(op);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError("singular scheme: " + what + " is not invertible (" + e.what() + ")", e.pivot);
  }
}

// ------------------------------------------------------------------ wave
class WaveScheme final : public ReducedScheme {
 public:
  WaveScheme(const Mesh1D& mesh, int k, const ModelParams& p, const FluxScalars& f)
      : ReducedScheme(Model::wave, mesh, k, p, f),
        Dp_(assemble_D(sp_, f.a13)),
        Dm_(assemble_D(sp_, -f.a13)),
        dV_(p.V.derivative()) {
    if (f.beta != 0.0) Sb_ = factorize_named(shift_identity(f.beta * L_, 1.0), "I + beta L");
    if (f.a33 != 0.0) S33_ = factorize_named(shift_identity(f.a33 * L_, 1.0), "I + a33 L");
  }

  std::vector<std::string> field_names() const override { return {"u", "u_t"}; }

  Jet w_of(const Jet& u) const {
    Jet w = apply(Dm_, u);
    return S33_ ? solve(*S33_, w) : w;
  }

  Jet rhs(const Jet& s) const override {
    const Eigen::Index n = dofs();
    const Jet u = segment(s, 0, n), ut = segment(s, n, n);
    Jet acc = apply(Dp_, w_of(u)) + scalars_.a11 * apply(L_, u) + project_poly(u, dV_);
    if (Sb_) acc = solve(*Sb_, solve(*Sb_, acc));
    return concat({ut, acc});
  }

  std::vector<Jet> reconstruct(const Jet& s, const Jet&) const override {
    const Eigen::Index n = dofs();
    const Jet u = segment(s, 0, n), ut = segment(s, n, n);
    return {u, ut + scalars_.beta * apply(L_, ut), w_of(u)};
  }

  double energy(const Vec& s) const override {
    const auto z = ReducedScheme::reconstruct(s);
    const double vol = 0.5 * (z[1].squaredNorm() + z[2].squaredNorm()) - integrate_poly(z[0], params_.V);
    return vol + 0.5 * (scalars_.a11 * jump_sum(z[0], z[0]) - scalars_.a33 * jump_sum(z[2], z[2]));
  }

  Vec auxiliary(const Vec& s) const override { return w_of(Jet(field(s, 0))).base(); }
  std::string auxiliary_name() const override { return "w"; }

 protected:
  Vec source_velocity(const Vec& pf) const override {
    Vec r = Vec::Zero(state_size());
    r.tail(dofs()) = Sb_ ? Sb_->solve(Sb_->solve(pf)) : pf;
    return r;
  }

 private:
  BlockOperator Dp_, Dm_;
  Polynomial dV_;
  std::optional<LinearSolver> Sb_, S33_;
};

// ------------------------------------------------------------------ KdV
class KdvScheme final : public ReducedScheme {
 public:
  KdvScheme(const Mesh1D& mesh, int k, const ModelParams& p, const FluxScalars& f)
      : ReducedScheme(Model::kdv, mesh, k, p, f),
        Da_(assemble_D(sp_, f.alpha2)),
        Dma_(assemble_D(sp_, -f.alpha2)),
        pinv_(pseudo_inverse(D0_)) {
    if (f.alpha1 != 0.0) throw ConfigError("kdv: the reduced scheme requires alpha1 = 0");
    constraints_ = pinv_.kernel();
    A3_ = (p.eps * p.eps) * (D0_ * Dma_ * Da_);
  }

  std::vector<std::string> field_names() const override { return {"u"}; }

  Jet rhs(const Jet& u) const override {
    const Polynomial half_sq{{0.0, 0.0, 0.5 * params_.eta}};
    return -apply(A3_, u) - apply(D0_, project_poly(u, half_sq));
  }

  std::vector<Jet> reconstruct(const Jet& u, const Jet& ut) const override {
    const double eps = params_.eps;
    const Jet v = eps * apply(Da_, u);
    const Polynomial half_sq{{0.0, 0.0, 0.5 * params_.eta}};
    const Jet w = project_poly(u, half_sq) + eps * apply(Dma_, v) + 0.5 * solve(pinv_, ut);
    return {solve(pinv_, u), u, v, w};
  }

  double energy(const Vec& u) const override {
    const Vec v = params_.eps * Da_.apply(u);
    return integrate_poly(u, {{0.0, 0.0, 0.0, params_.eta / 6.0}}) - 0.5 * v.squaredNorm();
  }

  Vec auxiliary(const Vec& u) const override { return params_.eps * Da_.apply(u); }
  std::string auxiliary_name() const override { return "v"; }

 protected:
  Vec source_velocity(const Vec& pf) const override { return pf; }

 private:
  BlockOperator Da_, Dma_, A3_ = BlockOperator::zero(sp_);
  LinearSolver pinv_;
};

// ------------------------------------------------------------------ BBM
class BbmScheme final : public ReducedScheme {
 public:
  BbmScheme(const Mesh1D& mesh, int k, const ModelParams& p, const FluxScalars& f)
      : ReducedScheme(Model::bbm, mesh, k, p, f),
        Da2_(assemble_D(sp_, f.alpha2)),
        Dma2_(assemble_D(sp_, -f.alpha2)),
        Da1_(assemble_D(sp_, f.alpha1)),
        Dma1_(assemble_D(sp_, -f.alpha1)),
        dV_(p.V.derivative()) {
    if (f.alpha0 != 0.0 && f.alpha1 != 0.0)
      throw ConfigError("bbm: alpha0 and alpha1 cannot both be nonzero in the reduced scheme");
    case2_ = f.alpha1 != 0.0;
    if (!case2_) {
      G_ = factorize_named(shift_identity(-p.sigma * (D0_ * D0_), 1.0), "I - sigma D0^2");
      pinv_ = pseudo_inverse(D0_);
      constraints_ = f.alpha0 != 0.0 ? with_lifted(pinv_->kernel(), L_) : pinv_->kernel();
      if (f.alpha0 != 0.0) Lift_ = D0_ * L_;
    } else {
      const BlockOperator H = D0_ - p.sigma * (Dma1_ * D0_ * Da1_);
      try {
        H_ = zero_mean_inverse(H);
        Da1inv_ = zero_mean_inverse(Da1_);
      } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(std::string("singular scheme: bbm generalized alternating flux (") + e.what() +
                                      "); this case needs even k and odd N",
                                  e.pivot);
      }
      constraints_ = sp_->constant(1.0).normalized();
    }
  }

  std::vector<std::string> field_names() const override { return {"u"}; }

  Jet rhs(const Jet& u) const override {
    const Jet f = project_poly(u, dV_);
    if (case2_) return apply(Da1_, solve(*H_, -apply(Dma1_, f)));
    Jet r = -apply(D0_, f);
    if (scalars_.alpha0 != 0.0) r = r - scalars_.alpha0 * (apply(Lift_, solve(*pinv_, u)) - apply(L_, u));
    return solve(*G_, r);
  }

  Jet phi_of(const Jet& u) const {
    if (!case2_) return solve(*pinv_, u);
    const Vec one = sp_->constant(1.0).normalized();
    return solve(*Da1inv_, u.map([&](const Vec& c) -> Vec { return c - one.dot(c) * one; }));
  }

  std::vector<Jet> reconstruct(const Jet& u, const Jet& ut) const override {
    const double sg = params_.sigma;
    const Jet phi = phi_of(u), phit = phi_of(ut);
    const Jet v = apply(Da2_, u), vt = apply(Da2_, ut);
    const Jet& w = ut;
    Jet p = 0.5 * phit - 0.5 * sg * vt - 0.5 * sg * apply(Dma2_, w) + project_poly(u, dV_);
    if (scalars_.alpha0 != 0.0) p = p + scalars_.alpha0 * apply(L_, phi);
    return {phi, u, v, w, p};
  }

  double energy(const Vec& u) const override {
    double e = -integrate_poly(u, params_.V);
    if (scalars_.alpha0 != 0.0) e += scalars_.alpha0 * jump_sum(u, pinv_->solve(u));
    return e;
  }

  Vec auxiliary(const Vec& u) const override { return D0_.apply(u); }
  std::string auxiliary_name() const override { return "D0u"; }

 protected:
  Vec source_velocity(const Vec& pf) const override {
    if (case2_) throw ConfigError("bbm: source terms are not supported with alpha1 != 0");
    return G_->solve(pf);
  }

 private:
  BlockOperator Da2_, Dma2_, Da1_, Dma1_, Lift_ = BlockOperator::zero(sp_);
  Polynomial dV_;
  bool case2_ = false;
  std::optional<LinearSolver> G_, pinv_, H_, Da1inv_;
};

// ------------------------------------------------------------------ CH
class ChScheme final : public ReducedScheme {
 public:
  ChScheme(const Mesh1D& mesh, int k, const ModelParams& p, const FluxScalars& f)
      : ReducedScheme(Model::ch, mesh, k, p, f),
        G_(factorize_named(shift_identity(-1.0 * (D0_ * D0_), 1.0), "I - D0^2")),
        pinv_(pseudo_inverse(D0_)),
        Lift_(D0_ * L_) {
    constraints_ = f.alpha0 != 0.0 ? with_lifted(pinv_.kernel(), L_) : pinv_.kernel();
  }

  std::vector<std::string> field_names() const override { return {"u"}; }

  // Pi(3/2 u^2 + 1/2 rho^2)
  Jet quad_term(const Jet& u, const Jet& rho) const {
    const NodalJet un = to_nodal(*sp_, u), rn = to_nodal(*sp_, rho);
    return from_nodal(*sp_, 1.5 * (un * un) + 0.5 * (rn * rn));
  }

  Jet rhs(const Jet& u) const override {
    const Jet rho = apply(D0_, u);
    Jet r = apply(D0_, apply(D0_, project_product(u, rho)) - quad_term(u, rho));
    if (scalars_.alpha0 != 0.0) r = r - scalars_.alpha0 * (apply(Lift_, solve(pinv_, u)) - apply(L_, u));
    return solve(G_, r);
  }

  std::vector<Jet> reconstruct(const Jet& u, const Jet& ut) const override {
    const Jet rho = apply(D0_, u), rhot = apply(D0_, ut);
    const Jet phi = solve(pinv_, u), phit = solve(pinv_, ut);
    const Jet v = 0.5 * ut + project_product(u, rho);
    Jet w = -0.5 * (phit - rhot) + apply(D0_, v) - quad_term(u, rho);
    if (scalars_.alpha0 != 0.0) w = w - scalars_.alpha0 * apply(L_, phi);
    return {u, phi, rho, v, w};
  }

  double energy(const Vec& u) const override {
    const Arr un = sp_->to_nodal(u), rn = sp_->to_nodal(D0_.apply(u));
    double e = -0.5 * sp_->integrate(un * (un * un + rn * rn));
    if (scalars_.alpha0 != 0.0) e += scalars_.alpha0 * jump_sum(u, pinv_.solve(u));
    return e;
  }

  Vec auxiliary(const Vec& u) const override { return D0_.apply(u); }
  std::string auxiliary_name() const override { return "D0u"; }

 protected:
  Vec source_velocity(const Vec& pf) const override { return G_.solve(pf); }

 private:
  LinearSolver G_, pinv_;
  BlockOperator Lift_;
};

// ------------------------------------------------------------------ NLS
class NlsScheme final : public ReducedScheme {
 public:
  NlsScheme(const Mesh1D& mesh, int k, const ModelParams& p, const FluxScalars& f)
      : ReducedScheme(Model::nls, mesh, k, p, f), Da_(assemble_D(sp_, f.alpha)), Dma_(assemble_D(sp_, -f.alpha)) {}

  std::vector<std::string> field_names() const override { return {"p", "q"}; }

  // Pi(alpha |u|^2 p), Pi(alpha |u|^2 q)
  std::pair<Jet, Jet> cubic(const Jet& p, const Jet& q) const {
    const NodalJet pn = to_nodal(*sp_, p), qn = to_nodal(*sp_, q);
    const NodalJet r = params_.alpha * (pn * pn + qn * qn);
    return {from_nodal(*sp_, r * pn), from_nodal(*sp_, r * qn)};
  }

  Jet rhs(const Jet& s) const override {
    const Eigen::Index n = dofs();
    const Jet p = segment(s, 0, n), q = segment(s, n, n);
    const auto [rp, rq] = cubic(p, q);
    const Jet pt = -apply(Dma_, apply(Da_, q)) - rq;
    const Jet qt = apply(Dma_, apply(Da_, p)) + rp;
    return concat({pt, qt});
  }

  std::vector<Jet> reconstruct(const Jet& s, const Jet&) const override {
    const Eigen::Index n = dofs();
    const Jet p = segment(s, 0, n), q = segment(s, n, n);
    return {p, q, apply(Da_, p), apply(Da_, q)};
  }

  double energy(const Vec& s) const override {
    const Vec p = field(s, 0), q = field(s, 1);
    const Arr r = sp_->to_nodal(p).square() + sp_->to_nodal(q).square();
    const Vec v = Da_.apply(p), w = Da_.apply(q);
    return 0.25 * params_.alpha * sp_->integrate(r * r) - 0.5 * (v.squaredNorm() + w.squaredNorm());
  }

  Vec auxiliary(const Vec& s) const override { return field(s, 1); }
  std::string auxiliary_name() const override { return "q"; }

 protected:
  Vec source_velocity(const Vec& pf) const override {
    Vec r = Vec::Zero(state_size());
    r.tail(dofs()) = pf;
    return r;
  }

 private:
  BlockOperator Da_, Dma_;
};

// ------------------------------------------------------------------ BBM-KdV
class BbmKdvScheme final : public ReducedScheme {
 public:
  BbmKdvScheme(const Mesh1D& mesh, int k, const ModelParams& p, const FluxScalars& f)
      : ReducedScheme(Model::bbm_kdv, mesh, k, p, f),
        G_(factorize_named(shift_identity(-p.sigma * (D0_ * D0_), 1.0), "I - sigma D0^2")),
        pinv_(pseudo_inverse(D0_)),
        D3_(p.nu * (D0_ * D0_ * D0_)),
        dV_(p.V.derivative()) {
    constraints_ = pinv_.kernel();
  }

  std::vector<std::string> field_names() const override { return {"u"}; }

  Jet rhs(const Jet& u) const override {
    return solve(G_, apply(D3_, u) + apply(D0_, project_poly(u, dV_)));
  }

  std::vector<Jet> reconstruct(const Jet& u, const Jet& ut) const override {
    const double sg = params_.sigma;
    const Jet theta = apply(D0_, u), thetat = apply(D0_, ut);
    const Jet phi = solve(pinv_, u), phit = solve(pinv_, ut);
    const Jet& rho = ut;
    const Jet& v = theta;
    const Jet w = 0.5 * sg * thetat - 0.5 * phit + 0.5 * sg * apply(D0_, rho) + params_.nu * apply(D0_, v) +
                  project_poly(u, dV_);
    return {u, theta, phi, w, rho, v};
  }

  double energy(const Vec& u) const override {
    const Vec v = D0_.apply(u);
    return -integrate_poly(u, params_.V) + 0.5 * params_.nu * v.squaredNorm();
  }

  Vec auxiliary(const Vec& u) const override { return D0_.apply(u); }
  std::string auxiliary_name() const override { return "D0u"; }

 protected:
  Vec source_velocity(const Vec& pf) const override { return G_.solve(pf); }

 private:
  LinearSolver G_, pinv_;
  BlockOperator D3_;
  Polynomial dV_;
};

}  // namespace

std::unique_ptr<ReducedScheme> build_reduced_scheme(Model model, const Mesh1D& mesh, int k,
                                                    const ModelParams& params, const FluxScalars& scalars) {
  if (k < 0 || k > 8) throw ConfigError("polynomial degree must lie in [0, 8]");
  switch (model) {
    case Model::wave: return std::make_unique<WaveScheme>(mesh, k, params, scalars);
    case Model::kdv: return std::make_unique<KdvScheme>(mesh, k, params, scalars);
    case Model::bbm: return std::make_unique<BbmScheme>(mesh, k, params, scalars);
    case Model::ch: return std::make_unique<ChScheme>(mesh, k, params, scalars);
    case Model::nls: return std::make_unique<NlsScheme>(mesh, k, params, scalars);
    case Model::bbm_kdv: return std::make_unique<BbmKdvScheme>(mesh, k, params, scalars);
  }
  throw ConfigError("unknown model");
}

double nls_charge(const ReducedScheme& scheme, const Vec& s) {
  if (scheme.model() != Model::nls) throw ConfigError("nls_charge: not an NLS scheme");
  return scheme.field(s, 0).squaredNorm() + scheme.field(s, 1).squaredNorm();
}

}  // namespace msdg
