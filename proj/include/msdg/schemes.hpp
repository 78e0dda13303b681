#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msdg/dg_space.hpp"
#include "msdg/operators.hpp"
#include "msdg/series.hpp"
#include "msdg/systems.hpp"

namespace msdg {

using SourceFn = std::function<double(double x, double t)>;

// Semi-discrete DG scheme with the auxiliary variables eliminated.
// The evolved state stacks `fields()` DG vectors: (u, u_t) for wave, (p, q) for NLS,
// u otherwise. All scheme algebra is written once on Jets so that the same code
// yields the velocity, its exact linearization and its time derivatives.
class ReducedScheme {
 public:
  virtual ~ReducedScheme() = default;

  Model model() const { return sys_.model; }
  const SpacePtr& space() const { return sp_; }
  const MultiSymplecticSystem& system() const { return sys_; }
  const FluxSpec& flux() const { return flux_; }
  const ModelParams& params() const { return params_; }
  const FluxScalars& scalars() const { return scalars_; }
  Eigen::Index dofs() const { return sp_->dofs(); }
  int fields() const { return static_cast<int>(field_names().size()); }
  Eigen::Index state_size() const { return fields() * dofs(); }
  Vec field(const Vec& s, int i) const { return s.segment(i * dofs(), dofs()); }

  virtual std::vector<std::string> field_names() const = 0;

  // Autonomous semi-discrete velocity.
  virtual Jet rhs(const Jet& s) const = 0;
  Vec rhs(const Vec& s) const;
  // Velocity including the projected source term, if one is set.
  Vec rhs(double t, const Vec& s) const;
  void set_source(SourceFn f) { source_ = std::move(f); }
  bool has_source() const { return static_cast<bool>(source_); }

  // All m components of z_h in system order, from a trajectory s(t) and its derivative.
  virtual std::vector<Jet> reconstruct(const Jet& s, const Jet& s_dot) const = 0;
  std::vector<Vec> reconstruct(const Vec& s) const;

  // The model's closed-form conserved discrete energy.
  virtual double energy(const Vec& s) const = 0;

  // Orthonormal columns spanning the directions the state must avoid for the
  // algebraic rows (e.g. D_0 phi = u) to be solvable exactly. Empty if none.
  const Eigen::MatrixXd& constraint_basis() const { return constraints_; }
  Vec make_consistent(const Vec& s) const;

  // L2 projection of the initial fields (one function per evolved field).
  Vec initial_state(const std::vector<RealFn>& f) const;
  // The designated auxiliary quantity for error tables.
  virtual Vec auxiliary(const Vec& s) const = 0;
  virtual std::string auxiliary_name() const = 0;

 protected:
  ReducedScheme(Model model, const Mesh1D& mesh, int k, const ModelParams& params, const FluxScalars& scalars);
  // Maps Pi(f) to the induced state velocity (linear in f).
  virtual Vec source_velocity(const Vec& pf) const;

  // Pi(p(u)) on jets.
  Jet project_poly(const Jet& u, const Polynomial& p) const;
  Jet project_product(const Jet& a, const Jet& b) const;
  double jump_sum(const Vec& a, const Vec& b) const;  // sum over edges of [a][b]
  double integrate_poly(const Vec& u, const Polynomial& p) const;

  ModelParams params_;
  FluxScalars scalars_;
  MultiSymplecticSystem sys_;
  FluxSpec flux_;
  SpacePtr sp_;
  BlockOperator D0_, L_;
  Eigen::MatrixXd constraints_;
  SourceFn source_;
};

// Builds the reduced scheme. Throws ConfigError for invalid parameters or flux
// scalars and SingularMatrixError when a required operator cannot be inverted.
std::unique_ptr<ReducedScheme> build_reduced_scheme(Model model, const Mesh1D& mesh, int k,
                                                    const ModelParams& params, const FluxScalars& scalars);

// Integral of p_h^2 + q_h^2 for an NLS state.
double nls_charge(const ReducedScheme& scheme, const Vec& s);

}  // namespace msdg
