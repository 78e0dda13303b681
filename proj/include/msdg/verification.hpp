#pragma once

#include <vector>

#include "msdg/flux.hpp"
#include "msdg/schemes.hpp"

namespace msdg {

// Taylor expansion of the semi-discrete trajectory through s0 up to `order`,
// carrying the given tangent directions (exact first-order variations).
Jet trajectory_jet(const ReducedScheme& scheme, const Vec& s0, const std::vector<Vec>& tangents, int order);

// Exact directional derivative of the reduced velocity at s along ds.
Vec tangent_rhs(const ReducedScheme& scheme, const Vec& s, const Vec& ds);

// Residual of the full first-order DG system at a state, per component row:
//   M z_t + K D_0 z + A L z + B L z_t - Pi grad S(z),
// and of its linearization for each tangent direction (Pi grad S -> Pi hess S dz).
struct DgResidual {
  double base = 0.0;                 // max |residual| over rows, base trajectory
  std::vector<double> tangents;      // same, per tangent direction
  double scale = 1.0;                // largest constituent term (for relative checks)
  double relative() const;
};
DgResidual dg_residual(const ReducedScheme& scheme, const Vec& s, const std::vector<Vec>& tangents = {});

struct ConservationReport {
  Vec residual;        // per cell
  Vec cell_quantity;   // omega_{h,j} or E_{h,j}
  Vec flux_left;       // F at x_{j-1/2}
  Vec flux_right;      // F at x_{j+1/2}
  double max_abs = 0.0;
  double scale = 1.0;  // max(1, largest constituent term)
  double relative() const { return max_abs / scale; }
};

// d/dt omega_{h,j} - F(dz, dzb)_{j+1/2} + F(dz, dzb)_{j-1/2} for the tangents ds, dsb.
ConservationReport multisymplectic_residual(const ReducedScheme& scheme, const Vec& s, const Vec& ds, const Vec& dsb);
// d/dt E_{h,j} + F(z, z_t)_{j+1/2}/2 - F(z, z_t)_{j-1/2}/2.
ConservationReport local_energy_residual(const ReducedScheme& scheme, const Vec& s);

// Global energy int E(z) + 1/2 sum (K{z} + A[z]).[z].
double energy_general(const ReducedScheme& scheme, const Vec& s);

// Simplified global energy int (S - grad_v S . v) + 1/2 sum At[z].[z], valid when B = beta M
// and the last floor(m/2) columns of M Q^T vanish.
struct CorollaryEnergy {
  bool applicable = false;
  double energy = 0.0;
  Mat A_tilde;
  double A_tilde_symmetric_part = 0.0;  // max |At + At^T| / 2
};
CorollaryEnergy energy_corollary(const ReducedScheme& scheme, const Vec& s);
bool corollary_hypotheses(const MultiSymplecticSystem& sys, const FluxSpec& flux);

}  // namespace msdg
