#pragma once

#include <span>
#include <vector>

#include "cmkz/types.hpp"

namespace cmkz {

/// Q with momenta on the diagonal and 1/(z_a − z_b) off the diagonal.
CMatrix cm_matrix(std::span<const cplx> z, std::span<const cplx> p);

/// Q_a = σ_a(eigenvalues of Q), so det(u − Q) = u^n − Q_1 u^{n−1} + … ± Q_n.
struct FirstIntegrals {
  std::vector<cplx> values;
};

/// σ_1..σ_n of the eigenvalues of a square matrix.
std::vector<cplx> char_poly_invariants(const CMatrix& m);

FirstIntegrals first_integrals(std::span<const cplx> z, std::span<const cplx> p);

/// Σ p_a² − Σ_{a<b} 2/(z_a − z_b)², from the explicit sum.
cplx cm_hamiltonian(std::span<const cplx> z, std::span<const cplx> p);

/// max_a |Q_a(z, p)| / max(1, ‖p‖∞)^a
double l0_residual(std::span<const cplx> z, std::span<const cplx> p);
/// max_a |Q_a(z, p)| without scaling.
double l0_residual_raw(std::span<const cplx> z, std::span<const cplx> p);

/// max_a |Q_a(z, p) − σ_a(q)| / max(1, ‖p‖∞, ‖q‖∞)^a
double lq_residual(std::span<const cplx> z, std::span<const cplx> p, std::span<const cplx> q);
double lq_residual_raw(std::span<const cplx> z, std::span<const cplx> p, std::span<const cplx> q);

/// Normal-form representative (Z diagonal) of a point of the Calogero–Moser space.
struct CMPoint {
  CVector Z;
  CMatrix Q;
};

/// (z, p) ↦ (diag z, Q(z, p)).
CMPoint xi(std::span<const cplx> z, std::span<const cplx> p);

/// [Z, Q] + 1 for a normal-form point.
CMatrix commutator_plus_identity(const CMPoint& point);

/// σ_2/σ_1 of [Z, Q] + 1; 1 when the matrix vanishes, 0 for n = 1.
double rank_one_residual(const CMPoint& point);

/// det((u − Z)(v − Q) − 1)
cplx bivariate_char(const CMPoint& point, cplx u, cplx v);

struct SpectralCoordinates {
  std::vector<cplx> sigma_Z;
  std::vector<cplx> sigma_Q;
};

/// (Z, Q) ↦ (spec Z, spec Q) as elementary symmetric coordinates.
SpectralCoordinates pi_image(const CMPoint& point);

/// Equality of normal-form points up to simultaneous permutation: Z entries
/// are matched and the correspondingly permuted Q compared entrywise.
bool same_cm_point(const CMPoint& a, const CMPoint& b, double tol = 1e-8);

}  // namespace cmkz
