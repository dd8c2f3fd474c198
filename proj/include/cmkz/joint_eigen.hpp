#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmkz/types.hpp"

namespace cmkz {

struct JointEigenOptions {
  /// Accept a vector when ‖H_a v − p_a v‖ ≤ tol·(1 + ‖H_a‖)·‖v‖ for all a.
  double tol = 1e-9;
  /// Reject input unless ‖[H_a, H_b]‖ ≤ commute_tol·max‖H‖².
  double commute_tol = 1e-10;
  /// Probe eigenvalues closer than cluster_tol·(1 + max|μ|) are treated as
  /// one degenerate eigenvalue and refined on their invariant subspace.
  double cluster_tol = 1e-9;
  int max_retries = 8;
  std::uint64_t seed = 0x5eed;
};

struct JointEigenpair {
  std::vector<cplx> p;
  CVector vector;
  double residual = 0.0;
};

/// Simultaneous eigen-decomposition of a commuting, diagonalizable family.
/// A random complex combination Σ c_a H_a is diagonalized and each p_a is
/// read back through the left/right bilinear quotient. Exactly degenerate
/// probe eigenvalues are refined recursively on their eigenspace with a
/// fresh probe. Results are sorted lexicographically by p.
///
/// Throws NumericalError for non-commuting input or when no probe within
/// the retry bound certifies every vector.
std::vector<JointEigenpair> joint_eigen(std::span<const CMatrix> ops, const JointEigenOptions& options = {});

/// Largest commutator norm relative to max‖H‖².
double max_commutator(std::span<const CMatrix> ops);

}  // namespace cmkz
