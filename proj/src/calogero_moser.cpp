#include "cmkz/calogero_moser.hpp"

#include <algorithm>
#include <cmath>

#include "cmkz/polynomial.hpp"
#include "cmkz/tensor_gaudin.hpp"

namespace cmkz {

CMatrix cm_matrix(std::span<const cplx> z, std::span<const cplx> p) {
  if (z.size() != p.size() || z.empty()) throw InvalidArgument("cm_matrix: z and p must have equal nonzero length");
  require_distinct_positions(z);
  const auto n = static_cast<Eigen::Index>(z.size());
  CMatrix Q(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) Q(a, b) = (a == b) ? p[a] : 1.0 / (z[a] - z[b]);
  return Q;
}

std::vector<cplx> char_poly_invariants(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("char_poly_invariants: eigenvalue iteration failed");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return elementary_symmetric(ev);
}

FirstIntegrals first_integrals(std::span<const cplx> z, std::span<const cplx> p) {
  return {char_poly_invariants(cm_matrix(z, p))};
}

cplx cm_hamiltonian(std::span<const cplx> z, std::span<const cplx> p) {
  if (z.size() != p.size()) throw InvalidArgument("cm_hamiltonian: size mismatch");
  require_distinct_positions(z);
  cplx h{};
  for (auto x : p) h += x * x;
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b) {
      const cplx d = z[a] - z[b];
      h -= 2.0 / (d * d);
    }
  return h;
}

namespace {

double level_residual(std::span<const cplx> z, std::span<const cplx> p, std::span<const cplx> q, bool scaled) {
  const auto Q = first_integrals(z, p).values;
  std::vector<cplx> target(Q.size(), 0.0);
  double base = 1.0;
  for (auto x : p) base = std::max(base, std::abs(x));
  if (!q.empty()) {
    if (q.size() != z.size()) throw InvalidArgument("lq_residual: q must have n entries");
    target = elementary_symmetric(q);
    for (auto x : q) base = std::max(base, std::abs(x));
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < Q.size(); ++a) {
    const double s = scaled ? std::pow(base, static_cast<double>(a + 1)) : 1.0;
    worst = std::max(worst, std::abs(Q[a] - target[a]) / s);
  }
  return worst;
}

}  // namespace

double l0_residual(std::span<const cplx> z, std::span<const cplx> p) { return level_residual(z, p, {}, true); }
double l0_residual_raw(std::span<const cplx> z, std::span<const cplx> p) { return level_residual(z, p, {}, false); }

double lq_residual(std::span<const cplx> z, std::span<const cplx> p, std::span<const cplx> q) {
  if (q.empty()) return l0_residual(z, p);
  return level_residual(z, p, q, true);
}

double lq_residual_raw(std::span<const cplx> z, std::span<const cplx> p, std::span<const cplx> q) {
  if (q.empty()) return l0_residual_raw(z, p);
  return level_residual(z, p, q, false);
}

CMPoint xi(std::span<const cplx> z, std::span<const cplx> p) {
  CMPoint point;
  point.Z = Eigen::Map<const CVector>(z.data(), static_cast<Eigen::Index>(z.size()));
  point.Q = cm_matrix(z, p);
  return point;
}

CMatrix commutator_plus_identity(const CMPoint& point) {
  const auto n = point.Z.size();
  CMatrix C(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) C(a, b) = (point.Z(a) - point.Z(b)) * point.Q(a, b);
  C.diagonal().array() += 1.0;
  return C;
}

double rank_one_residual(const CMPoint& point) {
  const CMatrix C = commutator_plus_identity(point);
  if (C.rows() <= 1) return C.norm() == 0.0 ? 1.0 : 0.0;
  Eigen::JacobiSVD<CMatrix> svd(C);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 1.0;
  return s(1) / s(0);
}

cplx bivariate_char(const CMPoint& point, cplx u, cplx v) {
  const auto n = point.Z.size();
  CMatrix uZ = -CMatrix(point.Z.asDiagonal());
  uZ.diagonal().array() += u;
  CMatrix vQ = -point.Q;
  vQ.diagonal().array() += v;
  return (uZ * vQ - CMatrix::Identity(n, n)).determinant();
}

SpectralCoordinates pi_image(const CMPoint& point) {
  std::vector<cplx> z(point.Z.data(), point.Z.data() + point.Z.size());
  return {elementary_symmetric(z), char_poly_invariants(point.Q)};
}

bool same_cm_point(const CMPoint& a, const CMPoint& b, double tol) {
  const auto n = a.Z.size();
  if (b.Z.size() != n) return false;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = -1;
    double dist = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!used[j] && std::abs(a.Z(i) - b.Z(j)) <= dist) {
        best = j;
        dist = std::abs(a.Z(i) - b.Z(j));
      }
    if (best < 0) return false;
    used[best] = true;
    perm[i] = best;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(a.Q(i, j) - b.Q(perm[i], perm[j])) > tol * std::max(1.0, std::abs(a.Q(i, j)))) return false;
  return true;
}

}  // namespace cmkz
