#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmkz/partitions.hpp"
#include "cmkz/polynomial.hpp"
#include "cmkz/types.hpp"

namespace cmkz {

/// Position of a free coefficient f_ij (1-based, as in f_i = u^{λ̃_i} + Σ_j f_ij u^{λ̃_i − j}).
struct FreeCoefficient {
  int i;
  int j;
};

/// A point of X_λ: n monic polynomials f_i of degree λ̃_i carrying no
/// monomial u^d with d ∈ λ̃ other than the leading one. There are exactly
/// n free coefficients.
class PolyTuple {
 public:
  explicit PolyTuple(Partition lambda);
  PolyTuple(Partition lambda, std::vector<cplx> values);

  const Partition& lambda() const { return lambda_; }
  int n() const { return lambda_.weight(); }
  const std::vector<int>& shifted() const { return shifted_; }
  const std::vector<FreeCoefficient>& slots() const { return slots_; }
  const std::vector<cplx>& values() const { return values_; }
  void set_values(std::vector<cplx> values);

  cplx coefficient(int i, int j) const;
  void set_coefficient(int i, int j, cplx value);

  /// f_1..f_n
  std::vector<Polynomial> functions() const;
  /// Π_{i<j} (λ̃_j − λ̃_i)
  double prefactor() const;

 private:
  std::size_t slot_index(int i, int j) const;

  Partition lambda_;
  std::vector<int> shifted_;
  std::vector<FreeCoefficient> slots_;
  std::vector<cplx> values_;
};

/// A point of X_q: f_i(u) = e^{q_i u}(u + f_i1) with pairwise distinct q.
struct QuasiExpTuple {
  std::vector<cplx> q;
  std::vector<cplx> f;

  std::vector<QuasiPolynomial> functions() const;
  /// Π_{i<j} (q_j − q_i)
  cplx prefactor() const;
};

/// uⁿ + Σ_a (−1)^a W_a u^{n−a}
struct MonicPoly {
  std::vector<cplx> W;

  Polynomial polynomial() const;
  static MonicPoly from_polynomial(const Polynomial& p);
};

/// Coefficients of Σ_{i,j} P_ij u^{n−j} ∂^{n−i}; P is (n+1)×(n+1).
struct DiffOpCoeffs {
  CMatrix P;

  int n() const { return static_cast<int>(P.rows()) - 1; }
  /// Coefficient polynomial of ∂^k: Σ_j P_{n−k, j} u^{n−j}.
  Polynomial coefficient(int k) const;
  Polynomial apply(const Polynomial& f) const;
  QuasiPolynomial apply(const QuasiPolynomial& f) const;
};

Polynomial wronskian(std::span<const Polynomial> functions);
QuasiPolynomial wronskian(std::span<const QuasiPolynomial> functions);

/// W_1..W_n of the Wronskian divided by its prefactor. Throws
/// NumericalError if the Wronskian is not of degree n with the expected
/// leading coefficient.
MonicPoly wronski_map(const PolyTuple& x);
MonicPoly wronski_map_q(const QuasiExpTuple& x);

/// Coefficients of the monic operator annihilating f_1..f_n, from the row
/// determinant of the bordered matrix with last row (1, ∂, …, ∂ⁿ).
DiffOpCoeffs fundamental_operator(const PolyTuple& x);
DiffOpCoeffs fundamental_operator_q(const QuasiExpTuple& x);

/// Max coefficient deviation in s between Σ_{i=0}^{n} P_ii Π_{j>i}(s + j)
/// and Π_j (s − λ_j + j).
double fla_residual(const PolyTuple& x);

/// (z_x, p_x): z_x the Wronskian roots in lexicographic order, p_x read off
/// the ∂^{n−2} coefficient by residues. Throws NumericalError on repeated
/// roots (x outside X_λ⁰).
SpectralPoint psi(const PolyTuple& x);

/// q-analogue; the residue is taken of C_{n−2}(u)/Wr(u) and shifted by σ_1(q).
SpectralPoint psi_q(const QuasiExpTuple& x);

/// max over a 5×5 grid of seeded random (u, v) in the unit disc of
/// |det((u − Z)(v − Q) − 1) − Σ P_ij u^{n−j} v^{n−i}| / scale.
double bivariate_identity_residual(const PolyTuple& x, std::uint64_t seed = 7);
double bivariate_identity_residual_q(const QuasiExpTuple& x, std::uint64_t seed = 7);

/// Largest |D f_i| coefficient relative to the size of the terms of D f_i.
double annihilation_residual(const PolyTuple& x);
double annihilation_residual_q(const QuasiExpTuple& x);

struct FiberOptions {
  int starts = 16;
  int max_starts = 4096;
  double tol = 1e-12;
  int max_iterations = 100;
  double dedup_tol = 1e-6;
  std::uint64_t seed = 1;
};

struct FiberResult {
  std::vector<PolyTuple> solutions;
  /// max_a |W_a(x) − σ_a| per solution
  std::vector<double> residuals;
  std::uint64_t expected = 0;
  int starts_used = 0;
};

/// Solutions x ∈ X_λ of W_a(x) = σ_a by seeded multistart Newton with
/// escalating start counts; the count is reported against d_λ.
FiberResult wronski_fiber(const Partition& lambda, std::span<const cplx> sigma_target,
                          const FiberOptions& options = {});

/// A point of X_λ with seeded complex-normal coefficients whose Wronskian
/// roots are separated by at least min_sep.
PolyTuple random_poly_tuple(const Partition& lambda, std::uint64_t seed, double min_sep = 1e-2);

}  // namespace cmkz
