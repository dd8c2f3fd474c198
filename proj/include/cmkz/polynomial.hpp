#pragma once

#include <span>
#include <vector>

#include "cmkz/types.hpp"

namespace cmkz {

/// Dense univariate polynomial with complex coefficients, stored low-to-high.
/// The zero polynomial has an empty coefficient vector.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  static Polynomial monomial(int degree, cplx coeff = 1.0);
  static Polynomial constant(cplx c);
  /// Π (u − r)
  static Polynomial from_roots(std::span<const cplx> roots);

  /// −1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  /// Coefficient of u^k (0 when k is out of range).
  cplx operator[](int k) const;
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }

  cplx operator()(cplx u) const;
  Polynomial derivative() const;
  double max_coeff_abs() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(cplx s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, cplx s) { return a *= s; }
  friend Polynomial operator*(cplx s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void trim();
  std::vector<cplx> c_;
};

/// Roots of a polynomial of degree ≥ 1 as eigenvalues of its companion
/// matrix, sorted lexicographically by (re, im).
std::vector<cplx> roots(const Polynomial& p);

/// Elementary symmetric functions σ_1..σ_n of the given values.
std::vector<cplx> elementary_symmetric(std::span<const cplx> values);

/// Determinant of a square matrix of polynomials by permutation expansion
/// (exact in coefficient arithmetic; intended for sizes up to 7).
Polynomial determinant(const std::vector<std::vector<Polynomial>>& m);

/// e^{exponent·u} · poly(u)
struct QuasiPolynomial {
  cplx exponent{};
  Polynomial poly;

  QuasiPolynomial derivative() const;
};

}  // namespace cmkz
