#include "cmkz/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace cmkz {

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(int degree, cplx coeff) {
  if (degree < 0) throw InvalidArgument("Polynomial::monomial: negative degree");
  std::vector<cplx> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }

Polynomial Polynomial::from_roots(std::span<const cplx> roots) {
  Polynomial p = constant(1.0);
  for (cplx r : roots) p = p * Polynomial(std::vector<cplx>{-r, 1.0});
  return p;
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

cplx Polynomial::operator[](int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return {};
  return c_[static_cast<std::size_t>(k)];
}

cplx Polynomial::operator()(cplx u) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

double Polynomial::max_coeff_abs() const {
  double m = 0.0;
  for (auto x : c_) m = std::max(m, std::abs(x));
  return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  for (auto& x : c_) x *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

std::vector<cplx> roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw InvalidArgument("roots: polynomial degree must be >= 1");
  CMatrix companion = CMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / p.leading();
  Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
  if (es.info() != Eigen::Success) throw NumericalError("roots: eigenvalue iteration failed");
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(r.begin(), r.end(), lex_less);
  return r;
}

std::vector<cplx> elementary_symmetric(std::span<const cplx> values) {
  // e[k] after processing a prefix is σ_k of that prefix
  std::vector<cplx> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t m = 0; m < values.size(); ++m)
    for (std::size_t k = m + 1; k >= 1; --k) e[k] += values[m] * e[k - 1];
  return {e.begin() + 1, e.end()};
}

Polynomial determinant(const std::vector<std::vector<Polynomial>>& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw InvalidArgument("determinant: matrix must be square");
  if (n == 0) return Polynomial::constant(1.0);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial total;
  do {
    // sign by counting inversions; n is tiny
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Polynomial term = m[0][perm[0]];
    for (std::size_t i = 1; i < n && !term.is_zero(); ++i) term = term * m[i][perm[i]];
    if (inversions % 2) total -= term;
    else total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

QuasiPolynomial QuasiPolynomial::derivative() const {
  return {exponent, exponent * poly + poly.derivative()};
}

}  // namespace cmkz
