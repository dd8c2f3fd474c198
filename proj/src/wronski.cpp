#include "cmkz/wronski.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/random.hpp"

namespace cmkz {

// ---------------------------------------------------------------- tuples

PolyTuple::PolyTuple(Partition lambda) : lambda_(std::move(lambda)), shifted_(cmkz::shifted(lambda_).entries) {
  const int n = lambda_.weight();
  for (int i = 1; i <= n; ++i) {
    const int deg = shifted_[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j <= deg; ++j)
      if (std::find(shifted_.begin(), shifted_.end(), deg - j) == shifted_.end()) slots_.push_back({i, j});
  }
  values_.assign(slots_.size(), 0.0);
}

PolyTuple::PolyTuple(Partition lambda, std::vector<cplx> values) : PolyTuple(std::move(lambda)) {
  set_values(std::move(values));
}

void PolyTuple::set_values(std::vector<cplx> values) {
  if (values.size() != slots_.size())
    throw InvalidArgument("PolyTuple: expected " + std::to_string(slots_.size()) + " free coefficients");
  values_ = std::move(values);
}

std::size_t PolyTuple::slot_index(int i, int j) const {
  for (std::size_t k = 0; k < slots_.size(); ++k)
    if (slots_[k].i == i && slots_[k].j == j) return k;
  throw InvalidArgument("PolyTuple: f_" + std::to_string(i) + std::to_string(j) + " is not a free coefficient");
}

cplx PolyTuple::coefficient(int i, int j) const { return values_[slot_index(i, j)]; }
void PolyTuple::set_coefficient(int i, int j, cplx value) { values_[slot_index(i, j)] = value; }

std::vector<Polynomial> PolyTuple::functions() const {
  std::vector<Polynomial> f;
  for (int i = 1; i <= n(); ++i) f.push_back(Polynomial::monomial(shifted_[static_cast<std::size_t>(i - 1)]));
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    const auto [i, j] = slots_[k];
    f[static_cast<std::size_t>(i - 1)] +=
        Polynomial::monomial(shifted_[static_cast<std::size_t>(i - 1)] - j, values_[k]);
  }
  return f;
}

double PolyTuple::prefactor() const {
  double v = 1.0;
  for (std::size_t i = 0; i < shifted_.size(); ++i)
    for (std::size_t j = i + 1; j < shifted_.size(); ++j) v *= static_cast<double>(shifted_[j] - shifted_[i]);
  return v;
}

std::vector<QuasiPolynomial> QuasiExpTuple::functions() const {
  if (q.size() != f.size() || q.empty()) throw InvalidArgument("QuasiExpTuple: q and f must have equal nonzero size");
  std::vector<QuasiPolynomial> out;
  for (std::size_t i = 0; i < q.size(); ++i) out.push_back({q[i], Polynomial(std::vector<cplx>{f[i], 1.0})});
  return out;
}

cplx QuasiExpTuple::prefactor() const {
  cplx v = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j) v *= q[j] - q[i];
  return v;
}

Polynomial MonicPoly::polynomial() const {
  const std::size_t n = W.size();
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  for (std::size_t a = 1; a <= n; ++a) c[n - a] = (a % 2 ? -1.0 : 1.0) * W[a - 1];
  return Polynomial(std::move(c));
}

MonicPoly MonicPoly::from_polynomial(const Polynomial& p) {
  const int n = p.degree();
  if (n < 0) throw InvalidArgument("MonicPoly: zero polynomial");
  MonicPoly m;
  for (int a = 1; a <= n; ++a) m.W.push_back((a % 2 ? -1.0 : 1.0) * p[n - a] / p.leading());
  return m;
}

// ------------------------------------------------------------- operators

Polynomial DiffOpCoeffs::coefficient(int k) const {
  const int nn = n();
  std::vector<cplx> c(static_cast<std::size_t>(nn) + 1);
  for (int j = 0; j <= nn; ++j) c[static_cast<std::size_t>(nn - j)] = P(nn - k, j);
  return Polynomial(std::move(c));
}

Polynomial DiffOpCoeffs::apply(const Polynomial& f) const {
  Polynomial out;
  Polynomial d = f;
  for (int k = 0; k <= n(); ++k) {
    out += coefficient(k) * d;
    d = d.derivative();
  }
  return out;
}

QuasiPolynomial DiffOpCoeffs::apply(const QuasiPolynomial& f) const {
  QuasiPolynomial out{f.exponent, {}};
  QuasiPolynomial d = f;
  for (int k = 0; k <= n(); ++k) {
    out.poly += coefficient(k) * d.poly;
    d = d.derivative();
  }
  return out;
}

namespace {

// rows[i][k] = k-th derivative of f_i, k = 0..cols−1
std::vector<std::vector<Polynomial>> derivative_table(std::span<const Polynomial> f, int cols) {
  std::vector<std::vector<Polynomial>> rows;
  for (const auto& g : f) {
    std::vector<Polynomial> row;
    Polynomial d = g;
    for (int k = 0; k < cols; ++k) {
      row.push_back(d);
      d = d.derivative();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Polynomial parts of the derivatives of e^{q u} g.
std::vector<std::vector<Polynomial>> derivative_table(std::span<const QuasiPolynomial> f, int cols) {
  std::vector<std::vector<Polynomial>> rows;
  for (const auto& g : f) {
    std::vector<Polynomial> row;
    QuasiPolynomial d = g;
    for (int k = 0; k < cols; ++k) {
      row.push_back(d.poly);
      d = d.derivative();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Row determinant of the table bordered by (1, ∂, …, ∂ⁿ): the coefficient
// of ∂^k is the cofactor of the last-row entry in column k, divided by `scale`.
DiffOpCoeffs bordered_rdet(const std::vector<std::vector<Polynomial>>& table, cplx scale) {
  const int n = static_cast<int>(table.size());
  DiffOpCoeffs op{CMatrix::Zero(n + 1, n + 1)};
  for (int k = 0; k <= n; ++k) {
    std::vector<std::vector<Polynomial>> minor;
    for (const auto& row : table) {
      std::vector<Polynomial> r;
      for (int c = 0; c <= n; ++c)
        if (c != k) r.push_back(row[static_cast<std::size_t>(c)]);
      minor.push_back(std::move(r));
    }
    Polynomial cof = determinant(minor) * (((n + k) % 2 ? -1.0 : 1.0) / scale);
    if (cof.degree() > n) throw NumericalError("fundamental operator: coefficient degree exceeds n");
    for (int d = 0; d <= cof.degree(); ++d) op.P(n - k, n - d) = cof[d];
  }
  return op;
}

MonicPoly checked_monic(const Polynomial& wr, cplx expected_leading, int n) {
  if (wr.degree() != n) throw NumericalError("Wronskian has degree " + std::to_string(wr.degree()) + ", expected " + std::to_string(n));
  if (std::abs(wr.leading() - expected_leading) > 1e-10 * std::abs(expected_leading))
    throw NumericalError("Wronskian leading coefficient does not match the prefactor");
  return MonicPoly::from_polynomial(wr);
}

SpectralPoint spectral_from_operator(const DiffOpCoeffs& op, cplx shift) {
  const int n = op.n();
  const Polynomial top = op.coefficient(n);
  SpectralPoint pt;
  pt.z = roots(top);
  double scale = 1.0;
  for (auto v : pt.z) scale = std::max(scale, std::abs(v));
  if (min_pairwise_distance(pt.z) < 1e-6 * scale)
    throw NumericalError("psi: Wronskian has a repeated root (point outside the open stratum)");
  const Polynomial dtop = top.derivative();
  const Polynomial second = n >= 2 ? op.coefficient(n - 2) : Polynomial();
  for (std::size_t a = 0; a < pt.z.size(); ++a) {
    cplx s{};
    for (std::size_t b = 0; b < pt.z.size(); ++b)
      if (b != a) s += 1.0 / (pt.z[a] - pt.z[b]);
    const cplx residue = second(pt.z[a]) / dtop(pt.z[a]);
    pt.p.push_back(-residue + s + shift);
  }
  return pt;
}

double bivariate_residual(const SpectralPoint& pt, const DiffOpCoeffs& op, std::uint64_t seed) {
  const CMPoint cm = xi(pt.z, pt.p);
  const int n = op.n();
  Rng rng(seed);
  double worst = 0.0;
  for (int g = 0; g < 25; ++g) {
    const cplx u = rng.in_disc(1.0);
    const cplx v = rng.in_disc(1.0);
    cplx sum{};
    double scale = 1.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const cplx term = op.P(i, j) * std::pow(u, n - j) * std::pow(v, n - i);
        sum += term;
        scale = std::max(scale, std::abs(term));
      }
    const cplx det = bivariate_char(cm, u, v);
    worst = std::max(worst, std::abs(det - sum) / scale);
  }
  return worst;
}

Polynomial abs_coeffs(const Polynomial& p) {
  std::vector<cplx> c;
  for (auto x : p.coeffs()) c.push_back(std::abs(x));
  return Polynomial(std::move(c));
}

double annihilation_ratio(const DiffOpCoeffs& op, const std::vector<std::vector<Polynomial>>& table) {
  double worst = 0.0;
  for (const auto& row : table) {
    Polynomial result, magnitude;
    for (int k = 0; k <= op.n(); ++k) {
      result += op.coefficient(k) * row[static_cast<std::size_t>(k)];
      magnitude += abs_coeffs(op.coefficient(k)) * abs_coeffs(row[static_cast<std::size_t>(k)]);
    }
    const double m = std::max(magnitude.max_coeff_abs(), 1e-300);
    worst = std::max(worst, result.max_coeff_abs() / m);
  }
  return worst;
}

}  // namespace

Polynomial wronskian(std::span<const Polynomial> functions) {
  const int n = static_cast<int>(functions.size());
  if (n < 1) throw InvalidArgument("wronskian: need at least one function");
  return determinant(derivative_table(functions, n));
}

QuasiPolynomial wronskian(std::span<const QuasiPolynomial> functions) {
  const int n = static_cast<int>(functions.size());
  if (n < 1) throw InvalidArgument("wronskian: need at least one function");
  cplx exponent{};
  for (const auto& f : functions) exponent += f.exponent;
  return {exponent, determinant(derivative_table(functions, n))};
}

MonicPoly wronski_map(const PolyTuple& x) {
  const auto f = x.functions();
  return checked_monic(wronskian(f), x.prefactor(), x.n());
}

MonicPoly wronski_map_q(const QuasiExpTuple& x) {
  if (min_pairwise_distance(x.q) == 0.0) throw InvalidArgument("wronski_map_q: q must be pairwise distinct");
  const auto f = x.functions();
  return checked_monic(wronskian(f).poly, x.prefactor(), static_cast<int>(x.q.size()));
}

DiffOpCoeffs fundamental_operator(const PolyTuple& x) {
  const auto f = x.functions();
  return bordered_rdet(derivative_table(f, x.n() + 1), x.prefactor());
}

DiffOpCoeffs fundamental_operator_q(const QuasiExpTuple& x) {
  if (min_pairwise_distance(x.q) == 0.0) throw InvalidArgument("fundamental_operator_q: q must be pairwise distinct");
  const auto f = x.functions();
  return bordered_rdet(derivative_table(f, static_cast<int>(x.q.size()) + 1), x.prefactor());
}

double fla_residual(const PolyTuple& x) {
  const int n = x.n();
  const auto op = fundamental_operator(x);
  const auto linear = [](double c) { return Polynomial(std::vector<cplx>{c, 1.0}); };
  Polynomial lhs;
  for (int i = 0; i <= n; ++i) {
    Polynomial term = Polynomial::constant(op.P(i, i));
    for (int j = i + 1; j <= n; ++j) term = term * linear(j);
    lhs += term;
  }
  Polynomial rhs = Polynomial::constant(1.0);
  for (int j = 1; j <= n; ++j) rhs = rhs * linear(static_cast<double>(j - x.lambda()[static_cast<std::size_t>(j - 1)]));
  return (lhs - rhs).max_coeff_abs();
}

SpectralPoint psi(const PolyTuple& x) { return spectral_from_operator(fundamental_operator(x), 0.0); }

SpectralPoint psi_q(const QuasiExpTuple& x) {
  cplx sigma1{};
  for (auto v : x.q) sigma1 += v;
  return spectral_from_operator(fundamental_operator_q(x), sigma1);
}

double bivariate_identity_residual(const PolyTuple& x, std::uint64_t seed) {
  return bivariate_residual(psi(x), fundamental_operator(x), seed);
}

double bivariate_identity_residual_q(const QuasiExpTuple& x, std::uint64_t seed) {
  return bivariate_residual(psi_q(x), fundamental_operator_q(x), seed);
}

double annihilation_residual(const PolyTuple& x) {
  const auto f = x.functions();
  return annihilation_ratio(fundamental_operator(x), derivative_table(f, x.n() + 1));
}

double annihilation_residual_q(const QuasiExpTuple& x) {
  const auto f = x.functions();
  return annihilation_ratio(fundamental_operator_q(x), derivative_table(f, static_cast<int>(x.q.size()) + 1));
}

// ----------------------------------------------------------------- fibers

namespace {

// Normalized Wronskian coefficients W and the Jacobian ∂W_a/∂x_k. The
// Wronskian is linear in each row, so ∂Wr/∂f_ij replaces row i by the
// derivatives of u^{λ̃_i − j}.
void fiber_system(const PolyTuple& x, std::span<const cplx> sigma, CVector& F, CMatrix& J) {
  const int n = x.n();
  const auto f = x.functions();
  const double pre = x.prefactor();
  auto table = derivative_table(f, n);
  const Polynomial wr = determinant(table) * (1.0 / pre);
  F.resize(n);
  for (int a = 1; a <= n; ++a) F(a - 1) = (a % 2 ? -1.0 : 1.0) * wr[n - a] - sigma[static_cast<std::size_t>(a - 1)];
  J.resize(n, n);
  for (std::size_t k = 0; k < x.slots().size(); ++k) {
    const auto [i, j] = x.slots()[k];
    auto rows = table;
    const Polynomial mono = Polynomial::monomial(x.shifted()[static_cast<std::size_t>(i - 1)] - j);
    Polynomial single[] = {mono};
    rows[static_cast<std::size_t>(i - 1)] = derivative_table(single, n).front();
    const Polynomial dwr = determinant(rows) * (1.0 / pre);
    for (int a = 1; a <= n; ++a) J(a - 1, static_cast<Eigen::Index>(k)) = (a % 2 ? -1.0 : 1.0) * dwr[n - a];
  }
}

std::optional<std::vector<cplx>> fiber_newton(const Partition& lambda, std::span<const cplx> sigma,
                                              std::vector<cplx> start, double target_scale,
                                              const FiberOptions& opt) {
  PolyTuple x(lambda, std::move(start));
  CVector F;
  CMatrix J;
  fiber_system(x, sigma, F, J);
  double fn = F.norm();
  const double tol = opt.tol * target_scale;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (fn <= tol) return x.values();
    const CVector step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) return std::nullopt;
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-6) {
      auto trial = x.values();
      for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += alpha * step(static_cast<Eigen::Index>(k));
      PolyTuple y(lambda, trial);
      CVector Ft;
      CMatrix Jt;
      fiber_system(y, sigma, Ft, Jt);
      if (Ft.allFinite() && Ft.norm() < (1.0 - 1e-4 * alpha) * fn) {
        x = std::move(y);
        F = std::move(Ft);
        J = std::move(Jt);
        fn = F.norm();
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  if (fn <= tol) return x.values();
  return std::nullopt;
}

}  // namespace

FiberResult wronski_fiber(const Partition& lambda, std::span<const cplx> sigma_target, const FiberOptions& options) {
  const int n = lambda.weight();
  if (static_cast<int>(sigma_target.size()) != n) throw InvalidArgument("wronski_fiber: σ must have n entries");
  FiberResult result;
  result.expected = irrep_dimension(lambda);

  // root-size bound from σ sets the scale of the coefficients
  double root_scale = 1.0;
  double target_scale = 1.0;
  for (int a = 1; a <= n; ++a) {
    root_scale = std::max(root_scale, std::pow(std::abs(sigma_target[a - 1]), 1.0 / a));
    target_scale = std::max(target_scale, std::abs(sigma_target[a - 1]));
  }
  const PolyTuple shape(lambda);
  Rng rng(options.seed);
  int budget = std::max(1, options.starts);
  int used = 0;
  while (true) {
    for (; used < budget; ++used) {
      std::vector<cplx> start;
      for (const auto& slot : shape.slots()) start.push_back(2.0 * std::pow(root_scale, slot.j) * rng.complex_normal());
      auto sol = fiber_newton(lambda, sigma_target, std::move(start), target_scale, options);
      if (!sol) continue;
      double coeff_scale = 1.0;
      for (auto v : *sol) coeff_scale = std::max(coeff_scale, std::abs(v));
      const bool dup = std::any_of(result.solutions.begin(), result.solutions.end(), [&](const PolyTuple& s) {
        for (std::size_t k = 0; k < sol->size(); ++k)
          if (std::abs(s.values()[k] - (*sol)[k]) > options.dedup_tol * coeff_scale) return false;
        return true;
      });
      if (dup) continue;
      PolyTuple x(lambda, *sol);
      const auto W = wronski_map(x).W;
      double res = 0.0;
      for (int a = 0; a < n; ++a) res = std::max(res, std::abs(W[a] - sigma_target[a]));
      result.solutions.push_back(std::move(x));
      result.residuals.push_back(res);
    }
    if (result.solutions.size() >= result.expected || budget >= options.max_starts) break;
    budget = std::min(budget * 4, options.max_starts);
  }
  result.starts_used = used;
  return result;
}

PolyTuple random_poly_tuple(const Partition& lambda, std::uint64_t seed, double min_sep) {
  Rng rng(seed);
  PolyTuple x(lambda);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<cplx> v;
    for (std::size_t k = 0; k < x.slots().size(); ++k) v.push_back(rng.complex_normal());
    x.set_values(std::move(v));
    const auto r = roots(wronski_map(x).polynomial());
    if (min_pairwise_distance(r) >= min_sep) return x;
  }
  throw NumericalError("random_poly_tuple: could not sample a point with separated Wronskian roots");
}

}  // namespace cmkz
