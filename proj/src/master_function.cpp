#include "cmkz/master_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cmkz/polynomial.hpp"
#include "cmkz/random.hpp"

namespace cmkz {

MasterFunction::MasterFunction(int n, std::vector<int> levels, std::vector<cplx> q)
    : n_(n), levels_(std::move(levels)), q_(std::move(q)) {
  offsets_.resize(levels_.size());
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    offsets_[k] = static_cast<int>(num_t_);
    num_t_ += static_cast<std::size_t>(levels_[k]);
  }
}

MasterFunction MasterFunction::for_partition(const Partition& lambda) {
  const int N = std::max(1, lambda.length());
  auto levels = bethe_levels(lambda, N).l;
  while (!levels.empty() && levels.back() == 0) levels.pop_back();
  return MasterFunction(lambda.weight(), std::move(levels), {});
}

MasterFunction MasterFunction::for_q(std::vector<cplx> q) {
  const int n = static_cast<int>(q.size());
  if (n < 1) throw InvalidArgument("MasterFunction::for_q: q must be nonempty");
  std::vector<int> levels;
  for (int k = 1; k < n; ++k) levels.push_back(n - k);
  return MasterFunction(n, std::move(levels), std::move(q));
}

std::vector<cplx> MasterFunction::flatten(const BetheLevelsValues& t) const {
  if (t.size() != levels_.size()) {
    // trailing empty levels are tolerated
    for (std::size_t k = levels_.size(); k < t.size(); ++k)
      if (!t[k].empty()) throw InvalidArgument("master function: too many Bethe levels");
    if (t.size() < levels_.size()) throw InvalidArgument("master function: missing Bethe levels");
  }
  std::vector<cplx> flat;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (static_cast<int>(t[k].size()) != levels_[k])
      throw InvalidArgument("master function: level " + std::to_string(k + 1) + " must hold " +
                            std::to_string(levels_[k]) + " variables");
    flat.insert(flat.end(), t[k].begin(), t[k].end());
  }
  return flat;
}

BetheLevelsValues MasterFunction::unflatten(std::span<const cplx> t) const {
  if (t.size() != num_t_) throw InvalidArgument("master function: wrong number of Bethe variables");
  BetheLevelsValues out(levels_.size());
  for (std::size_t k = 0; k < levels_.size(); ++k)
    out[k].assign(t.begin() + offsets_[k], t.begin() + offsets_[k] + levels_[k]);
  return out;
}

std::vector<cplx> MasterFunction::stacked(std::span<const cplx> z, std::span<const cplx> t) const {
  if (static_cast<int>(z.size()) != n_) throw InvalidArgument("master function: z must have n entries");
  if (t.size() != num_t_) throw InvalidArgument("master function: wrong number of Bethe variables");
  std::vector<cplx> x(z.begin(), z.end());
  x.insert(x.end(), t.begin(), t.end());
  return x;
}

// Calls f(x, y, c) for every term c·log(X_x − X_y) over the stacked
// variables X = (z, t).
template <class F>
void MasterFunction::for_each_coupling(F&& f) const {
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b) f(a, b, 1.0);
  if (levels_.empty()) return;
  for (int i = 0; i < levels_[0]; ++i)
    for (int a = 0; a < n_; ++a) f(n_ + offsets_[0] + i, a, -1.0);
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const int base = n_ + offsets_[k];
    for (int i = 0; i < levels_[k]; ++i)
      for (int j = i + 1; j < levels_[k]; ++j) f(base + i, base + j, 2.0);
    if (k + 1 < levels_.size()) {
      const int next = n_ + offsets_[k + 1];
      for (int i = 0; i < levels_[k]; ++i)
        for (int j = 0; j < levels_[k + 1]; ++j) f(base + i, next + j, -1.0);
    }
  }
}

cplx MasterFunction::value(std::span<const cplx> z, std::span<const cplx> t) const {
  const auto x = stacked(z, t);
  cplx v{};
  for_each_coupling([&](int i, int j, double c) { v += c * std::log(x[i] - x[j]); });
  if (deformed()) {
    for (std::size_t k = 0; k < levels_.size(); ++k)
      for (int i = 0; i < levels_[k]; ++i) v += (q_[k + 1] - q_[k]) * t[offsets_[k] + i];
    for (auto za : z) v += q_[0] * za;
  }
  return v;
}

std::vector<cplx> MasterFunction::full_gradient(std::span<const cplx> z, std::span<const cplx> t) const {
  const auto x = stacked(z, t);
  std::vector<cplx> g(x.size(), 0.0);
  for_each_coupling([&](int i, int j, double c) {
    const cplx w = c / (x[i] - x[j]);
    g[i] += w;
    g[j] -= w;
  });
  if (deformed()) {
    for (std::size_t k = 0; k < levels_.size(); ++k)
      for (int i = 0; i < levels_[k]; ++i) g[n_ + offsets_[k] + i] += q_[k + 1] - q_[k];
    for (int a = 0; a < n_; ++a) g[a] += q_[0];
  }
  return g;
}

std::vector<cplx> MasterFunction::grad_t(std::span<const cplx> z, std::span<const cplx> t) const {
  const auto g = full_gradient(z, t);
  return {g.begin() + n_, g.end()};
}

std::vector<cplx> MasterFunction::grad_z(std::span<const cplx> z, std::span<const cplx> t) const {
  const auto g = full_gradient(z, t);
  return {g.begin(), g.begin() + n_};
}

CMatrix MasterFunction::hess_t(std::span<const cplx> z, std::span<const cplx> t) const {
  const auto x = stacked(z, t);
  const auto m = static_cast<Eigen::Index>(num_t_);
  CMatrix H = CMatrix::Zero(m, m);
  for_each_coupling([&](int i, int j, double c) {
    const cplx d = x[i] - x[j];
    const cplx w = c / (d * d);
    const Eigen::Index ti = i - n_;
    const Eigen::Index tj = j - n_;
    if (ti >= 0) H(ti, ti) -= w;
    if (tj >= 0) H(tj, tj) -= w;
    if (ti >= 0 && tj >= 0) {
      H(ti, tj) += w;
      H(tj, ti) += w;
    }
  });
  return H;
}

double MasterFunction::min_coupled_distance(std::span<const cplx> z, std::span<const cplx> t) const {
  const auto x = stacked(z, t);
  double d = std::numeric_limits<double>::infinity();
  for_each_coupling([&](int i, int j, double) { d = std::min(d, std::abs(x[i] - x[j])); });
  return d;
}

void MasterFunction::require_admissible(std::span<const cplx> z, std::span<const cplx> t, double delta) const {
  double scale = 1.0;
  for (auto v : z) scale = std::max(scale, std::abs(v));
  for (auto v : t) scale = std::max(scale, std::abs(v));
  if (min_coupled_distance(z, t) < delta * scale)
    throw InvalidArgument("master function: near-collision of arguments");
}

namespace {

std::vector<cplx> checked_grad_t(const MasterFunction& phi, std::span<const cplx> z, const BetheLevelsValues& t) {
  const auto flat = phi.flatten(t);
  phi.require_admissible(z, flat);
  return phi.grad_t(z, flat);
}

std::vector<cplx> checked_grad_z(const MasterFunction& phi, std::span<const cplx> z, const BetheLevelsValues& t) {
  const auto flat = phi.flatten(t);
  phi.require_admissible(z, flat);
  return phi.grad_z(z, flat);
}

}  // namespace

std::vector<cplx> grad_t(const Partition& lambda, std::span<const cplx> z, const BetheLevelsValues& t) {
  return checked_grad_t(MasterFunction::for_partition(lambda), z, t);
}

std::vector<cplx> grad_z(const Partition& lambda, std::span<const cplx> z, const BetheLevelsValues& t) {
  return checked_grad_z(MasterFunction::for_partition(lambda), z, t);
}

std::vector<cplx> grad_t_q(std::span<const cplx> q, std::span<const cplx> z, const BetheLevelsValues& t) {
  return checked_grad_t(MasterFunction::for_q({q.begin(), q.end()}), z, t);
}

std::vector<cplx> grad_z_q(std::span<const cplx> q, std::span<const cplx> z, const BetheLevelsValues& t) {
  return checked_grad_z(MasterFunction::for_q({q.begin(), q.end()}), z, t);
}

namespace {

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (auto x : v) s += std::norm(x);
  return std::sqrt(s);
}

bool admissible(const MasterFunction& phi, std::span<const cplx> z, std::span<const cplx> t, double delta,
                double scale) {
  for (auto v : t)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e6 * scale) return false;
  return phi.min_coupled_distance(z, t) >= delta * scale;
}

// Damped Newton on ∇_t Φ = 0, or with an anchor w on F_i = (t_i - w)·∂Φ/∂t_i. The plain
// gradient decays like 1/t at infinity so Newton can run away; F tends to a nonzero constant.
std::optional<std::vector<cplx>> newton(const MasterFunction& phi, std::span<const cplx> z, std::vector<cplx> t,
                                        std::optional<cplx> anchor, double scale, const BetheSolveOptions& opt) {
  const auto m = static_cast<Eigen::Index>(t.size());
  auto weight = [&](cplx x) { return anchor ? x - *anchor : cplx{1.0}; };
  auto residual = [&](const std::vector<cplx>& x, std::vector<cplx>& g) {
    g = phi.grad_t(z, x);
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += std::norm(weight(x[i]) * g[i]);
    return std::sqrt(s);
  };
  std::vector<cplx> g;
  double fn = residual(t, g);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (norm2(g) <= opt.tol) return t;
    const CMatrix H = phi.hess_t(z, t);
    CMatrix J(m, m);
    CVector rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      J.row(i) = weight(t[i]) * H.row(i);
      if (anchor) J(i, i) += g[i];
      rhs(i) = -weight(t[i]) * g[i];
    }
    CVector step = J.fullPivLu().solve(rhs);
    if (!step.allFinite()) return std::nullopt;
    const double sn = step.norm();
    if (sn > 2.0 * scale) step *= 2.0 * scale / sn;
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-6) {
      std::vector<cplx> trial(t);
      for (Eigen::Index i = 0; i < m; ++i) trial[i] += alpha * step(i);
      if (admissible(phi, z, trial, opt.delta, scale)) {
        std::vector<cplx> gt;
        const double ft = residual(trial, gt);
        if (ft < (1.0 - 1e-4 * alpha) * fn || norm2(gt) <= opt.tol) {
          t = std::move(trial);
          g = std::move(gt);
          fn = ft;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  return norm2(g) <= opt.tol ? std::optional(t) : std::nullopt;
}

// Level k is seeded near critical points of the polynomial whose roots are level k-1.
std::vector<cplx> cascade_start(const MasterFunction& phi, std::span<const cplx> z, Rng& rng, double noise) {
  std::vector<cplx> out;
  std::vector<cplx> prev(z.begin(), z.end());
  for (int l : phi.level_sizes()) {
    // a random l-subset of the critical points of the previous level's polynomial
    auto r = roots(Polynomial::from_roots(prev).derivative());
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform() * static_cast<double>(r.size() - i));
      std::swap(r[i], r[std::min(j, r.size() - 1)]);
    }
    r.resize(static_cast<std::size_t>(l));
    std::vector<cplx> moved(r);
    for (std::size_t i = 0; i < r.size(); ++i) {
      // noise relative to the local spacing, so that tight clusters are not smeared out
      double local = std::numeric_limits<double>::infinity();
      for (auto w : prev) local = std::min(local, std::abs(r[i] - w));
      for (std::size_t j = 0; j < r.size(); ++j)
        if (j != i) local = std::min(local, std::abs(r[i] - r[j]));
      if (!std::isfinite(local)) local = 1.0;
      moved[i] += noise * local * rng.complex_normal();
      out.push_back(moved[i]);
    }
    r = std::move(moved);
    prev = std::move(r);
  }
  return out;
}

BetheLevelsValues canonical(const MasterFunction& phi, std::span<const cplx> t) {
  auto levels = phi.unflatten(t);
  for (auto& level : levels) std::sort(level.begin(), level.end(), lex_less);
  return levels;
}

// Level-wise greedy matching; robust to ties in the lexicographic sort.
bool same_levels(const BetheLevelsValues& a, const BetheLevelsValues& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    std::vector<bool> used(b[k].size(), false);
    for (auto x : a[k]) {
      std::size_t best = b[k].size();
      double dist = tol;
      for (std::size_t j = 0; j < b[k].size(); ++j)
        if (!used[j] && std::abs(x - b[k][j]) <= dist) {
          best = j;
          dist = std::abs(x - b[k][j]);
        }
      if (best == b[k].size()) return false;
      used[best] = true;
    }
  }
  return true;
}

bool lex_less_p(const CriticalPoint& x, const CriticalPoint& y) {
  for (std::size_t a = 0; a < x.p.size(); ++a)
    if (x.p[a] != y.p[a]) return lex_less(x.p[a], y.p[a]);
  return false;
}

}  // namespace

BetheSolveResult solve_critical_points(const MasterFunction& phi, std::span<const cplx> z, std::size_t expected,
                                       const BetheSolveOptions& options) {
  if (static_cast<int>(z.size()) != phi.n()) throw InvalidArgument("solve_bethe: z must have n entries");
  BetheSolveResult result;
  result.expected = expected;
  double scale = 1.0;
  cplx centre{};
  for (auto v : z) centre += v;
  centre /= static_cast<double>(z.size());
  double radius = 0.0;
  for (auto v : z) radius = std::max(radius, std::abs(v - centre));
  for (auto v : z) scale = std::max(scale, std::abs(v));
  for (auto v : phi.q()) scale = std::max(scale, std::abs(v));
  if (min_pairwise_distance({z.begin(), z.end()}) < options.delta * scale)
    throw InvalidArgument("solve_bethe: positions z are not separated");

  if (phi.num_t() == 0) {
    CriticalPoint cp;
    cp.config = {{z.begin(), z.end()}, BetheLevelsValues(phi.level_sizes().size())};
    cp.p = phi.grad_z(z, {});
    result.points.push_back(std::move(cp));
    return result;
  }

  Rng rng(options.seed);
  // F vanishes trivially at t_i = anchor, so keep the anchor away from where roots live
  const cplx anchor = centre + 5.0 * (radius + 1.0) * std::polar(1.0, 0.7);
  // a vanishing gradient far outside the region set by z and q is an escape to infinity
  double reach = 1e3 * (radius + 1.0);
  if (phi.q().size() > 1) reach /= std::min(1.0, min_pairwise_distance(phi.q()));
  auto escaped = [&](const std::vector<cplx>& t) {
    return std::any_of(t.begin(), t.end(), [&](cplx v) { return std::abs(v - centre) > reach; });
  };
  std::vector<BetheLevelsValues> found;
  int budget = std::max(1, options.starts);
  int used = 0;
  while (true) {
    for (; used < budget; ++used) {
      std::vector<cplx> start;
      if (used % 2 == 0) {
        // mixture of radii so that roots far from the z-cloud are also reached
        const double r = (radius + 0.5) * (used % 3 == 2 ? 4.0 : 1.5);
        start.resize(phi.num_t());
        for (auto& v : start) v = rng.in_disc(r, centre);
      } else {
        start = cascade_start(phi, z, rng, 0.5 * rng.uniform());
      }
      auto sol = newton(phi, z, start, std::nullopt, scale, options);
      if (!sol || escaped(*sol)) sol = newton(phi, z, std::move(start), anchor, scale, options);
      if (!sol || escaped(*sol)) continue;
      auto levels = canonical(phi, *sol);
      const double tol = options.dedup_tol * scale;
      if (std::any_of(found.begin(), found.end(), [&](const auto& f) { return same_levels(f, levels, tol); }))
        continue;
      found.push_back(levels);
      CriticalPoint cp;
      const auto flat = phi.flatten(levels);
      cp.config = {{z.begin(), z.end()}, levels};
      cp.grad_norm = norm2(phi.grad_t(z, flat));
      cp.p = phi.grad_z(z, flat);
      result.points.push_back(std::move(cp));
    }
    if (found.size() >= expected || budget >= options.max_starts) break;
    budget = std::min(budget * 4, options.max_starts);
  }
  result.starts_used = used;
  std::stable_sort(result.points.begin(), result.points.end(), lex_less_p);
  return result;
}

BetheSolveResult solve_bethe(const Partition& lambda, std::span<const cplx> z, const BetheSolveOptions& options) {
  if (lambda.weight() != static_cast<int>(z.size())) throw InvalidArgument("solve_bethe: |λ| must equal n");
  return solve_critical_points(MasterFunction::for_partition(lambda), z, irrep_dimension(lambda), options);
}

BetheSolveResult solve_bethe_q(std::span<const cplx> q, std::span<const cplx> z, const BetheSolveOptions& options) {
  if (q.size() != z.size()) throw InvalidArgument("solve_bethe_q: q must have n entries");
  if (min_pairwise_distance({q.begin(), q.end()}) == 0.0)
    throw InvalidArgument("solve_bethe_q: q must be pairwise distinct");
  return solve_critical_points(MasterFunction::for_q({q.begin(), q.end()}), z,
                               factorial(static_cast<int>(q.size())), options);
}

}  // namespace cmkz
