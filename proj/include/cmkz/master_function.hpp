#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cmkz/partitions.hpp"
#include "cmkz/types.hpp"

namespace cmkz {

/// Bethe variables grouped by level: t[k] holds the level-(k+1) values.
using BetheLevelsValues = std::vector<std::vector<cplx>>;

struct BetheConfiguration {
  std::vector<cplx> z;
  BetheLevelsValues t;
};

/// Logarithmic master function in positions z and Bethe variables t:
///
///   Σ_{a<b} log(z_a − z_b) − Σ_a Σ_i log(t^(1)_i − z_a)
///   + 2 Σ_k Σ_{i<j} log(t^(k)_i − t^(k)_j) − Σ_k Σ_{i,j} log(t^(k)_i − t^(k+1)_j)
///   [+ Σ_k (q_{k+1} − q_k) Σ_i t^(k)_i + q_1 Σ_a z_a]
///
/// The bracketed linear terms are present for the q-deformed family, whose
/// levels have sizes n−1, …, 1. Adjacent-level couplings run over Bethe
/// levels only (z is not a level 0).
class MasterFunction {
 public:
  static MasterFunction for_partition(const Partition& lambda);
  static MasterFunction for_q(std::vector<cplx> q);

  int n() const { return n_; }
  const std::vector<int>& level_sizes() const { return levels_; }
  std::size_t num_t() const { return num_t_; }
  bool deformed() const { return !q_.empty(); }
  const std::vector<cplx>& q() const { return q_; }

  std::vector<cplx> flatten(const BetheLevelsValues& t) const;
  BetheLevelsValues unflatten(std::span<const cplx> t) const;

  /// Principal-branch value; Φ is only defined modulo 2πi.
  cplx value(std::span<const cplx> z, std::span<const cplx> t) const;
  std::vector<cplx> grad_t(std::span<const cplx> z, std::span<const cplx> t) const;
  std::vector<cplx> grad_z(std::span<const cplx> z, std::span<const cplx> t) const;
  /// ∂²Φ/∂t∂t (complex symmetric).
  CMatrix hess_t(std::span<const cplx> z, std::span<const cplx> t) const;

  /// Smallest |x − y| over coupled argument pairs.
  double min_coupled_distance(std::span<const cplx> z, std::span<const cplx> t) const;

  /// Throws InvalidArgument if a coupled pair is closer than delta·max(1, |args|).
  void require_admissible(std::span<const cplx> z, std::span<const cplx> t, double delta = 1e-8) const;

 private:
  MasterFunction(int n, std::vector<int> levels, std::vector<cplx> q);

  template <class F>
  void for_each_coupling(F&& f) const;
  std::vector<cplx> stacked(std::span<const cplx> z, std::span<const cplx> t) const;
  std::vector<cplx> full_gradient(std::span<const cplx> z, std::span<const cplx> t) const;

  int n_;
  std::vector<int> levels_;
  std::vector<int> offsets_;
  std::size_t num_t_ = 0;
  std::vector<cplx> q_;
};

std::vector<cplx> grad_t(const Partition& lambda, std::span<const cplx> z, const BetheLevelsValues& t);
std::vector<cplx> grad_z(const Partition& lambda, std::span<const cplx> z, const BetheLevelsValues& t);
std::vector<cplx> grad_t_q(std::span<const cplx> q, std::span<const cplx> z, const BetheLevelsValues& t);
std::vector<cplx> grad_z_q(std::span<const cplx> q, std::span<const cplx> z, const BetheLevelsValues& t);

struct CriticalPoint {
  BetheConfiguration config;
  double grad_norm = 0.0;
  std::vector<cplx> p;
};

struct BetheSolveOptions {
  /// Initial number of random starts; multiplied by 4 up to max_starts
  /// while fewer than the expected number of points are found.
  int starts = 32;
  int max_starts = 4096;
  /// Newton stops once ‖∇_t Φ‖ ≤ tol.
  double tol = 1e-12;
  int max_iterations = 100;
  /// Distinct points differ by more than dedup_tol in some coordinate.
  double dedup_tol = 1e-6;
  /// Admissibility: coupled arguments at least delta·scale apart.
  double delta = 1e-8;
  std::uint64_t seed = 1;
};

struct BetheSolveResult {
  std::vector<CriticalPoint> points;
  std::size_t expected = 0;
  int starts_used = 0;
};

/// Multistart damped Newton for the t-critical points of Φ_λ. Points are
/// deduplicated modulo permutations within a level, each level sorted
/// lexicographically; the count is reported against d_λ.
BetheSolveResult solve_bethe(const Partition& lambda, std::span<const cplx> z, const BetheSolveOptions& options = {});

/// Same for Φ_q; expected count n! is reported, not enforced.
BetheSolveResult solve_bethe_q(std::span<const cplx> q, std::span<const cplx> z,
                               const BetheSolveOptions& options = {});

BetheSolveResult solve_critical_points(const MasterFunction& phi, std::span<const cplx> z, std::size_t expected,
                                       const BetheSolveOptions& options);

}  // namespace cmkz
