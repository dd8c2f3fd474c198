#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cmkz/joint_eigen.hpp"
#include "cmkz/partitions.hpp"
#include "cmkz/types.hpp"

namespace cmkz {

/// Largest N^n for which operators are assembled.
inline constexpr std::uint64_t kDefaultDimensionCap = 4096;

/// Basis of the weight subspace V^{⊗n}[μ] of (C^N)^{⊗n}: all words
/// (i_1..i_n) with letters in 0..N−1 and letter k used μ_k times, in
/// lexicographic order. Letters and tensor positions are 0-based throughout.
class WeightBasis {
 public:
  WeightBasis(int N, int n, std::vector<int> weight, std::uint64_t dimension_cap = kDefaultDimensionCap);

  int N() const { return N_; }
  int n() const { return n_; }
  const std::vector<int>& weight() const { return weight_; }
  const std::vector<std::vector<int>>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::optional<std::size_t> position(const std::vector<int>& word) const;

 private:
  std::uint64_t encode(const std::vector<int>& word) const;

  int N_;
  int n_;
  std::vector<int> weight_;
  std::vector<std::vector<int>> indices_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

std::shared_ptr<const WeightBasis> weight_basis(int N, int n, std::vector<int> weight);

/// A vector expressed on a weight basis. A null basis denotes the zero
/// vector of an empty weight space.
struct WeightVector {
  std::shared_ptr<const WeightBasis> basis;
  CVector coeffs;
};

/// e_ij^{(a)}: replaces letter j by letter i in tensor position a.
WeightVector apply_eij(int i, int j, int a, const WeightVector& v);

/// Orthonormal spanning vectors (columns, in ambient weight-basis
/// coordinates) of an invariant subspace of a weight space.
struct Subspace {
  std::shared_ptr<const WeightBasis> ambient;
  CMatrix vectors;

  Eigen::Index dim() const { return vectors.cols(); }
};

/// Matrix of an operator restricted to a subspace, in the subspace's basis.
struct SubspaceOperator {
  std::shared_ptr<const Subspace> space;
  CMatrix matrix;
};

std::shared_ptr<const Subspace> full_weight_space(std::shared_ptr<const WeightBasis> basis);

/// Sing V^{⊗n}[λ] for V = C^N: joint kernel of the raising operators on the
/// weight-λ space. Throws NumericalError if the numerical kernel dimension
/// differs from d_λ.
std::shared_ptr<const Subspace> singular_basis(const Partition& lambda, int N, int n);

/// Σ_a e_ij^{(a)} as a matrix from `from` to `to` (to.weight = from.weight + ε_i − ε_j).
RMatrix total_generator(int i, int j, const WeightBasis& from, const WeightBasis& to);

/// Gaudin Hamiltonian H_a(z) on a full weight space, assembled through the
/// identity Σ_ij e_ij^{(a)} e_ji^{(b)} = transposition of factors a and b.
CMatrix gaudin_weight_matrix(int a, std::span<const cplx> z, const WeightBasis& basis);

/// Same operator, assembled term by term from e_ij^{(a)} e_ji^{(b)}. Slow;
/// kept as the reference the fast assembly is checked against.
CMatrix gaudin_weight_matrix_reference(int a, std::span<const cplx> z, const WeightBasis& basis);

/// Restriction B^† H B with an invariance check ‖HB − BM‖ ≤ 1e−12·scale.
SubspaceOperator restrict_to(const CMatrix& weight_op, std::shared_ptr<const Subspace> space);

/// Throws InvalidArgument if two positions are closer than
/// delta·max(1, max|z|).
void require_distinct_positions(std::span<const cplx> z, double delta = 1e-12);

SubspaceOperator gaudin_hamiltonian(int a, std::span<const cplx> z, std::shared_ptr<const Subspace> space);
std::vector<SubspaceOperator> gaudin_family(std::span<const cplx> z, std::shared_ptr<const Subspace> space);

/// The weight space V^{⊗n}[1,…,1] with N = n.
std::shared_ptr<const Subspace> unit_weight_space(int n);

/// H_a(z, q) = Σ_i q_i e_ii^{(a)} + H_a(z) on V^{⊗n}[1,…,1], N = n.
SubspaceOperator generalized_gaudin(int a, std::span<const cplx> z, std::span<const cplx> q,
                                    std::shared_ptr<const Subspace> space);
SubspaceOperator generalized_gaudin(int a, std::span<const cplx> z, std::span<const cplx> q);
std::vector<SubspaceOperator> generalized_gaudin_family(std::span<const cplx> z, std::span<const cplx> q,
                                                        std::shared_ptr<const Subspace> space);

/// Joint spectrum of {H_a(z)} on Sing V^{⊗n}[λ] with V = C^N; d_λ points
/// for generic z.
std::vector<SpectralPoint> spectral_points(const Partition& lambda, std::span<const cplx> z, int N,
                                           const JointEigenOptions& options = {});

/// Joint spectrum of {H_a(z, q)} on V^{⊗n}[1,…,1]; n! points for generic (z, q).
std::vector<SpectralPoint> generalized_spectral_points(std::span<const cplx> z, std::span<const cplx> q,
                                                       const JointEigenOptions& options = {});

}  // namespace cmkz
