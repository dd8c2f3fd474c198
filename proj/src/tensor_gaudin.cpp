#include "cmkz/tensor_gaudin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>


namespace cmkz {

WeightBasis::WeightBasis(int N, int n, std::vector<int> weight, std::uint64_t dimension_cap)
    : N_(N), n_(n), weight_(std::move(weight)) {
  if (N < 1 || n < 1) throw InvalidArgument("weight_basis: N and n must be positive");
  if (static_cast<int>(weight_.size()) != N) throw InvalidArgument("weight_basis: weight must have N entries");
  if (std::any_of(weight_.begin(), weight_.end(), [](int w) { return w < 0; }))
    throw InvalidArgument("weight_basis: negative weight entry");
  if (std::accumulate(weight_.begin(), weight_.end(), 0) != n)
    throw InvalidArgument("weight_basis: weight entries must sum to n");
  double full = std::pow(static_cast<double>(N), n);
  if (full > static_cast<double>(dimension_cap))
    throw InvalidArgument("weight_basis: N^n exceeds the dimension cap");

  // lexicographic words with the prescribed letter content
  std::vector<int> word;
  for (int k = 0; k < N; ++k) word.insert(word.end(), static_cast<std::size_t>(weight_[k]), k);
  do {
    lookup_.emplace(encode(word), indices_.size());
    indices_.push_back(word);
  } while (std::next_permutation(word.begin(), word.end()));
}

std::uint64_t WeightBasis::encode(const std::vector<int>& word) const {
  std::uint64_t code = 0;
  for (int letter : word) code = code * static_cast<std::uint64_t>(N_) + static_cast<std::uint64_t>(letter);
  return code;
}

std::optional<std::size_t> WeightBasis::position(const std::vector<int>& word) const {
  if (static_cast<int>(word.size()) != n_) return std::nullopt;
  for (int letter : word)
    if (letter < 0 || letter >= N_) return std::nullopt;
  auto it = lookup_.find(encode(word));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const WeightBasis> weight_basis(int N, int n, std::vector<int> weight) {
  return std::make_shared<const WeightBasis>(N, n, std::move(weight));
}

WeightVector apply_eij(int i, int j, int a, const WeightVector& v) {
  if (!v.basis) return v;
  const WeightBasis& from = *v.basis;
  if (i < 0 || j < 0 || i >= from.N() || j >= from.N() || a < 0 || a >= from.n())
    throw InvalidArgument("apply_eij: index out of range");
  std::vector<int> target = from.weight();
  target[j] -= 1;
  target[i] += 1;
  if (target[j] < 0) return {nullptr, CVector()};
  auto to = (i == j) ? v.basis : weight_basis(from.N(), from.n(), target);
  CVector out = CVector::Zero(static_cast<Eigen::Index>(to->size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    if (from.indices()[c][a] != j || v.coeffs(c) == cplx{}) continue;
    auto word = from.indices()[c];
    word[a] = i;
    out(*to->position(word)) += v.coeffs(c);
  }
  return {to, out};
}

std::shared_ptr<const Subspace> full_weight_space(std::shared_ptr<const WeightBasis> basis) {
  const auto m = static_cast<Eigen::Index>(basis->size());
  return std::make_shared<const Subspace>(Subspace{std::move(basis), CMatrix::Identity(m, m)});
}

RMatrix total_generator(int i, int j, const WeightBasis& from, const WeightBasis& to) {
  RMatrix E = RMatrix::Zero(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
  for (std::size_t c = 0; c < from.size(); ++c) {
    for (int a = 0; a < from.n(); ++a) {
      if (from.indices()[c][a] != j) continue;
      auto word = from.indices()[c];
      word[a] = i;
      if (auto r = to.position(word)) E(static_cast<Eigen::Index>(*r), static_cast<Eigen::Index>(c)) += 1.0;
    }
  }
  return E;
}

std::shared_ptr<const Subspace> singular_basis(const Partition& lambda, int N, int n) {
  if (lambda.weight() != n) throw InvalidArgument("singular_basis: |λ| must equal n");
  const auto weight = lambda.padded(static_cast<std::size_t>(N));
  auto basis = weight_basis(N, n, weight);
  const auto m = static_cast<Eigen::Index>(basis->size());

  std::vector<RMatrix> blocks;
  Eigen::Index rows = 0;
  for (int k = 0; k + 1 < N; ++k) {
    if (weight[k + 1] == 0) continue;
    auto target = weight;
    target[k] += 1;
    target[k + 1] -= 1;
    WeightBasis to(N, n, target);
    blocks.push_back(total_generator(k, k + 1, *basis, to));
    rows += blocks.back().rows();
  }
  RMatrix kernel;
  if (rows == 0) {
    kernel = RMatrix::Identity(m, m);
  } else {
    RMatrix raising(rows, m);
    Eigen::Index r = 0;
    for (const auto& b : blocks) {
      raising.middleRows(r, b.rows()) = b;
      r += b.rows();
    }
    Eigen::JacobiSVD<RMatrix> svd(raising, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s(k) > cut) ++rank;
    kernel = svd.matrixV().rightCols(m - rank);
  }
  const auto expected = irrep_dimension(lambda);
  if (static_cast<std::uint64_t>(kernel.cols()) != expected)
    throw NumericalError("singular_basis: kernel dimension " + std::to_string(kernel.cols()) + " != d_λ = " +
                         std::to_string(expected));
  return std::make_shared<const Subspace>(Subspace{basis, kernel.cast<cplx>()});
}

void require_distinct_positions(std::span<const cplx> z, double delta) {
  double scale = 1.0;
  for (auto x : z) scale = std::max(scale, std::abs(x));
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b)
      if (std::abs(z[a] - z[b]) < delta * scale)
        throw InvalidArgument("positions z_" + std::to_string(a + 1) + " and z_" + std::to_string(b + 1) +
                              " coincide");
}

CMatrix gaudin_weight_matrix(int a, std::span<const cplx> z, const WeightBasis& basis) {
  if (static_cast<int>(z.size()) != basis.n()) throw InvalidArgument("gaudin: z must have n entries");
  if (a < 0 || a >= basis.n()) throw InvalidArgument("gaudin: tensor position out of range");
  const auto m = static_cast<Eigen::Index>(basis.size());
  CMatrix H = CMatrix::Zero(m, m);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    const auto& word = basis.indices()[c];
    for (int b = 0; b < basis.n(); ++b) {
      if (b == a) continue;
      const cplx w = 1.0 / (z[a] - z[b]);
      if (word[a] == word[b]) {
        H(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) += w;
        continue;
      }
      auto swapped = word;
      std::swap(swapped[a], swapped[b]);
      H(static_cast<Eigen::Index>(*basis.position(swapped)), static_cast<Eigen::Index>(c)) += w;
    }
  }
  return H;
}

CMatrix gaudin_weight_matrix_reference(int a, std::span<const cplx> z, const WeightBasis& basis) {
  if (static_cast<int>(z.size()) != basis.n()) throw InvalidArgument("gaudin: z must have n entries");
  auto self = std::make_shared<const WeightBasis>(basis);
  const auto m = static_cast<Eigen::Index>(basis.size());
  CMatrix H = CMatrix::Zero(m, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    WeightVector e{self, CVector::Unit(m, c)};
    for (int b = 0; b < basis.n(); ++b) {
      if (b == a) continue;
      const cplx w = 1.0 / (z[a] - z[b]);
      for (int i = 0; i < basis.N(); ++i) {
        for (int j = 0; j < basis.N(); ++j) {
          const auto mid = apply_eij(j, i, b, e);
          if (!mid.basis) continue;
          const auto out = apply_eij(i, j, a, mid);
          if (!out.basis) continue;
          H.col(c) += w * out.coeffs;
        }
      }
    }
  }
  return H;
}

SubspaceOperator restrict_to(const CMatrix& weight_op, std::shared_ptr<const Subspace> space) {
  const CMatrix& B = space->vectors;
  const CMatrix HB = weight_op * B;
  CMatrix M = B.adjoint() * HB;
  const double scale =
      std::max({M.norm(), weight_op.norm() / std::sqrt(static_cast<double>(std::max<Eigen::Index>(1, B.rows()))),
                1e-300});
  const double defect = (HB - B * M).norm();
  if (defect > 1e-12 * scale * std::sqrt(static_cast<double>(B.rows())))
    throw NumericalError("restrict_to: subspace is not invariant (defect " + std::to_string(defect / scale) + ")");
  return {std::move(space), std::move(M)};
}

SubspaceOperator gaudin_hamiltonian(int a, std::span<const cplx> z, std::shared_ptr<const Subspace> space) {
  require_distinct_positions(z);
  const CMatrix H = gaudin_weight_matrix(a, z, *space->ambient);
  return restrict_to(H, std::move(space));
}

std::vector<SubspaceOperator> gaudin_family(std::span<const cplx> z, std::shared_ptr<const Subspace> space) {
  std::vector<SubspaceOperator> ops;
  for (int a = 0; a < static_cast<int>(z.size()); ++a) ops.push_back(gaudin_hamiltonian(a, z, space));
  return ops;
}

std::shared_ptr<const Subspace> unit_weight_space(int n) {
  return full_weight_space(weight_basis(n, n, std::vector<int>(static_cast<std::size_t>(n), 1)));
}

SubspaceOperator generalized_gaudin(int a, std::span<const cplx> z, std::span<const cplx> q,
                                    std::shared_ptr<const Subspace> space) {
  const WeightBasis& basis = *space->ambient;
  const int n = basis.n();
  if (basis.N() != n || static_cast<int>(q.size()) != n)
    throw InvalidArgument("generalized_gaudin: requires N = n and n values of q");
  if (std::any_of(basis.weight().begin(), basis.weight().end(), [](int w) { return w != 1; }))
    throw InvalidArgument("generalized_gaudin: space must lie in weight (1,...,1)");
  require_distinct_positions(z);
  CMatrix H = gaudin_weight_matrix(a, z, basis);
  for (std::size_t c = 0; c < basis.size(); ++c)
    H(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) += q[static_cast<std::size_t>(basis.indices()[c][a])];
  return restrict_to(H, std::move(space));
}

SubspaceOperator generalized_gaudin(int a, std::span<const cplx> z, std::span<const cplx> q) {
  return generalized_gaudin(a, z, q, unit_weight_space(static_cast<int>(z.size())));
}

std::vector<SubspaceOperator> generalized_gaudin_family(std::span<const cplx> z, std::span<const cplx> q,
                                                        std::shared_ptr<const Subspace> space) {
  std::vector<SubspaceOperator> ops;
  for (int a = 0; a < static_cast<int>(z.size()); ++a) ops.push_back(generalized_gaudin(a, z, q, space));
  return ops;
}

namespace {

std::vector<SpectralPoint> to_points(std::span<const cplx> z, const std::vector<SubspaceOperator>& family,
                                     const JointEigenOptions& options) {
  std::vector<CMatrix> mats;
  for (const auto& op : family) mats.push_back(op.matrix);
  std::vector<SpectralPoint> out;
  for (auto& pair : joint_eigen(mats, options))
    out.push_back({std::vector<cplx>(z.begin(), z.end()), std::move(pair.p), pair.residual});
  return out;
}

}  // namespace

std::vector<SpectralPoint> spectral_points(const Partition& lambda, std::span<const cplx> z, int N,
                                           const JointEigenOptions& options) {
  const int n = static_cast<int>(z.size());
  if (lambda.weight() != n) throw InvalidArgument("spectral_points: |λ| must equal n");
  require_distinct_positions(z);
  return to_points(z, gaudin_family(z, singular_basis(lambda, N, n)), options);
}

std::vector<SpectralPoint> generalized_spectral_points(std::span<const cplx> z, std::span<const cplx> q,
                                                       const JointEigenOptions& options) {
  const int n = static_cast<int>(z.size());
  if (static_cast<int>(q.size()) != n) throw InvalidArgument("generalized_spectral_points: q must have n entries");
  return to_points(z, generalized_gaudin_family(z, q, unit_weight_space(n)), options);
}

}  // namespace cmkz
