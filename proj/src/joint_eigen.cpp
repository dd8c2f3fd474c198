#include "cmkz/joint_eigen.hpp"

#include <algorithm>
#include <numeric>

#include "cmkz/random.hpp"

namespace cmkz {

double max_commutator(std::span<const CMatrix> ops) {
  double max_norm = 0.0;
  for (const auto& h : ops) max_norm = std::max(max_norm, h.norm());
  if (max_norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t b = a + 1; b < ops.size(); ++b)
      worst = std::max(worst, (ops[a] * ops[b] - ops[b] * ops[a]).norm());
  return worst / (max_norm * max_norm);
}

namespace {

constexpr int kMaxDepth = 6;

bool lex_less_tuple(const JointEigenpair& x, const JointEigenpair& y) {
  for (std::size_t a = 0; a < x.p.size(); ++a) {
    if (x.p[a] == y.p[a]) continue;
    return lex_less(x.p[a], y.p[a]);
  }
  return false;
}

double pair_residual(std::span<const CMatrix> ops, const std::vector<double>& scale, const CVector& v,
                     const std::vector<cplx>& p) {
  double worst = 0.0;
  const double vn = v.norm();
  for (std::size_t a = 0; a < ops.size(); ++a)
    worst = std::max(worst, (ops[a] * v - p[a] * v).norm() / (scale[a] * vn));
  return worst;
}

std::vector<std::vector<Eigen::Index>> cluster_eigenvalues(const CVector& mu, double cutoff) {
  const Eigen::Index m = mu.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      if (std::abs(mu(i) - mu(j)) <= cutoff) parent[find(j)] = find(i);
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(m), -1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

std::vector<JointEigenpair> solve(std::span<const CMatrix> ops, Rng& rng, int depth,
                                  const JointEigenOptions& opt) {
  const Eigen::Index m = ops.front().rows();
  std::vector<double> scale(ops.size());
  for (std::size_t a = 0; a < ops.size(); ++a) scale[a] = 1.0 + ops[a].norm();

  // scalar family: every vector is a joint eigenvector
  bool scalar = true;
  std::vector<cplx> diag_p(ops.size());
  for (std::size_t a = 0; a < ops.size() && scalar; ++a) {
    diag_p[a] = ops[a].trace() / static_cast<double>(m);
    const CMatrix dev = ops[a] - diag_p[a] * CMatrix::Identity(m, m);
    scalar = dev.norm() <= opt.tol * scale[a];
  }
  if (scalar) {
    std::vector<JointEigenpair> out;
    for (Eigen::Index k = 0; k < m; ++k) {
      CVector e = CVector::Unit(m, k);
      out.push_back({diag_p, e, pair_residual(ops, scale, e, diag_p)});
    }
    return out;
  }
  if (depth >= kMaxDepth) throw NumericalError("joint_eigen: degenerate refinement did not terminate");

  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    CMatrix probe = CMatrix::Zero(m, m);
    for (std::size_t a = 0; a < ops.size(); ++a) probe += (rng.complex_normal() / scale[a]) * ops[a];

    Eigen::ComplexEigenSolver<CMatrix> es(probe, true);
    if (es.info() != Eigen::Success) continue;
    const CVector mu = es.eigenvalues();
    const double cutoff = opt.cluster_tol * (1.0 + mu.cwiseAbs().maxCoeff());
    const auto groups = cluster_eigenvalues(mu, cutoff);

    // Columns: eigenvectors for simple eigenvalues, an orthonormal basis of
    // the invariant subspace for each degenerate cluster.
    CMatrix T(m, m);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // (start, size)
    Eigen::Index col = 0;
    for (const auto& g : groups) {
      const auto size = static_cast<Eigen::Index>(g.size());
      if (size == 1) {
        T.col(col) = es.eigenvectors().col(g.front()).normalized();
      } else {
        cplx centre{};
        for (auto k : g) centre += mu(k);
        centre /= static_cast<double>(size);
        const CMatrix shifted = probe - centre * CMatrix::Identity(m, m);
        Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
        T.middleCols(col, size) = svd.matrixV().rightCols(size);
      }
      blocks.emplace_back(col, size);
      col += size;
    }
    Eigen::FullPivLU<CMatrix> lu(T);
    if (!lu.isInvertible()) continue;
    const CMatrix Tinv = lu.inverse();

    std::vector<JointEigenpair> out;
    bool failed = false;
    for (const auto& [start, size] : blocks) {
      if (size == 1) {
        const CVector v = T.col(start);
        std::vector<cplx> p(ops.size());
        for (std::size_t a = 0; a < ops.size(); ++a)
          p[a] = (Tinv.row(start) * ops[a] * v)(0, 0) / (Tinv.row(start) * v)(0, 0);
        out.push_back({p, v, 0.0});
        continue;
      }
      std::vector<CMatrix> reduced;
      for (const auto& h : ops) reduced.push_back(Tinv.middleRows(start, size) * h * T.middleCols(start, size));
      try {
        for (auto& pair : solve(reduced, rng, depth + 1, opt)) {
          pair.vector = (T.middleCols(start, size) * pair.vector).normalized();
          out.push_back(std::move(pair));
        }
      } catch (const NumericalError&) {
        failed = true;
        break;
      }
    }
    if (failed) continue;

    double worst = 0.0;
    for (auto& pair : out) {
      pair.residual = pair_residual(ops, scale, pair.vector, pair.p);
      worst = std::max(worst, pair.residual);
    }
    if (worst <= opt.tol) return out;
  }
  throw NumericalError("joint_eigen: no probe certified all joint eigenvectors (ill-conditioned or defective family)");
}

}  // namespace

std::vector<JointEigenpair> joint_eigen(std::span<const CMatrix> ops, const JointEigenOptions& options) {
  if (ops.empty()) throw InvalidArgument("joint_eigen: empty operator family");
  const Eigen::Index m = ops.front().rows();
  for (const auto& h : ops)
    if (h.rows() != m || h.cols() != m) throw InvalidArgument("joint_eigen: operators must be square and of equal size");
  if (m == 0) return {};
  const double comm = max_commutator(ops);
  if (comm > options.commute_tol)
    throw NumericalError("joint_eigen: operators do not commute (relative commutator " + std::to_string(comm) + ")");

  Rng rng(options.seed);
  auto out = solve(ops, rng, 0, options);
  std::stable_sort(out.begin(), out.end(), lex_less_tuple);
  return out;
}

}  // namespace cmkz
