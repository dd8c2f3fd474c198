#include <doctest.h>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/joint_eigen.hpp"
#include "cmkz/random.hpp"
#include "cmkz/tensor_gaudin.hpp"

using cmkz::cplx;
using cmkz::CMatrix;
using cmkz::Partition;

namespace {

// Dense operators on the whole of (C^N)^{⊗n}, word (w_1..w_n) at index Σ w_a N^{n−1−a}.
struct Dense {
  int N;
  int n;
  int dim() const {
    int d = 1;
    for (int a = 0; a < n; ++a) d *= N;
    return d;
  }
  std::vector<int> word(int index) const {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (int a = n - 1; a >= 0; --a) {
      w[a] = index % N;
      index /= N;
    }
    return w;
  }
  int index(const std::vector<int>& w) const {
    int k = 0;
    for (int a = 0; a < n; ++a) k = k * N + w[a];
    return k;
  }
  CMatrix swap(int a, int b) const {
    CMatrix m = CMatrix::Zero(dim(), dim());
    for (int k = 0; k < dim(); ++k) {
      auto w = word(k);
      std::swap(w[a], w[b]);
      m(index(w), k) = 1.0;
    }
    return m;
  }
  // Σ_a e_ij^{(a)}
  CMatrix total(int i, int j) const {
    CMatrix m = CMatrix::Zero(dim(), dim());
    for (int k = 0; k < dim(); ++k)
      for (int a = 0; a < n; ++a) {
        auto w = word(k);
        if (w[a] != j) continue;
        w[a] = i;
        m(index(w), k) += 1.0;
      }
    return m;
  }
  CMatrix gaudin(int a, const std::vector<cplx>& z) const {
    CMatrix m = CMatrix::Zero(dim(), dim());
    for (int b = 0; b < n; ++b)
      if (b != a) m += swap(a, b) / (z[a] - z[b]);
    return m;
  }
};

std::vector<cplx> positions(int n, std::uint64_t seed) {
  cmkz::Rng rng(seed);
  return cmkz::sample_generic_positions(static_cast<std::size_t>(n), rng);
}

// smallest singular value of the stack of (H_a − p_a) over a, relative to the operator size
double joint_kernel_gap(const std::vector<CMatrix>& ops, const std::vector<cplx>& p) {
  const auto d = ops[0].rows();
  CMatrix stacked(d * static_cast<Eigen::Index>(ops.size()), d);
  double scale = 1.0;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    stacked.middleRows(static_cast<Eigen::Index>(a) * d, d) = ops[a] - p[a] * CMatrix::Identity(d, d);
    scale = std::max(scale, ops[a].norm());
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  return svd.singularValues()(d - 1) / scale;
}

}  // namespace

TEST_CASE("weight basis enumeration") {
  const cmkz::WeightBasis b11(2, 2, {1, 1});
  CHECK(b11.indices() == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  const cmkz::WeightBasis b20(2, 2, {2, 0});
  CHECK(b20.indices() == std::vector<std::vector<int>>{{0, 0}});
  const cmkz::WeightBasis b111(3, 3, {1, 1, 1});
  CHECK(b111.size() == 6);
  CHECK(b111.position({2, 0, 1}).has_value());
  CHECK_FALSE(b111.position({0, 0, 1}).has_value());
  CHECK_THROWS(cmkz::WeightBasis(2, 2, {1, 2}));
  CHECK_THROWS(cmkz::WeightBasis(5, 6, {2, 1, 1, 1, 1}));
}

TEST_CASE("apply_eij on basis vectors") {
  auto b20 = cmkz::weight_basis(2, 2, {2, 0});
  cmkz::WeightVector v{b20, cmkz::CVector::Ones(1)};
  // e_21 in the second factor of e1⊗e1 gives e1⊗e2
  const auto w = cmkz::apply_eij(1, 0, 1, v);
  REQUIRE(w.basis);
  CHECK(w.basis->weight() == std::vector<int>{1, 1});
  const auto pos = w.basis->position({0, 1});
  REQUIRE(pos.has_value());
  CHECK(std::abs(w.coeffs(static_cast<Eigen::Index>(*pos)) - 1.0) == 0.0);
  CHECK(w.coeffs.cwiseAbs().sum() == doctest::Approx(1.0));

  auto b11 = cmkz::weight_basis(2, 2, {1, 1});
  cmkz::CVector e1e2 = cmkz::CVector::Zero(2);
  e1e2(static_cast<Eigen::Index>(*b11->position({0, 1}))) = 1.0;
  const cmkz::WeightVector u{b11, e1e2};
  // e_12 in the first factor of e1⊗e2 vanishes
  CHECK(cmkz::apply_eij(0, 1, 0, u).coeffs.norm() == 0.0);
  // e_11 in the first factor acts diagonally
  CHECK((cmkz::apply_eij(0, 0, 0, u).coeffs - e1e2).norm() == 0.0);
}

TEST_CASE("singular subspace examples") {
  auto s2 = cmkz::singular_basis(Partition({2}), 2, 2);
  CHECK(s2->dim() == 1);
  auto s11 = cmkz::singular_basis(Partition({1, 1}), 2, 2);
  REQUIRE(s11->dim() == 1);
  const auto& v = s11->vectors;
  const auto i12 = static_cast<Eigen::Index>(*s11->ambient->position({0, 1}));
  const auto i21 = static_cast<Eigen::Index>(*s11->ambient->position({1, 0}));
  CHECK(std::abs(v(i12) + v(i21)) < 1e-14);
  CHECK(std::abs(std::abs(v(i12)) - std::sqrt(0.5)) < 1e-14);
  CHECK(cmkz::singular_basis(Partition({2, 1}), 2, 3)->dim() == 2);
}

TEST_CASE("singular vectors are killed by raising operators of the dense representation") {
  for (int n = 2; n <= 4; ++n)
    for (const auto& lambda : cmkz::enumerate_partitions(n, 3)) {
      const int N = std::max(2, lambda.length());
      const Dense dense{N, n};
      const auto s = cmkz::singular_basis(lambda, N, n);
      CHECK(static_cast<std::uint64_t>(s->dim()) == cmkz::irrep_dimension(lambda));
      CHECK((s->vectors.adjoint() * s->vectors - CMatrix::Identity(s->dim(), s->dim())).norm() < 1e-12);
      // embed into the full tensor space
      CMatrix full = CMatrix::Zero(dense.dim(), s->dim());
      for (std::size_t r = 0; r < s->ambient->size(); ++r)
        full.row(dense.index(s->ambient->indices()[r])) = s->vectors.row(static_cast<Eigen::Index>(r));
      for (int k = 0; k + 1 < N; ++k) CHECK((dense.total(k, k + 1) * full).norm() < 1e-12);
      // and they are weight vectors of weight λ
      for (int k = 0; k < N; ++k) CHECK((dense.total(k, k) * full - lambda[k] * full).norm() < 1e-12);
    }
}

TEST_CASE("fast Gaudin assembly equals the term-by-term and dense constructions") {
  const auto z = positions(4, 11);
  for (auto N : {2, 3}) {
    const Dense dense{N, 4};
    for (const auto& weight : std::vector<std::vector<int>>{{2, 2, 0}, {3, 1, 0}, {2, 1, 1}}) {
      std::vector<int> w(weight.begin(), weight.begin() + N);
      int s = 0;
      for (int x : w) s += x;
      if (s != 4) continue;
      const cmkz::WeightBasis basis(N, 4, w);
      for (int a = 0; a < 4; ++a) {
        const CMatrix fast = cmkz::gaudin_weight_matrix(a, z, basis);
        const CMatrix ref = cmkz::gaudin_weight_matrix_reference(a, z, basis);
        CHECK((fast - ref).norm() < 1e-12 * (1.0 + ref.norm()));
        const CMatrix full = dense.gaudin(a, z);
        CMatrix restricted(basis.size(), basis.size());
        for (std::size_t r = 0; r < basis.size(); ++r)
          for (std::size_t c = 0; c < basis.size(); ++c)
            restricted(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                full(dense.index(basis.indices()[r]), dense.index(basis.indices()[c]));
        CHECK((fast - restricted).norm() < 1e-12 * (1.0 + full.norm()));
      }
    }
  }
}

TEST_CASE("Gaudin Hamiltonians commute, sum to zero, and commute with gl_N") {
  const auto z = positions(4, 5);
  const Dense dense{3, 4};
  std::vector<CMatrix> h;
  CMatrix sum = CMatrix::Zero(dense.dim(), dense.dim());
  for (int a = 0; a < 4; ++a) {
    h.push_back(dense.gaudin(a, z));
    sum += h.back();
  }
  CHECK(sum.norm() < 1e-12);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) CHECK((h[a] * h[b] - h[b] * h[a]).norm() < 1e-10);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const CMatrix e = dense.total(i, j);
        CHECK((h[a] * e - e * h[a]).norm() < 1e-10);
      }
  }
}

TEST_CASE("restricted Hamiltonians for n = 2") {
  const std::vector<cplx> z{{0.3, 0.1}, {-0.5, 0.7}};
  const auto h1 = cmkz::gaudin_hamiltonian(0, z, cmkz::singular_basis(Partition({2}), 2, 2));
  CHECK(std::abs(h1.matrix(0, 0) - 1.0 / (z[0] - z[1])) < 1e-14);
  const auto h2 = cmkz::gaudin_hamiltonian(1, z, h1.space);
  CHECK(std::abs(h1.matrix(0, 0) + h2.matrix(0, 0)) < 1e-14);

  const std::vector<cplx> q{{1.5, 0.0}, {-0.25, 0.5}};
  const auto space = cmkz::unit_weight_space(2);
  const auto g = cmkz::generalized_gaudin(0, z, q, space);
  const auto& words = space->ambient->indices();
  REQUIRE(words == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  CHECK(std::abs(g.matrix(0, 0) - q[0]) < 1e-14);
  CHECK(std::abs(g.matrix(1, 1) - q[1]) < 1e-14);
  CHECK(std::abs(g.matrix(0, 1) - 1.0 / (z[0] - z[1])) < 1e-14);
  CHECK(std::abs(g.matrix(1, 0) - 1.0 / (z[0] - z[1])) < 1e-14);
}

TEST_CASE("trace of the q-deformed total Hamiltonian") {
  for (int n = 2; n <= 4; ++n) {
    const auto z = positions(n, 40 + static_cast<std::uint64_t>(n));
    cmkz::Rng rng(99);
    std::vector<cplx> q;
    for (int i = 0; i < n; ++i) q.push_back(rng.complex_normal());
    cplx s1{};
    for (auto v : q) s1 += v;
    const auto space = cmkz::unit_weight_space(n);
    CMatrix total = CMatrix::Zero(space->dim(), space->dim());
    for (const auto& h : cmkz::generalized_gaudin_family(z, q, space)) total += h.matrix;
    CHECK(std::abs(total.trace() - s1 * static_cast<double>(cmkz::factorial(n))) < 1e-10);
    CHECK((total - s1 * CMatrix::Identity(space->dim(), space->dim())).norm() < 1e-10);
  }
}

TEST_CASE("joint_eigen small families") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 5.0;
  auto pairs = cmkz::joint_eigen(std::vector<CMatrix>{d});
  REQUIRE(pairs.size() == 2);
  CHECK(std::abs(pairs[0].p[0] - 3.0) < 1e-12);
  CHECK(std::abs(pairs[1].p[0] - 5.0) < 1e-12);

  pairs = cmkz::joint_eigen(std::vector<CMatrix>{CMatrix::Identity(2, 2)});
  REQUIRE(pairs.size() == 2);
  for (const auto& pr : pairs) CHECK(std::abs(pr.p[0] - 1.0) < 1e-12);

  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  CHECK_THROWS_AS(cmkz::joint_eigen(std::vector<CMatrix>{d, x}), cmkz::NumericalError);
}

TEST_CASE("joint_eigen recovers a conjugated diagonal family with degeneracies") {
  cmkz::Rng rng(3);
  const int d = 6;
  CMatrix s(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i, j) = rng.complex_normal();
  const CMatrix sinv = s.inverse();
  // the first operator is degenerate on pairs, the second separates them
  const std::vector<cplx> a{1.0, 1.0, 2.0, 2.0, 3.0, 3.0};
  const std::vector<cplx> b{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
  CMatrix da = CMatrix::Zero(d, d), db = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    da(i, i) = a[i];
    db(i, i) = b[i];
  }
  const auto pairs = cmkz::joint_eigen(std::vector<CMatrix>{s * da * sinv, s * db * sinv});
  REQUIRE(pairs.size() == 6);
  std::vector<bool> used(6, false);
  for (const auto& pr : pairs) {
    bool hit = false;
    for (int i = 0; i < d && !hit; ++i)
      if (!used[i] && std::abs(pr.p[0] - a[i]) < 1e-9 && std::abs(pr.p[1] - b[i]) < 1e-9) used[i] = hit = true;
    CHECK(hit);
    CHECK(pr.residual < 1e-9);
  }
}

TEST_CASE("spectral points are joint eigenvalues of the dense family") {
  for (int n = 2; n <= 4; ++n)
    for (const auto& lambda : cmkz::enumerate_partitions(n, 3)) {
      const auto z = positions(n, 70 + static_cast<std::uint64_t>(n));
      const int N = std::max(2, lambda.length());
      const auto pts = cmkz::spectral_points(lambda, z, lambda.length());
      CHECK(pts.size() == cmkz::irrep_dimension(lambda));
      const Dense dense{N, n};
      std::vector<CMatrix> ops;
      for (int a = 0; a < n; ++a) ops.push_back(dense.gaudin(a, z));
      for (const auto& pt : pts) {
        CHECK(joint_kernel_gap(ops, pt.p) < 1e-10);
        CHECK(cmkz::l0_residual(z, pt.p) < 1e-8);
      }
    }
}

TEST_CASE("closed-form spectra for (n) and (1^n)") {
  for (int n = 2; n <= 5; ++n) {
    const auto z = positions(n, 200 + static_cast<std::uint64_t>(n));
    std::vector<cplx> expected(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) expected[a] += 1.0 / (z[a] - z[b]);
    const auto top = cmkz::spectral_points(Partition({n}), z, 1);
    const auto bottom = cmkz::spectral_points(Partition(std::vector<int>(static_cast<std::size_t>(n), 1)), z, n);
    REQUIRE(top.size() == 1);
    REQUIRE(bottom.size() == 1);
    for (int a = 0; a < n; ++a) {
      CHECK(std::abs(top[0].p[a] - expected[a]) < 1e-10 * (1.0 + std::abs(expected[a])));
      CHECK(std::abs(bottom[0].p[a] + expected[a]) < 1e-10 * (1.0 + std::abs(expected[a])));
    }
  }
}

TEST_CASE("generalized spectrum for n = 2 matches the 2x2 closed form") {
  const std::vector<cplx> z{{0.1, 0.2}, {0.9, -0.3}};
  const std::vector<cplx> q{{0.4, 0.0}, {-0.7, 0.2}};
  const auto pts = cmkz::generalized_spectral_points(z, q);
  REQUIRE(pts.size() == 2);
  const cplx c = 1.0 / (z[0] - z[1]);
  const cplx mean = 0.5 * (q[0] + q[1]);
  const cplx disc = std::sqrt(0.25 * (q[0] - q[1]) * (q[0] - q[1]) + c * c);
  std::vector<cplx> p1{mean + disc, mean - disc};
  for (const auto& pt : pts) {
    CHECK(std::abs(pt.p[0] + pt.p[1] - (q[0] + q[1])) < 1e-12);
    const double d = std::min(std::abs(pt.p[0] - p1[0]), std::abs(pt.p[0] - p1[1]));
    CHECK(d < 1e-12);
  }
}

TEST_CASE("coincident positions are rejected") {
  const std::vector<cplx> z{0.0, 0.0, 1.0};
  CHECK_THROWS_AS(cmkz::spectral_points(Partition({2, 1}), z, 2), cmkz::InvalidArgument);
}
