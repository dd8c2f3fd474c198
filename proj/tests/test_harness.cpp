#include <doctest.h>

#include <algorithm>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/harness.hpp"
#include "cmkz/random.hpp"
#include "cmkz/tensor_gaudin.hpp"

using cmkz::cplx;
using cmkz::Partition;

TEST_CASE("match_points pairs identical lists") {
  const std::vector<std::vector<cplx>> a{{0.0, 1.0}, {2.0, 3.0}, {{0.0, 1.0}, 1.0}};
  const auto m = cmkz::match_points(a, a, 1e-12);
  CHECK(m.success);
  CHECK(m.a_to_b == std::vector<int>{0, 1, 2});
  CHECK(m.max_distance == 0.0);
}

TEST_CASE("match_points reports both sides when nothing is close") {
  const double tol = 1e-6;
  const std::vector<std::vector<cplx>> a{{0.0}};
  const std::vector<std::vector<cplx>> b{{2.0 * tol}};
  const auto m = cmkz::match_points(a, b, tol);
  CHECK_FALSE(m.success);
  CHECK(m.unmatched_a == std::vector<std::size_t>{0});
  CHECK(m.unmatched_b == std::vector<std::size_t>{0});
  CHECK(m.a_to_b == std::vector<int>{-1});
}

TEST_CASE("match_points recovers a noisy permutation") {
  cmkz::Rng rng(3);
  const double tol = 1e-6;
  std::vector<std::vector<cplx>> a;
  for (int k = 0; k < 12; ++k) a.push_back({rng.complex_normal(), rng.complex_normal()});
  std::vector<std::size_t> perm(a.size());
  for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = (5 * k + 3) % perm.size();
  std::vector<std::vector<cplx>> b(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    b[perm[k]] = a[k];
    for (auto& v : b[perm[k]]) v += 0.05 * tol;
  }
  const auto m = cmkz::match_points(a, b, tol);
  REQUIRE(m.success);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(m.a_to_b[k] == static_cast<int>(perm[k]));
  CHECK(m.max_distance < tol / 10);
}

TEST_CASE("match_points needs augmenting paths when greedy is wrong") {
  // greedy takes (a0, b0) first and strands a1; the perfect pairing is crossed
  const std::vector<std::vector<cplx>> a{{0.0}, {1.0}};
  const std::vector<std::vector<cplx>> b{{0.1}, {-0.5}};
  const auto m = cmkz::match_points(a, b, 0.95);
  REQUIRE(m.success);
  CHECK(m.a_to_b == std::vector<int>{1, 0});
  CHECK(m.max_distance == doctest::Approx(0.9));
}

TEST_CASE("collision study for two particles") {
  const auto rep = cmkz::collision_study(2, {{0.4, 0.2}, {-0.7, 0.5}}, 11);
  CHECK(rep.resolved);
  REQUIRE(rep.clusters.size() == 2);
  for (const auto& c : rep.clusters) {
    CHECK(c.size == 1);
    CHECK(c.eigenspace_dim == 1);
    CHECK(c.limit_distance < 1e-4);
  }
  CHECK(rep.cluster_counts.back() == 2);
}

TEST_CASE("collision study for three particles") {
  const auto rep = cmkz::collision_study(3, {{0.4, 0.2}, {-0.7, 0.5}, {0.1, -0.9}}, 12);
  CHECK(rep.resolved);
  REQUIRE(rep.clusters.size() == 4);
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& c : rep.clusters) {
    sizes.push_back(c.size);
    total += c.size;
    CHECK(c.eigenspace_dim == static_cast<int>(c.size));
    if (c.lambda == Partition({2, 1})) CHECK(c.size == 2);
    else CHECK(c.size == 1);
  }
  CHECK(total == 6);
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 1, 2, 2});
}

TEST_CASE("a perturbed spectral point leaves L0") {
  cmkz::Rng rng(19);
  const auto z = cmkz::sample_generic_positions(3, rng);
  const auto spec = cmkz::spectral_points(Partition({2, 1}), z, 2);
  REQUIRE(!spec.empty());
  CHECK(cmkz::l0_residual(spec[0].z, spec[0].p) < 1e-9);
  auto p = spec[0].p;
  p[0] += 0.1;
  CHECK(cmkz::l0_residual(spec[0].z, p) > 1e-3);
}

TEST_CASE("configuration validation") {
  cmkz::VerificationConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.suite = "nope";
  CHECK_THROWS_AS(cfg.validate(), cmkz::InvalidArgument);
  cfg.suite = "l0";
  cfg.n_min = 5;
  cfg.n_max = 3;
  CHECK_THROWS_AS(cfg.validate(), cmkz::InvalidArgument);
  cfg.n_min = 2;
  cfg.tol.eigen = 0.0;
  CHECK_THROWS_AS(cfg.validate(), cmkz::InvalidArgument);
}

TEST_CASE("config digest ignores threads but not the seed") {
  cmkz::VerificationConfig a;
  auto b = a;
  b.threads = 7;
  CHECK(a.digest() == b.digest());
  b.seed = 2;
  CHECK(a.digest() != b.digest());
}

TEST_CASE("suite runs are deterministic") {
  cmkz::VerificationConfig cfg;
  cfg.suite = "l0";
  cfg.n_max = 3;
  cfg.trials = 3;
  cfg.seed = 42;
  cfg.threads = 1;
  const auto a = cmkz::run_suite(cfg);
  cfg.threads = 3;
  const auto b = cmkz::run_suite(cfg);
  CHECK(a.pass());
  CHECK(a.to_json().dump() == b.to_json().dump());
  for (const auto& r : a.records) {
    CHECK(!r.anchor.empty());
    CHECK(r.config_digest == a.config_digest);
  }
}

TEST_CASE("every suite passes at small sizes") {
  for (const char* suite : {"l0", "lq", "bethe", "wronski", "identities", "collision"}) {
    cmkz::VerificationConfig cfg;
    cfg.suite = suite;
    cfg.n_max = 3;
    cfg.trials = 2;
    cfg.fla_samples = 5;
    cfg.structural_samples = 20;
    cfg.gradient_samples = 5;
    const auto rep = cmkz::run_suite(cfg);
    INFO(suite);
    CHECK(!rep.records.empty());
    CHECK(rep.pass());
  }
}

TEST_CASE("JSON round trips") {
  const cplx c{0.1, -1.0 / 3.0};
  CHECK(cmkz::complex_from_json(cmkz::complex_to_json(c)) == c);
  const std::vector<cplx> v{{1e-300, 2.5}, {-7.0, 1e17}};
  CHECK(cmkz::complex_vector_from_json(cmkz::complex_vector_to_json(v)) == v);
  const Partition lambda({3, 1, 1});
  CHECK(cmkz::partition_from_json(cmkz::to_json(lambda)) == lambda);

  const cmkz::SpectralPoint sp{{0.0, 1.0}, {{-1.0, 0.1}, {1.0, -0.1}}, 1e-13};
  const auto back = cmkz::spectral_point_from_json(cmkz::to_json(sp));
  CHECK(back.z == sp.z);
  CHECK(back.p == sp.p);

  const auto pt = cmkz::xi(std::vector<cplx>{0.0, 1.0}, std::vector<cplx>{-1.0, 1.0});
  const auto pt2 = cmkz::cm_point_from_json(cmkz::to_json(pt));
  CHECK(pt2.Z == pt.Z);
  CHECK(pt2.Q == pt.Q);

  const auto x = cmkz::random_poly_tuple(Partition({2, 1}), 4);
  CHECK(cmkz::poly_tuple_from_json(cmkz::to_json(x)).values() == x.values());
}

TEST_CASE("digest_values is stable and sensitive") {
  const std::vector<cplx> a{0.0, 1.0};
  CHECK(cmkz::digest_values(a) == cmkz::digest_values(a));
  CHECK(cmkz::digest_values(a) != cmkz::digest_values({0.0, std::nextafter(1.0, 2.0)}));
}
