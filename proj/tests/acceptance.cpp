// Acceptance gate: one line per criterion, exit status 1 if any is red.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/harness.hpp"
#include "cmkz/master_function.hpp"
#include "cmkz/polynomial.hpp"
#include "cmkz/random.hpp"
#include "cmkz/tensor_gaudin.hpp"
#include "cmkz/wronski.hpp"

#ifndef CMKZ_BINARY
#error "CMKZ_BINARY must name the cmkz executable"
#endif

using namespace cmkz;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

int failures = 0;

template <class F>
void criterion(int id, const char* title, F&& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++failures;
  std::printf("[%s] %2d %s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", id, title, secs,
              out.detail.str().empty() ? "" : ": ", out.detail.str().c_str());
  std::fflush(stdout);
}

// max_a |Q_a| / (1 + ‖p‖∞)^a
double membership(std::span<const cplx> z, std::span<const cplx> p, std::span<const cplx> q = {}) {
  const auto fi = first_integrals(z, p).values;
  const auto sq = q.empty() ? std::vector<cplx>(fi.size()) : elementary_symmetric(q);
  const double scale = 1.0 + std::max(max_abs({p.begin(), p.end()}), q.empty() ? 0.0 : max_abs({q.begin(), q.end()}));
  double worst = 0.0;
  for (std::size_t a = 0; a < fi.size(); ++a)
    worst = std::max(worst, std::abs(fi[a] - sq[a]) / std::pow(scale, static_cast<double>(a + 1)));
  return worst;
}

std::vector<Partition> criterion_partitions(int n) {
  std::vector<Partition> out;
  for (const auto& lambda : enumerate_partitions(n, n))
    if (n <= 4 || lambda.length() <= 3) out.push_back(lambda);
  return out;
}

std::vector<std::vector<cplx>> p_tuples(const std::vector<SpectralPoint>& pts) {
  std::vector<std::vector<cplx>> out;
  for (const auto& s : pts) out.push_back(s.p);
  return out;
}

std::vector<std::vector<cplx>> p_tuples(const std::vector<CriticalPoint>& pts) {
  std::vector<std::vector<cplx>> out;
  for (const auto& s : pts) out.push_back(s.p);
  return out;
}

std::string str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

cplx wrap(cplx d) {
  const double two_pi = 2.0 * std::numbers::pi;
  return {d.real(), d.imag() - two_pi * std::round(d.imag() / two_pi)};
}

double fd_gradient_error(const MasterFunction& phi, const std::vector<cplx>& z, const std::vector<cplx>& t) {
  const double h = 1e-6;
  const auto gz = phi.grad_z(z, t);
  const auto gt = phi.grad_t(z, t);
  double err = 0.0;
  auto probe = [&](std::vector<cplx> zp, std::vector<cplx> zm, std::vector<cplx> tp, std::vector<cplx> tm, cplx an) {
    const cplx fd = wrap(phi.value(zp, tp) - phi.value(zm, tm)) / (2 * h);
    err = std::max(err, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  };
  for (std::size_t a = 0; a < z.size(); ++a) {
    auto zp = z, zm = z;
    zp[a] += h;
    zm[a] -= h;
    probe(zp, zm, t, t, gz[a]);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto tp = t, tm = t;
    tp[i] += h;
    tm[i] -= h;
    probe(z, z, tp, tm, gt[i]);
  }
  return err;
}

std::vector<cplx> admissible_t(const MasterFunction& phi, const std::vector<cplx>& z, Rng& rng) {
  const double bar = std::min(0.05, 0.5 * min_pairwise_distance(z));
  while (true) {
    std::vector<cplx> t(phi.num_t());
    for (auto& v : t) v = rng.in_disc(1.5);
    if (phi.min_coupled_distance(z, t) >= bar) return t;
  }
}

std::string run_capture(const std::string& args, int& status) {
  const std::string cmd = std::string(CMKZ_BINARY) + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

}  // namespace

int main() {
  Rng master(20240601);

  criterion(1, "L0 membership and counts", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c1"));
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) {
      for (const auto& lambda : criterion_partitions(n))
        for (int trial = 0; trial < 20; ++trial) {
          const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
          const auto pts = spectral_points(lambda, z, lambda.length());
          if (pts.size() != irrep_dimension(lambda))
            out.fail(lambda.to_string() + " has " + std::to_string(pts.size()) + " points");
          for (const auto& s : pts) worst = std::max(worst, membership(z, s.p));
        }
      // the weighted total needs every λ ⊢ n, so it uses one configuration
      const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
      std::uint64_t total = 0;
      for (const auto& lambda : enumerate_partitions(n, n))
        total += irrep_dimension(lambda) * spectral_points(lambda, z, lambda.length()).size();
      if (total != factorial(n)) out.fail("n=" + std::to_string(n) + " total " + std::to_string(total));
    }
    if (worst > 1e-8) out.fail("residual " + str(worst));
    out.detail << (out.pass ? "max residual " + str(worst) : "");
  });

  criterion(2, "N-independence", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c2"));
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n)
      for (const auto& lambda : criterion_partitions(n))
        for (int trial = 0; trial < 20; ++trial) {
          const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
          const int N = lambda.length();
          const auto m = match_points(p_tuples(spectral_points(lambda, z, N)),
                                      p_tuples(spectral_points(lambda, z, N + 1)), 1e-8);
          if (!m.success) out.fail(lambda.to_string() + " differs between N=" + std::to_string(N) + " and N+1");
          worst = std::max(worst, m.max_distance);
        }
    if (out.pass) out.detail << "max distance " << str(worst);
  });

  criterion(3, "closed forms for (n) and (1^n)", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c3"));
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n)
      for (int trial = 0; trial < 20; ++trial) {
        const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
        std::vector<cplx> s(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (a != b) s[a] += 1.0 / (z[a] - z[b]);
        for (double sign : {1.0, -1.0}) {
          const Partition lambda = sign > 0 ? Partition({n}) : Partition(std::vector<int>(n, 1));
          const auto pts = spectral_points(lambda, z, lambda.length());
          if (pts.size() != 1) {
            out.fail(lambda.to_string() + " is not a single point");
            continue;
          }
          for (int a = 0; a < n; ++a) worst = std::max(worst, std::abs(pts[0].p[a] - sign * s[a]));
        }
      }
    if (worst > 1e-10) out.fail("deviation " + str(worst));
    if (out.pass) out.detail << "max deviation " << str(worst);
  });

  criterion(4, "Bethe critical points", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c4"));
    double worst_grad = 0.0, worst_match = 0.0;
    for (const char* text : {"1,1", "2,1", "2,2", "3,1", "2,1,1"}) {
      const auto lambda = parse_partition(text);
      for (int trial = 0; trial < 20; ++trial) {
        const auto z = sample_generic_positions(static_cast<std::size_t>(lambda.weight()), rng);
        BetheSolveOptions opt;
        opt.seed = rng.next();
        const auto res = solve_bethe(lambda, z, opt);
        if (res.points.size() != irrep_dimension(lambda))
          out.fail(lambda.to_string() + " found " + std::to_string(res.points.size()));
        for (const auto& cp : res.points) worst_grad = std::max(worst_grad, cp.grad_norm);
        const auto m = match_points(p_tuples(res.points), p_tuples(spectral_points(lambda, z, lambda.length())), 1e-6);
        if (!m.success) out.fail(lambda.to_string() + " does not match the spectrum");
        worst_match = std::max(worst_match, m.max_distance);
        if (lambda == Partition({1, 1}) && !res.points.empty() &&
            std::abs(res.points[0].config.t[0][0] - 0.5 * (z[0] + z[1])) > 1e-12)
          out.fail("(1,1) root is not the midpoint");
      }
    }
    if (worst_grad > 1e-10) out.fail("grad norm " + str(worst_grad));
    if (out.pass) out.detail << "max grad " << str(worst_grad) << ", max distance " << str(worst_match);
  });

  criterion(5, "Lq membership of the generalized spectrum", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c5"));
    double worst = 0.0, worst_sum = 0.0;
    for (int n = 2; n <= 3; ++n)
      for (int trial = 0; trial < 20; ++trial) {
        const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
        std::vector<cplx> q;
        for (int i = 0; i < n; ++i) q.push_back(rng.complex_normal());
        const auto pts = generalized_spectral_points(z, q);
        if (pts.size() != factorial(n)) out.fail("n=" + std::to_string(n) + " has " + std::to_string(pts.size()));
        cplx s1{};
        for (auto v : q) s1 += v;
        for (const auto& s : pts) {
          worst = std::max(worst, membership(z, s.p, q));
          cplx sum{};
          for (auto v : s.p) sum += v;
          worst_sum = std::max(worst_sum, std::abs(sum - s1) / (1.0 + max_abs(s.p)));
        }
      }
    if (worst > 1e-8) out.fail("residual " + str(worst));
    if (worst_sum > 1e-10) out.fail("trace " + str(worst_sum));
    if (out.pass) out.detail << "max residual " << str(worst) << ", trace " << str(worst_sum);
  });

  criterion(6, "collision multiplicities for n = 3", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c6"));
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<cplx> dir;
      for (int i = 0; i < 3; ++i) dir.push_back(rng.complex_normal());
      const auto rep = collision_study(3, dir, rng.next());
      if (!rep.resolved) out.fail("unresolved: " + rep.note);
      std::vector<std::size_t> sizes;
      std::vector<std::vector<cplx>> centroids, limits;
      for (const auto& c : rep.clusters) {
        sizes.push_back(c.size);
        centroids.push_back(c.centroid);
        if (c.size != irrep_dimension(c.lambda)) out.fail(c.lambda.to_string() + " cluster size " + std::to_string(c.size));
        if (c.eigenspace_dim != static_cast<int>(irrep_dimension(c.lambda)))
          out.fail(c.lambda.to_string() + " eigenspace dim " + std::to_string(c.eigenspace_dim));
      }
      for (const auto& lambda : enumerate_partitions(3, 3))
        for (auto& p : p_tuples(spectral_points(lambda, rep.z, lambda.length()))) limits.push_back(p);
      std::sort(sizes.begin(), sizes.end());
      if (sizes != std::vector<std::size_t>{1, 1, 2, 2}) out.fail("cluster sizes differ from {1,2,2,1}");
      const auto m = match_points(centroids, limits, 1e-4);
      if (!m.success) out.fail("limits do not match Spec");
      worst = std::max(worst, m.max_distance);
    }
    if (out.pass) out.detail << "max limit distance " << str(worst);
  });

  criterion(7, "Wronski fiber counts", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c7"));
    double worst = 0.0;
    for (const char* text : {"2,0", "1,1", "2,1", "2,2", "3,1"}) {
      const auto lambda = parse_partition(text);
      for (int target = 0; target < 5; ++target) {
        const auto z = sample_generic_positions(static_cast<std::size_t>(lambda.weight()), rng);
        const auto sigma = elementary_symmetric(z);
        FiberOptions opt;
        opt.seed = rng.next();
        const auto res = wronski_fiber(lambda, sigma, opt);
        if (res.solutions.size() != irrep_dimension(lambda))
          out.fail(lambda.to_string() + " fiber has " + std::to_string(res.solutions.size()));
        for (std::size_t k = 0; k < res.solutions.size(); ++k) {
          const auto w = wronski_map(res.solutions[k]);
          for (std::size_t a = 0; a < sigma.size(); ++a) worst = std::max(worst, std::abs(w.W[a] - sigma[a]));
          for (std::size_t l = 0; l < k; ++l) {
            auto d = res.solutions[k].values();
            const auto e = res.solutions[l].values();
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= e[i];
            if (max_abs(d) < 1e-6) out.fail(lambda.to_string() + " repeated solution");
          }
        }
      }
    }
    if (worst > 1e-9) out.fail("W residual " + str(worst));
    if (out.pass) out.detail << "max W residual " << str(worst);
  });

  criterion(8, "operator identities", [&](Outcome& out) {
    double fla = 0.0, biv = 0.0, ann = 0.0;
    std::uint64_t seed = derive_seed(master.next(), "c8");
    for (int n = 1; n <= 5; ++n)
      for (const auto& lambda : enumerate_partitions(n, n))
        for (int k = 0; k < 100; ++k) {
          const auto x = random_poly_tuple(lambda, seed++);
          fla = std::max(fla, fla_residual(x));
          if (n <= 4) {
            ann = std::max(ann, annihilation_residual(x));
            if (k < 10) biv = std::max(biv, bivariate_identity_residual(x, seed));
          }
        }
    if (fla > 1e-10) out.fail("fla " + str(fla));
    if (biv > 1e-8) out.fail("bivariate " + str(biv));
    if (ann > 1e-12) out.fail("annihilation " + str(ann));
    if (out.pass) out.detail << "fla " << str(fla) << ", bivariate " << str(biv) << ", annihilation " << str(ann);
  });

  criterion(9, "structural invariants", [&](Outcome& out) {
    Rng rng(derive_seed(master.next(), "c9"));
    double rank = 0.0, trace = 0.0, grad = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int n = 1 + k % 6;
      const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
      std::vector<cplx> p;
      for (int a = 0; a < n; ++a) p.push_back(rng.complex_normal());
      const auto pt = xi(z, p);
      rank = std::max(rank, rank_one_residual(pt));
      const cplx h = cm_hamiltonian(z, p);
      const cplx tr = (pt.Q * pt.Q).trace();
      const auto fi = first_integrals(z, p).values;
      const cplx newton = fi[0] * fi[0] - (n > 1 ? 2.0 * fi[1] : cplx{});
      const double scale = std::max({1.0, std::abs(h), pt.Q.cwiseAbs2().sum()});
      trace = std::max({trace, std::abs(h - tr) / scale, std::abs(h - newton) / scale});
    }
    for (int k = 0; k < 100; ++k) {
      const int n = 2 + k % 4;
      const auto parts = enumerate_partitions(n, n);
      const auto& lambda = parts[static_cast<std::size_t>(k) % parts.size()];
      const auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
      const auto phi = MasterFunction::for_partition(lambda);
      grad = std::max(grad, fd_gradient_error(phi, z, admissible_t(phi, z, rng)));
      std::vector<cplx> q;
      for (int a = 0; a < n; ++a) q.push_back(rng.complex_normal());
      const auto phq = MasterFunction::for_q(q);
      grad = std::max(grad, fd_gradient_error(phq, z, admissible_t(phq, z, rng)));
    }
    if (rank > 1e-12) out.fail("rank one " + str(rank));
    if (trace > 1e-10) out.fail("trace " + str(trace));
    if (grad > 1e-5) out.fail("gradient " + str(grad));
    if (out.pass) out.detail << "rank one " << str(rank) << ", trace " << str(trace) << ", gradient " << str(grad);
  });

  criterion(10, "determinism of cmkz verify", [&](Outcome& out) {
    for (const char* args : {"verify --suite l0 --n-max 3 --trials 4 --seed 5",
                             "verify --suite bethe --n-max 3 --trials 2 --seed 6",
                             "verify --suite collision --n-max 3 --trials 1 --seed 7"}) {
      int s1 = 0, s2 = 0;
      const auto a = run_capture(args, s1);
      const auto b = run_capture(args, s2);
      if (a.empty()) out.fail(std::string("no output from ") + args);
      if (a != b) out.fail(std::string("outputs differ for ") + args);
      if (s1 != 0 || s2 != 0) out.fail(std::string("nonzero exit for ") + args);
    }
    if (out.pass) out.detail << "3 configurations reproduced byte for byte";
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
