#include "cmkz/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <thread>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/master_function.hpp"
#include "cmkz/polynomial.hpp"
#include "cmkz/random.hpp"
#include "cmkz/tensor_gaudin.hpp"
#include "cmkz/wronski.hpp"

namespace cmkz {

// ------------------------------------------------------------- digests

namespace {

class Digest {
 public:
  void add(double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x);
    for (int k = 0; k < 8; ++k) mix(static_cast<unsigned char>(bits >> (8 * k)));
  }
  void add(cplx c) {
    add(c.real());
    add(c.imag());
  }
  void add(const std::vector<cplx>& v) {
    add(static_cast<double>(v.size()));
    for (auto c : v) add(c);
  }
  void add(std::string_view s) {
    for (char ch : s) mix(static_cast<unsigned char>(ch));
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  void mix(unsigned char b) {
    h_ ^= b;
    h_ *= 0x100000001b3ULL;
  }
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

double inf_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<std::vector<cplx>> momenta(const std::vector<SpectralPoint>& pts) {
  std::vector<std::vector<cplx>> out;
  for (const auto& pt : pts) out.push_back(pt.p);
  return out;
}

}  // namespace

std::string digest_values(const std::vector<cplx>& values) {
  Digest d;
  d.add(values);
  return d.hex();
}

// ------------------------------------------------------------- matching

namespace {

bool augment(std::size_t i, const std::vector<std::vector<std::size_t>>& adj, std::vector<int>& b_to_a,
             std::vector<bool>& seen) {
  for (auto j : adj[i]) {
    if (seen[j]) continue;
    seen[j] = true;
    if (b_to_a[j] < 0 || augment(static_cast<std::size_t>(b_to_a[j]), adj, b_to_a, seen)) {
      b_to_a[j] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

}  // namespace

Matching match_points(const std::vector<std::vector<cplx>>& a, const std::vector<std::vector<cplx>>& b, double tol) {
  Matching m;
  m.a_to_b.assign(a.size(), -1);
  std::vector<int> b_to_a(b.size(), -1);
  // candidate lists sorted nearest first, so the first augmenting pass is the greedy one
  std::vector<std::vector<std::size_t>> adj(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> c;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = inf_distance(a[i], b[j]);
      if (d <= tol) c.emplace_back(d, j);
    }
    std::sort(c.begin(), c.end());
    for (auto& [d, j] : c) adj[i].push_back(j);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (auto j : adj[i])
      if (b_to_a[j] < 0) {
        b_to_a[j] = static_cast<int>(i);
        break;
      }
  std::vector<bool> matched_a(a.size(), false);
  for (auto i : b_to_a)
    if (i >= 0) matched_a[static_cast<std::size_t>(i)] = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (matched_a[i]) continue;
    std::vector<bool> seen(b.size(), false);
    augment(i, adj, b_to_a, seen);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b_to_a[j] < 0) {
      m.unmatched_b.push_back(j);
      continue;
    }
    const auto i = static_cast<std::size_t>(b_to_a[j]);
    m.a_to_b[i] = static_cast<int>(j);
    m.max_distance = std::max(m.max_distance, inf_distance(a[i], b[j]));
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (m.a_to_b[i] < 0) m.unmatched_a.push_back(i);
  m.success = m.unmatched_a.empty() && m.unmatched_b.empty();
  return m;
}

Matching match_points(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b, double tol) {
  return match_points(momenta(a), momenta(b), tol);
}

// ------------------------------------------------------------- collisions

namespace {

// single linkage: connected components of the graph with edges below cutoff
std::vector<std::vector<std::size_t>> single_linkage(const std::vector<std::vector<cplx>>& pts, double cutoff) {
  std::vector<std::size_t> parent(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (inf_distance(pts[i], pts[j]) <= cutoff) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<int> label(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto r = find(i);
    if (label[r] < 0) {
      label[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(label[r])].push_back(i);
  }
  return groups;
}

int joint_eigenspace_dim(const std::vector<SubspaceOperator>& ops, const std::vector<cplx>& p, double rank_tol) {
  const auto d = ops.front().matrix.rows();
  CMatrix stacked(d * static_cast<Eigen::Index>(ops.size()), d);
  double scale = 1.0;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    stacked.middleRows(static_cast<Eigen::Index>(a) * d, d) =
        ops[a].matrix - p[a] * CMatrix::Identity(d, d);
    scale = std::max(scale, ops[a].matrix.cwiseAbs().maxCoeff());
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const auto& s = svd.singularValues();
  int nullity = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) <= rank_tol * scale) ++nullity;
  return nullity;
}

}  // namespace

CollisionReport collision_study(int n, const std::vector<cplx>& q_direction, std::uint64_t seed,
                                const CollisionOptions& options) {
  if (n < 1 || n > 4) throw InvalidArgument("collision_study: requires 1 <= n <= 4");
  if (static_cast<int>(q_direction.size()) != n) throw InvalidArgument("collision_study: q must have n entries");
  if (min_pairwise_distance(q_direction) == 0.0) throw InvalidArgument("collision_study: q entries must be distinct");
  if (options.scales.empty()) throw InvalidArgument("collision_study: no scales");

  CollisionReport report;
  report.n = n;
  report.q_direction = q_direction;
  Rng rng(seed);
  report.z = sample_generic_positions(static_cast<std::size_t>(n), rng);

  std::vector<std::vector<cplx>> last;
  double last_cutoff = 0.0;
  for (double s : options.scales) {
    std::vector<cplx> q(q_direction);
    for (auto& v : q) v *= s;
    last = momenta(generalized_spectral_points(report.z, q));
    last_cutoff = options.cutoff_factor * std::pow(s, options.cutoff_exponent);
    report.cluster_counts.push_back(single_linkage(last, last_cutoff).size());
  }

  // q = 0 targets: the union of Spec_λ over λ ⊢ n
  std::vector<std::vector<cplx>> targets;
  std::vector<Partition> target_lambda;
  for (const auto& lambda : enumerate_partitions(n, n))
    for (const auto& pt : spectral_points(lambda, report.z, std::max(1, lambda.length()))) {
      targets.push_back(pt.p);
      target_lambda.push_back(lambda);
    }
  const std::vector<cplx> zero(static_cast<std::size_t>(n), 0.0);
  const auto ops0 = generalized_gaudin_family(report.z, zero, unit_weight_space(n));

  const auto groups = single_linkage(last, last_cutoff);
  report.resolved = true;
  std::vector<std::vector<cplx>> centroids;
  for (const auto& g : groups) {
    std::vector<cplx> c(static_cast<std::size_t>(n), 0.0);
    for (auto i : g)
      for (int a = 0; a < n; ++a) c[a] += last[i][a];
    for (auto& v : c) v /= static_cast<double>(g.size());
    centroids.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < centroids.size(); ++i)
    for (std::size_t j = i + 1; j < centroids.size(); ++j)
      if (inf_distance(centroids[i], centroids[j]) <= 10.0 * last_cutoff) {
        report.resolved = false;
        report.note = "clusters overlap at the smallest scale";
      }

  const Matching m = match_points(centroids, targets, options.match_tol);
  for (std::size_t k = 0; k < groups.size(); ++k) {
    CollisionCluster cl;
    cl.centroid = centroids[k];
    cl.size = groups[k].size();
    if (m.a_to_b[k] >= 0) {
      const auto j = static_cast<std::size_t>(m.a_to_b[k]);
      cl.lambda = target_lambda[j];
      cl.limit_distance = inf_distance(centroids[k], targets[j]);
      cl.eigenspace_dim = joint_eigenspace_dim(ops0, targets[j], options.rank_tol);
    } else {
      report.resolved = false;
      cl.limit_distance = std::numeric_limits<double>::infinity();
      if (report.note.empty()) report.note = "cluster without a matching q = 0 spectral point";
    }
    report.clusters.push_back(std::move(cl));
  }
  if (!m.unmatched_b.empty() && report.note.empty()) {
    report.resolved = false;
    report.note = "q = 0 spectral point without a cluster";
  }
  return report;
}

Json to_json(const CollisionReport& report) {
  Json clusters = Json::array();
  for (const auto& c : report.clusters) {
    clusters.push_back({{"lambda", c.lambda.weight() ? to_json(c.lambda) : Json(nullptr)},
                        {"centroid", complex_vector_to_json(c.centroid)},
                        {"size", c.size},
                        {"limit_distance", std::isfinite(c.limit_distance) ? Json(c.limit_distance) : Json(nullptr)},
                        {"eigenspace_dim", c.eigenspace_dim}});
  }
  return {{"n", report.n},
          {"z", complex_vector_to_json(report.z)},
          {"q_direction", complex_vector_to_json(report.q_direction)},
          {"cluster_counts", report.cluster_counts},
          {"clusters", clusters},
          {"resolved", report.resolved},
          {"note", report.note}};
}

// ------------------------------------------------------------- config and report

namespace {

const std::vector<std::string> kSuites{"l0", "lq", "bethe", "wronski", "identities", "collision"};

}  // namespace

void VerificationConfig::validate() const {
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
    throw InvalidArgument("unknown suite '" + suite + "'");
  if (n_min < 1 || n_max < n_min) throw InvalidArgument("empty n range");
  if (n_max > 8) throw InvalidArgument("n-max above 8 is out of reach");
  if (trials < 1) throw InvalidArgument("trials must be positive");
  if (fla_samples < 1 || structural_samples < 1 || gradient_samples < 1)
    throw InvalidArgument("sample sizes must be positive");
  for (double t : {tol.eigen, tol.bethe, tol.residual, tol.match})
    if (!(t > 0.0)) throw InvalidArgument("tolerances must be positive");
  if (collision.scales.empty()) throw InvalidArgument("collision scales must be nonempty");
  for (double s : collision.scales)
    if (!(s > 0.0)) throw InvalidArgument("collision scales must be positive");
  if (!(check_timeout_seconds > 0.0)) throw InvalidArgument("timeout must be positive");
}

Json VerificationConfig::to_json() const {
  Json parts = Json::array();
  for (const auto& p : partitions) parts.push_back(cmkz::to_json(p));
  return {{"suite", suite},
          {"n_min", n_min},
          {"n_max", n_max},
          {"trials", trials},
          {"seed", seed},
          {"partitions", parts},
          {"tolerances",
           {{"eigen", tol.eigen}, {"bethe", tol.bethe}, {"residual", tol.residual}, {"match", tol.match}}},
          {"collision",
           {{"scales", collision.scales},
            {"cutoff_factor", collision.cutoff_factor},
            {"cutoff_exponent", collision.cutoff_exponent},
            {"match_tol", collision.match_tol},
            {"rank_tol", collision.rank_tol}}},
          {"fla_samples", fla_samples},
          {"structural_samples", structural_samples},
          {"gradient_samples", gradient_samples}};
}

std::string VerificationConfig::digest() const {
  Digest d;
  d.add(to_json().dump());
  return d.hex();
}

bool Report::pass() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

Json to_json(const CheckRecord& r) {
  Json residuals = Json::object();
  for (const auto& [k, v] : r.residuals) residuals[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  Json j{{"id", r.id},
         {"anchor", r.anchor},
         {"inputs_digest", r.inputs_digest},
         {"residuals", residuals},
         {"expected", r.expected},
         {"found", r.found},
         {"pass", r.pass},
         {"seed", r.seed},
         {"config_digest", r.config_digest}};
  if (r.timed_out) j["timed_out"] = true;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json Report::to_json() const {
  Json recs = Json::array();
  std::size_t failed = 0;
  for (const auto& r : records) {
    recs.push_back(cmkz::to_json(r));
    if (!r.pass) ++failed;
  }
  return {{"suite", suite},
          {"seed", seed},
          {"config_digest", config_digest},
          {"config", config},
          {"pass", pass()},
          {"summary", {{"checks", records.size()}, {"failed", failed}}},
          {"records", recs}};
}

// ------------------------------------------------------------- checks

namespace {

using Clock = std::chrono::steady_clock;

class Context {
 public:
  Context(CheckRecord& record, Clock::time_point deadline) : record_(record), deadline_(deadline) {}

  std::uint64_t seed() const { return record_.seed; }
  std::uint64_t trial_seed(int trial) const { return derive_seed(record_.seed, std::to_string(trial)); }

  /// Keeps the worst value seen under `name`.
  void residual(const std::string& name, double value) {
    auto [it, inserted] = record_.residuals.emplace(name, value);
    if (!inserted && !(it->second >= value)) it->second = value;
  }
  void fail(const std::string& why) {
    ok_ = false;
    if (record_.note.empty()) record_.note = why;
  }
  void require(bool condition, const std::string& why) {
    if (!condition) fail(why);
  }
  void expect_count(std::uint64_t expected, std::uint64_t found, const std::string& what) {
    record_.expected += expected;
    record_.found += found;
    if (expected != found)
      fail(what + ": expected " + std::to_string(expected) + ", found " + std::to_string(found));
  }
  void within(const std::string& name, double value, double tol) {
    residual(name, value);
    if (!(value <= tol)) fail(name + " above tolerance");
  }
  Digest& inputs() { return inputs_; }

  /// Cooperative deadline, polled between trials.
  bool expired() {
    if (Clock::now() <= deadline_) return false;
    record_.timed_out = true;
    fail("timed out");
    return true;
  }
  bool ok() const { return ok_; }

 private:
  CheckRecord& record_;
  Clock::time_point deadline_;
  Digest inputs_;
  bool ok_ = true;
};

struct Check {
  std::string id;
  std::string anchor;
  std::function<void(Context&)> run;
};

std::vector<Partition> partitions_for(const VerificationConfig& cfg, int n, int max_parts) {
  std::vector<Partition> out;
  if (cfg.partitions.empty()) return enumerate_partitions(n, max_parts);
  for (const auto& p : cfg.partitions)
    if (p.weight() == n) out.push_back(p);
  return out;
}

int parts_of(const Partition& lambda) { return std::max(1, lambda.length()); }

std::vector<cplx> random_positions(Context& ctx, Rng& rng, int n) {
  auto z = sample_generic_positions(static_cast<std::size_t>(n), rng);
  ctx.inputs().add(z);
  return z;
}

std::vector<cplx> random_q(Context& ctx, Rng& rng, int n) {
  std::vector<cplx> q;
  while (true) {
    q.clear();
    for (int i = 0; i < n; ++i) q.push_back(rng.in_disc(1.0));
    if (min_pairwise_distance(q) >= 0.05) break;
  }
  ctx.inputs().add(q);
  return q;
}

// max_a |Q_a − c_a| / (1 + scale)^a
double level_residual(std::span<const cplx> z, std::span<const cplx> p, const std::vector<cplx>& c, double scale) {
  const auto Q = first_integrals(z, p).values;
  double r = 0.0;
  for (std::size_t a = 0; a < Q.size(); ++a)
    r = std::max(r, std::abs(Q[a] - (a < c.size() ? c[a] : cplx{})) / std::pow(1.0 + scale, a + 1.0));
  return r;
}

std::vector<cplx> sum_sigma(std::span<const cplx> q) { return elementary_symmetric(q); }

JointEigenOptions eigen_options(const VerificationConfig& cfg) {
  JointEigenOptions o;
  o.tol = cfg.tol.eigen;
  return o;
}

// ---- l0

void add_l0_checks(const VerificationConfig& cfg, std::vector<Check>& checks) {
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const int max_parts = n <= 4 ? n : 3;
    for (const auto& lambda : partitions_for(cfg, n, max_parts)) {
      const auto name = lambda.to_string();
      checks.push_back({"l0.membership" + name, "joint Gaudin spectrum on Sing[λ] lies in L_0, d_λ points",
                        [cfg, lambda, n](Context& ctx) {
                          const auto d = irrep_dimension(lambda);
                          for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
                            Rng rng(ctx.trial_seed(trial));
                            const auto z = random_positions(ctx, rng, n);
                            const auto pts = spectral_points(lambda, z, parts_of(lambda), eigen_options(cfg));
                            ctx.expect_count(d, pts.size(), "spectral points");
                            for (const auto& pt : pts) {
                              ctx.within("Q", level_residual(z, pt.p, {}, max_abs(pt.p)), cfg.tol.residual);
                              ctx.residual("eigen", pt.residual);
                            }
                          }
                        }});
      checks.push_back({"l0.n_independence" + name, "Spec_λ does not depend on N",
                        [cfg, lambda, n](Context& ctx) {
                          for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
                            Rng rng(ctx.trial_seed(trial));
                            const auto z = random_positions(ctx, rng, n);
                            const int N = parts_of(lambda);
                            const auto a = spectral_points(lambda, z, N, eigen_options(cfg));
                            const auto b = spectral_points(lambda, z, N + 1, eigen_options(cfg));
                            const auto m = match_points(a, b, cfg.tol.residual);
                            ctx.residual("match", m.success ? m.max_distance : std::numeric_limits<double>::infinity());
                            ctx.require(m.success, "spectra for N and N+1 differ");
                          }
                        }});
    }
    if (n <= 5) {
      checks.push_back({"l0.total_count(n=" + std::to_string(n) + ")", "Σ_λ d_λ·#Spec_λ = n!",
                        [cfg, n](Context& ctx) {
                          Rng rng(ctx.trial_seed(0));
                          const auto z = random_positions(ctx, rng, n);
                          std::uint64_t total = 0;
                          for (const auto& lambda : enumerate_partitions(n, n))
                            total += irrep_dimension(lambda) *
                                     spectral_points(lambda, z, parts_of(lambda), eigen_options(cfg)).size();
                          ctx.expect_count(factorial(n), total, "weighted count");
                        }});
    }
    for (int sign : {1, -1}) {
      const Partition lambda = sign > 0 ? Partition({n}) : Partition(std::vector<int>(static_cast<std::size_t>(n), 1));
      if (n == 1 && sign < 0) continue;
      checks.push_back({"l0.closed_form" + lambda.to_string(), "p_a = ±Σ_{b≠a} 1/(z_a − z_b) for λ = (n), (1^n)",
                        [cfg, lambda, n, sign](Context& ctx) {
                          for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
                            Rng rng(ctx.trial_seed(trial));
                            const auto z = random_positions(ctx, rng, n);
                            const auto pts = spectral_points(lambda, z, parts_of(lambda), eigen_options(cfg));
                            ctx.expect_count(1, pts.size(), "spectral points");
                            if (pts.size() != 1) continue;
                            std::vector<cplx> exact(static_cast<std::size_t>(n), 0.0);
                            for (int a = 0; a < n; ++a)
                              for (int b = 0; b < n; ++b)
                                if (a != b) exact[a] += static_cast<double>(sign) / (z[a] - z[b]);
                            ctx.within("closed_form", inf_distance(pts[0].p, exact) / std::max(1.0, max_abs(exact)),
                                       1e-10);
                          }
                        }});
    }
  }
}

// ---- lq

void add_lq_checks(const VerificationConfig& cfg, std::vector<Check>& checks) {
  for (int n = cfg.n_min; n <= std::min(cfg.n_max, 4); ++n) {
    checks.push_back({"lq.membership(n=" + std::to_string(n) + ")",
                      "joint spectrum of H_a(z, q) lies in L_q, n! points, Σp = σ_1(q)", [cfg, n](Context& ctx) {
                        for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
                          Rng rng(ctx.trial_seed(trial));
                          const auto z = random_positions(ctx, rng, n);
                          const auto q = random_q(ctx, rng, n);
                          const auto pts = generalized_spectral_points(z, q, eigen_options(cfg));
                          ctx.expect_count(factorial(n), pts.size(), "spectral points");
                          const auto sigma = sum_sigma(q);
                          for (const auto& pt : pts) {
                            const double scale = std::max(max_abs(pt.p), max_abs(q));
                            ctx.within("Q", level_residual(z, pt.p, sigma, scale), cfg.tol.residual);
                            cplx s{};
                            for (auto v : pt.p) s += v;
                            ctx.within("trace", std::abs(s - sigma[0]) / std::max(1.0, max_abs(pt.p)), 1e-10);
                            ctx.residual("eigen", pt.residual);
                          }
                        }
                      }});
  }
}

// ---- bethe

void add_bethe_checks(const VerificationConfig& cfg, std::vector<Check>& checks) {
  for (int n = std::max(cfg.n_min, 2); n <= cfg.n_max; ++n) {
    for (const auto& lambda : partitions_for(cfg, n, n)) {
      if (lambda.length() < 2) continue;
      checks.push_back(
          {"bethe.critical_points" + lambda.to_string(),
           "critical points of Φ_λ: d_λ of them, p = ∂Φ/∂z reproduces Spec_λ", [cfg, lambda, n](Context& ctx) {
             for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
               Rng rng(ctx.trial_seed(trial));
               const auto z = random_positions(ctx, rng, n);
               BetheSolveOptions opt;
               opt.tol = cfg.tol.bethe;
               opt.seed = derive_seed(ctx.trial_seed(trial), "starts");
               const auto res = solve_bethe(lambda, z, opt);
               ctx.expect_count(res.expected, res.points.size(), "critical points");
               std::vector<std::vector<cplx>> ps;
               for (const auto& cp : res.points) {
                 ctx.within("grad_norm", cp.grad_norm, 1e-10);
                 cplx s{};
                 for (auto v : cp.p) s += v;
                 ctx.within("sum_p", std::abs(s) / std::max(1.0, max_abs(cp.p)), 1e-10);
                 ps.push_back(cp.p);
               }
               const auto spec = spectral_points(lambda, z, parts_of(lambda), eigen_options(cfg));
               const auto m = match_points(ps, momenta(spec), cfg.tol.match);
               ctx.residual("match", m.success ? m.max_distance : std::numeric_limits<double>::infinity());
               ctx.require(m.success, "critical-point momenta do not match Spec_λ");
               if (lambda == Partition({1, 1}) && res.points.size() == 1) {
                 const cplx t = res.points[0].config.t.at(0).at(0);
                 const cplx mid = 0.5 * (z[0] + z[1]);
                 ctx.within("midpoint", std::abs(t - mid) / std::max(1.0, std::abs(mid)), 1e-12);
               }
             }
           }});
    }
    if (n <= 3) {
      checks.push_back({"bethe.q_critical_points(n=" + std::to_string(n) + ")",
                        "critical points of Φ_q: n! of them, p reproduces the spectrum of H_a(z, q)",
                        [cfg, n](Context& ctx) {
                          for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
                            Rng rng(ctx.trial_seed(trial));
                            const auto z = random_positions(ctx, rng, n);
                            const auto q = random_q(ctx, rng, n);
                            BetheSolveOptions opt;
                            opt.tol = cfg.tol.bethe;
                            opt.seed = derive_seed(ctx.trial_seed(trial), "starts");
                            const auto res = solve_bethe_q(q, z, opt);
                            ctx.expect_count(res.expected, res.points.size(), "critical points");
                            std::vector<std::vector<cplx>> ps;
                            const cplx s1 = sum_sigma(q)[0];
                            for (const auto& cp : res.points) {
                              ctx.within("grad_norm", cp.grad_norm, 1e-10);
                              cplx s{};
                              for (auto v : cp.p) s += v;
                              ctx.within("sum_p", std::abs(s - s1) / std::max(1.0, max_abs(cp.p)), 1e-10);
                              ps.push_back(cp.p);
                            }
                            const auto spec = generalized_spectral_points(z, q, eigen_options(cfg));
                            const auto m = match_points(ps, momenta(spec), cfg.tol.match);
                            ctx.residual("match",
                                         m.success ? m.max_distance : std::numeric_limits<double>::infinity());
                            ctx.require(m.success, "critical-point momenta do not match the q-spectrum");
                          }
                        }});
    }
  }
}

// ---- wronski

void add_wronski_checks(const VerificationConfig& cfg, std::vector<Check>& checks) {
  for (int n = std::max(cfg.n_min, 2); n <= cfg.n_max; ++n) {
    for (const auto& lambda : partitions_for(cfg, n, n)) {
      checks.push_back(
          {"wronski.fiber" + lambda.to_string(),
           "Wronski map on X_λ has degree d_λ and ψ maps the fiber onto Spec_λ", [cfg, lambda, n](Context& ctx) {
             const int targets = std::min(cfg.trials, 5);
             for (int trial = 0; trial < targets && !ctx.expired(); ++trial) {
               Rng rng(ctx.trial_seed(trial));
               auto roots = random_positions(ctx, rng, n);
               std::sort(roots.begin(), roots.end(), lex_less);
               const auto sigma = elementary_symmetric(roots);
               FiberOptions opt;
               opt.seed = derive_seed(ctx.trial_seed(trial), "starts");
               const auto res = wronski_fiber(lambda, sigma, opt);
               ctx.expect_count(res.expected, res.solutions.size(), "fiber points");
               std::vector<std::vector<cplx>> ps;
               for (std::size_t k = 0; k < res.solutions.size(); ++k) {
                 ctx.within("W", res.residuals[k], 1e-9);
                 const auto pt = psi(res.solutions[k]);
                 ctx.within("psi_z", inf_distance(pt.z, roots), cfg.tol.match);
                 ps.push_back(pt.p);
               }
               const auto spec = spectral_points(lambda, roots, parts_of(lambda), eigen_options(cfg));
               const auto m = match_points(ps, momenta(spec), cfg.tol.match);
               ctx.residual("psi_match", m.success ? m.max_distance : std::numeric_limits<double>::infinity());
               ctx.require(m.success, "ψ of the fiber does not match Spec_λ");
             }
           }});
    }
  }
}

// ---- identities

QuasiExpTuple random_quasi_tuple(Context& ctx, Rng& rng, int n) {
  QuasiExpTuple x;
  x.q = random_q(ctx, rng, n);
  for (int i = 0; i < n; ++i) x.f.push_back(rng.complex_normal());
  ctx.inputs().add(x.f);
  return x;
}

// Φ is defined modulo 2πi
cplx wrapped(cplx d) {
  const double two_pi = 2.0 * std::numbers::pi;
  return {d.real(), d.imag() - two_pi * std::round(d.imag() / two_pi)};
}

// central differences of Φ against its analytic gradient, relative to max(1, |∂Φ|)
double gradient_error(const MasterFunction& phi, const std::vector<cplx>& z, const std::vector<cplx>& t) {
  constexpr double h = 1e-6;
  const auto gz = phi.grad_z(z, t);
  const auto gt = phi.grad_t(z, t);
  double err = 0.0;
  auto diff = [&](std::vector<cplx> zp, std::vector<cplx> tp, std::vector<cplx> zm, std::vector<cplx> tm,
                  cplx analytic) {
    const cplx fd = wrapped(phi.value(zp, tp) - phi.value(zm, tm)) / (2.0 * h);
    err = std::max(err, std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)));
  };
  for (std::size_t a = 0; a < z.size(); ++a) {
    auto zp = z, zm = z;
    zp[a] += h;
    zm[a] -= h;
    diff(zp, t, zm, t, gz[a]);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto tp = t, tm = t;
    tp[i] += h;
    tm[i] -= h;
    diff(z, tp, z, tm, gt[i]);
  }
  return err;
}

std::vector<cplx> random_admissible_t(const MasterFunction& phi, const std::vector<cplx>& z, Rng& rng) {
  // z–z pairs count as couplings too, so the bar cannot exceed their spacing
  const double bar = std::min(0.05, 0.5 * min_pairwise_distance(z));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<cplx> t(phi.num_t());
    for (auto& v : t) v = rng.in_disc(1.5);
    if (phi.min_coupled_distance(z, t) >= bar) return t;
  }
  throw NumericalError("could not sample an admissible configuration");
}

void add_identity_checks(const VerificationConfig& cfg, std::vector<Check>& checks) {
  const int lo = std::max(cfg.n_min, 1);
  for (int n = lo; n <= cfg.n_max; ++n) {
    for (const auto& lambda : partitions_for(cfg, n, n)) {
      const auto name = lambda.to_string();
      checks.push_back({"identities.fla" + name, "Σ_i P_ii Π_{j>i}(s + j) = Π_j (s − λ_j + j)",
                        [cfg, lambda](Context& ctx) {
                          for (int k = 0; k < cfg.fla_samples && !ctx.expired(); ++k) {
                            const auto x = random_poly_tuple(lambda, ctx.trial_seed(k));
                            ctx.inputs().add(x.values());
                            ctx.within("fla", fla_residual(x), 1e-10);
                          }
                        }});
      if (n > 4) continue;
      checks.push_back({"identities.operator" + name,
                        "D_x annihilates x and Σ P_ij u^{n−j} v^{n−i} = det((u − Z)(v − Q) − 1)",
                        [cfg, lambda](Context& ctx) {
                          for (int k = 0; k < cfg.trials && !ctx.expired(); ++k) {
                            const auto x = random_poly_tuple(lambda, ctx.trial_seed(k));
                            ctx.inputs().add(x.values());
                            ctx.within("annihilation", annihilation_residual(x), 1e-12);
                            ctx.within("bivariate", bivariate_identity_residual(x), 1e-8);
                          }
                        }});
    }
    if (n <= 4) {
      checks.push_back({"identities.operator_q(n=" + std::to_string(n) + ")",
                        "D_x annihilates x ∈ X_q and the bivariate identity holds with Q shifted spectrum",
                        [cfg, n](Context& ctx) {
                          for (int k = 0; k < cfg.trials && !ctx.expired(); ++k) {
                            Rng rng(ctx.trial_seed(k));
                            const auto x = random_quasi_tuple(ctx, rng, n);
                            ctx.within("annihilation", annihilation_residual_q(x), 1e-12);
                            ctx.within("bivariate", bivariate_identity_residual_q(x), 1e-8);
                            const auto pt = psi_q(x);
                            ctx.within("Lq", level_residual(pt.z, pt.p, elementary_symmetric(x.q),
                                                            std::max(max_abs(pt.p), max_abs(x.q))),
                                       cfg.tol.residual);
                          }
                        }});
    }
  }

  checks.push_back({"identities.rank_one", "rank([Z, Q] + 1) = 1 on the image of ξ", [cfg, lo](Context& ctx) {
                      for (int k = 0; k < cfg.structural_samples && !ctx.expired(); ++k) {
                        Rng rng(ctx.trial_seed(k));
                        const int n = lo + static_cast<int>(rng.uniform() * (cfg.n_max - lo + 1));
                        const auto z = random_positions(ctx, rng, n);
                        std::vector<cplx> p;
                        for (int a = 0; a < n; ++a) p.push_back(3.0 * rng.complex_normal());
                        ctx.inputs().add(p);
                        ctx.within("rank_one", rank_one_residual(xi(z, p)), 1e-12);
                      }
                    }});
  checks.push_back({"identities.hamiltonian", "Σ p² − Σ 2/(z_a − z_b)² = tr Q² = Q_1² − 2Q_2", [cfg, lo](Context& ctx) {
                      for (int k = 0; k < cfg.structural_samples && !ctx.expired(); ++k) {
                        Rng rng(ctx.trial_seed(k));
                        const int n = lo + static_cast<int>(rng.uniform() * (cfg.n_max - lo + 1));
                        const auto z = random_positions(ctx, rng, n);
                        std::vector<cplx> p;
                        for (int a = 0; a < n; ++a) p.push_back(3.0 * rng.complex_normal());
                        ctx.inputs().add(p);
                        const cplx h = cm_hamiltonian(z, p);
                        const CMatrix Q = cm_matrix(z, p);
                        const cplx tr = (Q * Q).trace();
                        const auto I = first_integrals(z, p).values;
                        const cplx viaQ = I[0] * I[0] - (n >= 2 ? 2.0 * I[1] : cplx{});
                        double size = 0.0;
                        for (int a = 0; a < n; ++a) {
                          size += std::norm(p[a]);
                          for (int b = a + 1; b < n; ++b) size += 2.0 / std::norm(z[a] - z[b]);
                        }
                        size = std::max(1.0, size);
                        ctx.within("trace", std::abs(h - tr) / size, 1e-10);
                        ctx.within("invariants", std::abs(h - viaQ) / size, 1e-10);
                      }
                    }});

  std::vector<Partition> grad_partitions;
  for (int n = std::max(lo, 2); n <= std::min(cfg.n_max, 5); ++n)
    for (const auto& lambda : partitions_for(cfg, n, n))
      if (lambda.length() >= 2) grad_partitions.push_back(lambda);
  if (!grad_partitions.empty()) {
    checks.push_back({"identities.gradient_phi", "analytic ∂Φ_λ agrees with central differences",
                      [cfg, grad_partitions](Context& ctx) {
                        for (int k = 0; k < cfg.gradient_samples && !ctx.expired(); ++k) {
                          Rng rng(ctx.trial_seed(k));
                          const auto& lambda = grad_partitions[static_cast<std::size_t>(
                              rng.uniform() * static_cast<double>(grad_partitions.size()))];
                          const auto phi = MasterFunction::for_partition(lambda);
                          const auto z = random_positions(ctx, rng, lambda.weight());
                          const auto t = random_admissible_t(phi, z, rng);
                          ctx.inputs().add(t);
                          ctx.within("gradient", gradient_error(phi, z, t), 1e-5);
                        }
                      }});
  }
  checks.push_back({"identities.gradient_phi_q", "analytic ∂Φ_q agrees with central differences",
                    [cfg, lo](Context& ctx) {
                      const int n_lo = std::max(lo, 2);
                      const int n_hi = std::max(n_lo, std::min(cfg.n_max, 5));
                      for (int k = 0; k < cfg.gradient_samples && !ctx.expired(); ++k) {
                        Rng rng(ctx.trial_seed(k));
                        const int n = n_lo + static_cast<int>(rng.uniform() * (n_hi - n_lo + 1));
                        const auto phi = MasterFunction::for_q(random_q(ctx, rng, n));
                        const auto z = random_positions(ctx, rng, n);
                        const auto t = random_admissible_t(phi, z, rng);
                        ctx.inputs().add(t);
                        ctx.within("gradient", gradient_error(phi, z, t), 1e-5);
                      }
                    }});
}

// ---- collision

void add_collision_checks(const VerificationConfig& cfg, std::vector<Check>& checks) {
  for (int n = std::max(cfg.n_min, 2); n <= std::min(cfg.n_max, 4); ++n) {
    checks.push_back(
        {"collision.multiplicities(n=" + std::to_string(n) + ")",
         "as q → 0, d_λ tuples of Spect_q collide onto each point of Spec_λ", [cfg, n](Context& ctx) {
           for (int trial = 0; trial < cfg.trials && !ctx.expired(); ++trial) {
             Rng rng(ctx.trial_seed(trial));
             const auto dir = random_q(ctx, rng, n);
             const auto rep = collision_study(n, dir, derive_seed(ctx.trial_seed(trial), "z"), cfg.collision);
             ctx.inputs().add(rep.z);
             ctx.require(rep.resolved, rep.note.empty() ? "unresolved collision" : rep.note);
             std::uint64_t expected_clusters = 0;
             for (const auto& lambda : enumerate_partitions(n, n)) expected_clusters += irrep_dimension(lambda);
             ctx.expect_count(expected_clusters, rep.clusters.size(), "clusters");
             for (const auto& cl : rep.clusters) {
               ctx.residual("limit", cl.limit_distance);
               if (!(cl.limit_distance <= cfg.collision.match_tol)) ctx.fail("cluster limit off Spec_λ");
               if (cl.lambda.weight() == 0) continue;
               const auto d = irrep_dimension(cl.lambda);
               if (cl.size != d) ctx.fail("cluster size differs from d_λ for " + cl.lambda.to_string());
               if (static_cast<std::uint64_t>(cl.eigenspace_dim) != d)
                 ctx.fail("eigenspace dimension differs from d_λ for " + cl.lambda.to_string());
             }
           }
         }});
  }
}

std::vector<Check> build_checks(const VerificationConfig& cfg) {
  std::vector<Check> checks;
  if (cfg.suite == "l0") add_l0_checks(cfg, checks);
  if (cfg.suite == "lq") add_lq_checks(cfg, checks);
  if (cfg.suite == "bethe") add_bethe_checks(cfg, checks);
  if (cfg.suite == "wronski") add_wronski_checks(cfg, checks);
  if (cfg.suite == "identities") add_identity_checks(cfg, checks);
  if (cfg.suite == "collision") add_collision_checks(cfg, checks);
  return checks;
}

}  // namespace

Report run_suite(const VerificationConfig& config) {
  config.validate();
  Report report;
  report.suite = config.suite;
  report.seed = config.seed;
  report.config = config.to_json();
  report.config_digest = config.digest();

  const auto checks = build_checks(config);
  report.records.resize(checks.size());
  for (std::size_t k = 0; k < checks.size(); ++k) {
    auto& r = report.records[k];
    r.id = checks[k].id;
    r.anchor = checks[k].anchor;
    r.seed = derive_seed(config.seed, checks[k].id);
    r.config_digest = report.config_digest;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < checks.size(); k = next++) {
      auto& r = report.records[k];
      const auto deadline =
          Clock::now() + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(config.check_timeout_seconds));
      Context ctx(r, deadline);
      try {
        checks[k].run(ctx);
      } catch (const std::exception& e) {
        ctx.fail(std::string("error: ") + e.what());
      }
      r.pass = ctx.ok();
      r.inputs_digest = ctx.inputs().hex();
    }
  };
  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, checks.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

}  // namespace cmkz
