#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmkz/json_io.hpp"
#include "cmkz/partitions.hpp"
#include "cmkz/types.hpp"

namespace cmkz {

/// Result of pairing two lists of p-tuples. a_to_b[i] is the index in B
/// matched to A[i], or -1.
struct Matching {
  bool success = false;
  std::vector<int> a_to_b;
  std::vector<std::size_t> unmatched_a;
  std::vector<std::size_t> unmatched_b;
  /// Largest ∞-norm distance over matched pairs.
  double max_distance = 0.0;
};

/// Nearest-first greedy pairing refined by augmenting paths over the
/// pairs within tol (∞-norm). Succeeds iff the matching is perfect.
Matching match_points(const std::vector<std::vector<cplx>>& a, const std::vector<std::vector<cplx>>& b, double tol);
Matching match_points(const std::vector<SpectralPoint>& a, const std::vector<SpectralPoint>& b, double tol);

struct CollisionOptions {
  /// q = s·q_direction for each s, largest first.
  std::vector<double> scales{1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  /// Single-linkage cutoff factor·s^exponent.
  double cutoff_factor = 1.0;
  double cutoff_exponent = 0.5;
  /// Cluster centroids are matched to Spec_λ points within this distance.
  double match_tol = 1e-4;
  /// Relative singular-value threshold for eigenspace dimensions at q = 0.
  double rank_tol = 1e-8;
};

struct CollisionCluster {
  Partition lambda;
  std::vector<cplx> centroid;
  std::size_t size = 0;
  /// Distance from the centroid to the matched q = 0 spectral point.
  double limit_distance = 0.0;
  /// Dimension of the joint eigenspace of H_a(z, 0) on V^{⊗n}[1,…,1] at that point.
  int eigenspace_dim = 0;
};

struct CollisionReport {
  int n = 0;
  std::vector<cplx> z;
  std::vector<cplx> q_direction;
  /// Number of clusters at each scale.
  std::vector<std::size_t> cluster_counts;
  std::vector<CollisionCluster> clusters;
  /// False when clusters at the smallest scale are not separated by more
  /// than ten cutoffs, or some centroid has no matching spectral point.
  bool resolved = false;
  std::string note;
};

/// Tracks the n! joint eigenvalue tuples of H_a(z, s·q_direction) as s → 0
/// and attributes each limiting cluster to a point of Spec_λ.
CollisionReport collision_study(int n, const std::vector<cplx>& q_direction, std::uint64_t seed,
                                const CollisionOptions& options = {});

struct Tolerances {
  double eigen = 1e-9;
  double bethe = 1e-12;
  double residual = 1e-8;
  double match = 1e-6;
};

struct VerificationConfig {
  /// l0 | lq | bethe | wronski | identities | collision
  std::string suite = "l0";
  int n_min = 2;
  int n_max = 4;
  /// Random configurations per partition (or per n).
  int trials = 20;
  std::uint64_t seed = 1;
  /// Restrict to these partitions; empty means the suite default.
  std::vector<Partition> partitions;
  Tolerances tol;
  CollisionOptions collision;
  /// Sample sizes of the identities suite.
  int fla_samples = 100;
  int structural_samples = 1000;
  int gradient_samples = 100;
  /// Worker threads; 0 means hardware concurrency.
  int threads = 0;
  /// Cooperative per-check budget; a check past it is recorded as timed out.
  double check_timeout_seconds = 300.0;

  /// Throws InvalidArgument on unknown suites, empty ranges or nonpositive tolerances.
  void validate() const;
  /// Everything that influences results (threads and timeout excluded).
  Json to_json() const;
  std::string digest() const;
};

struct CheckRecord {
  std::string id;
  /// Statement being checked.
  std::string anchor;
  std::string inputs_digest;
  std::map<std::string, double> residuals;
  std::uint64_t expected = 0;
  std::uint64_t found = 0;
  bool pass = false;
  bool timed_out = false;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string note;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::string config_digest;
  Json config;
  std::vector<CheckRecord> records;

  bool pass() const;
  Json to_json() const;
};

Json to_json(const CheckRecord& record);
Json to_json(const CollisionReport& report);

Report run_suite(const VerificationConfig& config);

/// Stable hex digest of a list of complex inputs.
std::string digest_values(const std::vector<cplx>& values);

}  // namespace cmkz
