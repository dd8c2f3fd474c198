#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmkz {

/// A partition of n: weakly decreasing nonnegative parts. Trailing zeros may
/// be stored (to fix a declared length N) but never affect equality.
class Partition {
 public:
  Partition() = default;
  /// Throws InvalidArgument unless the parts are nonnegative, weakly
  /// decreasing, and sum to a positive weight.
  explicit Partition(std::vector<int> parts);

  /// |λ|
  int weight() const { return weight_; }
  /// Number of nonzero parts.
  int length() const;
  /// Stored parts, including any padding zeros.
  const std::vector<int>& parts() const { return parts_; }
  /// λ_i (0-based), zero beyond the stored parts.
  int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }

  /// Parts padded with zeros to `len`. Throws if len < length().
  std::vector<int> padded(std::size_t len) const;
  /// Copy with storage padded (or trimmed of zeros) to exactly `len` parts.
  Partition with_length(std::size_t len) const;

  /// "(2,1)"
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b);

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

/// Strictly decreasing shifted entries λ_i + n − i, i = 1..n.
struct ShiftedPartition {
  std::vector<int> entries;
};

/// l_a = Σ_{b>a} λ_b for a = 1..N−1 and their sum.
struct BetheLevels {
  std::vector<int> l;
  int total = 0;
};

/// All partitions of n with at most max_parts nonzero parts, in
/// reverse-lexicographic order: (n), (n−1,1), ...
std::vector<Partition> enumerate_partitions(int n, int max_parts);

/// Parses "2,1" or "2,1,0"; throws InvalidArgument on malformed input.
Partition parse_partition(const std::string& text);

ShiftedPartition shifted(const Partition& lambda);

/// Dimension of the S_n irreducible labelled by λ (hook-length formula,
/// exact integer arithmetic; n ≤ 30).
std::uint64_t irrep_dimension(const Partition& lambda);

/// Throws InvalidArgument if λ has more than N nonzero parts.
BetheLevels bethe_levels(const Partition& lambda, int N);

/// n! for small n (exact, n ≤ 20).
std::uint64_t factorial(int n);

}  // namespace cmkz
