#include "cmkz/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cmkz/types.hpp"

namespace cmkz {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) throw InvalidArgument("partition: negative part");
    if (i + 1 < parts_.size() && parts_[i] < parts_[i + 1])
      throw InvalidArgument("partition: parts must be weakly decreasing");
  }
  weight_ = std::accumulate(parts_.begin(), parts_.end(), 0);
  if (weight_ <= 0) throw InvalidArgument("partition: weight must be positive");
}

int Partition::length() const {
  return static_cast<int>(std::count_if(parts_.begin(), parts_.end(), [](int p) { return p > 0; }));
}

std::vector<int> Partition::padded(std::size_t len) const {
  if (len < static_cast<std::size_t>(length()))
    throw InvalidArgument("partition " + to_string() + " has more than " + std::to_string(len) +
                          " nonzero parts");
  std::vector<int> out(len, 0);
  std::copy_n(parts_.begin(), std::min(len, parts_.size()), out.begin());
  return out;
}

Partition Partition::with_length(std::size_t len) const { return Partition(padded(len)); }

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  const int len = std::max(1, length());
  for (int i = 0; i < len; ++i) os << (i ? "," : "") << (*this)[static_cast<std::size_t>(i)];
  os << ')';
  return os.str();
}

bool operator==(const Partition& a, const Partition& b) {
  const std::size_t len = std::max(a.parts_.size(), b.parts_.size());
  for (std::size_t i = 0; i < len; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

namespace {

void enumerate_into(int remaining, int max_part, int slots, std::vector<int>& prefix,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (slots == 0) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    enumerate_into(remaining - part, part, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int n, int max_parts) {
  if (n < 1 || max_parts < 1) throw InvalidArgument("enumerate_partitions: n and max_parts must be >= 1");
  std::vector<Partition> out;
  std::vector<int> prefix;
  enumerate_into(n, n, max_parts, prefix, out);
  return out;
}

Partition parse_partition(const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw InvalidArgument("");
      parts.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse partition '" + text + "'");
    }
  }
  return Partition(std::move(parts));
}

ShiftedPartition shifted(const Partition& lambda) {
  const int n = lambda.weight();
  const auto parts = lambda.padded(static_cast<std::size_t>(n));
  ShiftedPartition s;
  s.entries.resize(parts.size());
  for (int i = 0; i < n; ++i) s.entries[i] = parts[i] + n - (i + 1);
  return s;
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw InvalidArgument("factorial: n out of range");
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

std::uint64_t irrep_dimension(const Partition& lambda) {
  const int n = lambda.weight();
  if (n > 30) throw InvalidArgument("irrep_dimension: n > 30 not supported");
  const int rows = lambda.length();
  // n! and the hook product both fit in 128 bits for n <= 30.
  std::vector<unsigned __int128> hooks;
  for (int i = 0; i < rows; ++i) {
    const int row_len = lambda[static_cast<std::size_t>(i)];
    for (int j = 0; j < row_len; ++j) {
      int below = 0;
      for (int k = i + 1; k < rows && lambda[static_cast<std::size_t>(k)] > j; ++k) ++below;
      hooks.push_back(static_cast<unsigned __int128>(row_len - j - 1 + below + 1));
    }
  }
  unsigned __int128 num = 1;
  for (int k = 2; k <= n; ++k) num *= static_cast<unsigned __int128>(k);
  unsigned __int128 den = 1;
  for (auto h : hooks) den *= h;
  return static_cast<std::uint64_t>(num / den);
}

BetheLevels bethe_levels(const Partition& lambda, int N) {
  if (N < 1) throw InvalidArgument("bethe_levels: N must be >= 1");
  const auto parts = lambda.padded(static_cast<std::size_t>(N));
  BetheLevels levels;
  for (int a = 1; a < N; ++a) {
    int l = 0;
    for (int b = a; b < N; ++b) l += parts[static_cast<std::size_t>(b)];
    levels.l.push_back(l);
    levels.total += l;
  }
  return levels;
}

}  // namespace cmkz
