#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace zetalab {

/// A composition (k_1, ..., k_n) of positive integers.  Immutable.
class Index {
 public:
  explicit Index(std::vector<int> parts);

  /// Parses "k1,k2,...,kn".
  static Index parse(std::string_view text);

  const std::vector<int>& parts() const noexcept { return parts_; }
  int depth() const noexcept { return static_cast<int>(parts_.size()); }
  int weight() const noexcept;
  int front() const noexcept { return parts_.front(); }
  int back() const noexcept { return parts_.back(); }
  int operator[](std::size_t i) const { return parts_.at(i); }

  /// Some part is >= 2.
  bool admissible() const noexcept;
  /// Last part is >= 2, so the named series converge.
  bool eval_admissible() const noexcept { return parts_.back() >= 2; }

  std::string to_string() const;

  friend bool operator==(const Index&, const Index&) = default;
  friend auto operator<=>(const Index&, const Index&) = default;

 private:
  std::vector<int> parts_;
};

/// (k_{i+1}, ..., k_n, k_1, ..., k_i) for 1 <= i <= depth.
Index cyclic_shift(const Index& index, int i);

/// Left-hand terms of the cyclic sum: for each i with k_i >= 2 and
/// j = 0..k_i-2, the index (j+1, k_{i+1}, ..., k_n, k_1, ..., k_{i-1}, k_i-j).
std::vector<Index> csf_lhs_terms(const Index& index);

/// Right-hand terms of the strict cyclic sum: (k_{i+1}, ..., k_{i-1}, k_i+1).
std::vector<Index> csf_rhs_terms(const Index& index);

/// Compositions of k into n parts (each >= 1, last >= 2), lexicographic.
std::vector<Index> compositions(int k, int n);

/// All admissible indices with weight <= max_weight and depth <= max_depth,
/// ordered by weight, then depth, then lexicographically.
std::vector<Index> admissible_indices(int max_weight, int max_depth);

/// Ordered tuples of `parts` non-negative integers summing to `total`,
/// lexicographic.  parts == 0 yields one empty tuple iff total == 0.
std::vector<std::vector<int>> weak_compositions(int total, int parts);

/// Generalized binomial coefficient n(n-1)...(n-k+1)/k!; zero for k < 0.
/// n may be negative.
std::int64_t binomial(std::int64_t n, std::int64_t k);

}  // namespace zetalab
