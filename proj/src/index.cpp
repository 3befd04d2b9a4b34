#include "zetalab/index.hpp"

#include <charconv>
#include <numeric>

#include "zetalab/errors.hpp"

namespace zetalab {

Index::Index(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw ArgumentError("index must have at least one part");
  for (int k : parts_) {
    if (k < 1) throw ArgumentError("index parts must be positive integers");
  }
}

Index Index::parse(std::string_view text) {
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view field = text.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    int value = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
      throw ArgumentError("malformed index text: '" + std::string(text) + "'");
    }
    parts.push_back(value);
    pos = comma + 1;
  }
  return Index(std::move(parts));
}

int Index::weight() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }

bool Index::admissible() const noexcept {
  for (int k : parts_) {
    if (k >= 2) return true;
  }
  return false;
}

std::string Index::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out;
}

Index cyclic_shift(const Index& index, int i) {
  const int n = index.depth();
  if (i < 1 || i > n) {
    throw ArgumentError("cyclic shift " + std::to_string(i) + " out of range 1.." + std::to_string(n));
  }
  std::vector<int> out;
  out.reserve(n);
  for (int t = 0; t < n; ++t) out.push_back(index.parts()[(i + t) % n]);
  return Index(std::move(out));
}

std::vector<Index> csf_lhs_terms(const Index& index) {
  if (!index.admissible()) throw ArgumentError("cyclic sum needs an admissible index: " + index.to_string());
  std::vector<Index> out;
  const int n = index.depth();
  for (int i = 1; i <= n; ++i) {
    const int ki = index.parts()[i - 1];
    if (ki < 2) continue;
    const auto rotated = cyclic_shift(index, i).parts();
    for (int j = 0; j <= ki - 2; ++j) {
      std::vector<int> parts;
      parts.reserve(n + 1);
      parts.push_back(j + 1);
      parts.insert(parts.end(), rotated.begin(), rotated.end() - 1);
      parts.push_back(ki - j);
      out.emplace_back(std::move(parts));
    }
  }
  return out;
}

std::vector<Index> csf_rhs_terms(const Index& index) {
  if (!index.admissible()) throw ArgumentError("cyclic sum needs an admissible index: " + index.to_string());
  std::vector<Index> out;
  for (int i = 1; i <= index.depth(); ++i) {
    auto parts = cyclic_shift(index, i).parts();
    parts.back() += 1;
    out.emplace_back(std::move(parts));
  }
  return out;
}

namespace {

void compose(int remaining, int slots, int min_last, std::vector<int>& prefix, std::vector<Index>& out) {
  if (slots == 1) {
    if (remaining >= min_last) {
      prefix.push_back(remaining);
      out.emplace_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (int part = 1; part <= remaining - (slots - 1); ++part) {
    prefix.push_back(part);
    compose(remaining - part, slots - 1, min_last, prefix, out);
    prefix.pop_back();
  }
}

void weak_compose(int remaining, int slots, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (slots == 0) {
    if (remaining == 0) out.push_back(prefix);
    return;
  }
  if (slots == 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int part = 0; part <= remaining; ++part) {
    prefix.push_back(part);
    weak_compose(remaining - part, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Index> compositions(int k, int n) {
  if (n <= 0 || n >= k) {
    throw ArgumentError("compositions(k, n) needs 0 < n < k, got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  std::vector<Index> out;
  std::vector<int> prefix;
  compose(k, n, 2, prefix, out);
  return out;
}

std::vector<Index> admissible_indices(int max_weight, int max_depth) {
  std::vector<Index> out;
  for (int w = 2; w <= max_weight; ++w) {
    for (int d = 1; d <= std::min(max_depth, w - 1); ++d) {
      std::vector<Index> all;
      std::vector<int> prefix;
      compose(w, d, 1, prefix, all);
      for (auto& x : all) {
        if (x.admissible()) out.push_back(std::move(x));
      }
    }
  }
  return out;
}

std::vector<std::vector<int>> weak_compositions(int total, int parts) {
  if (total < 0 || parts < 0) throw ArgumentError("weak_compositions needs non-negative arguments");
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  weak_compose(total, parts, prefix, out);
  return out;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0) return 0;
  // Exact: each partial product of k consecutive integers divided by k! is integral.
  std::int64_t result = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
  }
  return result;
}

}  // namespace zetalab
