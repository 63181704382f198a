// Union-find over dense integer ids, path halving + union by size.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace perclab {

class DisjointSets {
 public:
  explicit DisjointSets(std::uint32_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];  // halve the path while walking up
      i = parent_[i];
    }
    return i;
  }

  // Returns true when two distinct sets were merged.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::uint64_t set_size(std::uint32_t i) { return size_[find(i)]; }
  std::uint32_t count() const { return static_cast<std::uint32_t>(parent_.size()); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint64_t> size_;
};

// Compact root ids to 0..k-1 in order of first appearance (deterministic).
std::vector<std::uint32_t> compact_labels(DisjointSets& ds);

}  // namespace perclab
