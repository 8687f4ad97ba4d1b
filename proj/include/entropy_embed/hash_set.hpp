#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "entropy_embed/graph.hpp"
#include "entropy_embed/rng.hpp"

namespace entropy_embed {

// Order-sensitive pair hash: ((i*n + j) * 1103515245) & (s-1), all 32-bit
// arithmetic with wraparound. s must be a power of two.
inline std::uint32_t pair_hash(std::uint32_t i, std::uint32_t j, std::uint32_t n,
                               std::uint32_t table_size) {
  return ((i * n + j) * kLcgMultiplier) & (table_size - 1);
}

// Open-addressed byte table answering "definitely-not-edge vs possibly-edge"
// with zero false negatives. Both orientations of every edge are inserted.
class EdgeHashSet {
 public:
  // Sizes the table at the next power of two >= 64*m unless bits_override is
  // given. Immutable after construction.
  static EdgeHashSet build(const Graph& g, std::optional<int> bits_override = {});

  // True means "possibly an edge" (may be a collision); false is definitive.
  bool maybe_edge(std::uint32_t i, std::uint32_t j) const {
    return table_[pair_hash(i, j, n_, size_)] != 0;
  }

  std::uint32_t size() const { return size_; }
  int bits() const { return bits_; }
  std::uint32_t vertex_count() const { return n_; }

  std::uint64_t occupied_cells() const;

 private:
  std::vector<std::uint8_t> table_;
  std::uint32_t size_ = 0;
  std::uint32_t n_ = 0;
  int bits_ = 0;
};

}  // namespace entropy_embed
