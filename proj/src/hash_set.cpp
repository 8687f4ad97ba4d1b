#include "entropy_embed/hash_set.hpp"

#include <numeric>

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

EdgeHashSet EdgeHashSet::build(const Graph& g, std::optional<int> bits_override) {
  EdgeHashSet hs;
  hs.n_ = g.n;

  int bits = 6;
  if (bits_override) {
    bits = *bits_override;
    if (bits < 1 || bits > 31) throw config_error("hash table bits must be in [1,31]");
  } else {
    // next power of two >= 64*m, i.e. 2^6 * m rounded up
    const std::uint64_t target = 64ull * std::max<std::uint64_t>(g.edge_count(), 1);
    while ((1ull << bits) < target) ++bits;
    if (bits > 31) bits = 31;
  }
  hs.bits_ = bits;
  hs.size_ = 1u << bits;
  hs.table_.assign(hs.size_, 0);

  for (std::size_t e = 0; e < g.src.size(); ++e) {
    const std::uint32_t i = g.src[e];
    const std::uint32_t j = g.dst[e];
    hs.table_[pair_hash(i, j, hs.n_, hs.size_)] = 1;
    hs.table_[pair_hash(j, i, hs.n_, hs.size_)] = 1;
  }
  return hs;
}

std::uint64_t EdgeHashSet::occupied_cells() const {
  return std::accumulate(table_.begin(), table_.end(), std::uint64_t{0});
}

}  // namespace entropy_embed
