#pragma once

#include <cstdint>
#include <span>

#include "entropy_embed/hash_set.hpp"
#include "entropy_embed/rng.hpp"

namespace entropy_embed {

// Draws one verified non-edge partner per anchor lane: the returned g
// satisfies hash test 0 for (anchor, g) and g != anchor. Lanes retry
// independently; a lane that found its partner is never touched again.
// Throws near_complete_graph_error after 10^4 retries in one lane.
//
// rng must have at least anchors.size() lanes. If draw_count is non-null it
// accumulates the total number of draws across lanes.
void sample_non_edges(std::span<const std::uint32_t> anchors, LaneRng& rng,
                      const EdgeHashSet& hashset, std::uint32_t n,
                      std::span<std::uint32_t> out, std::uint64_t* draw_count = nullptr);

}  // namespace entropy_embed
