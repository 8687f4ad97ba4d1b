#include "entropy_embed/sampler.hpp"

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

void sample_non_edges(std::span<const std::uint32_t> anchors, LaneRng& rng,
                      const EdgeHashSet& hashset, std::uint32_t n,
                      std::span<std::uint32_t> out, std::uint64_t* draw_count) {
  constexpr int kMaxRetries = 10000;
  if (rng.lanes() < anchors.size() || out.size() < anchors.size()) {
    throw config_error("sampler needs one rng lane and one output slot per anchor");
  }

  for (std::size_t l = 0; l < anchors.size(); ++l) {
    const std::uint32_t anchor = anchors[l];
    for (int tries = 0;; ++tries) {
      if (tries >= kMaxRetries) {
        throw near_complete_graph_error(
            "no non-edge partner found after 10^4 draws; graph is near-complete");
      }
      const std::uint32_t state = rng.step_lane(static_cast<std::uint32_t>(l));
      if (draw_count) ++*draw_count;
      const std::uint32_t g = lane_uniform_index(state, n);
      if (g == anchor) continue;
      if (hashset.maybe_edge(anchor, g)) continue;
      out[l] = g;
      break;
    }
  }
}

}  // namespace entropy_embed
