#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

// Distance tallies over [0, max_distance), separate for edges and sampled
// non-edges. Distances past the range clamp into the last bin.
class DistanceHistogram {
 public:
  static constexpr int kDefaultBins = 512;
  static constexpr double kDefaultMaxDistance = 12.0;  // 8 * mu

  explicit DistanceHistogram(int bins = kDefaultBins,
                             double max_distance = kDefaultMaxDistance)
      : bins_(bins), max_distance_(max_distance), edge_(bins, 0), nonedge_(bins, 0) {
    if (bins < 1 || !(max_distance > 0.0)) throw config_error("bad histogram binning");
  }

  void record(double delta, bool is_edge) {
    int b = static_cast<int>(delta / max_distance_ * bins_);
    if (b >= bins_) b = bins_ - 1;
    if (b < 0) b = 0;
    (is_edge ? edge_ : nonedge_)[static_cast<std::size_t>(b)]++;
  }

  void merge_from(const DistanceHistogram& other) {
    if (other.bins_ != bins_ || other.max_distance_ != max_distance_) {
      throw data_error("histogram binning mismatch");
    }
    for (int b = 0; b < bins_; ++b) {
      edge_[b] += other.edge_[b];
      nonedge_[b] += other.nonedge_[b];
    }
  }

  void clear() {
    edge_.assign(bins_, 0);
    nonedge_.assign(bins_, 0);
  }

  int bins() const { return bins_; }
  double max_distance() const { return max_distance_; }
  double bin_mid(int b) const { return (b + 0.5) * max_distance_ / bins_; }
  std::uint64_t edge_count(int b) const { return edge_[b]; }
  std::uint64_t nonedge_count(int b) const { return nonedge_[b]; }

  std::uint64_t edge_total() const;
  std::uint64_t nonedge_total() const;
  bool empty() const { return edge_total() + nonedge_total() == 0; }

  // (N - m) / (non-edge samples this round); scales the sampled non-edge
  // tallies into an unbiased estimate of the full non-edge sum.
  double nonedge_weight = 1.0;

  // CSV rows "bin_mid,edge_count,nonedge_count" (debug surface).
  void write_csv(std::ostream& out) const;

 private:
  int bins_;
  double max_distance_;
  std::vector<std::uint64_t> edge_;
  std::vector<std::uint64_t> nonedge_;
};

inline DistanceHistogram merge(const DistanceHistogram& a, const DistanceHistogram& b) {
  DistanceHistogram out = a;
  out.merge_from(b);
  return out;
}

}  // namespace entropy_embed
