#pragma once

#include <cstdint>
#include <vector>

#include "entropy_embed/engine.hpp"
#include "entropy_embed/graph.hpp"

namespace entropy_embed {

struct PEReport {
  double pe = 0.0;  // bits per pair
  double mu_star = 0.0;
  double sigma_star = 0.0;
  double h_basic = 0.0;
  double compression_ratio = 0.0;  // pe / h_basic, 1.0 for the 0/0 degenerate
  double grid_pe = 0.0;            // grid minimum before local refinement
};

// Predictive entropy over all N pairs with exact erf, minimized over a
// (mu, sigma) grid plus local refinement. Guarded at N <= 10^8.
PEReport pe_exact(const Graph& g, const Embedding& emb);

// Edge sum exact; non-edge sum estimated from sampled partners reweighted by
// (N - m) / #samples.
PEReport pe_sampled(const Graph& g, const Embedding& emb, int samples_per_edge,
                    std::uint64_t seed);

// Normalized residual after the best similarity transform (rotation or
// reflection plus isotropic scale) mapping emb onto the ground truth:
//   sum ||aligned_i - truth_i||^2 / sum ||truth_i - mean||^2.
double ssq_aligned(const Embedding& emb, const Embedding& ground_truth);

struct DistanceStats {
  double mean = 0.0;
  double q05 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q95 = 0.0;
};

struct SeparationReport {
  DistanceStats edges;
  DistanceStats nonedges;
  // Smallest achievable average misclassification of a single distance
  // threshold deciding edge vs non-edge (0 = perfectly separated).
  double overlap = 0.0;
};

SeparationReport separation_report(const Graph& g, const Embedding& emb,
                                   std::uint64_t sample_count, std::uint64_t seed);

}  // namespace entropy_embed
