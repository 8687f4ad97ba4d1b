#pragma once

#include "entropy_embed/histogram.hpp"
#include "entropy_embed/sigmoid.hpp"

namespace entropy_embed {

// Weighted coding cost of the histogram (total bits, not per pair):
//   F(sigma) = sum_b edge[b] dl+(mid_b) + nonedge_weight * nonedge[b] dl-(mid_b).
double histogram_objective(const DistanceHistogram& h, const SigmoidParams& p);

// dF/dsigma via the analytic dl derivative.
double histogram_objective_dsigma(const DistanceHistogram& h, const SigmoidParams& p);

struct SigmaSearchResult {
  double sigma = 0.0;
  int bisection_steps = 0;
};

// Bisection on dF/dsigma over [kSigmaMin, kSigmaMax] to tolerance 1e-4; with
// no sign change on the bracket, returns the endpoint with smaller F.
// Throws config_error on an empty histogram.
SigmaSearchResult optimize_sigma_detail(const DistanceHistogram& h, double mu);

inline double optimize_sigma(const DistanceHistogram& h, double mu) {
  return optimize_sigma_detail(h, mu).sigma;
}

}  // namespace entropy_embed
