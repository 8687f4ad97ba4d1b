#include "entropy_embed/slope.hpp"

#include <cmath>
#include <ostream>

namespace entropy_embed {

void DistanceHistogram::write_csv(std::ostream& out) const {
  out << "bin_mid,edge_count,nonedge_count\n";
  for (int b = 0; b < bins_; ++b) {
    out << bin_mid(b) << ',' << edge_[b] << ',' << nonedge_[b] << '\n';
  }
}

std::uint64_t DistanceHistogram::edge_total() const {
  std::uint64_t t = 0;
  for (int b = 0; b < bins_; ++b) t += edge_[b];
  return t;
}

std::uint64_t DistanceHistogram::nonedge_total() const {
  std::uint64_t t = 0;
  for (int b = 0; b < bins_; ++b) t += nonedge_[b];
  return t;
}

double histogram_objective(const DistanceHistogram& h, const SigmoidParams& p) {
  double total = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    const std::uint64_t ec = h.edge_count(b);
    const std::uint64_t nc = h.nonedge_count(b);
    if (ec == 0 && nc == 0) continue;
    const double mid = h.bin_mid(b);
    if (ec) total += static_cast<double>(ec) * description_length(mid, p, true);
    if (nc) total += h.nonedge_weight * static_cast<double>(nc) * description_length(mid, p, false);
  }
  return total;
}

double histogram_objective_dsigma(const DistanceHistogram& h, const SigmoidParams& p) {
  double total = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    const std::uint64_t ec = h.edge_count(b);
    const std::uint64_t nc = h.nonedge_count(b);
    if (ec == 0 && nc == 0) continue;
    const double mid = h.bin_mid(b);
    if (ec) total += static_cast<double>(ec) * dl_sigma_derivative(mid, p, true);
    if (nc) total += h.nonedge_weight * static_cast<double>(nc) * dl_sigma_derivative(mid, p, false);
  }
  return total;
}

namespace {

// Unfloored coding cost of the histogram. The optimizer must see the true
// quadratic tail of pairs the sigmoid has written off, or it would trade a
// broken edge (capped at ~40 bits by the floor) for cheaper slopes.
double histogram_objective_raw(const DistanceHistogram& h, const SigmoidParams& p) {
  double total = 0.0;
  for (int b = 0; b < h.bins(); ++b) {
    const std::uint64_t ec = h.edge_count(b);
    const std::uint64_t nc = h.nonedge_count(b);
    if (ec == 0 && nc == 0) continue;
    const double mid = h.bin_mid(b);
    if (ec) total += static_cast<double>(ec) * detail::dl_tail_exact(mid, p, true);
    if (nc) {
      total += h.nonedge_weight * static_cast<double>(nc) * detail::dl_tail_exact(mid, p, false);
    }
  }
  return total;
}

}  // namespace

SigmaSearchResult optimize_sigma_detail(const DistanceHistogram& h, double mu) {
  if (h.empty()) throw config_error("cannot optimize sigma on an empty histogram");

  constexpr double kTol = 1e-4;
  constexpr int kMaxSteps = 60;
  constexpr int kGrid = 17;

  // The derivative can have several zeros on messy mid-run histograms, so a
  // coarse geometric scan of the unfloored cost locates the basin first.
  int best = 0;
  double best_cost = 0.0;
  double grid[kGrid];
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = kSigmaMin * std::pow(kSigmaMax / kSigmaMin, static_cast<double>(i) / (kGrid - 1));
    const double cost = histogram_objective_raw(h, {mu, grid[i]});
    if (i == 0 || cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }

  SigmaSearchResult result;
  result.sigma = grid[best];

  double lo = grid[std::max(0, best - 1)];
  double hi = grid[std::min(kGrid - 1, best + 1)];
  double f_lo = histogram_objective_dsigma(h, {mu, lo});
  const double f_hi = histogram_objective_dsigma(h, {mu, hi});
  if (!(f_lo < 0.0) || !(f_hi > 0.0)) {
    return result;  // no interior minimum in the bracket: keep the scan best
  }

  while (hi - lo > kTol && result.bisection_steps < kMaxSteps) {
    ++result.bisection_steps;
    const double mid = 0.5 * (lo + hi);
    const double f_mid = histogram_objective_dsigma(h, {mu, mid});
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double refined = 0.5 * (lo + hi);
  if (histogram_objective_raw(h, {mu, refined}) <= best_cost) result.sigma = refined;
  return result;
}

}  // namespace entropy_embed
