#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace entropy_embed {

inline constexpr double kDefaultMu = 1.5;
inline constexpr double kSigmaMin = 1e-3;
inline constexpr double kSigmaMax = 16.0;
// Plateau probabilities underflow in finite precision; flooring them bounds
// description lengths near 40 bits.
inline constexpr double kProbFloor = 1e-12;

// (mu, sigma) of the edge-probability sigmoid. mu stays fixed for a run,
// sigma is re-optimized between iterations.
struct SigmoidParams {
  double mu = kDefaultMu;
  double sigma = 1.0;
};

// Quadratic surrogate w * (delta - d_target)^2 of the local coding cost.
struct Parabola {
  double d_target = 0.0;
  double w = 0.0;
};

namespace detail {

inline constexpr double kSqrtPi = 1.77245385090551602729816748334;
inline constexpr double kTwoOverPiLn2 = 2.0 / (std::numbers::pi * std::numbers::ln2);
inline constexpr double kInvSqrt2PiLn2 =
    1.0 / (2.50662827463100050241576528481 * std::numbers::ln2);  // 1/(sqrt(2 pi) ln 2)
inline constexpr double kTwoOverSqrtPiLn2 = 2.0 / (kSqrtPi * std::numbers::ln2);

// e^{-x^2} / erfc(x), stable across the whole tail. Both factors underflow
// for large x while the ratio grows like x*sqrt(pi).
inline double gauss_over_erfc(double x) {
  if (x <= 6.0) return std::exp(-x * x) / std::erfc(x);
  const double ix2 = 1.0 / (x * x);
  const double series =
      1.0 + ix2 * (-0.5 + ix2 * (0.75 + ix2 * (-1.875 + 6.5625 * ix2)));
  return x * kSqrtPi / series;
}

// Unfloored coding cost -log2(erfc(x)/2) with x = u for an edge, -u for a
// non-edge. The sigma optimizer needs the true quadratic tail; the floored
// description_length would make breaking an edge look affordable.
inline double dl_tail_exact(double delta, const SigmoidParams& p, bool is_edge) {
  const double u = (delta - p.mu) / (std::numbers::sqrt2 * p.sigma);
  const double x = is_edge ? u : -u;
  if (x <= 6.0) return 1.0 - std::log2(std::erfc(x));
  const double ix2 = 1.0 / (x * x);
  const double series =
      1.0 + ix2 * (-0.5 + ix2 * (0.75 + ix2 * (-1.875 + 6.5625 * ix2)));
  const double log_erfc = -x * x - std::log(x * kSqrtPi) + std::log(series);
  return 1.0 - log_erfc / std::numbers::ln2;
}

struct ExactMath {
  double erf(double u) const { return std::erf(u); }
  double exp_neg(double x) const { return std::exp(-x); }
  double gauss_erfc_ratio(double x) const { return gauss_over_erfc(x); }
};

// Probability of the observed entry: s+ = 1/2 - erf(u)/2 for an edge,
// s- = 1/2 + erf(u)/2 for a non-edge, clamped away from 0 and 1.
template <typename MathT>
double sigmoid_impl(double delta, const SigmoidParams& p, bool is_edge, const MathT& math) {
  const double u = (delta - p.mu) / (std::numbers::sqrt2 * p.sigma);
  const double erf_u = math.erf(u);
  const double s = is_edge ? 0.5 - 0.5 * erf_u : 0.5 + 0.5 * erf_u;
  return std::clamp(s, kProbFloor, 1.0 - kProbFloor);
}

template <typename MathT>
double description_length_impl(double delta, const SigmoidParams& p, bool is_edge,
                               const MathT& math) {
  return -std::log2(sigmoid_impl(delta, p, is_edge, math));
}

// Weight and target distance of the surrogate parabola. The non-edge case
// flips the sign of the cross term and of the target offset, and replaces
// (1 - erf) by (1 + erf) in the denominators. Everything reduces to the
// ratio G = e^{-u^2} / (1 -/+ erf u), which needs tail-stable evaluation:
// the weights of far-stretched pairs are large while both factors underflow.
template <typename MathT>
Parabola parabola_impl(double delta, const SigmoidParams& p, bool is_edge, const MathT& math) {
  const double sigma = p.sigma;
  const double u = (delta - p.mu) / (std::numbers::sqrt2 * sigma);
  const double sign = is_edge ? -1.0 : 1.0;
  const double ratio = math.gauss_erfc_ratio(is_edge ? u : -u);
  const double s2 = sigma * sigma;

  const double w = kTwoOverPiLn2 * ratio * ratio / s2 +
                   sign * kInvSqrt2PiLn2 * (delta - p.mu) * ratio / (s2 * sigma);
  if (!(w > 0.0)) return {delta, 0.0};  // clamped pairs contribute nothing
  const double d = delta + sign * kInvSqrt2PiLn2 * ratio / (w * sigma);
  return {d, w};
}

// d(dl)/d(sigma) in closed form:
//   -/+ 2 u e^{-u^2} / (sqrt(pi) ln2 sigma (1 -/+ erf u)),
// evaluated without the probability floor so the restoring force of
// written-off pairs survives.
template <typename MathT>
double dl_sigma_derivative_impl(double delta, const SigmoidParams& p, bool is_edge,
                                const MathT& math) {
  const double u = (delta - p.mu) / (std::numbers::sqrt2 * p.sigma);
  const double v = kTwoOverSqrtPiLn2 * u * math.gauss_erfc_ratio(is_edge ? u : -u) / p.sigma;
  return is_edge ? -v : v;
}

}  // namespace detail

// Exact-math entry points (std::erf / std::exp / std::erfc). The optimizer's
// hot loop uses piecewise approximations through the same *_impl templates.

inline double sigmoid(double delta, const SigmoidParams& p, bool is_edge) {
  return detail::sigmoid_impl(delta, p, is_edge, detail::ExactMath{});
}

inline double description_length(double delta, const SigmoidParams& p, bool is_edge) {
  return detail::description_length_impl(delta, p, is_edge, detail::ExactMath{});
}

inline Parabola parabola_params(double delta, const SigmoidParams& p, bool is_edge) {
  return detail::parabola_impl(delta, p, is_edge, detail::ExactMath{});
}

inline double dl_sigma_derivative(double delta, const SigmoidParams& p, bool is_edge) {
  return detail::dl_sigma_derivative_impl(delta, p, is_edge, detail::ExactMath{});
}

}  // namespace entropy_embed
