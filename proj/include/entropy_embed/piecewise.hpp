#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

#include "entropy_embed/sigmoid.hpp"

namespace entropy_embed {

enum class RefFn { exp_neg, erf };

// 16 quadratic segments a*x^2 + b*x + c, continuous at the interior knots,
// clamped to boundary values outside [lo, hi]. erf uses an odd-mirrored table
// over [0, hi] so the fit resolution doubles and approx(0) is exactly 0.
struct PiecewiseQuad {
  static constexpr int kSegments = 16;

  std::array<double, kSegments + 1> knots{};
  std::array<double, kSegments> a{}, b{}, c{};
  double lo = 0.0;
  double hi = 0.0;
  bool odd_mirror = false;

  double operator()(double x) const {
    double xa = std::clamp(x, lo, hi);
    double flip = 1.0;
    if (odd_mirror && xa < 0.0) {
      xa = -xa;
      flip = -1.0;
    }
    int s = segment_of(xa);
    return flip * ((a[s] * xa + b[s]) * xa + c[s]);
  }

  int segment_of(double x) const {
    int lo_i = 0, hi_i = kSegments;
    while (hi_i - lo_i > 1) {
      const int mid = (lo_i + hi_i) / 2;
      if (x < knots[mid]) {
        hi_i = mid;
      } else {
        lo_i = mid;
      }
    }
    return lo_i;
  }
};

// Constrained least-squares fit: per-segment quadratics, continuity enforced
// at the knots, max abs error <= 1e-3 verified on a dense grid.
PiecewiseQuad build_piecewise(RefFn fn, double lo, double hi);

// Piecewise tables backing the hot loop, with the math-policy hooks used by
// the sigmoid templates. The parabola path evaluates the combined ratio
// e^{-x^2}/erfc(x) from its own table: raw erf/exp tables cannot resolve the
// erfc-denominators of the weight formulas beyond |x| ~ 2.
struct FastMath {
  PiecewiseQuad erf_table;
  PiecewiseQuad exp_neg_table;
  PiecewiseQuad gauss_erfc_table;

  static FastMath build();

  double erf(double u) const { return erf_table(u); }
  double exp_neg(double x) const { return exp_neg_table(x); }

  // Relative accuracy ~1e-3 over the whole line. The quad table serves the
  // bulk of the range; left of it the ratio decays below the table's
  // absolute resolution, so the plateau branch divides an exact gaussian by
  // the table erfc; beyond x = -6 the weight is dead anyway.
  double gauss_erfc_ratio(double x) const {
    if (x >= gauss_erfc_table.lo) {
      if (x > gauss_erfc_table.hi) return detail::gauss_over_erfc(x);  // linear tail
      return gauss_erfc_table(x);
    }
    if (x < -6.0) return 0.0;
    return std::exp(-x * x) / (1.0 - erf_table(x));
  }
};

inline Parabola parabola_params_fast(double delta, const SigmoidParams& p, bool is_edge,
                                     const FastMath& math) {
  return detail::parabola_impl(delta, p, is_edge, math);
}

}  // namespace entropy_embed
