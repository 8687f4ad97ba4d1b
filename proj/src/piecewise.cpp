#include "entropy_embed/piecewise.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

namespace {

constexpr int kSeg = PiecewiseQuad::kSegments;

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

// Solves the dense symmetric system via Gaussian elimination with partial
// pivoting. Throws on a singular system.
std::vector<double> solve_dense(std::vector<double> m, std::vector<double> rhs, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(m[r * n + col]) > std::fabs(m[pivot * n + col])) pivot = r;
    }
    if (std::fabs(m[pivot * n + col]) < 1e-14) {
      throw config_error("piecewise fit failed: singular system");
    }
    if (pivot != col) {
      for (int k = 0; k < n; ++k) std::swap(m[col * n + k], m[pivot * n + k]);
      std::swap(rhs[col], rhs[pivot]);
    }
    const double inv = 1.0 / m[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] * inv;
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) m[r * n + k] -= f * m[col * n + k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = rhs[r];
    for (int k = r + 1; k < n; ++k) acc -= m[r * n + k] * x[k];
    x[r] = acc / m[r * n + r];
  }
  return x;
}

// Continuity-by-construction parameterization: on segment s with local
// t = (x - k_s)/h_s, the quadratic is
//   q(x) = v_s (1-t) + v_{s+1} t + e_s t (1-t),
// so knot values v are shared between neighbors. Least squares over the
// whole domain then reduces to a small symmetric system in (v, e).
struct FitResult {
  std::array<double, kSeg + 1> v;
  std::array<double, kSeg> e;
};

FitResult fit_continuous(const std::function<double(double)>& f,
                         const std::array<double, kSeg + 1>& knots, bool pin_first_value) {
  // Unknown layout: v_0..v_16 then e_0..e_15; v_0 is dropped when pinned to 0.
  const int nv = kSeg + 1;
  const int total = nv + kSeg;
  std::vector<double> mat(static_cast<std::size_t>(total) * total, 0.0);
  std::vector<double> rhs(total, 0.0);

  auto add = [&](int r, int c, double val) { mat[r * total + c] += val; };

  for (int s = 0; s < kSeg; ++s) {
    const double k0 = knots[s], k1 = knots[s + 1];
    const double h = k1 - k0;
    const int iv0 = s, iv1 = s + 1, ie = nv + s;
    // Gram blocks of the three local basis functions, times segment width.
    add(iv0, iv0, h / 3.0);
    add(iv1, iv1, h / 3.0);
    add(iv0, iv1, h / 6.0);
    add(iv1, iv0, h / 6.0);
    add(iv0, ie, h / 12.0);
    add(ie, iv0, h / 12.0);
    add(iv1, ie, h / 12.0);
    add(ie, iv1, h / 12.0);
    add(ie, ie, h / 30.0);
    for (int q = 0; q < 8; ++q) {
      const double t = 0.5 * (kGlNode[q] + 1.0);
      const double x = k0 + h * t;
      const double wq = 0.5 * h * kGlWeight[q];
      const double fx = f(x);
      rhs[iv0] += wq * fx * (1.0 - t);
      rhs[iv1] += wq * fx * t;
      rhs[ie] += wq * fx * t * (1.0 - t);
    }
  }

  if (pin_first_value) {
    // v_0 = 0: clear its row/column, keep the system square.
    for (int k = 0; k < total; ++k) {
      mat[0 * total + k] = 0.0;
      mat[k * total + 0] = 0.0;
    }
    mat[0] = 1.0;
    rhs[0] = 0.0;
  }

  const std::vector<double> sol = solve_dense(std::move(mat), std::move(rhs), total);
  FitResult out;
  for (int i = 0; i <= kSeg; ++i) out.v[i] = sol[i];
  for (int s = 0; s < kSeg; ++s) out.e[s] = sol[nv + s];
  return out;
}

PiecewiseQuad assemble(const std::array<double, kSeg + 1>& knots, const FitResult& fit,
                       double lo, double hi, bool odd_mirror) {
  PiecewiseQuad q;
  q.knots = knots;
  q.lo = lo;
  q.hi = hi;
  q.odd_mirror = odd_mirror;
  for (int s = 0; s < kSeg; ++s) {
    const double k0 = knots[s], h = knots[s + 1] - knots[s];
    // q(x) = v0 + (v1 - v0 + e) t - e t^2 with t = (x - k0)/h
    const double alpha = (fit.v[s + 1] - fit.v[s] + fit.e[s]) / h;
    const double beta = -fit.e[s] / (h * h);
    q.a[s] = beta;
    q.b[s] = alpha - 2.0 * beta * k0;
    q.c[s] = fit.v[s] - alpha * k0 + beta * k0 * k0;
  }
  return q;
}

void verify_fit(const PiecewiseQuad& q, const std::function<double(double)>& f,
                double bound = 1e-3) {
  double max_err = 0.0;
  const int grid = 20000;
  for (int i = 0; i <= grid; ++i) {
    const double x = q.lo + (q.hi - q.lo) * i / grid;
    max_err = std::max(max_err, std::fabs(q(x) - f(x)));
  }
  if (max_err > bound) {
    throw config_error("piecewise fit failed: max abs error " + std::to_string(max_err));
  }
}

}  // namespace

PiecewiseQuad build_piecewise(RefFn fn, double lo, double hi) {
  if (!(lo < hi)) throw config_error("piecewise domain must satisfy lo < hi");

  if (fn == RefFn::erf) {
    // Odd function: fit [0, B] and mirror, which also anchors approx(0) = 0.
    const double bound = std::max(std::fabs(lo), std::fabs(hi));
    std::array<double, kSeg + 1> knots;
    for (int k = 0; k <= kSeg; ++k) knots[k] = bound * k / kSeg;
    auto f = [](double x) { return std::erf(x); };
    const FitResult fit = fit_continuous(f, knots, /*pin_first_value=*/true);
    PiecewiseQuad q = assemble(knots, fit, -bound, bound, /*odd_mirror=*/true);
    verify_fit(q, f);
    return q;
  }

  // exp(-x): geometric knot spacing, narrow where the curvature lives.
  const double rho = 1.35;
  std::array<double, kSeg + 1> knots;
  const double denom = std::pow(rho, kSeg) - 1.0;
  for (int k = 0; k <= kSeg; ++k) {
    knots[k] = lo + (hi - lo) * (std::pow(rho, k) - 1.0) / denom;
  }
  knots[kSeg] = hi;
  auto f = [](double x) { return std::exp(-x); };
  const FitResult fit = fit_continuous(f, knots, /*pin_first_value=*/false);
  PiecewiseQuad q = assemble(knots, fit, lo, hi, /*odd_mirror=*/false);
  verify_fit(q, f);
  return q;
}

FastMath FastMath::build() {
  // the ratio bends near the origin and straightens toward x sqrt(pi), so
  // the knots crowd the transition zone
  const std::array<double, kSeg + 1> ratio_knots = {-1.0, -0.6, -0.3, 0.0, 0.3,  0.6,
                                                    0.9,  1.2,  1.6,  2.0, 2.5,  3.0,
                                                    3.75, 4.5,  5.5,  6.75, 8.0};
  auto ratio_fn = [](double x) { return detail::gauss_over_erfc(x); };
  const FitResult fit = fit_continuous(ratio_fn, ratio_knots, /*pin_first_value=*/false);
  PiecewiseQuad ratio = assemble(ratio_knots, fit, -1.0, 8.0, /*odd_mirror=*/false);
  verify_fit(ratio, ratio_fn, 5e-4);

  return FastMath{build_piecewise(RefFn::erf, -6.0, 6.0),
                  build_piecewise(RefFn::exp_neg, 0.0, 32.0), std::move(ratio)};
}

}  // namespace entropy_embed
