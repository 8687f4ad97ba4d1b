#include "entropy_embed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "entropy_embed/errors.hpp"
#include "entropy_embed/rng.hpp"
#include "entropy_embed/sigmoid.hpp"
#include "entropy_embed/slope.hpp"

namespace entropy_embed {

namespace {

double distance(const Embedding& emb, std::uint32_t i, std::uint32_t j) {
  const float* a = emb.row(i);
  const float* b = emb.row(j);
  double acc = 0.0;
  for (std::uint32_t k = 0; k < emb.dim; ++k) {
    const double diff = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

// Weighted dl sums over fixed distance multisets; the minimization target of
// the predictive entropy.
struct DlSums {
  const std::vector<float>* edge_dists;
  const std::vector<float>* nonedge_dists;
  double nonedge_weight = 1.0;

  double objective(const SigmoidParams& p) const {
    double total = 0.0;
    for (float d : *edge_dists) total += description_length(d, p, true);
    double ne = 0.0;
    for (float d : *nonedge_dists) ne += description_length(d, p, false);
    return total + nonedge_weight * ne;
  }

  double dsigma(const SigmoidParams& p) const {
    double total = 0.0;
    for (float d : *edge_dists) total += dl_sigma_derivative(d, p, true);
    double ne = 0.0;
    for (float d : *nonedge_dists) ne += dl_sigma_derivative(d, p, false);
    return total + nonedge_weight * ne;
  }

  // Bisection on d/dsigma, mirroring the histogram-based slope optimizer.
  double best_sigma(double mu) const {
    double lo = kSigmaMin, hi = kSigmaMax;
    double f_lo = dsigma({mu, lo});
    double f_hi = dsigma({mu, hi});
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
      return objective({mu, lo}) <= objective({mu, hi}) ? lo : hi;
    }
    for (int step = 0; step < 60 && hi - lo > 1e-4; ++step) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = dsigma({mu, mid});
      if (f_mid == 0.0) return mid;
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
};

PEReport minimize_pe(const DlSums& sums, const Graph& g) {
  const double pairs = static_cast<double>(g.pair_count());

  double best_mu = kDefaultMu, best_sigma = 1.0;
  double best_cost = std::numeric_limits<double>::infinity();
  auto consider = [&](double mu) {
    const double sigma = sums.best_sigma(mu);
    const double cost = sums.objective({mu, sigma});
    if (cost < best_cost) {
      best_cost = cost;
      best_mu = mu;
      best_sigma = sigma;
    }
  };
  for (int k = 0; k <= 20; ++k) consider(0.5 + 0.125 * k);
  const double grid_pe = best_cost / pairs;

  // golden-section refinement of mu around the best grid cell
  double lo = std::max(0.5, best_mu - 0.125);
  double hi = std::min(3.0, best_mu + 0.125);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  auto cost_at = [&](double mu) { return sums.objective({mu, sums.best_sigma(mu)}); };
  double f1 = cost_at(x1), f2 = cost_at(x2);
  for (int it = 0; it < 24; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = cost_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = cost_at(x2);
    }
  }
  consider(0.5 * (lo + hi));

  PEReport report;
  report.pe = best_cost / pairs;
  report.mu_star = best_mu;
  report.sigma_star = best_sigma;
  report.h_basic = basic_entropy(g);
  report.grid_pe = grid_pe;
  if (report.h_basic > 1e-12) {
    report.compression_ratio = report.pe / report.h_basic;
  } else {
    report.compression_ratio = report.pe <= 1e-9 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return report;
}

void check_same_shape(const Graph& g, const Embedding& emb) {
  if (emb.n != g.n) throw data_error("embedding row count does not match the graph");
}

}  // namespace

PEReport pe_exact(const Graph& g, const Embedding& emb) {
  check_same_shape(g, emb);
  if (g.pair_count() > 100000000ull) {
    throw data_error("pe_exact guard: graph has more than 10^8 vertex pairs");
  }

  AdjacencyIndex adj(g);
  std::vector<float> edge_dists;
  std::vector<float> nonedge_dists;
  edge_dists.reserve(g.edge_count());
  nonedge_dists.reserve(g.pair_count() - g.edge_count());
  std::vector<std::uint8_t> mark(g.n, 0);
  for (std::uint32_t i = 0; i < g.n; ++i) {
    for (const std::uint32_t* p = adj.neighbors_begin(i); p != adj.neighbors_end(i); ++p) {
      mark[*p] = 1;
    }
    for (std::uint32_t j = i + 1; j < g.n; ++j) {
      const float d = static_cast<float>(distance(emb, i, j));
      (mark[j] ? edge_dists : nonedge_dists).push_back(d);
    }
    for (const std::uint32_t* p = adj.neighbors_begin(i); p != adj.neighbors_end(i); ++p) {
      mark[*p] = 0;
    }
  }

  DlSums sums{&edge_dists, &nonedge_dists, 1.0};
  return minimize_pe(sums, g);
}

PEReport pe_sampled(const Graph& g, const Embedding& emb, int samples_per_edge,
                    std::uint64_t seed) {
  check_same_shape(g, emb);
  if (samples_per_edge < 1) throw config_error("samples_per_edge must be >= 1");
  if (g.edge_count() == g.pair_count()) {
    // complete graph: the non-edge sum is empty, no sampling needed
    std::vector<float> edge_dists;
    for (std::size_t e = 0; e < g.src.size(); ++e) {
      edge_dists.push_back(static_cast<float>(distance(emb, g.src[e], g.dst[e])));
    }
    std::vector<float> none;
    DlSums sums{&edge_dists, &none, 0.0};
    return minimize_pe(sums, g);
  }

  AdjacencyIndex adj(g);
  std::vector<float> edge_dists;
  edge_dists.reserve(g.edge_count());
  std::vector<float> nonedge_dists;
  nonedge_dists.reserve(g.edge_count() * static_cast<std::size_t>(samples_per_edge));
  SplitMix sm(mix_seed(seed, 0x5a3d));

  for (std::size_t e = 0; e < g.src.size(); ++e) {
    edge_dists.push_back(static_cast<float>(distance(emb, g.src[e], g.dst[e])));
    for (int s = 0; s < samples_per_edge; ++s) {
      std::uint32_t anchor = (s % 2 == 0) ? g.src[e] : g.dst[e];
      std::uint32_t other = (s % 2 == 0) ? g.dst[e] : g.src[e];
      if (adj.degree(anchor) >= g.n - 1) std::swap(anchor, other);
      if (adj.degree(anchor) >= g.n - 1) continue;  // both endpoints saturated
      for (;;) {
        const std::uint32_t p = static_cast<std::uint32_t>(sm.next_below(g.n));
        if (p == anchor || adj.is_edge(anchor, p)) continue;
        nonedge_dists.push_back(static_cast<float>(distance(emb, anchor, p)));
        break;
      }
    }
  }
  if (nonedge_dists.empty()) {
    std::vector<float> none;
    DlSums sums{&edge_dists, &none, 0.0};
    return minimize_pe(sums, g);
  }

  const double weight = static_cast<double>(g.pair_count() - g.edge_count()) /
                        static_cast<double>(nonedge_dists.size());
  DlSums sums{&edge_dists, &nonedge_dists, weight};
  return minimize_pe(sums, g);
}

namespace {

// One-sided Jacobi SVD of a k x k matrix: A = U diag(s) V^T.
struct SmallSvd {
  std::vector<double> u, v;  // k x k, row-major
  std::vector<double> s;
};

SmallSvd jacobi_svd(std::vector<double> a, int k) {
  std::vector<double> v(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) v[i * k + i] = 1.0;

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int r = 0; r < k; ++r) {
          app += a[r * k + p] * a[r * k + p];
          aqq += a[r * k + q] * a[r * k + q];
          apq += a[r * k + p] * a[r * k + q];
        }
        off = std::max(off, std::fabs(apq));
        if (std::fabs(apq) < 1e-15 * std::sqrt(app * aqq) || apq == 0.0) continue;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (int r = 0; r < k; ++r) {
          const double ap = a[r * k + p], aq = a[r * k + q];
          a[r * k + p] = c * ap - sn * aq;
          a[r * k + q] = sn * ap + c * aq;
          const double vp = v[r * k + p], vq = v[r * k + q];
          v[r * k + p] = c * vp - sn * vq;
          v[r * k + q] = sn * vp + c * vq;
        }
      }
    }
    if (off < 1e-14) break;
  }

  SmallSvd out;
  out.s.resize(k);
  out.u.assign(static_cast<std::size_t>(k) * k, 0.0);
  out.v = std::move(v);
  for (int c = 0; c < k; ++c) {
    double norm = 0.0;
    for (int r = 0; r < k; ++r) norm += a[r * k + c] * a[r * k + c];
    norm = std::sqrt(norm);
    out.s[c] = norm;
    if (norm > 0.0) {
      for (int r = 0; r < k; ++r) out.u[r * k + c] = a[r * k + c] / norm;
    } else {
      out.u[c * k + c] = 1.0;
    }
  }
  return out;
}

}  // namespace

double ssq_aligned(const Embedding& emb, const Embedding& truth) {
  if (emb.n != truth.n || emb.dim != truth.dim) {
    throw data_error("ssq_aligned: dimension or row-count mismatch");
  }
  const int k = static_cast<int>(emb.dim);
  const std::uint32_t n = emb.n;
  if (n == 0) throw data_error("ssq_aligned: empty input");

  std::vector<double> mx(k, 0.0), my(k, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      mx[c] += emb.row(i)[c];
      my[c] += truth.row(i)[c];
    }
  }
  for (int c = 0; c < k; ++c) {
    mx[c] /= n;
    my[c] /= n;
  }

  // cross-covariance M = Yc^T Xc, plus the two energies
  std::vector<double> m(static_cast<std::size_t>(k) * k, 0.0);
  double ex = 0.0, ey = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (int r = 0; r < k; ++r) {
      const double yc = truth.row(i)[r] - my[r];
      ey += yc * yc;
      for (int c = 0; c < k; ++c) {
        m[r * k + c] += yc * (emb.row(i)[c] - mx[c]);
      }
    }
    for (int c = 0; c < k; ++c) {
      const double xc = emb.row(i)[c] - mx[c];
      ex += xc * xc;
    }
  }
  if (ey <= 0.0) throw data_error("ssq_aligned: degenerate ground truth");
  if (ex <= 0.0) return 1.0;  // collapsed embedding: best map is the mean

  const SmallSvd svd = jacobi_svd(m, k);
  double trace = 0.0;
  for (double s : svd.s) trace += s;
  // residual of the optimal similarity map: ey - trace^2 / ex
  const double ssq = std::max(0.0, ey - trace * trace / ex);
  return ssq / ey;
}

namespace {

DistanceStats stats_of(std::vector<double> values) {
  DistanceStats st;
  if (values.empty()) return st;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(values.size());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < values.size() ? values[i] * (1.0 - frac) + values[i + 1] * frac : values[i];
  };
  st.q05 = quantile(0.05);
  st.q25 = quantile(0.25);
  st.median = quantile(0.50);
  st.q75 = quantile(0.75);
  st.q95 = quantile(0.95);
  return st;
}

}  // namespace

SeparationReport separation_report(const Graph& g, const Embedding& emb,
                                   std::uint64_t sample_count, std::uint64_t seed) {
  check_same_shape(g, emb);
  AdjacencyIndex adj(g);

  std::vector<double> edge_d;
  edge_d.reserve(g.edge_count());
  for (std::size_t e = 0; e < g.src.size(); ++e) {
    edge_d.push_back(distance(emb, g.src[e], g.dst[e]));
  }

  std::vector<double> nonedge_d;
  nonedge_d.reserve(sample_count);
  if (g.pair_count() > g.edge_count()) {
    SplitMix sm(mix_seed(seed, 0x5e9a));
    while (nonedge_d.size() < sample_count) {
      const std::uint32_t i = static_cast<std::uint32_t>(sm.next_below(g.n));
      const std::uint32_t j = static_cast<std::uint32_t>(sm.next_below(g.n));
      if (i == j || adj.is_edge(i, j)) continue;
      nonedge_d.push_back(distance(emb, i, j));
    }
  }

  SeparationReport report;
  report.edges = stats_of(edge_d);
  report.nonedges = stats_of(nonedge_d);

  // Bayes error of the best single threshold (equal class weights): sweep the
  // merged values, counting edges above and non-edges below.
  std::vector<double> se = edge_d, sn = nonedge_d;
  std::sort(se.begin(), se.end());
  std::sort(sn.begin(), sn.end());
  if (!se.empty() && !sn.empty()) {
    double best = 1.0;
    std::vector<double> candidates = se;
    candidates.insert(candidates.end(), sn.begin(), sn.end());
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (double theta : candidates) {
      const double edges_above =
          static_cast<double>(se.end() - std::upper_bound(se.begin(), se.end(), theta));
      const double nonedges_at_or_below =
          static_cast<double>(std::upper_bound(sn.begin(), sn.end(), theta) - sn.begin());
      const double err = 0.5 * (edges_above / static_cast<double>(se.size()) +
                                nonedges_at_or_below / static_cast<double>(sn.size()));
      best = std::min(best, err);
    }
    report.overlap = best;
  }
  return report;
}

}  // namespace entropy_embed
