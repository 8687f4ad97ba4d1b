#include "entropy_embed/engine.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "entropy_embed/errors.hpp"
#include "entropy_embed/rng.hpp"
#include "entropy_embed/sampler.hpp"
#include "entropy_embed/slope.hpp"

namespace entropy_embed {

namespace {

// Runs fn(0..count-1) on count threads (inline when count == 1) and rethrows
// the first worker exception after the join barrier.
template <typename Fn>
void run_workers(std::uint32_t count, Fn&& fn) {
  if (count <= 1) {
    fn(0);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto guarded = [&](std::uint32_t w) {
    try {
      fn(w);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(count - 1);
  for (std::uint32_t w = 1; w < count; ++w) pool.emplace_back(guarded, w);
  guarded(0);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline double pair_distance(const float* xa, const float* xb, std::uint32_t dim) {
  double acc = 0.0;
  for (std::uint32_t k = 0; k < dim; ++k) {
    const double diff = static_cast<double>(xa[k]) - static_cast<double>(xb[k]);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

inline void add_pair(const float* coords, std::uint32_t dim, std::uint32_t u, std::uint32_t v,
                     double delta, const Parabola& pb, float* y, float* z) {
  if (!(pb.w > 0.0)) return;
  const float wf = static_cast<float>(pb.w);
  // distances live on [0, inf): a parabola vertex at negative distance means
  // "collapse onto the partner", not "flip across it"
  const double target = std::max(pb.d_target, 0.0);
  const float sf = delta > 0.0 ? static_cast<float>(target / delta) : 0.0f;
  const float* xu = coords + static_cast<std::size_t>(u) * dim;
  const float* xv = coords + static_cast<std::size_t>(v) * dim;
  float* yu = y + static_cast<std::size_t>(u) * dim;
  float* yv = y + static_cast<std::size_t>(v) * dim;
  for (std::uint32_t k = 0; k < dim; ++k) {
    const float diff = xu[k] - xv[k];
    yu[k] += wf * (xv[k] + sf * diff);
    yv[k] += wf * (xu[k] - sf * diff);
  }
  z[u] += wf;
  z[v] += wf;
}

}  // namespace

AccumulatorBank::AccumulatorBank(std::uint32_t workers, std::uint32_t lanes, std::uint32_t n,
                                 std::uint32_t dim)
    : workers_(workers),
      lanes_(lanes),
      n_(n),
      dim_(dim),
      stride_y_(static_cast<std::size_t>(n) * dim),
      stride_z_(n),
      y_(static_cast<std::size_t>(workers) * lanes * n * dim, 0.0f),
      z_(static_cast<std::size_t>(workers) * lanes * n, 0.0f) {}

void AccumulatorBank::reduce_rows(std::uint32_t v_lo, std::uint32_t v_hi,
                                  std::span<double> y_out, std::span<double> z_out) {
  const std::size_t replicas = static_cast<std::size_t>(workers_) * lanes_;
  for (std::uint32_t v = v_lo; v < v_hi; ++v) {
    double* yo = y_out.data() + static_cast<std::size_t>(v) * dim_;
    for (std::uint32_t k = 0; k < dim_; ++k) yo[k] = 0.0;
    double zo = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
      float* yr = y_.data() + r * stride_y_ + static_cast<std::size_t>(v) * dim_;
      float* zr = z_.data() + r * stride_z_ + v;
      for (std::uint32_t k = 0; k < dim_; ++k) {
        yo[k] += yr[k];
        yr[k] = 0.0f;
      }
      zo += *zr;
      *zr = 0.0f;
    }
    z_out[v] = zo;
  }
}

std::pair<std::vector<double>, std::vector<double>> reduce(AccumulatorBank& bank) {
  std::vector<double> y(static_cast<std::size_t>(bank.n()) * bank.dim());
  std::vector<double> z(bank.n());
  bank.reduce_rows(0, bank.n(), y, z);
  return {std::move(y), std::move(z)};
}

Embedding init_embedding(std::uint32_t n, std::uint32_t dim, std::uint64_t seed) {
  Embedding e;
  e.n = n;
  e.dim = dim;
  e.coords.resize(static_cast<std::size_t>(n) * dim);
  SplitMix sm(mix_seed(seed, 0x1217));
  for (auto& c : e.coords) c = static_cast<float>(sm.next_double());
  return e;
}

void pair_contribution(std::span<const float> xi, std::span<const float> xj, const Parabola& pb,
                       std::span<float> dyi, float& dzi, std::span<float> dyj, float& dzj) {
  const std::uint32_t dim = static_cast<std::uint32_t>(xi.size());
  for (std::uint32_t k = 0; k < dim; ++k) dyi[k] = dyj[k] = 0.0f;
  dzi = dzj = 0.0f;
  if (!(pb.w > 0.0)) return;
  const double delta = pair_distance(xi.data(), xj.data(), dim);
  const float wf = static_cast<float>(pb.w);
  const float sf = delta > 0.0 ? static_cast<float>(pb.d_target / delta) : 0.0f;
  for (std::uint32_t k = 0; k < dim; ++k) {
    const float diff = xi[k] - xj[k];
    dyi[k] = wf * (xj[k] + sf * diff);
    dyj[k] = wf * (xi[k] - sf * diff);
  }
  dzi = dzj = wf;
}

EmbeddingEngine::EmbeddingEngine(const Graph& g, std::uint32_t dim, const IterationConfig& cfg,
                                 std::uint64_t seed)
    : cfg_(cfg),
      seed_(seed),
      dim_(dim),
      worker_count_(cfg.workers > 0 ? cfg.workers
                                    : std::max(1u, std::thread::hardware_concurrency())),
      bank_(1, 1, 0, 0),
      fast_(FastMath::build()) {
  if (dim_ < 1) throw config_error("dimension must be >= 1");
  if (cfg_.lane_width < 1) throw config_error("lane width must be >= 1");
  if (cfg_.max_iters < 1) throw config_error("max_iters must be >= 1");

  work_ = g;
  to_work_.resize(g.n);
  for (std::uint32_t v = 0; v < g.n; ++v) to_work_[v] = v;
  degenerate_ = g.n <= 1 || g.edge_count() == 0;

  if (!degenerate_) {
    apply_relabel(mix_seed(seed_, 0xA11BE11));
  }
  coords_ = init_embedding(work_.n, dim_, seed_);
  if (!degenerate_) {
    hash_ = EdgeHashSet::build(work_, cfg_.hash_bits);
    bank_ = AccumulatorBank(worker_count_, cfg_.lane_width, work_.n, dim_);
    y_consol_.resize(static_cast<std::size_t>(work_.n) * dim_);
    z_consol_.resize(work_.n);
    worker_hists_.assign(worker_count_, DistanceHistogram());
    block_lo_.resize(worker_count_);
    block_hi_.resize(worker_count_);
    const std::uint64_t blocks =
        (work_.edge_count() + cfg_.lane_width - 1) / cfg_.lane_width;
    for (std::uint32_t w = 0; w < worker_count_; ++w) {
      block_lo_[w] = blocks * w / worker_count_;
      block_hi_[w] = blocks * (w + 1) / worker_count_;
    }
  }
}

void EmbeddingEngine::apply_relabel(std::uint64_t relabel_seed) {
  auto [relabeled, perm] = random_relabel(work_, relabel_seed);
  work_ = std::move(relabeled);
  for (auto& id : to_work_) id = perm.forward[id];
  if (!coords_.coords.empty()) {
    Embedding moved = coords_;
    for (std::uint32_t v = 0; v < work_.n; ++v) {
      std::memcpy(moved.row(perm.forward[v]), coords_.row(v), sizeof(float) * dim_);
    }
    coords_ = std::move(moved);
    hash_ = EdgeHashSet::build(work_, cfg_.hash_bits);
  }
}

template <typename MathT>
void EmbeddingEngine::accumulate_worker(std::uint32_t worker, const MathT& math) {
  const std::uint32_t lane_width = cfg_.lane_width;
  const std::uint64_t m = work_.edge_count();
  const std::uint32_t n = work_.n;
  const float* coords = coords_.coords.data();
  DistanceHistogram& hist = worker_hists_[worker];
  const SigmoidParams prm = params_;

  std::vector<std::uint32_t> partners(lane_width);
  LaneRng rng;
  rng.state.resize(lane_width);

  for (std::uint64_t block = block_lo_[worker]; block < block_hi_[worker]; ++block) {
    const std::uint64_t base = block * lane_width;
    const std::uint32_t nb = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(lane_width, m - base));

    // edges of the block
    for (std::uint32_t l = 0; l < nb; ++l) {
      const std::uint64_t e = base + l;
      const std::uint32_t i = work_.src[e];
      const std::uint32_t j = work_.dst[e];
      const double delta = pair_distance(coords + static_cast<std::size_t>(i) * dim_,
                                         coords + static_cast<std::size_t>(j) * dim_, dim_);
      hist.record(delta, true);
      const Parabola pb = detail::parabola_impl(delta, prm, true, math);
      add_pair(coords, dim_, i, j, delta, pb, bank_.y_replica(worker, l),
               bank_.z_replica(worker, l));
    }

    // one g-partner per i-anchor, one h-partner per j-anchor; the sample
    // streams are keyed by (seed, iteration, edge, draw) so they do not
    // depend on the worker count or lane width
    for (int draw = 0; draw < 2; ++draw) {
      const std::uint32_t* anchors = draw == 0 ? work_.src.data() : work_.dst.data();
      for (std::uint32_t l = 0; l < nb; ++l) {
        rng.state[l] = expand_seed32(seed_, static_cast<std::uint64_t>(iter_), base + l,
                                     static_cast<std::uint64_t>(draw));
      }
      sample_non_edges(std::span(anchors + base, nb), rng, hash_, n,
                       std::span(partners.data(), nb));
      for (std::uint32_t l = 0; l < nb; ++l) {
        const std::uint32_t anchor = anchors[base + l];
        const std::uint32_t partner = partners[l];
        const double delta =
            pair_distance(coords + static_cast<std::size_t>(anchor) * dim_,
                          coords + static_cast<std::size_t>(partner) * dim_, dim_);
        hist.record(delta, false);
        const Parabola pb = detail::parabola_impl(delta, prm, false, math);
        add_pair(coords, dim_, anchor, partner, delta, pb, bank_.y_replica(worker, l),
                 bank_.z_replica(worker, l));
      }
    }
  }
}

void EmbeddingEngine::reduce_and_update(std::uint32_t worker) {
  const std::uint32_t n = work_.n;
  const std::uint32_t v_lo = static_cast<std::uint32_t>(
      static_cast<std::uint64_t>(n) * worker / worker_count_);
  const std::uint32_t v_hi = static_cast<std::uint32_t>(
      static_cast<std::uint64_t>(n) * (worker + 1) / worker_count_);
  bank_.reduce_rows(v_lo, v_hi, y_consol_, z_consol_);

  bool bad = false;
  for (std::uint32_t v = v_lo; v < v_hi; ++v) {
    const double z = z_consol_[v];
    if (z <= 0.0) continue;  // untouched this round: hold position
    float* row = coords_.row(v);
    const double* y = y_consol_.data() + static_cast<std::size_t>(v) * dim_;
    for (std::uint32_t k = 0; k < dim_; ++k) {
      const float value = static_cast<float>(y[k] / z);
      if (!std::isfinite(value)) bad = true;
      row[k] = value;
    }
  }
  if (bad) {
    throw divergence_error("non-finite coordinate after update", iter_ + 1);
  }
}

IterationStats EmbeddingEngine::run_single_iteration() {
  if (degenerate_) throw config_error("cannot iterate a degenerate graph");

  if (cfg_.relabel_period > 0 && iter_ > 0 && iter_ % cfg_.relabel_period == 0) {
    apply_relabel(mix_seed(mix_seed(seed_, 0xA11BE11), static_cast<std::uint64_t>(iter_)));
  }
  for (auto& h : worker_hists_) h.clear();

  if (cfg_.fast_math) {
    run_workers(worker_count_, [&](std::uint32_t w) { accumulate_worker(w, fast_); });
  } else {
    run_workers(worker_count_, [&](std::uint32_t w) { accumulate_worker(w, detail::ExactMath{}); });
  }
  run_workers(worker_count_, [&](std::uint32_t w) { reduce_and_update(w); });

  DistanceHistogram merged = worker_hists_[0];
  for (std::uint32_t w = 1; w < worker_count_; ++w) merged.merge_from(worker_hists_[w]);
  const std::uint64_t nonedge_samples = merged.nonedge_total();
  const std::uint64_t pairs = work_.pair_count();
  merged.nonedge_weight =
      nonedge_samples > 0
          ? static_cast<double>(pairs - work_.edge_count()) / static_cast<double>(nonedge_samples)
          : 1.0;

  // Rate-limit sigma growth: the histogram lags one round, and an
  // undifferentiated early layout would otherwise send sigma straight to the
  // bracket ceiling, blasting every sampled non-edge ~0.63*sigma outward
  // before the distances can respond.
  constexpr double kSigmaGrowthCap = 1.5;
  params_.sigma = std::min(optimize_sigma(merged, params_.mu), params_.sigma * kSigmaGrowthCap);

  IterationStats stats;
  stats.sigma = params_.sigma;
  stats.pe_estimate = histogram_objective(merged, params_) / static_cast<double>(pairs);
  pe_trace_.push_back(stats.pe_estimate);
  last_hist_ = std::move(merged);
  ++iter_;

  if (stats.pe_estimate < best_pe_) {
    best_pe_ = stats.pe_estimate;
    best_coords_ = map_back();
  }
  if (capture_) {
    capture_->y = y_consol_;
    capture_->z = z_consol_;
  }
  return stats;
}

Embedding EmbeddingEngine::map_back() const {
  Embedding out;
  out.n = static_cast<std::uint32_t>(to_work_.size());
  out.dim = dim_;
  out.coords.resize(static_cast<std::size_t>(out.n) * dim_);
  for (std::uint32_t v = 0; v < out.n; ++v) {
    std::memcpy(out.coords.data() + static_cast<std::size_t>(v) * dim_, coords_.row(to_work_[v]),
                sizeof(float) * dim_);
  }
  return out;
}

EmbedResult EmbeddingEngine::run() {
  EmbedResult result;
  if (degenerate_) {
    result.embedding = map_back();
    result.degenerate = true;
    result.relabel.forward = to_work_;
    result.relabel.inverse = to_work_;
    return result;
  }

  // Converged when the last `window` iterations produced no new PE minimum
  // that improves on the best seen before them by the relative tolerance.
  // Transient upticks (sampling noise, early turbulence) do not stop the run.
  const int window = cfg_.convergence_window;
  while (iter_ < cfg_.max_iters) {
    run_single_iteration();
    const int k = static_cast<int>(pe_trace_.size());
    if (k > window) {
      double best_before = pe_trace_[0];
      for (int i = 1; i < k - window; ++i) best_before = std::min(best_before, pe_trace_[i]);
      double best_recent = pe_trace_[static_cast<std::size_t>(k - window)];
      for (int i = k - window + 1; i < k; ++i) {
        best_recent = std::min(best_recent, pe_trace_[i]);
      }
      if (best_before - best_recent < cfg_.convergence_tol * std::fabs(best_before)) {
        result.converged = true;
        break;
      }
    }
  }

  // converged runs return the current state; a run cut off by max_iters
  // falls back to the best-PE snapshot seen along the way
  result.embedding =
      (!result.converged && !best_coords_.coords.empty()) ? best_coords_ : map_back();
  result.pe_trace = pe_trace_;
  result.final_sigma = params_.sigma;
  result.iterations = iter_;
  result.relabel.forward = to_work_;
  result.relabel.inverse.resize(to_work_.size());
  for (std::uint32_t v = 0; v < to_work_.size(); ++v) result.relabel.inverse[to_work_[v]] = v;
  result.last_histogram = last_hist_;
  return result;
}

EmbedResult embed(const Graph& g, std::uint32_t dim, const IterationConfig& cfg,
                  std::uint64_t seed) {
  EmbeddingEngine engine(g, dim, cfg, seed);
  return engine.run();
}

}  // namespace entropy_embed
