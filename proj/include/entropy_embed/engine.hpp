#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "entropy_embed/graph.hpp"
#include "entropy_embed/hash_set.hpp"
#include "entropy_embed/histogram.hpp"
#include "entropy_embed/piecewise.hpp"
#include "entropy_embed/sigmoid.hpp"

namespace entropy_embed {

// Row-major n x d coordinate matrix, iterated in place between Jacobi rounds.
struct Embedding {
  std::uint32_t n = 0;
  std::uint32_t dim = 0;
  std::vector<float> coords;

  float* row(std::uint32_t v) { return coords.data() + static_cast<std::size_t>(v) * dim; }
  const float* row(std::uint32_t v) const {
    return coords.data() + static_cast<std::size_t>(v) * dim;
  }
};

struct IterationConfig {
  int max_iters = 100;
  std::uint32_t lane_width = 16;
  std::uint32_t workers = 0;  // 0 = available cores
  double convergence_tol = 1e-4;
  int convergence_window = 5;
  int relabel_period = 0;  // 0 = relabel only once, at load
  bool fast_math = true;
  std::optional<int> hash_bits;
};

// Worker x lane replicated numerator/denominator stores. Each (worker, lane)
// stream owns one replica; reduction is the only cross-replica operation.
class AccumulatorBank {
 public:
  AccumulatorBank(std::uint32_t workers, std::uint32_t lanes, std::uint32_t n,
                  std::uint32_t dim);

  float* y_replica(std::uint32_t worker, std::uint32_t lane) {
    return y_.data() + replica_index(worker, lane) * stride_y_;
  }
  float* z_replica(std::uint32_t worker, std::uint32_t lane) {
    return z_.data() + replica_index(worker, lane) * stride_z_;
  }

  // Sums all replicas of rows [v_lo, v_hi) into the consolidated buffers
  // (double accumulation) and zeroes the consumed replica cells.
  void reduce_rows(std::uint32_t v_lo, std::uint32_t v_hi, std::span<double> y_out,
                   std::span<double> z_out);

  std::uint32_t workers() const { return workers_; }
  std::uint32_t lanes() const { return lanes_; }
  std::uint32_t n() const { return n_; }
  std::uint32_t dim() const { return dim_; }

 private:
  std::size_t replica_index(std::uint32_t worker, std::uint32_t lane) const {
    return static_cast<std::size_t>(worker) * lanes_ + lane;
  }

  std::uint32_t workers_, lanes_, n_, dim_;
  std::size_t stride_y_, stride_z_;
  std::vector<float> y_;
  std::vector<float> z_;
};

// Convenience serial reduction: returns consolidated (y, z), zeroing replicas.
std::pair<std::vector<double>, std::vector<double>> reduce(AccumulatorBank& bank);

// Coordinates i.i.d. uniform in [0,1) per component, seed-deterministic.
Embedding init_embedding(std::uint32_t n, std::uint32_t dim, std::uint64_t seed);

// Eq-style weighted-majorization increments for one pair at its current
// distance: dyi = w (xj + s (xi - xj)), dzi = w, symmetric in j; s = d/|xi-xj|
// or 0 for coincident points.
void pair_contribution(std::span<const float> xi, std::span<const float> xj, const Parabola& pb,
                       std::span<float> dyi, float& dzi, std::span<float> dyj, float& dzj);

struct IterationStats {
  double pe_estimate = 0.0;
  double sigma = 0.0;
};

// Consolidated numerators/denominators of the latest round (test hook).
struct IterationCapture {
  std::vector<double> y;
  std::vector<double> z;
};

struct EmbedResult {
  Embedding embedding;  // original vertex indexing
  std::vector<double> pe_trace;
  double final_sigma = 1.0;
  bool converged = false;
  bool degenerate = false;  // n <= 1 or m == 0: initial coordinates returned
  int iterations = 0;
  Permutation relabel;  // original -> internal ids used during optimization
  DistanceHistogram last_histogram;
};

// One Jacobi round per iteration over all edges plus two sampled non-edges
// per edge, with worker x lane replicated accumulation and explicit
// reduction.
class EmbeddingEngine {
 public:
  EmbeddingEngine(const Graph& g, std::uint32_t dim, const IterationConfig& cfg,
                  std::uint64_t seed);

  bool degenerate() const { return degenerate_; }

  // Advances one full round; histogram/sigma/PE estimate update included.
  IterationStats run_single_iteration();

  // Full pipeline: iterate until convergence or max_iters, map back through
  // the relabeling permutation.
  EmbedResult run();

  const Graph& work_graph() const { return work_; }
  const EdgeHashSet& hash_set() const { return hash_; }
  const SigmoidParams& params() const { return params_; }
  const Embedding& work_coords() const { return coords_; }
  const std::vector<double>& pe_trace() const { return pe_trace_; }
  int iteration() const { return iter_; }

  void set_capture(IterationCapture* capture) { capture_ = capture; }

 private:
  void apply_relabel(std::uint64_t relabel_seed);
  template <typename MathT>
  void accumulate_worker(std::uint32_t worker, const MathT& math);
  void reduce_and_update(std::uint32_t worker);
  Embedding map_back() const;

  Graph work_;
  std::vector<std::uint32_t> to_work_;  // original -> work id
  EdgeHashSet hash_;
  IterationConfig cfg_;
  std::uint64_t seed_;
  std::uint32_t dim_;
  std::uint32_t worker_count_;
  bool degenerate_ = false;

  Embedding coords_;
  AccumulatorBank bank_;
  std::vector<double> y_consol_, z_consol_;
  std::vector<DistanceHistogram> worker_hists_;
  std::vector<std::uint64_t> block_lo_, block_hi_;

  FastMath fast_;
  SigmoidParams params_;
  int iter_ = 0;
  std::vector<double> pe_trace_;
  DistanceHistogram last_hist_;
  IterationCapture* capture_ = nullptr;

  // best-PE snapshot, kept in original indexing so later re-relabeling
  // cannot invalidate it; returned when max_iters hits without convergence
  double best_pe_ = std::numeric_limits<double>::infinity();
  Embedding best_coords_;
};

EmbedResult embed(const Graph& g, std::uint32_t dim, const IterationConfig& cfg,
                  std::uint64_t seed);

}  // namespace entropy_embed
