#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "entropy_embed/engine.hpp"
#include "entropy_embed/errors.hpp"
#include "entropy_embed/graph.hpp"
#include "entropy_embed/io.hpp"
#include "entropy_embed/metrics.hpp"
#include "entropy_embed/svg.hpp"

namespace ee = entropy_embed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

struct Options {
  std::string input;
  std::uint32_t dim = 2;
  int iters = 100;
  std::uint32_t threads = 0;
  std::uint32_t lanes = 16;
  std::uint64_t seed = 1;
  int hash_bits = 0;
  std::string out;
  std::string svg;
  std::string svg_labels;
  bool metrics = false;
  std::string ground_truth;
  bool exact_math = false;
  int relabel_period = 0;
  std::string dump_histogram;
  std::string snapshot_out;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ee::data_error("cannot open input file: " + path);
  return in;
}

void print_metrics(const ee::Graph& g, const ee::Embedding& emb, const Options& opt,
                   const std::vector<std::uint64_t>& labels) {
  const bool exact_feasible = g.pair_count() <= 2000000ull;
  ee::PEReport report = exact_feasible ? ee::pe_exact(g, emb)
                                       : ee::pe_sampled(g, emb, /*samples_per_edge=*/8, opt.seed);
  ee::SeparationReport sep = ee::separation_report(g, emb, 10000, opt.seed);

  std::optional<double> ssq;
  if (!opt.ground_truth.empty()) {
    std::ifstream in = open_input(opt.ground_truth);
    std::vector<std::uint64_t> truth_ids;
    ee::Embedding truth = ee::read_embedding_tsv(in, &truth_ids);
    if (truth.n != g.n) throw ee::data_error("ground truth row count does not match the graph");
    // align ground-truth rows with the compact vertex order
    std::unordered_map<std::uint64_t, std::uint32_t> by_id;
    for (std::uint32_t r = 0; r < truth.n; ++r) by_id.emplace(truth_ids[r], r);
    ee::Embedding aligned;
    aligned.n = truth.n;
    aligned.dim = truth.dim;
    aligned.coords.resize(truth.coords.size());
    for (std::uint32_t v = 0; v < g.n; ++v) {
      const std::uint64_t id = labels.empty() ? v : labels[v];
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw ee::data_error("ground truth misses vertex id");
      for (std::uint32_t k = 0; k < truth.dim; ++k) {
        aligned.coords[static_cast<std::size_t>(v) * truth.dim + k] = truth.row(it->second)[k];
      }
    }
    ssq = ee::ssq_aligned(emb, aligned);
  }

  std::cout << "metric                value\n";
  std::cout << "--------------------  ----------\n";
  std::cout << "pe (" << (exact_feasible ? "exact" : "sampled") << ")          " << report.pe
            << "\n";
  std::cout << "h_basic               " << report.h_basic << "\n";
  std::cout << "compression_ratio     " << report.compression_ratio << "\n";
  std::cout << "mu*                   " << report.mu_star << "\n";
  std::cout << "sigma*                " << report.sigma_star << "\n";
  std::cout << "edge dist median      " << sep.edges.median << "\n";
  std::cout << "nonedge dist median   " << sep.nonedges.median << "\n";
  std::cout << "overlap               " << sep.overlap << "\n";
  if (ssq) std::cout << "ssq                   " << *ssq << "\n";

  nlohmann::json j{{"pe", report.pe},
                   {"pe_mode", exact_feasible ? "exact" : "sampled"},
                   {"h_basic", report.h_basic},
                   {"compression_ratio", report.compression_ratio},
                   {"mu_star", report.mu_star},
                   {"sigma_star", report.sigma_star},
                   {"edge_median", sep.edges.median},
                   {"nonedge_median", sep.nonedges.median},
                   {"overlap", sep.overlap}};
  if (ssq) j["ssq"] = *ssq;
  std::cout << j.dump() << "\n";
}

int run(int argc, char** argv) {
  Options opt;
  CLI::App app{"entropy-embed: graph embedding by predictive-entropy minimization"};
  app.add_option("-i,--input", opt.input, "edge list (text) or GEMP snapshot")->required();
  app.add_option("-d,--dim", opt.dim, "embedding dimensionality")->check(CLI::PositiveNumber);
  app.add_option("--iters", opt.iters, "maximum iterations")->check(CLI::PositiveNumber);
  app.add_option("-t,--threads", opt.threads, "worker threads (0 = auto)");
  app.add_option("-L,--lanes", opt.lanes, "lane width of the accumulator replicas")
      ->check(CLI::PositiveNumber);
  app.add_option("-s,--seed", opt.seed, "run seed");
  app.add_option("--hash-bits", opt.hash_bits, "log2 of the edge hash table size (0 = auto)");
  app.add_option("-o,--out", opt.out, "embedding TSV output path");
  app.add_option("--svg", opt.svg, "SVG layout output path (requires --dim 2)");
  app.add_option("--svg-labels", opt.svg_labels, "'id label' file for vertex colors");
  app.add_flag("--metrics", opt.metrics, "print the quality report");
  app.add_option("--ground-truth", opt.ground_truth, "TSV coordinates for SSQ (with --metrics)");
  app.add_flag("--exact-math", opt.exact_math, "library erf/exp instead of piecewise tables");
  app.add_option("--relabel-period", opt.relabel_period, "re-relabel every R iterations (0 = off)");
  app.add_option("--dump-histogram", opt.dump_histogram, "write the final distance histogram CSV");
  app.add_option("--snapshot-out", opt.snapshot_out, "write the canonical graph snapshot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (!opt.svg.empty() && opt.dim != 2) {
    std::cerr << "error: --svg requires --dim 2\n";
    return kExitUsage;
  }

  if (opt.threads == 0) {
    if (const char* env = std::getenv("ENTROPY_EMBED_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) opt.threads = static_cast<std::uint32_t>(v);
    }
  }

  std::ifstream in = open_input(opt.input);
  std::vector<std::uint64_t> labels;
  ee::Graph g =
      ee::looks_like_snapshot(in) ? ee::load_graph_snapshot(in) : ee::load_edge_list(in, &labels);

  if (!opt.snapshot_out.empty()) {
    std::ofstream snap(opt.snapshot_out, std::ios::binary);
    if (!snap) throw ee::data_error("cannot write snapshot: " + opt.snapshot_out);
    ee::save_graph_snapshot(g, snap);
  }

  ee::IterationConfig cfg;
  cfg.max_iters = opt.iters;
  cfg.lane_width = opt.lanes;
  cfg.workers = opt.threads;
  cfg.fast_math = !opt.exact_math;
  cfg.relabel_period = opt.relabel_period;
  if (opt.hash_bits > 0) cfg.hash_bits = opt.hash_bits;

  ee::EmbedResult result = ee::embed(g, opt.dim, cfg, opt.seed);

  if (result.degenerate) {
    std::cerr << "warning: degenerate graph (n <= 1 or no edges); returning the initial layout\n";
  } else {
    std::cout << "n=" << g.n << " m=" << g.edge_count() << " d=" << opt.dim
              << " iterations=" << result.iterations
              << (result.converged ? " (converged)" : " (max iterations)") << "\n";
    std::cout << "pe_estimate initial=" << result.pe_trace.front()
              << " final=" << result.pe_trace.back() << " bits/pair, h_basic=" << ee::basic_entropy(g)
              << ", sigma*=" << result.final_sigma << "\n";
  }

  if (!opt.out.empty()) {
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw ee::data_error("cannot write output: " + opt.out);
    ee::write_embedding_tsv(result.embedding, labels, out);
  }

  if (!opt.svg.empty()) {
    std::ofstream out(opt.svg, std::ios::binary);
    if (!out) throw ee::data_error("cannot write SVG: " + opt.svg);
    if (!opt.svg_labels.empty()) {
      std::ifstream lf = open_input(opt.svg_labels);
      const std::vector<int> classes = ee::read_vertex_labels(lf, labels);
      ee::emit_svg(g, result.embedding, out, &classes);
    } else {
      ee::emit_svg(g, result.embedding, out);
    }
  }

  if (!opt.dump_histogram.empty()) {
    std::ofstream out(opt.dump_histogram, std::ios::binary);
    if (!out) throw ee::data_error("cannot write histogram: " + opt.dump_histogram);
    result.last_histogram.write_csv(out);
  }

  if (opt.metrics) {
    print_metrics(g, result.embedding, opt, labels);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ee::divergence_error& e) {
    std::cerr << "error: " << e.what() << " (iteration " << e.iteration() << ")\n";
    return kExitDivergence;
  } catch (const ee::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ee::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
