#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace entropy_embed {

// Simple undirected graph after canonicalization: no self-loops, no duplicate
// undirected edges, vertex ids compacted to 0..n-1.
struct Graph {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> src;
  std::vector<std::uint32_t> dst;

  std::uint64_t edge_count() const { return src.size(); }

  // Number of vertex pairs N = n*(n-1)/2.
  std::uint64_t pair_count() const {
    return static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  }
};

// Bijection between original and relabeled vertex ids.
struct Permutation {
  std::vector<std::uint32_t> forward;  // original -> relabeled
  std::vector<std::uint32_t> inverse;  // relabeled -> original
};

// Parses "i<ws>j" lines; '#'/'%' comment lines and blank lines are skipped.
// Self-loops are dropped, duplicate undirected edges merged, ids compacted in
// first-appearance order. If raw_labels is non-null it receives the original
// input id for each compact vertex index.
Graph load_edge_list(std::istream& in, std::vector<std::uint64_t>* raw_labels = nullptr);

// Emits the canonical edge list ("i\tj" per line, compact ids, edge order).
void write_edge_list(const Graph& g, std::ostream& out);

// Binary snapshot: magic "GEMP", little-endian u32 n, u64 m, then src and dst
// arrays as u32.
void save_graph_snapshot(const Graph& g, std::ostream& out);
Graph load_graph_snapshot(std::istream& in);
bool looks_like_snapshot(std::istream& in);  // peeks, does not consume

// Seed-deterministic uniform relabeling (Fisher-Yates).
std::pair<Graph, Permutation> random_relabel(const Graph& g, std::uint64_t seed);

// Shannon entropy of the Bernoulli(m/N) edge indicator, in bits per pair.
double basic_entropy(const Graph& g);

// Exact edge-membership oracle over a sorted adjacency structure. Independent
// of the hash-based fast test.
class AdjacencyIndex {
 public:
  explicit AdjacencyIndex(const Graph& g);

  // True iff {i,j} is an edge. Throws std::out_of_range for bad indices,
  // returns false for i == j.
  bool is_edge(std::uint32_t i, std::uint32_t j) const;

  std::uint32_t degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }

  const std::uint32_t* neighbors_begin(std::uint32_t v) const {
    return neighbors_.data() + offsets_[v];
  }
  const std::uint32_t* neighbors_end(std::uint32_t v) const {
    return neighbors_.data() + offsets_[v + 1];
  }

 private:
  std::uint32_t n_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
};

inline bool is_edge_exact(const AdjacencyIndex& adj, std::uint32_t i, std::uint32_t j) {
  return adj.is_edge(i, j);
}

}  // namespace entropy_embed
