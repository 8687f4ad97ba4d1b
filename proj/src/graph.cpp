#include "entropy_embed/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "entropy_embed/errors.hpp"
#include "entropy_embed/rng.hpp"

namespace entropy_embed {

namespace {

constexpr std::array<char, 4> kSnapshotMagic = {'G', 'E', 'M', 'P'};

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    return splitmix64(p.first * 0x100000001b3ull ^ p.second);
  }
};

bool parse_u64(const std::string& tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  std::uint64_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') return false;
    const std::uint64_t digit = static_cast<std::uint64_t>(ch - '0');
    if (v > (UINT64_MAX - digit) / 10) return false;
    v = v * 10 + digit;
  }
  out = v;
  return true;
}

void put_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64_le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint32_t get_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw data_error("truncated snapshot");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw data_error("truncated snapshot");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Graph load_edge_list(std::istream& in, std::vector<std::uint64_t>* raw_labels) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_edges;
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == line.size()) continue;
    if (line[pos] == '#' || line[pos] == '%') continue;

    std::uint64_t ids[2];
    int count = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos == line.size()) break;
      const std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      const std::string tok = line.substr(start, pos - start);
      std::uint64_t v;
      if (count >= 2 || !parse_u64(tok, v)) {
        throw parse_error("malformed edge line " + std::to_string(line_no) + ": '" + tok + "'",
                          line_no);
      }
      ids[count++] = v;
    }
    if (count != 2) {
      throw parse_error("expected two vertex ids on line " + std::to_string(line_no), line_no);
    }
    if (ids[0] == ids[1]) continue;  // drop self-loop
    const auto key = std::minmax(ids[0], ids[1]);
    if (!seen.insert({key.first, key.second}).second) continue;  // merge duplicate
    raw_edges.emplace_back(ids[0], ids[1]);
  }

  if (raw_edges.empty()) throw data_error("no edges after canonicalization");

  Graph g;
  std::unordered_map<std::uint64_t, std::uint32_t> compact;
  compact.reserve(raw_edges.size() * 2);
  auto id_of = [&](std::uint64_t raw) {
    auto [it, inserted] = compact.try_emplace(raw, static_cast<std::uint32_t>(compact.size()));
    if (inserted && raw_labels) raw_labels->push_back(raw);
    return it->second;
  };
  if (raw_labels) raw_labels->clear();
  g.src.reserve(raw_edges.size());
  g.dst.reserve(raw_edges.size());
  for (const auto& [a, b] : raw_edges) {
    const std::uint32_t ia = id_of(a);
    const std::uint32_t ib = id_of(b);
    g.src.push_back(ia);
    g.dst.push_back(ib);
  }
  g.n = static_cast<std::uint32_t>(compact.size());
  return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (std::size_t e = 0; e < g.src.size(); ++e) {
    out << g.src[e] << '\t' << g.dst[e] << '\n';
  }
}

void save_graph_snapshot(const Graph& g, std::ostream& out) {
  out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  put_u32_le(out, g.n);
  put_u64_le(out, g.edge_count());
  for (std::uint32_t v : g.src) put_u32_le(out, v);
  for (std::uint32_t v : g.dst) put_u32_le(out, v);
}

Graph load_graph_snapshot(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kSnapshotMagic.data(), 4) != 0) {
    throw data_error("bad snapshot magic");
  }
  Graph g;
  g.n = get_u32_le(in);
  const std::uint64_t m = get_u64_le(in);
  if (m == 0) throw data_error("snapshot holds no edges");
  if (m > g.pair_count()) throw data_error("snapshot edge count exceeds pair count");
  g.src.resize(m);
  g.dst.resize(m);
  for (auto& v : g.src) v = get_u32_le(in);
  for (auto& v : g.dst) v = get_u32_le(in);
  for (std::uint64_t e = 0; e < m; ++e) {
    if (g.src[e] >= g.n || g.dst[e] >= g.n || g.src[e] == g.dst[e]) {
      throw data_error("snapshot edge out of range");
    }
  }
  return g;
}

bool looks_like_snapshot(std::istream& in) {
  char magic[4];
  const auto pos = in.tellg();
  in.read(magic, 4);
  const bool ok = in.gcount() == 4 && std::memcmp(magic, kSnapshotMagic.data(), 4) == 0;
  in.clear();
  in.seekg(pos);
  return ok;
}

std::pair<Graph, Permutation> random_relabel(const Graph& g, std::uint64_t seed) {
  Permutation perm;
  perm.forward.resize(g.n);
  for (std::uint32_t i = 0; i < g.n; ++i) perm.forward[i] = i;

  std::uint64_t state = mix_seed(seed, 0x5eedu);
  for (std::uint32_t i = 0; i + 1 < g.n; ++i) {
    state = splitmix64(state);
    const std::uint32_t j =
        i + static_cast<std::uint32_t>(bounded_u64(state, g.n - i));
    std::swap(perm.forward[i], perm.forward[j]);
  }
  perm.inverse.resize(g.n);
  for (std::uint32_t i = 0; i < g.n; ++i) perm.inverse[perm.forward[i]] = i;

  Graph out;
  out.n = g.n;
  out.src.resize(g.src.size());
  out.dst.resize(g.dst.size());
  for (std::size_t e = 0; e < g.src.size(); ++e) {
    out.src[e] = perm.forward[g.src[e]];
    out.dst[e] = perm.forward[g.dst[e]];
  }
  return {std::move(out), std::move(perm)};
}

double basic_entropy(const Graph& g) {
  const double N = static_cast<double>(g.pair_count());
  const double m = static_cast<double>(g.edge_count());
  if (N <= 0.0) return 0.0;
  const double p = m / N;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

AdjacencyIndex::AdjacencyIndex(const Graph& g) : n_(g.n) {
  std::vector<std::uint32_t> deg(g.n, 0);
  for (std::size_t e = 0; e < g.src.size(); ++e) {
    ++deg[g.src[e]];
    ++deg[g.dst[e]];
  }
  offsets_.assign(g.n + 1, 0);
  for (std::uint32_t v = 0; v < g.n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  neighbors_.resize(offsets_[g.n]);
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < g.src.size(); ++e) {
    neighbors_[cursor[g.src[e]]++] = g.dst[e];
    neighbors_[cursor[g.dst[e]]++] = g.src[e];
  }
  for (std::uint32_t v = 0; v < g.n; ++v) {
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

bool AdjacencyIndex::is_edge(std::uint32_t i, std::uint32_t j) const {
  if (i >= n_ || j >= n_) throw std::out_of_range("vertex index out of range");
  if (i == j) return false;
  const auto begin = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto end = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  return std::binary_search(begin, end, j);
}

}  // namespace entropy_embed
