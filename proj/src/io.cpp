#include "entropy_embed/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

void write_embedding_tsv(const Embedding& emb, std::span<const std::uint64_t> labels,
                         std::ostream& out, const Permutation* perm) {
  if (!labels.empty() && labels.size() != emb.n) {
    throw data_error("label count does not match embedding rows");
  }

  out << "#id";
  for (std::uint32_t k = 0; k < emb.dim; ++k) out << "\tx" << k;
  out << '\n';

  std::vector<std::uint32_t> order(emb.n);
  std::iota(order.begin(), order.end(), 0u);
  if (!labels.empty()) {
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return labels[a] < labels[b]; });
  }

  char buf[64];
  for (std::uint32_t v : order) {
    const std::uint64_t id = labels.empty() ? v : labels[v];
    const std::uint32_t row = perm ? perm->forward[v] : v;
    std::snprintf(buf, sizeof buf, "%" PRIu64, id);
    out << buf;
    for (std::uint32_t k = 0; k < emb.dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.6g", static_cast<double>(emb.row(row)[k]));
      out << '\t' << buf;
    }
    out << '\n';
  }
}

Embedding read_embedding_tsv(std::istream& in, std::vector<std::uint64_t>* labels_out) {
  Embedding emb;
  if (labels_out) labels_out->clear();
  std::string line;
  std::size_t line_no = 0;
  std::vector<float> coords;
  std::uint32_t dim = 0;
  std::uint32_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::uint64_t id;
    if (!(ls >> id)) throw parse_error("bad embedding row", line_no);
    std::vector<float> row;
    double v;
    while (ls >> v) row.push_back(static_cast<float>(v));
    if (row.empty()) throw parse_error("embedding row has no coordinates", line_no);
    if (dim == 0) {
      dim = static_cast<std::uint32_t>(row.size());
    } else if (row.size() != dim) {
      throw parse_error("inconsistent embedding dimensionality", line_no);
    }
    coords.insert(coords.end(), row.begin(), row.end());
    if (labels_out) labels_out->push_back(id);
    ++rows;
  }
  if (rows == 0) throw data_error("empty embedding file");
  emb.n = rows;
  emb.dim = dim;
  emb.coords = std::move(coords);
  return emb;
}

std::vector<int> read_vertex_labels(std::istream& in, std::span<const std::uint64_t> vertex_ids) {
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  for (std::uint32_t v = 0; v < vertex_ids.size(); ++v) index.emplace(vertex_ids[v], v);

  std::vector<int> out(vertex_ids.size(), -1);
  std::unordered_map<std::string, int> classes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line[0] == '%') continue;
    std::istringstream ls(line);
    std::uint64_t id;
    std::string label;
    if (!(ls >> id >> label)) throw parse_error("bad label row", line_no);
    const auto it = index.find(id);
    if (it == index.end()) continue;
    const auto [cit, inserted] = classes.emplace(label, static_cast<int>(classes.size()));
    out[it->second] = cit->second;
  }
  return out;
}

}  // namespace entropy_embed
