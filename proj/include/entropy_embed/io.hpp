#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "entropy_embed/engine.hpp"
#include "entropy_embed/graph.hpp"

namespace entropy_embed {

// TSV with a "#id<TAB>x0..." header, one row per vertex in ascending label
// order, coordinates at 6 significant digits. labels[v] is the original input
// id of compact vertex v (pass an empty span for identity labels). When perm
// is non-null the embedding rows are read through perm->forward first.
void write_embedding_tsv(const Embedding& emb, std::span<const std::uint64_t> labels,
                         std::ostream& out, const Permutation* perm = nullptr);

// Reads the format back; row order in the file is preserved.
Embedding read_embedding_tsv(std::istream& in, std::vector<std::uint64_t>* labels_out = nullptr);

// "id label" lines; unknown ids are ignored. Returns one label index per
// compact vertex (-1 where absent), mapping distinct label strings to dense
// indices in first-appearance order.
std::vector<int> read_vertex_labels(std::istream& in, std::span<const std::uint64_t> vertex_ids);

}  // namespace entropy_embed
