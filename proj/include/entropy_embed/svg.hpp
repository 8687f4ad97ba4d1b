#pragma once

#include <iosfwd>
#include <vector>

#include "entropy_embed/engine.hpp"
#include "entropy_embed/graph.hpp"

namespace entropy_embed {

// Renders a 2-d layout: one polyline per edge with opacity 1/sqrt(m), one
// circle per vertex, viewBox fit to the data with a 5% margin. labels (when
// given, one per vertex, -1 = unlabeled) select vertex colors from a fixed
// palette. Byte output is deterministic for fixed inputs.
void emit_svg(const Graph& g, const Embedding& emb2d, std::ostream& out,
              const std::vector<int>* labels = nullptr);

}  // namespace entropy_embed
