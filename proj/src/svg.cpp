#include "entropy_embed/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "entropy_embed/errors.hpp"

namespace entropy_embed {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#4269d0", "#efb118", "#ff725c", "#6cc5b0", "#3ca951", "#ff8ab7",
    "#a463f2", "#97bbf5", "#9c6b4e", "#9498a0", "#66c2a5", "#d62728"};

struct Fmt {
  char buf[48];
  const char* operator()(double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }
};

}  // namespace

void emit_svg(const Graph& g, const Embedding& emb, std::ostream& out,
              const std::vector<int>* labels) {
  if (emb.dim != 2) throw config_error("SVG rendering requires a 2-d embedding");
  if (emb.n != g.n) throw data_error("embedding row count does not match the graph");
  if (labels && labels->size() != g.n) throw data_error("label count does not match the graph");

  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (std::uint32_t v = 0; v < emb.n; ++v) {
    min_x = std::min(min_x, static_cast<double>(emb.row(v)[0]));
    max_x = std::max(max_x, static_cast<double>(emb.row(v)[0]));
    min_y = std::min(min_y, static_cast<double>(emb.row(v)[1]));
    max_y = std::max(max_y, static_cast<double>(emb.row(v)[1]));
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double margin = 0.05 * span;
  const double scale = 1000.0 / (span + 2.0 * margin);
  auto px = [&](double x) { return (x - min_x + margin) * scale; };
  auto py = [&](double y) { return (y - min_y + margin) * scale; };
  const double width = (max_x - min_x + 2.0 * margin) * scale;
  const double height = (max_y - min_y + 2.0 * margin) * scale;

  const double opacity =
      std::clamp(1.0 / std::sqrt(static_cast<double>(g.edge_count())), 0.02, 1.0);
  const double radius = std::clamp(250.0 / std::sqrt(static_cast<double>(g.n)), 0.8, 6.0);

  Fmt f1, f2, f3, f4;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << f1(width) << ' '
      << f2(height) << "\">\n";

  out << "<g stroke=\"#1f2430\" stroke-width=\"1\" stroke-opacity=\"" << f1(opacity)
      << "\" fill=\"none\">\n";
  for (std::size_t e = 0; e < g.src.size(); ++e) {
    const float* a = emb.row(g.src[e]);
    const float* b = emb.row(g.dst[e]);
    out << "<polyline points=\"" << f1(px(a[0])) << ',' << f2(py(a[1])) << ' ' << f3(px(b[0]))
        << ',' << f4(py(b[1])) << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g stroke=\"none\">\n";
  for (std::uint32_t v = 0; v < emb.n; ++v) {
    const char* fill = "#d64541";
    if (labels) {
      const int c = (*labels)[v];
      fill = c >= 0 ? kPalette[static_cast<std::size_t>(c) % kPalette.size()] : "#9498a0";
    }
    out << "<circle cx=\"" << f1(px(emb.row(v)[0])) << "\" cy=\"" << f2(py(emb.row(v)[1]))
        << "\" r=\"" << f3(radius) << "\" fill=\"" << fill << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace entropy_embed
