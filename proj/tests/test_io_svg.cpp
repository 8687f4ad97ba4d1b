#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "entropy_embed/engine.hpp"
#include "entropy_embed/errors.hpp"
#include "entropy_embed/graph.hpp"
#include "entropy_embed/io.hpp"
#include "entropy_embed/rng.hpp"
#include "entropy_embed/svg.hpp"
#include "testutil.hpp"

using namespace entropy_embed;

namespace {

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// Minimal well-formedness check: tags balance and nest properly.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?') continue;
    if (tag[0] == '/') {
      if (stack.empty()) return false;
      if (stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) return false;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty();
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("embedding TSV: header, ascending ids, 6-digit round trip") {
  Embedding emb = init_embedding(3, 2, 5);
  const std::vector<std::uint64_t> labels = {42, 7, 100};
  std::ostringstream out;
  write_embedding_tsv(emb, labels, out);
  const std::string text = out.str();
  CHECK(text.rfind("#id\tx0\tx1\n", 0) == 0);

  std::istringstream in(text);
  std::vector<std::uint64_t> back_ids;
  Embedding back = read_embedding_tsv(in, &back_ids);
  CHECK(back.n == 3);
  CHECK(back.dim == 2);
  CHECK(back_ids == std::vector<std::uint64_t>{7, 42, 100});

  // rows come back keyed by sorted label; match against the source rows
  const std::vector<std::uint32_t> source_row = {1, 0, 2};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::uint32_t k = 0; k < 2; ++k) {
      const double want = emb.row(source_row[r])[k];
      const double got = back.row(static_cast<std::uint32_t>(r))[k];
      CHECK(std::fabs(got - want) <= 1e-6 * std::max(1.0, std::fabs(want)));
    }
  }
}

TEST_CASE("embedding TSV: permutation indirection and row count") {
  Embedding emb = init_embedding(4, 1, 9);
  Permutation perm;
  perm.forward = {2, 3, 0, 1};
  perm.inverse = {2, 3, 0, 1};
  std::ostringstream out;
  write_embedding_tsv(emb, {}, out, &perm);
  std::istringstream in(out.str());
  Embedding back = read_embedding_tsv(in);
  REQUIRE(back.n == 4);
  for (std::uint32_t v = 0; v < 4; ++v) {
    CHECK(back.row(v)[0] == doctest::Approx(emb.row(perm.forward[v])[0]).epsilon(1e-6));
  }

  CHECK_THROWS_AS(read_embedding_tsv(in), data_error);  // exhausted stream
  std::istringstream bad("#id\tx0\nabc 1.0\n");
  CHECK_THROWS_AS(read_embedding_tsv(bad), parse_error);
}

TEST_CASE("svg: triangle has three polylines and three circles, valid XML") {
  Graph g = testutil::graph_from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
  Embedding emb;
  emb.n = 3;
  emb.dim = 2;
  emb.coords = {0.0f, 0.0f, 1.0f, 0.0f, 0.5f, 0.9f};
  std::ostringstream out;
  emit_svg(g, emb, out);
  const std::string svg = out.str();
  CHECK(count_occurrences(svg, "<polyline") == 3);
  CHECK(count_occurrences(svg, "<circle") == 3);
  CHECK(xml_well_formed(svg));

  std::ostringstream again;
  emit_svg(g, emb, again);
  CHECK(again.str() == svg);  // byte determinism

  Embedding wrong_dim;
  wrong_dim.n = 3;
  wrong_dim.dim = 3;
  wrong_dim.coords.assign(9, 0.0f);
  std::ostringstream sink;
  CHECK_THROWS_AS(emit_svg(g, wrong_dim, sink), config_error);
}

TEST_CASE("svg: label colors pull from the palette") {
  Graph g = testutil::graph_from_edges(3, {{0, 1}, {1, 2}});
  Embedding emb;
  emb.n = 3;
  emb.dim = 2;
  emb.coords = {0.0f, 0.0f, 1.0f, 0.0f, 2.0f, 1.0f};
  const std::vector<int> labels = {0, 1, -1};
  std::ostringstream out;
  emit_svg(g, emb, out, &labels);
  const std::string svg = out.str();
  CHECK(svg.find("#4269d0") != std::string::npos);
  CHECK(svg.find("#efb118") != std::string::npos);
  CHECK(svg.find("#9498a0") != std::string::npos);
}

TEST_CASE("vertex labels file maps onto compact indices") {
  const std::vector<std::uint64_t> ids = {42, 7, 100};
  std::istringstream in("42 red\n100 blue\n7 red\n999 green\n");
  const std::vector<int> labels = read_vertex_labels(in, ids);
  CHECK(labels == std::vector<int>{0, 0, 1});  // per compact index: 42, 7, 100
}

TEST_CASE("edge-list parser survives byte soup") {
  SplitMix sm(1);
  for (int round = 0; round < 2000; ++round) {
    std::string text;
    const std::size_t len = sm.next_below(200);
    for (std::size_t i = 0; i < len; ++i) {
      text.push_back(static_cast<char>(sm.next_below(256)));
    }
    std::istringstream in(text);
    try {
      Graph g = load_edge_list(in);
      CHECK(g.n >= 2);  // anything that parsed has at least one real edge
    } catch (const parse_error&) {
    } catch (const data_error&) {
    }
  }
}

TEST_SUITE_END();
