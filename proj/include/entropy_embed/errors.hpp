#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropy_embed {

// Malformed input text. Carries the 1-based line number of the offending line.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string msg, std::size_t line)
      : std::runtime_error(std::move(msg)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally invalid data: empty graph, bad snapshot, mismatched files.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sampling a non-edge is essentially impossible (graph is near-complete).
class near_complete_graph_error : public data_error {
 public:
  using data_error::data_error;
};

// Invalid configuration or request (empty histogram, SVG in high dimension).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coordinate became non-finite during optimization.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(std::string msg, int iteration)
      : std::runtime_error(std::move(msg)), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace entropy_embed
