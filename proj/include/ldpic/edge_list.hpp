#pragma once

// Plain-text edge list I/O.
//
// Format: one edge per line, two whitespace-separated non-negative integer
// labels. Blank lines and lines starting with '#' are skipped; self-loop
// lines are skipped entirely (they register no node); duplicate and reversed
// edges collapse to one. Labels need not be contiguous; the reader compacts
// them to 0..n-1 in ascending label order and reports the mapping. Rank
// order (not first appearance) makes the result independent of line order
// and makes write-then-read the identity on any graph without isolated
// nodes; isolated nodes are unrepresentable in the format and silently
// vanish on a round trip.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldpic/graph.hpp"

namespace ldpic {

// Parse failure; line numbers are 1-based.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::string message, long long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + std::move(message)),
        line_(line) {}

  long long line() const { return line_; }

 private:
  long long line_;
};

struct EdgeListResult {
  Graph graph;
  // original_label[i] is the label in the input file for compacted node i.
  std::vector<std::uint64_t> original_label;
};

inline EdgeListResult read_edge_list(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    std::string tok_a, tok_b;
    if (!(fields >> tok_a >> tok_b))
      throw parse_error("expected two non-negative integers, got \"" + line + "\"", line_no);
    std::string extra;
    if (fields >> extra)
      throw parse_error("trailing content \"" + extra + "\"", line_no);
    // from_chars with full consumption: rejects signs, decimals, and overflow,
    // which stream extraction into an unsigned type silently accepts.
    const auto parse_label = [&](const std::string& tok) {
      std::uint64_t value = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw parse_error("not a non-negative integer: \"" + tok + "\"", line_no);
      return value;
    };
    const std::uint64_t a = parse_label(tok_a);
    const std::uint64_t b = parse_label(tok_b);
    if (a == b) continue;
    raw.emplace_back(a, b);
  }
  if (in.bad()) throw std::runtime_error("read_edge_list: stream read failure");

  std::vector<std::uint64_t> labels;
  labels.reserve(2 * raw.size());
  for (const auto& [a, b] : raw) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::unordered_map<std::uint64_t, int> index_of;
  index_of.reserve(labels.size());
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) index_of.emplace(labels[i], i);

  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) edges.emplace_back(index_of.at(a), index_of.at(b));

  EdgeListResult result;
  result.graph = Graph::from_edges(static_cast<int>(labels.size()), edges);
  result.original_label = std::move(labels);
  return result;
}

inline EdgeListResult read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (int u = 0; u < g.node_count(); ++u)
    for (int v : g.neighbors(u))
      if (u < v) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("write_edge_list: stream write failure");
}

inline void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_edge_list(out, g);
  out.flush();
  if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace ldpic
