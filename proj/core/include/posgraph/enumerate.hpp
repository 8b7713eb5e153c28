#pragma once

#include <functional>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "posgraph/graph.hpp"

namespace posgraph {

/// One canonical representative per isomorphism class on exactly n vertices, 1 <= n <= 7,
/// sorted by canonical graph6. Larger orders ship as fixture files; throws std::invalid_argument.
std::vector<SimpleGraph> enumerate_graphs(int n);

/// All isomorphism classes on n+1 vertices obtained by adding one vertex, with every
/// neighbourhood, to each of `reps` (which must cover every class on n vertices).
/// Returns canonical graph6 strings, sorted.
std::vector<std::string> extend_by_vertex(std::span<const SimpleGraph> reps);

/// Trees on exactly n vertices (1 <= n <= 16), one per isomorphism class, canonical labeling.
std::vector<SimpleGraph> enumerate_trees(int n);

/// Reads graph6 lines, calling `sink(line_number, graph)` for good lines and
/// `bad(line_number, error)` for malformed ones. Blank lines are skipped.
void read_graph6_stream(std::istream& in, const std::function<void(std::size_t, const SimpleGraph&)>& sink,
                        const std::function<void(std::size_t, const std::string&)>& bad);

std::vector<SimpleGraph> read_graph6_file(const std::string& path);

}  // namespace posgraph
