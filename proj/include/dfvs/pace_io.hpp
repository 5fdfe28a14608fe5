#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfvs/digraph.hpp"

namespace dfvs {

struct ParseError : std::runtime_error {
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

/// Reads "n m 0" followed by n out-neighbor lines (1-indexed ids); '%'
/// lines are comments. File vertex i maps to internal id i-1. Self-loops
/// are accepted (the loop reduction handles them) and noted on stderr.
DiGraph parse_graph(std::istream& is);

/// Writes the same format, compacting alive vertices to 1..k in id order.
void write_graph(std::ostream& os, const DiGraph& g);

/// One 1-indexed vertex id per line, ascending.
void write_solution(std::ostream& os, const std::vector<VertexId>& solution);

/// Reads a solution file (one 1-indexed id per line, '%' comments allowed)
/// into internal 0-based ids.
std::vector<VertexId> parse_solution(std::istream& is);

}  // namespace dfvs
