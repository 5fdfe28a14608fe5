#include "dfvs/pace_io.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

namespace dfvs {

namespace {

bool next_content_line(std::istream& is, std::string& line, int& line_no) {
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        return true;
    }
    return false;
}

}  // namespace

DiGraph parse_graph(std::istream& is) {
    std::string line;
    int line_no = 0;
    if (!next_content_line(is, line, line_no)) throw ParseError(line_no, "missing header");
    long n = 0, m = 0, fmt = 0;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> m >> fmt)) throw ParseError(line_no, "malformed header");
        std::string extra;
        if (hs >> extra) throw ParseError(line_no, "trailing tokens in header");
        if (n < 0 || m < 0 || fmt != 0) throw ParseError(line_no, "unsupported header values");
    }
    DiGraph g((int)n);
    long arcs = 0, self_loops = 0;
    for (long v = 0; v < n; ++v) {
        if (!next_content_line(is, line, line_no)) {
            // Trailing sink vertices may be omitted entirely.
            break;
        }
        std::istringstream ls(line);
        long w;
        while (ls >> w) {
            if (w < 1 || w > n)
                throw ParseError(line_no, "vertex id " + std::to_string(w) + " out of range");
            if (v == w - 1) ++self_loops;
            if (g.add_arc((VertexId)v, (VertexId)(w - 1))) ++arcs;
        }
        if (!ls.eof()) throw ParseError(line_no, "non-numeric token");
    }
    if (arcs != m)
        throw ParseError(line_no, "header announces " + std::to_string(m) + " arcs, found " +
                                      std::to_string(arcs));
    if (self_loops > 0)
        std::cerr << "note: input contains " << self_loops << " self-loop(s)\n";
    return g;
}

void write_graph(std::ostream& os, const DiGraph& g) {
    std::vector<VertexId> vs = g.vertices();
    std::vector<int> file_id(g.capacity(), 0);
    for (std::size_t i = 0; i < vs.size(); ++i) file_id[vs[i]] = (int)i + 1;
    os << vs.size() << ' ' << g.arc_count() << " 0\n";
    for (VertexId v : vs) {
        const auto& succ = g.succ(v);
        for (std::size_t i = 0; i < succ.size(); ++i)
            os << (i ? " " : "") << file_id[succ[i]];
        os << '\n';
    }
}

void write_solution(std::ostream& os, const std::vector<VertexId>& solution) {
    std::vector<VertexId> sorted = solution;
    std::sort(sorted.begin(), sorted.end());
    for (VertexId v : sorted) os << v + 1 << '\n';
}

std::vector<VertexId> parse_solution(std::istream& is) {
    std::vector<VertexId> out;
    std::string line;
    int line_no = 0;
    while (next_content_line(is, line, line_no)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long v;
        if (!(ls >> v) || v < 1) throw ParseError(line_no, "bad solution vertex");
        std::string extra;
        if (ls >> extra) throw ParseError(line_no, "trailing tokens");
        out.push_back((VertexId)(v - 1));
    }
    return out;
}

}  // namespace dfvs
