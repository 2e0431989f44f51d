#pragma once
// Exclusivity graphs: vertices are measurement events, edges join mutually
// exclusive pairs. Vertex labels are 1-based everywhere a human sees them.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qctx {

struct parse_error : std::runtime_error {
    int line;
    parse_error(const std::string& what, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct ExclusivityGraph {
    int n = 0;                                   // vertex count (0 allowed: empty graph)
    std::vector<std::pair<int, int>> edges;      // 1-based, i < j, sorted, unique
};

// Validates and normalizes: orders endpoints, sorts, rejects self-loops,
// out-of-range labels and duplicates.
ExclusivityGraph make_graph(int n, std::vector<std::pair<int, int>> edges);

// 5-cycle in the drawing order 1-4-2-5-3-1.
ExclusivityGraph make_kcbs_graph();
// 9 vertices, 13 edges; equals the orthogonal pairs of the 9-vector table.
ExclusivityGraph make_kk_graph();

bool has_edge(const ExclusivityGraph& g, int i, int j);
// neighbor lists, 0-based indexing for internal loops
std::vector<std::vector<int>> neighbor_lists(const ExclusivityGraph& g);

// Exact maximum independent set size by branch and bound. Guarded to n <= 24;
// larger graphs throw std::invalid_argument.
int independence_number(const ExclusivityGraph& g);

// Edge-list format: first line vertex count, then "i j" per line, '#' starts
// a comment line. Throws parse_error with the offending line number.
ExclusivityGraph load_graph(std::istream& in);
ExclusivityGraph load_graph(const std::string& text);
ExclusivityGraph load_graph_file(const std::string& path);

}  // namespace qctx
