#include "qctx/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qctx {

ExclusivityGraph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 0) throw std::invalid_argument("make_graph: negative vertex count");
    for (auto& e : edges) {
        if (e.first == e.second)
            throw std::invalid_argument("make_graph: self-loop at vertex " +
                                        std::to_string(e.first));
        if (e.first < 1 || e.first > n || e.second < 1 || e.second > n)
            throw std::invalid_argument("make_graph: edge (" + std::to_string(e.first) + "," +
                                        std::to_string(e.second) + ") out of range 1.." +
                                        std::to_string(n));
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("make_graph: duplicate edge");
    ExclusivityGraph g;
    g.n = n;
    g.edges = std::move(edges);
    return g;
}

ExclusivityGraph make_kcbs_graph() {
    return make_graph(5, {{1, 3}, {1, 4}, {2, 4}, {2, 5}, {3, 5}});
}

ExclusivityGraph make_kk_graph() {
    return make_graph(9, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 5}, {3, 6}, {4, 7},
                          {4, 8}, {5, 7}, {5, 9}, {6, 8}, {6, 9}, {7, 8}});
}

bool has_edge(const ExclusivityGraph& g, int i, int j) {
    if (i > j) std::swap(i, j);
    return std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(i, j));
}

std::vector<std::vector<int>> neighbor_lists(const ExclusivityGraph& g) {
    std::vector<std::vector<int>> nbr(static_cast<size_t>(g.n));
    for (auto [i, j] : g.edges) {
        nbr[static_cast<size_t>(i - 1)].push_back(j - 1);
        nbr[static_cast<size_t>(j - 1)].push_back(i - 1);
    }
    return nbr;
}

namespace {

// branch and bound over bitmasks: pick the first candidate vertex, branch on
// include/exclude, prune when candidates cannot beat the incumbent
void mis_search(const std::vector<std::uint32_t>& adj, std::uint32_t cand, int size, int& best) {
    if (size + __builtin_popcount(cand) <= best) return;
    if (cand == 0) {
        if (size > best) best = size;
        return;
    }
    int v = __builtin_ctz(cand);
    // include v
    mis_search(adj, cand & ~adj[static_cast<size_t>(v)] & ~(1u << v), size + 1, best);
    // exclude v
    mis_search(adj, cand & ~(1u << v), size, best);
}

}  // namespace

int independence_number(const ExclusivityGraph& g) {
    if (g.n > 24)
        throw std::invalid_argument("independence_number: graph exceeds the n <= 24 search guard");
    if (g.n == 0) return 0;
    std::vector<std::uint32_t> adj(static_cast<size_t>(g.n), 0);
    for (auto [i, j] : g.edges) {
        adj[static_cast<size_t>(i - 1)] |= 1u << (j - 1);
        adj[static_cast<size_t>(j - 1)] |= 1u << (i - 1);
    }
    int best = 0;
    std::uint32_t all = g.n == 32 ? ~0u : ((1u << g.n) - 1);
    mis_search(adj, all, 0, best);
    return best;
}

ExclusivityGraph load_graph(std::istream& in) {
    std::string line;
    int line_no = 0;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n)) {
                n = -1;
                std::string tok;
                std::istringstream probe(line);
                if (probe >> tok) throw parse_error("expected vertex count, got '" + tok + "'", line_no);
                continue;  // blank/comment before the header line
            }
            if (n < 0) throw parse_error("vertex count must be nonnegative", line_no);
            std::string extra;
            if (ls >> extra) throw parse_error("trailing token '" + extra + "' after vertex count", line_no);
            continue;
        }
        int i, j;
        if (!(ls >> i)) continue;  // blank line
        if (!(ls >> j)) throw parse_error("expected two vertex indices", line_no);
        std::string extra;
        if (ls >> extra) throw parse_error("trailing token '" + extra + "' after edge", line_no);
        if (i == j) throw parse_error("self-loop at vertex " + std::to_string(i), line_no);
        if (i < 1 || i > n || j < 1 || j > n)
            throw parse_error("vertex index out of range 1.." + std::to_string(n), line_no);
        auto e = std::minmax(i, j);
        if (std::find(edges.begin(), edges.end(), std::make_pair(e.first, e.second)) != edges.end())
            throw parse_error("duplicate edge (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) + ")",
                              line_no);
        edges.emplace_back(e.first, e.second);
    }
    if (n < 0) throw parse_error("missing vertex count line", std::max(1, line_no));
    return make_graph(n, std::move(edges));
}

ExclusivityGraph load_graph(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

ExclusivityGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_graph_file: cannot open " + path);
    return load_graph(in);
}

}  // namespace qctx
