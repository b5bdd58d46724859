#include "strent/structure_gen.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include "strent/error.hpp"
#include "text.hpp"

namespace strent {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

void check_p0(double p0) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw Error(Errc::OutOfRange, "singleton weight must lie in [0, 1]");
    }
}

void require_connected(const Graph& g) {
    if (g.num_vertices() == 0) {
        throw Error(Errc::OutOfRange, "graph has no vertices", 0);
    }
    if (!g.is_connected()) {
        throw Error(Errc::DisconnectedGraph, "graph is not connected");
    }
}

RandomPartition singleton_plus(Partition coarse, double p0) {
    const std::size_t k = coarse.num_classes();
    std::vector<Partition> parts;
    std::vector<double> weights;
    if (p0 > 0.0) {
        parts.push_back(singleton_partition(k));
        weights.push_back(p0);
    }
    if (p0 < 1.0) {
        parts.push_back(std::move(coarse));
        weights.push_back(1.0 - p0);
    }
    return RandomPartition(std::move(parts), std::move(weights));
}

}  // namespace

Graph::Graph(std::size_t num_vertices, std::vector<Edge> edges) : adjacency_(num_vertices) {
    for (auto& [u, v] : edges) {
        if (u >= num_vertices) {
            throw Error(Errc::OutOfRange, "edge endpoint " + std::to_string(u) + " outside the graph", u);
        }
        if (v >= num_vertices) {
            throw Error(Errc::OutOfRange, "edge endpoint " + std::to_string(v) + " outside the graph", v);
        }
        if (u > v) {
            std::swap(u, v);
        }
    }
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const auto& [u, v] : edges) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }
    edges_ = std::move(edges);
}

bool Graph::is_connected() const {
    if (adjacency_.empty()) {
        return true;
    }
    std::vector<bool> seen(adjacency_.size(), false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v : adjacency_[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == adjacency_.size();
}

Graph Graph::cycle(std::size_t k) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < k; ++i) {
        edges.emplace_back(i, (i + 1) % k);
    }
    return Graph(k, std::move(edges));
}

Graph Graph::grid(std::size_t rows, std::size_t cols) {
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t v = r * cols + c;
            if (c + 1 < cols) {
                edges.emplace_back(v, v + 1);
            }
            if (r + 1 < rows) {
                edges.emplace_back(v, v + cols);
            }
        }
    }
    return Graph(rows * cols, std::move(edges));
}

Graph Graph::complete(std::size_t k) {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < k; ++u) {
        for (std::size_t v = u + 1; v < k; ++v) {
            edges.emplace_back(u, v);
        }
    }
    return Graph(k, std::move(edges));
}

RandomPartition hierarchy_structure(const HierarchySpec& spec, const std::vector<double>& weights) {
    const std::size_t k = spec.num_classes();
    if (k == 0) {
        throw Error(Errc::IncompleteLevelMap, "hierarchy has no classes");
    }
    if (weights.size() != spec.levels.size() + 1) {
        throw Error(Errc::InvalidWeights, "expected " + std::to_string(spec.levels.size() + 1) +
                                              " level weights (singleton level first), got " +
                                              std::to_string(weights.size()));
    }
    std::vector<Partition> parts;
    parts.push_back(singleton_partition(k));
    for (std::size_t l = 0; l < spec.levels.size(); ++l) {
        const auto& level = spec.levels[l];
        if (level.size() != k) {
            throw Error(Errc::IncompleteLevelMap, "level " + std::to_string(l + 1) + " maps " +
                                                      std::to_string(level.size()) + " of " + std::to_string(k) +
                                                      " classes",
                        l + 1);
        }
        std::map<std::string, std::size_t> group_index;
        std::vector<Block> blocks;
        for (std::size_t c = 0; c < k; ++c) {
            if (level[c].empty()) {
                throw Error(Errc::IncompleteLevelMap, "class " + std::to_string(c) + " has no group at level " +
                                                          std::to_string(l + 1),
                            c);
            }
            auto [it, inserted] = group_index.try_emplace(level[c], blocks.size());
            if (inserted) {
                blocks.emplace_back();
            }
            blocks[it->second].push_back(c);
        }
        parts.push_back(validate_partition(std::move(blocks), k));
    }
    return RandomPartition(std::move(parts), weights);
}

RandomPartition circular_structure(std::size_t k, std::size_t window, double p0) {
    if (k == 0 || window == 0) {
        throw Error(Errc::OutOfRange, "circular structure needs k >= 1 and window >= 1");
    }
    if (k % window != 0) {
        throw Error(Errc::NonDivisibleWindow,
                    "window " + std::to_string(window) + " does not divide " + std::to_string(k), window);
    }
    check_p0(p0);
    std::vector<Partition> parts;
    std::vector<double> weights;
    if (p0 > 0.0) {
        parts.push_back(singleton_partition(k));
        weights.push_back(p0);
    }
    if (p0 < 1.0) {
        const double each = (1.0 - p0) / static_cast<double>(window);
        for (std::size_t offset = 0; offset < window; ++offset) {
            std::vector<Block> blocks(k / window);
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                for (std::size_t i = 0; i < window; ++i) {
                    blocks[b].push_back((offset + b * window + i) % k);
                }
            }
            parts.push_back(validate_partition(std::move(blocks), k));
            weights.push_back(each);
        }
    }
    return RandomPartition(std::move(parts), std::move(weights));
}

std::vector<Edge> wilson_spanning_tree(const Graph& g, Rng& rng) {
    require_connected(g);
    const std::size_t k = g.num_vertices();
    std::vector<bool> in_tree(k, false);
    std::vector<std::size_t> next(k, 0);
    std::vector<Edge> tree;
    tree.reserve(k - 1);
    in_tree[0] = true;
    for (std::size_t start = 1; start < k; ++start) {
        // Random walk until the tree is hit; overwriting `next` erases loops.
        std::size_t u = start;
        while (!in_tree[u]) {
            const auto& nbrs = g.neighbors(u);
            next[u] = nbrs[rng.uniform_index(nbrs.size())];
            u = next[u];
        }
        u = start;
        while (!in_tree[u]) {
            in_tree[u] = true;
            tree.emplace_back(std::min(u, next[u]), std::max(u, next[u]));
            u = next[u];
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

Partition random_connected_partition(const Graph& g, std::size_t m, Rng& rng) {
    require_connected(g);
    const std::size_t k = g.num_vertices();
    if (m < 1 || m > k) {
        throw Error(Errc::OutOfRange, "partition size " + std::to_string(m) + " outside 1.." + std::to_string(k), m);
    }
    std::vector<Edge> tree = wilson_spanning_tree(g, rng);
    // Partial Fisher-Yates: the first m-1 slots become the removed edges.
    for (std::size_t i = 0; i + 1 < m; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(tree.size() - i));
        std::swap(tree[i], tree[j]);
    }
    DisjointSets sets(k);
    for (std::size_t i = m - 1; i < tree.size(); ++i) {
        sets.unite(tree[i].first, tree[i].second);
    }
    std::map<std::size_t, std::size_t> root_block;
    std::vector<Block> blocks;
    for (std::size_t v = 0; v < k; ++v) {
        auto [it, inserted] = root_block.try_emplace(sets.find(v), blocks.size());
        if (inserted) {
            blocks.emplace_back();
        }
        blocks[it->second].push_back(v);
    }
    return validate_partition(std::move(blocks), k);
}

RandomPartition variable_random_partition(const Graph& g, std::size_t m, double p0, Rng& rng) {
    check_p0(p0);
    if (p0 == 1.0) {
        require_connected(g);
        if (m < 1 || m > g.num_vertices()) {
            throw Error(Errc::OutOfRange, "partition size outside 1..k", m);
        }
        return trivial_random_partition(g.num_vertices());
    }
    return singleton_plus(random_connected_partition(g, m, rng), p0);
}

Graph parse_graph(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> k;
    std::vector<Edge> edges;
    auto parse_index = [&](const std::string& token) -> std::size_t {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(token, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != token.size() || token.front() == '-') {
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": '" + token + "' is not an index",
                        line_no);
        }
        return static_cast<std::size_t>(v);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto body = text::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        std::istringstream fields{std::string(body)};
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) {
            tokens.push_back(tok);
        }
        if (!k) {
            if (tokens.size() != 1) {
                throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected the vertex count",
                            line_no);
            }
            k = parse_index(tokens[0]);
            continue;
        }
        if (tokens.size() != 2) {
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'u v'", line_no);
        }
        std::size_t u = parse_index(tokens[0]);
        std::size_t v = parse_index(tokens[1]);
        if (u >= *k || v >= *k) {
            throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": vertex outside 0.." +
                                              std::to_string(*k - 1),
                        line_no);
        }
        edges.emplace_back(u, v);
    }
    if (!k) {
        throw Error(Errc::ParseError, "graph file is empty");
    }
    return Graph(*k, std::move(edges));
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open graph file " + path);
    }
    return parse_graph(in);
}

HierarchySpec parse_hierarchy(std::istream& in, char delimiter) {
    HierarchySpec spec;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        auto cells = text::split(line, delimiter);
        if (columns == 0) {
            columns = cells.size();
            spec.level_names.assign(cells.begin() + 1, cells.end());
            spec.levels.resize(columns - 1);
            continue;
        }
        if (cells.size() != columns) {
            throw Error(Errc::IncompleteLevelMap, "line " + std::to_string(line_no) + ": expected " +
                                                      std::to_string(columns) + " columns",
                        line_no);
        }
        spec.class_names.push_back(cells[0]);
        for (std::size_t l = 1; l < columns; ++l) {
            if (cells[l].empty()) {
                throw Error(Errc::IncompleteLevelMap, "line " + std::to_string(line_no) + ": empty group", line_no);
            }
            spec.levels[l - 1].push_back(cells[l]);
        }
    }
    if (columns == 0) {
        throw Error(Errc::ParseError, "hierarchy file is empty");
    }
    return spec;
}

HierarchySpec load_hierarchy(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open hierarchy file " + path);
    }
    return parse_hierarchy(in, path.ends_with(".tsv") ? '\t' : ',');
}

}  // namespace strent
