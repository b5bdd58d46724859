#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "strent/partition.hpp"
#include "strent/rng.hpp"

namespace strent {

// Label taxonomy. levels[l][c] is the group of class c at level l + 1; the
// singleton level is implicit. Levels need not nest.
struct HierarchySpec {
    std::vector<std::string> class_names;
    std::vector<std::string> level_names;
    std::vector<std::vector<std::string>> levels;

    std::size_t num_classes() const noexcept { return class_names.size(); }
};

using Edge = std::pair<std::size_t, std::size_t>;

// Undirected simple graph on vertices 0..k-1. Edges are stored as (min, max),
// sorted and deduplicated; self-loops are dropped.
class Graph {
public:
    Graph(std::size_t num_vertices, std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return adjacency_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }
    bool is_connected() const;

    static Graph cycle(std::size_t k);
    static Graph grid(std::size_t rows, std::size_t cols);
    static Graph complete(std::size_t k);

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

// weights[0] is the singleton level, weights[l + 1] is spec.levels[l].
RandomPartition hierarchy_structure(const HierarchySpec& spec, const std::vector<double>& weights);

// Singleton partition with weight p0 plus `window` rotations of contiguous
// runs of length `window` around a circle of k classes, each (1 - p0) / window.
// Zero-weight partitions are omitted.
RandomPartition circular_structure(std::size_t k, std::size_t window, double p0);

// Uniform spanning tree by loop-erased random walks rooted at vertex 0.
std::vector<Edge> wilson_spanning_tree(const Graph& g, Rng& rng);

// Spanning tree minus a uniform (m-1)-subset of its edges; blocks are the
// remaining components and are connected in g.
Partition random_connected_partition(const Graph& g, std::size_t m, Rng& rng);

// {singleton: p0, random_connected_partition(g, m): 1 - p0}, resampled on
// every call. Zero-weight partitions are omitted.
RandomPartition variable_random_partition(const Graph& g, std::size_t m, double p0, Rng& rng);

// Graph text: first line k, then one "u v" edge per line. Blank lines and
// lines starting with '#' are ignored.
Graph parse_graph(std::istream& in);
Graph load_graph(const std::string& path);

// Delimited hierarchy table with a header row: first column the class name,
// one further column per level.
HierarchySpec parse_hierarchy(std::istream& in, char delimiter = ',');
HierarchySpec load_hierarchy(const std::string& path);

// The CIFAR-100 class -> superclass -> category -> supercategory taxonomy,
// classes in the dataset's label order.
const HierarchySpec& cifar100_hierarchy();

}  // namespace strent
