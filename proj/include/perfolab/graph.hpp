#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perfolab/bitset.hpp"

namespace perfolab {

using Edge = std::pair<Vertex, Vertex>;

/// Undirected simple graph on {0..n-1} with row-wise bit-packed adjacency.
///
/// Rows are stored contiguously, `stride()` words each. Mutation is only
/// available during construction; finished graphs are treated as values.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n);

    static Graph from_edges(std::size_t n, std::span<const Edge> edges);
    static Graph complete(std::size_t n);

    std::size_t order() const noexcept { return n_; }
    std::size_t stride() const noexcept { return stride_; }

    bool adjacent(Vertex u, Vertex v) const { return bits::test(row(u), v); }
    std::span<const Word> row(Vertex v) const { return {rows_.data() + std::size_t{v} * stride_, stride_}; }
    std::size_t degree(Vertex v) const { return bits::count(row(v)); }
    VertexSet neighbors(Vertex v) const;

    void add_edge(Vertex u, Vertex v);
    void remove_edge(Vertex u, Vertex v);

    /// Makes every pair inside `members` adjacent.
    void add_clique(std::span<const Vertex> members);

    /// Mutable row access for bulk construction; caller keeps the matrix symmetric.
    std::span<Word> mutable_row(Vertex v) { return {rows_.data() + std::size_t{v} * stride_, stride_}; }

    /// ORs the transpose of the adjacency matrix into itself.
    void symmetrize();

    std::size_t edge_count() const;
    /// Edges (u,v), u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    /// Throws InvalidArgumentError when a self-loop or asymmetric entry exists.
    void validate() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    void check_vertex(Vertex v) const;

    std::size_t n_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> rows_;
};

/// Graph together with its witness partition C_0 (central clique), C_1..C_k (side cliques).
struct PartitionedGraph {
    Graph graph;
    std::vector<std::vector<Vertex>> parts;  // parts[0] is the central clique
    std::vector<std::size_t> part_of;        // vertex -> index into parts

    std::size_t side_count() const { return parts.empty() ? 0 : parts.size() - 1; }
    bool in_central(Vertex v) const { return part_of.at(v) == 0; }
    VertexSet part_set(std::size_t i) const { return VertexSet::of(graph.order(), parts.at(i)); }

    /// Checks disjoint/exhaustive parts, cliques, and no edges between side cliques.
    void validate() const;
};

/// Builds `part_of` from `parts` (assumed to be a partition of {0..n-1}).
std::vector<std::size_t> index_parts(std::size_t n, const std::vector<std::vector<Vertex>>& parts);

Graph complement(const Graph& g);

/// Intersection of N(v) over v in s; all vertices when s is empty.
VertexSet common_neighborhood(const Graph& g, const VertexSet& s);

/// H(S,T): graph on S (re-indexed 0..|S|-1) with ab an edge iff some v in T is adjacent to both.
struct DerivedGraph {
    Graph graph;
    std::vector<Vertex> vertex_map;  // local index -> original vertex
};
DerivedGraph derived_graph(const Graph& g, const VertexSet& s, const VertexSet& t);

/// True iff N(v) contains three pairwise non-adjacent vertices.
bool has_independent_triple_in_neighborhood(const Graph& g, Vertex v);

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices);

inline constexpr std::size_t kDefaultUnipolarCap = 16;

/// Exhaustive unipolarity test; returns a witness partition when unipolar.
std::optional<PartitionedGraph> unipolar_witness(const Graph& g, std::size_t cap = kDefaultUnipolarCap);
bool is_unipolar(const Graph& g, std::size_t cap = kDefaultUnipolarCap);

/// First graph, by increasing order and then by increasing edge code, that is unipolar but
/// whose complement is not. The edge code sets bit p for the p-th pair in the order
/// (0,1),(0,2),...,(0,n-1),(1,2),...
const Graph& smallest_unipolar_not_counipolar();

// JSON interchange: {"n": <int>, "edges": [[u,v],...]} with u < v, sorted.
std::string to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

}  // namespace perfolab
