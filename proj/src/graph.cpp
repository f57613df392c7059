#include "perfolab/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include <json.hpp>

#include "perfolab/errors.hpp"

namespace perfolab {

Graph::Graph(std::size_t n) : n_(n), stride_(words_for(n)), rows_(n * words_for(n), 0) {}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

Graph Graph::complete(std::size_t n) {
    Graph g(n);
    std::vector<Vertex> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Vertex>(i);
    g.add_clique(all);
    return g;
}

void Graph::check_vertex(Vertex v) const {
    if (v >= n_) throw InvalidVertexError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n_));
}

VertexSet Graph::neighbors(Vertex v) const {
    check_vertex(v);
    VertexSet s(n_);
    auto r = row(v);
    std::copy(r.begin(), r.end(), s.words().begin());
    return s;
}

void Graph::add_edge(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InvalidArgumentError("self-loop at vertex " + std::to_string(u));
    bits::set(mutable_row(u), v);
    bits::set(mutable_row(v), u);
}

void Graph::remove_edge(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    bits::reset(mutable_row(u), v);
    bits::reset(mutable_row(v), u);
}

void Graph::add_clique(std::span<const Vertex> members) {
    std::vector<Word> mask(stride_, 0);
    for (Vertex v : members) {
        check_vertex(v);
        bits::set(mask, v);
    }
    for (Vertex v : members) {
        auto r = mutable_row(v);
        bits::or_into(r, mask);
        bits::reset(r, v);
    }
}

void Graph::symmetrize() {
    std::array<Word, kWordBits> block{};
    const std::size_t blocks = stride_;
    for (std::size_t bi = 0; bi < blocks; ++bi) {
        for (std::size_t bj = 0; bj < blocks; ++bj) {
            bool nonzero = false;
            for (std::size_t r = 0; r < kWordBits; ++r) {
                const std::size_t v = bi * kWordBits + r;
                block[r] = v < n_ ? rows_[v * stride_ + bj] : 0;
                nonzero |= block[r] != 0;
            }
            if (!nonzero) continue;
            bits::transpose64(block.data());
            for (std::size_t c = 0; c < kWordBits; ++c) {
                const std::size_t u = bj * kWordBits + c;
                if (u < n_) rows_[u * stride_ + bi] |= block[c];
            }
        }
    }
}

std::size_t Graph::edge_count() const {
    std::size_t total = 0;
    for (std::size_t v = 0; v < n_; ++v) total += degree(static_cast<Vertex>(v));
    return total / 2;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < n_; ++u)
        bits::for_each(row(u), [&](Vertex v) {
            if (u < v) out.emplace_back(u, v);
        });
    return out;
}

void Graph::validate() const {
    for (Vertex u = 0; u < n_; ++u) {
        if (adjacent(u, u)) throw InvalidArgumentError("self-loop at vertex " + std::to_string(u));
        if (n_ % kWordBits && (row(u).back() >> (n_ % kWordBits)))
            throw InvalidArgumentError("adjacency bit beyond n in row " + std::to_string(u));
        bits::for_each(row(u), [&](Vertex v) {
            if (!adjacent(v, u)) throw InvalidArgumentError("asymmetric adjacency");
        });
    }
}

std::vector<std::size_t> index_parts(std::size_t n, const std::vector<std::vector<Vertex>>& parts) {
    std::vector<std::size_t> part_of(n, parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (Vertex v : parts[i]) {
            if (v >= n) throw InvalidVertexError("part member " + std::to_string(v) + " out of range");
            part_of[v] = i;
        }
    return part_of;
}

void PartitionedGraph::validate() const {
    const std::size_t n = graph.order();
    graph.validate();
    if (parts.empty()) throw InvalidArgumentError("partition has no central part");
    if (parts[0].empty() && n != 0) throw InvalidArgumentError("central clique empty on non-empty graph");
    std::vector<std::size_t> seen(n, parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0 && parts[i].empty()) throw InvalidArgumentError("empty side part");
        for (Vertex v : parts[i]) {
            if (v >= n) throw InvalidVertexError("part member out of range");
            if (seen[v] != parts.size()) throw InvalidArgumentError("parts overlap");
            seen[v] = i;
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (seen[v] == parts.size()) throw InvalidArgumentError("parts do not cover vertex " + std::to_string(v));
    if (part_of != seen) throw InvalidArgumentError("part index out of sync with parts");
    for (const auto& p : parts)
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = a + 1; b < p.size(); ++b)
                if (!graph.adjacent(p[a], p[b])) throw InvalidArgumentError("part is not a clique");
    for (Vertex u = 0; u < n; ++u) {
        if (seen[u] == 0) continue;
        bits::for_each(graph.row(u), [&](Vertex v) {
            if (seen[v] != 0 && seen[v] != seen[u]) throw InvalidArgumentError("edge between side cliques");
        });
    }
}

Graph complement(const Graph& g) {
    const std::size_t n = g.order();
    Graph h(n);
    const VertexSet full = VertexSet::all(n);
    for (Vertex v = 0; v < n; ++v) {
        auto dst = h.mutable_row(v);
        auto src = g.row(v);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = ~src[k] & full.words()[k];
        bits::reset(dst, v);
    }
    return h;
}

VertexSet common_neighborhood(const Graph& g, const VertexSet& s) {
    if (s.universe() != g.order()) throw InvalidVertexError("vertex set universe does not match graph order");
    VertexSet out = VertexSet::all(g.order());
    bits::for_each(s.words(), [&](Vertex v) { bits::and_into(out.words(), g.row(v)); });
    return out;
}

DerivedGraph derived_graph(const Graph& g, const VertexSet& s, const VertexSet& t) {
    if (s.universe() != g.order() || t.universe() != g.order())
        throw InvalidVertexError("vertex set universe does not match graph order");
    DerivedGraph out;
    out.vertex_map = s.members();
    const std::size_t k = out.vertex_map.size();
    out.graph = Graph(k);
    std::vector<Word> witnesses(g.stride());
    for (std::size_t a = 0; a < k; ++a) {
        auto ra = g.row(out.vertex_map[a]);
        for (std::size_t w = 0; w < witnesses.size(); ++w) witnesses[w] = ra[w] & t.words()[w];
        if (!bits::any(witnesses)) continue;
        for (std::size_t b = a + 1; b < k; ++b) {
            auto rb = g.row(out.vertex_map[b]);
            for (std::size_t w = 0; w < witnesses.size(); ++w) {
                if (witnesses[w] & rb[w]) {
                    out.graph.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
                    break;
                }
            }
        }
    }
    return out;
}

bool has_independent_triple_in_neighborhood(const Graph& g, Vertex v) {
    if (v >= g.order()) throw InvalidVertexError("vertex " + std::to_string(v) + " out of range");
    const auto nv = g.row(v);
    const std::size_t stride = g.stride();
    std::vector<Word> non_a(stride), non_ab(stride);
    bool found = false;
    bits::for_each(nv, [&](Vertex a) {
        if (found) return;
        const auto ra = g.row(a);
        for (std::size_t w = 0; w < stride; ++w) non_a[w] = nv[w] & ~ra[w];
        bits::reset(non_a, a);
        bits::for_each(std::span<const Word>(non_a), [&](Vertex b) {
            if (found || b < a) return;
            const auto rb = g.row(b);
            for (std::size_t w = 0; w < stride; ++w) non_ab[w] = non_a[w] & ~rb[w];
            bits::reset(non_ab, b);
            if (bits::any(non_ab)) found = true;
        });
    });
    return found;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
    Graph h(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (g.adjacent(vertices[i], vertices[j])) h.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return h;
}

namespace {

using Mask = std::uint32_t;

struct SmallGraph {
    std::size_t n;
    std::vector<Mask> adj;
};

SmallGraph to_small(const Graph& g) {
    SmallGraph s{g.order(), std::vector<Mask>(g.order(), 0)};
    for (Vertex v = 0; v < g.order(); ++v)
        if (g.order()) s.adj[v] = static_cast<Mask>(g.row(v)[0]);
    return s;
}

// Remainder induces a disjoint union of cliques iff every closed neighbourhood is shared by its members.
bool is_cluster(const SmallGraph& g, Mask rest) {
    for (Mask m = rest; m; m &= m - 1) {
        const auto u = static_cast<std::size_t>(std::countr_zero(m));
        const Mask closed = (g.adj[u] | (Mask{1} << u)) & rest;
        for (Mask o = closed; o; o &= o - 1) {
            const auto w = static_cast<std::size_t>(std::countr_zero(o));
            if (((g.adj[w] | (Mask{1} << w)) & rest) != closed) return false;
        }
    }
    return true;
}

// Depth-first over cliques in increasing-vertex order; stops at the first valid centre.
bool search_centre(const SmallGraph& g, Mask clique, Mask candidates, Mask full, Mask& found) {
    if (clique && is_cluster(g, full & ~clique)) {
        found = clique;
        return true;
    }
    for (Mask c = candidates; c; c &= c - 1) {
        const auto v = static_cast<std::size_t>(std::countr_zero(c));
        const Mask later = c & ~((Mask{2} << v) - 1);
        if (search_centre(g, clique | (Mask{1} << v), later & g.adj[v], full, found)) return true;
    }
    return false;
}

}  // namespace

std::optional<PartitionedGraph> unipolar_witness(const Graph& g, std::size_t cap) {
    const std::size_t n = g.order();
    if (n > cap || n > 31)
        throw CapExceededError("unipolarity search limited to " + std::to_string(std::min<std::size_t>(cap, 31)) +
                               " vertices, got " + std::to_string(n));
    PartitionedGraph pg;
    pg.graph = g;
    if (n == 0) {
        pg.parts = {{}};
        pg.part_of = {};
        return pg;
    }
    const SmallGraph sg = to_small(g);
    const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    Mask centre = 0;
    if (!search_centre(sg, 0, full, full, centre)) return std::nullopt;

    pg.parts.push_back({});
    for (Mask m = centre; m; m &= m - 1) pg.parts[0].push_back(static_cast<Vertex>(std::countr_zero(m)));
    Mask rest = full & ~centre;
    while (rest) {
        const auto u = static_cast<std::size_t>(std::countr_zero(rest));
        const Mask comp = (sg.adj[u] | (Mask{1} << u)) & rest;
        std::vector<Vertex> part;
        for (Mask m = comp; m; m &= m - 1) part.push_back(static_cast<Vertex>(std::countr_zero(m)));
        pg.parts.push_back(std::move(part));
        rest &= ~comp;
    }
    pg.part_of = index_parts(n, pg.parts);
    return pg;
}

bool is_unipolar(const Graph& g, std::size_t cap) { return unipolar_witness(g, cap).has_value(); }

namespace {

Graph graph_from_code(std::size_t n, std::uint64_t code) {
    Graph g(n);
    std::size_t p = 0;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j, ++p)
            if ((code >> p) & 1U) g.add_edge(i, j);
    return g;
}

Graph search_smallest_unipolar_not_counipolar() {
    for (std::size_t n = 1; n <= 8; ++n) {
        const std::size_t pairs = n * (n - 1) / 2;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs); ++code) {
            Graph g = graph_from_code(n, code);
            if (is_unipolar(g) && !is_unipolar(complement(g))) return g;
        }
    }
    throw InternalConsistencyError("no unipolar, non-co-unipolar graph on at most 8 vertices");
}

}  // namespace

const Graph& smallest_unipolar_not_counipolar() {
    static const Graph cached = search_smallest_unipolar_not_counipolar();
    return cached;
}

std::string to_json(const Graph& g) {
    nlohmann::ordered_json j;
    j["n"] = g.order();
    auto edges = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    return j.dump();
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgumentError(std::string("malformed graph JSON: ") + e.what());
    }
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 0)
        throw InvalidArgumentError("graph JSON needs a non-negative integer \"n\"");
    const auto n = j["n"].get<std::size_t>();
    Graph g(n);
    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2) throw InvalidArgumentError("edge must be a pair");
            const auto u = e[0].get<long long>();
            const auto v = e[1].get<long long>();
            if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
                throw InvalidVertexError("edge endpoint out of range");
            g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
        }
    }
    return g;
}

}  // namespace perfolab
