#include "perfolab/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "perfolab/errors.hpp"
#include "perfolab/evaluator.hpp"

namespace perfolab {

std::vector<VertexSet> side_neighborhoods(const PartitionedGraph& pg) {
    const std::size_t n = pg.graph.order();
    std::vector<VertexSet> out(pg.parts.size(), VertexSet(n));
    for (std::size_t i = 1; i < pg.parts.size(); ++i) {
        VertexSet acc = VertexSet::all(n);
        for (Vertex v : pg.parts[i]) bits::and_into(acc.words(), pg.graph.row(v));
        out[i] = std::move(acc);
    }
    return out;
}

OracleTables oracle_tables(const PartitionedGraph& pg) {
    const Graph& g = pg.graph;
    const std::size_t n = g.order();
    const VertexSet central = n ? pg.part_set(0) : VertexSet(0);
    const auto nbhd = side_neighborhoods(pg);

    std::vector<std::vector<Vertex>> in_c0, cn, hedge;
    for (Vertex v : central.members()) in_c0.push_back({v});

    std::vector<Word> partners(g.stride());
    for (std::size_t i = 1; i < pg.parts.size(); ++i) {
        const auto& part = pg.parts[i];
        for (Vertex x : nbhd[i].members())
            for (Vertex y : part) cn.push_back({x, y});

        // Hedge: x ~ v ~ y for some v in C_i, with x, y central and distinct.
        for (Vertex x : central.members()) {
            std::fill(partners.begin(), partners.end(), 0);
            for (Vertex v : part)
                if (g.adjacent(x, v)) bits::or_into(partners, g.row(v));
            bits::and_into(partners, central.words());
            bits::reset(partners, x);
            bits::for_each(std::span<const Word>(partners), [&](Vertex y) {
                for (Vertex z : part) hedge.push_back({x, y, z});
            });
        }
    }
    return {Relation(n, 1, std::move(in_c0)), Relation(n, 2, std::move(cn)), Relation(n, 3, std::move(hedge))};
}

Structure oracle_structure(const PartitionedGraph& pg) {
    OracleTables t = oracle_tables(pg);
    Structure s(pg.graph);
    s.relations["InC0"] = std::move(t.in_c0);
    s.relations["CN"] = std::move(t.cn);
    s.relations["Hedge"] = std::move(t.hedge);
    return s;
}

namespace {

VertexSet part_neighborhood(const PartitionedGraph& pg, std::size_t i) {
    VertexSet acc = VertexSet::all(pg.graph.order());
    for (Vertex v : pg.parts[i]) bits::and_into(acc.words(), pg.graph.row(v));
    return acc;
}

}  // namespace

bool oracle_bigger(const PartitionedGraph& pg, Vertex x, Vertex y) {
    const std::size_t n = pg.graph.order();
    if (x >= n || y >= n) throw InvalidVertexError("vertex out of range");
    const std::size_t i = pg.part_of[x], j = pg.part_of[y];
    if (i == 0 || j == 0) throw InvalidArgumentError("Bigger is only defined on side-clique vertices");
    if (i == j) return false;

    const VertexSet ni = part_neighborhood(pg, i), nj = part_neighborhood(pg, j);
    const VertexSet a_side = ni - nj, b_side = nj - ni;
    const auto b_members = b_side.members();
    if (a_side.size() <= b_members.size()) return false;

    const Graph& g = pg.graph;
    std::vector<Word> reach(g.stride());
    for (std::size_t k = 1; k < pg.parts.size(); ++k) {
        const auto& witnesses = pg.parts[k];
        std::set<Vertex> used;
        bool ok = true;
        for (Vertex b : b_members) {
            std::fill(reach.begin(), reach.end(), 0);
            for (Vertex v : witnesses)
                if (g.adjacent(b, v)) bits::or_into(reach, g.row(v));
            bits::and_into(reach, a_side.words());
            if (bits::count(reach) != 1 || !used.insert(static_cast<Vertex>(bits::first(reach))).second) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

std::vector<Graph> distinct_derived_graphs(const PartitionedGraph& pg, const VertexSet& s) {
    const Graph& g = pg.graph;
    if (s.universe() != g.order()) throw InvalidVertexError("vertex set universe does not match graph order");
    const auto members = s.members();

    // local[v]: positions in S adjacent to the side vertex v.
    std::vector<std::vector<Vertex>> local(g.order());
    for (std::size_t a = 0; a < members.size(); ++a)
        bits::for_each(g.row(members[a]), [&](Vertex v) {
            if (pg.part_of[v] != 0) local[v].push_back(static_cast<Vertex>(a));
        });

    std::vector<Graph> out;
    std::set<std::vector<Edge>> seen;
    for (std::size_t k = 1; k < pg.parts.size(); ++k) {
        Graph h(members.size());
        for (Vertex v : pg.parts[k]) h.add_clique(local[v]);
        if (seen.insert(h.edges()).second) out.push_back(std::move(h));
    }
    return out;
}

PsiOutcome oracle_psi(const PartitionedGraph& pg, const Formula& phi, std::size_t max_support) {
    if (!is_sentence(phi)) throw NotASentenceError("psi needs a sentence");
    PsiOutcome out;
    auto nbhd = side_neighborhoods(pg);
    if (nbhd.size() <= 1) return out;

    std::vector<std::size_t> order(nbhd.size() - 1);
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::vector<std::size_t> sizes(nbhd.size());
    for (std::size_t i : order) sizes[i] = nbhd[i].size();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });

    std::set<std::vector<Word>> supports;
    std::set<std::pair<std::size_t, std::vector<Edge>>> graphs;
    for (std::size_t i : order) {
        const auto w = nbhd[i].words();
        if (!supports.insert(std::vector<Word>(w.begin(), w.end())).second) continue;
        if (sizes[i] > max_support) {
            ++out.supports_skipped;
            continue;
        }
        ++out.supports_examined;
        for (Graph& h : distinct_derived_graphs(pg, nbhd[i])) {
            if (!graphs.emplace(h.order(), h.edges()).second) continue;
            ++out.graphs_checked;
            if (evaluate(h, phi)) {
                out.holds = true;
                return out;
            }
        }
    }
    return out;
}

}  // namespace perfolab
