#include <doctest.h>

#include <random>

#include "perfolab/errors.hpp"
#include "perfolab/graph.hpp"
#include "perfolab/sampler.hpp"
#include "support.hpp"

using namespace perfolab;
using testsupport::graph_from_code;
using testsupport::random_graph;

namespace {

Graph path3() {
    Graph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    return g;
}

Graph cycle(std::size_t n) {
    Graph g(n);
    for (Vertex i = 0; i < n; ++i) g.add_edge(i, static_cast<Vertex>((i + 1) % n));
    return g;
}

bool brute_triple(const Graph& g, Vertex v) {
    const auto nb = g.neighbors(v).members();
    for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b)
            for (std::size_t c = b + 1; c < nb.size(); ++c)
                if (!g.adjacent(nb[a], nb[b]) && !g.adjacent(nb[a], nb[c]) && !g.adjacent(nb[b], nb[c])) return true;
    return false;
}

// Tries every non-empty vertex subset as the central clique.
bool brute_unipolar(const Graph& g) {
    const std::size_t n = g.order();
    if (n == 0) return true;
    for (std::uint32_t c = 1; c < (1U << n); ++c) {
        bool ok = true;
        for (Vertex u = 0; u < n && ok; ++u)
            for (Vertex v = u + 1; v < n && ok; ++v) {
                const bool cu = (c >> u) & 1U, cv = (c >> v) & 1U;
                if (cu && cv && !g.adjacent(u, v)) ok = false;
                if (!cu && !cv)
                    for (Vertex w = 0; w < n && ok; ++w)
                        if (w != u && w != v && !((c >> w) & 1U) && g.adjacent(u, w) && g.adjacent(w, v) &&
                            !g.adjacent(u, v))
                            ok = false;
            }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("graph") {
    TEST_CASE("block transpose matches the naive transpose") {
        std::mt19937_64 rng(7);
        for (int rep = 0; rep < 20; ++rep) {
            Word block[64], copy[64];
            for (auto& w : block) w = rng();
            std::copy(block, block + 64, copy);
            bits::transpose64(block);
            for (std::size_t r = 0; r < 64; ++r)
                for (std::size_t c = 0; c < 64; ++c) CHECK(((block[r] >> c) & 1U) == ((copy[c] >> r) & 1U));
        }
    }

    TEST_CASE("symmetrize ORs in the transpose") {
        std::mt19937_64 rng(11);
        for (std::size_t n : {1, 5, 63, 64, 65, 130, 200}) {
            Graph g(n);
            std::vector<std::pair<Vertex, Vertex>> arcs;
            std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
            for (std::size_t k = 0; k < 3 * n; ++k) {
                const Vertex u = pick(rng), v = pick(rng);
                if (u == v) continue;
                bits::set(g.mutable_row(u), v);
                arcs.emplace_back(u, v);
            }
            g.symmetrize();
            Graph expect(n);
            for (auto [u, v] : arcs)
                if (!expect.adjacent(u, v)) expect.add_edge(u, v);
            CHECK(g == expect);
            CHECK_NOTHROW(g.validate());
        }
    }

    TEST_CASE("edges are listed sorted with u < v") {
        Graph g(4);
        g.add_edge(3, 1);
        g.add_edge(2, 0);
        g.add_edge(0, 1);
        CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}});
        CHECK(g.edge_count() == 3);
        CHECK_THROWS_AS(g.add_edge(2, 2), InvalidArgumentError);
        CHECK_THROWS_AS(g.add_edge(0, 4), InvalidVertexError);
    }

    TEST_CASE("complement examples") {
        CHECK(complement(Graph::complete(3)) == Graph(3));
        CHECK(complement(Graph(0)) == Graph(0));
        const Graph c = complement(path3());
        CHECK(c.edges() == std::vector<Edge>{{0, 2}});
    }

    TEST_CASE("complement is an involution") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 50; ++rep) {
            const Graph g = random_graph(1 + rep * 3, 0.4, rng);
            CHECK(complement(complement(g)) == g);
            CHECK_NOTHROW(complement(g).validate());
        }
    }

    TEST_CASE("common neighbourhood examples") {
        Graph star(3);  // centre 0, leaves 1 and 2
        star.add_edge(0, 1);
        star.add_edge(0, 2);
        CHECK(common_neighborhood(star, VertexSet::of(3, std::vector<Vertex>{1, 2})).members() ==
              std::vector<Vertex>{0});
        CHECK(common_neighborhood(Graph::complete(3), VertexSet::of(3, std::vector<Vertex>{0, 1})).members() ==
              std::vector<Vertex>{2});
        CHECK(common_neighborhood(star, VertexSet(3)) == VertexSet::all(3));
        CHECK_THROWS_AS(common_neighborhood(star, VertexSet(4)), InvalidVertexError);
        VertexSet s(3);
        CHECK_THROWS_AS(s.insert(3), InvalidVertexError);
    }

    TEST_CASE("common neighbourhood of a singleton and of a union") {
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 10 + rep;
            const Graph g = random_graph(n, 0.6, rng);
            for (Vertex v = 0; v < n; ++v)
                CHECK(common_neighborhood(g, VertexSet::of(n, std::vector<Vertex>{v})) == g.neighbors(v));
            VertexSet a(n), b(n);
            for (Vertex v = 0; v < n; ++v) {
                if (rng() % 4 == 0) a.insert(v);
                if (rng() % 4 == 0) b.insert(v);
            }
            CHECK(common_neighborhood(g, a | b) == (common_neighborhood(g, a) & common_neighborhood(g, b)));
        }
    }

    TEST_CASE("derived graph examples") {
        const Graph g = path3();
        const auto s = VertexSet::of(3, std::vector<Vertex>{0, 2});
        const DerivedGraph none = derived_graph(g, s, VertexSet(3));
        CHECK(none.graph == Graph(2));
        CHECK(none.vertex_map == std::vector<Vertex>{0, 2});
        const DerivedGraph one = derived_graph(g, s, VertexSet::of(3, std::vector<Vertex>{1}));
        CHECK(one.graph.edges() == std::vector<Edge>{{0, 1}});
    }

    TEST_CASE("derived graph equals the triple loop and is monotone in the witness set") {
        std::mt19937_64 rng(9);
        for (int rep = 0; rep < 300; ++rep) {
            const std::size_t n = 8;
            const Graph g = random_graph(n, 0.5, rng);
            VertexSet s(n), t(n), t2(n);
            while (s.size() < 4) s.insert(static_cast<Vertex>(rng() % n));
            while (t.size() < 3) t.insert(static_cast<Vertex>(rng() % n));
            t2 = t;
            t2.insert(static_cast<Vertex>(rng() % n));
            const DerivedGraph h = derived_graph(g, s, t);
            const auto& map = h.vertex_map;
            for (Vertex a = 0; a < map.size(); ++a)
                for (Vertex b = a + 1; b < map.size(); ++b) {
                    bool expect = false;
                    for (Vertex v : t.members()) expect |= g.adjacent(map[a], v) && g.adjacent(map[b], v);
                    CHECK(h.graph.adjacent(a, b) == expect);
                }
            const DerivedGraph h2 = derived_graph(g, s, t2);
            for (auto [a, b] : h.graph.edges()) CHECK(h2.graph.adjacent(a, b));
        }
    }

    TEST_CASE("independent triple examples") {
        Graph claw(4);
        for (Vertex v = 1; v < 4; ++v) claw.add_edge(0, v);
        CHECK(has_independent_triple_in_neighborhood(claw, 0));
        CHECK_FALSE(has_independent_triple_in_neighborhood(Graph::complete(5), 2));
        CHECK_THROWS_AS(has_independent_triple_in_neighborhood(claw, 4), InvalidVertexError);
    }

    TEST_CASE("independent triple equals enumeration") {
        for (std::size_t n = 1; n <= 6; ++n)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * (n - 1) / 2)); ++code) {
                const Graph g = graph_from_code(n, code);
                for (Vertex v = 0; v < n; ++v) REQUIRE(has_independent_triple_in_neighborhood(g, v) == brute_triple(g, v));
            }
        std::mt19937_64 rng(13);
        for (int rep = 0; rep < 400; ++rep) {
            const std::size_t n = 7 + rep % 6;
            const Graph g = random_graph(n, 0.2 + 0.6 * (rep % 5) / 4.0, rng);
            for (Vertex v = 0; v < n; ++v) REQUIRE(has_independent_triple_in_neighborhood(g, v) == brute_triple(g, v));
        }
        for (int rep = 0; rep < 40; ++rep) {
            const Graph g = random_graph(30, 0.3 + 0.1 * (rep % 5), rng);
            for (Vertex v = 0; v < 30; ++v) REQUIRE(has_independent_triple_in_neighborhood(g, v) == brute_triple(g, v));
        }
    }

    TEST_CASE("side vertices never have an independent triple") {
        for (std::uint64_t s = 0; s < 30; ++s) {
            const PartitionedGraph pg = sample_unipolar(60, {99, s});
            for (Vertex v = 0; v < 60; ++v)
                if (!pg.in_central(v)) CHECK_FALSE(has_independent_triple_in_neighborhood(pg.graph, v));
        }
    }

    TEST_CASE("unipolarity examples") {
        for (std::size_t n = 0; n <= 8; ++n) CHECK(is_unipolar(Graph::complete(n)));
        CHECK_FALSE(is_unipolar(cycle(5)));
        CHECK_THROWS_AS(is_unipolar(Graph(17)), CapExceededError);
        CHECK(is_unipolar(Graph(17), 20));

        // Split graphs: clique on the first half, independent set on the rest, random cross edges.
        std::mt19937_64 rng(17);
        for (int rep = 0; rep < 50; ++rep) {
            const std::size_t n = 2 + rep % 12, k = 1 + rep % (n - 1);
            Graph g(n);
            for (Vertex u = 0; u < k; ++u)
                for (Vertex v = u + 1; v < k; ++v) g.add_edge(u, v);
            for (Vertex u = 0; u < k; ++u)
                for (Vertex v = static_cast<Vertex>(k); v < n; ++v)
                    if (rng() & 1U) g.add_edge(u, v);
            CHECK(is_unipolar(g));
        }
    }

    TEST_CASE("unipolarity equals subset enumeration and witnesses are valid") {
        for (std::size_t n = 1; n <= 6; ++n)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * (n - 1) / 2)); ++code) {
                const Graph g = graph_from_code(n, code);
                const auto w = unipolar_witness(g);
                REQUIRE(w.has_value() == brute_unipolar(g));
                if (w) {
                    CHECK(w->graph == g);
                    CHECK_NOTHROW(w->validate());
                }
            }
    }

    TEST_CASE("smallest unipolar graph whose complement is not unipolar") {
        const Graph& h = smallest_unipolar_not_counipolar();
        CHECK(is_unipolar(h));
        CHECK_FALSE(is_unipolar(complement(h)));
        for (std::size_t n = 1; n < h.order(); ++n)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * (n - 1) / 2)); ++code) {
                const Graph g = graph_from_code(n, code);
                REQUIRE_FALSE((brute_unipolar(g) && !brute_unipolar(complement(g))));
            }
        // Lexicographically first at its order.
        const std::size_t n = h.order();
        for (std::uint64_t code = 0;; ++code) {
            const Graph g = graph_from_code(n, code);
            if (g == h) break;
            REQUIRE_FALSE((brute_unipolar(g) && !brute_unipolar(complement(g))));
        }
        CHECK(&smallest_unipolar_not_counipolar() == &h);
    }

    TEST_CASE("JSON interchange") {
        Graph g(4);
        g.add_edge(2, 1);
        g.add_edge(0, 3);
        CHECK(to_json(g) == R"({"n":4,"edges":[[0,3],[1,2]]})");
        CHECK(graph_from_json(to_json(g)) == g);
        CHECK(graph_from_json(R"({"n":0,"edges":[]})") == Graph(0));
        CHECK_THROWS_AS(graph_from_json("{"), InvalidArgumentError);
        CHECK_THROWS_AS(graph_from_json(R"({"n":2,"edges":[[0,2]]})"), InvalidVertexError);
        CHECK_THROWS_AS(graph_from_json(R"({"n":2,"edges":[[1,1]]})"), InvalidArgumentError);
    }

    TEST_CASE("partition validation rejects broken partitions") {
        PartitionedGraph pg;
        pg.graph = path3();
        pg.parts = {{1}, {0}, {2}};
        pg.part_of = index_parts(3, pg.parts);
        CHECK_NOTHROW(pg.validate());
        pg.graph.add_edge(0, 2);  // edge between side cliques
        CHECK_THROWS_AS(pg.validate(), InvalidArgumentError);
        pg.graph = path3();
        pg.parts = {{0, 2}, {1}};  // central part not a clique
        pg.part_of = index_parts(3, pg.parts);
        CHECK_THROWS_AS(pg.validate(), InvalidArgumentError);
    }
}
