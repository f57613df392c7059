#pragma once

#include <cstddef>
#include <vector>

#include "perfolab/formula.hpp"
#include "perfolab/graph.hpp"
#include "perfolab/structure.hpp"

namespace perfolab {

/// Ground-truth tables for the definable predicates, read off the witness partition.
///   InC0(v)       v in C_0
///   CN(x,y)       x in C_0 and N(C_i), y in C_i, i > 0
///   Hedge(x,y,z)  x != y in C_0, z in C_i (i > 0), some vertex of C_i adjacent to both
struct OracleTables {
    Relation in_c0;
    Relation cn;
    Relation hedge;
};

OracleTables oracle_tables(const PartitionedGraph& pg);

/// The graph with the tables bound as relations "InC0", "CN" and "Hedge".
Structure oracle_structure(const PartitionedGraph& pg);

/// N(C_i) for every part; entry 0 is left empty.
std::vector<VertexSet> side_neighborhoods(const PartitionedGraph& pg);

/// x in C_i, y in C_j (i, j > 0). True iff for some k > 0 the graph H(A u B, C_k), with
/// A = N(C_i) \ N(C_j) and B = N(C_j) \ N(C_i), matches every b in B to exactly one a in A,
/// no a twice, and leaves some a unmatched. Throws InvalidArgumentError for central vertices.
bool oracle_bigger(const PartitionedGraph& pg, Vertex x, Vertex y);

/// Distinct graphs H(S, C_k) over k > 0, in order of first appearance, re-indexed like derived_graph.
std::vector<Graph> distinct_derived_graphs(const PartitionedGraph& pg, const VertexSet& s);

struct PsiOutcome {
    bool holds = false;
    std::size_t supports_examined = 0;  // distinct N(C_i) looked at
    std::size_t supports_skipped = 0;   // distinct N(C_i) above the support cap
    std::size_t graphs_checked = 0;     // distinct derived graphs evaluated
};

inline constexpr std::size_t kUnlimitedSupport = static_cast<std::size_t>(-1);

/// Whether H(N(C_i), C_j) satisfies `phi` for some i, j > 0. Only supports N(C_i) with at most
/// `max_support` vertices are examined, smallest first; a true answer is always exact.
PsiOutcome oracle_psi(const PartitionedGraph& pg, const Formula& phi, std::size_t max_support = kUnlimitedSupport);

}  // namespace perfolab
