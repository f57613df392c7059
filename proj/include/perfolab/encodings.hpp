#pragma once

#include <cstddef>
#include <string>

#include "perfolab/formula.hpp"
#include "perfolab/graph.hpp"

namespace perfolab {

/// Definable predicates over a random unipolar graph.
///   InC0(x)       x lies in the central clique
///   CN(x,y)       x in C_0, y in a side clique C_i, x a common neighbour of C_i
///   Hedge(x,y,z)  x != y in C_0 with a common neighbour in the side clique of z
///   Bigger(x,y)   side cliques of x and y, the first with more common neighbours
enum class PredicateKind { InC0, CN, Hedge, Bigger };

const char* to_string(PredicateKind k);
PredicateKind predicate_from_string(const std::string& s);

/// Whether InC0 / CN / Hedge occurrences are relation atoms (bound to oracle tables)
/// or expanded into pure graph-language subformulas.
enum class BuildMode { Pure, Interpreted };

/// Defining formula of a predicate; free variables x (and y, z as the arity requires).
Formula build_base_formula(PredicateKind kind, BuildMode mode);

/// Expands every InC0 / CN / Hedge relation atom into its pure definition.
Formula inline_predicates(const Formula& f);

/// Phi(x,y): holds when x in C_i, y in C_j (i,j > 0) and H(N(C_i), C_j) satisfies `phi`.
/// Adjacency a ~ b becomes Hedge(a,b,y); quantifiers range over CN(., x).
Formula relativize(const Formula& phi, BuildMode mode);

/// exists x y : Phi(x,y).
Formula build_psi(const Formula& phi, BuildMode mode);

/// exists x y : Phi_1(x,y) & !(exists x' y' : Bigger(x',x) & Phi_0(x',y')).
Formula build_theorem1(const Formula& phi0, const Formula& phi1, BuildMode mode);

/// "H is an induced subgraph" for a fixed labelled graph H.
Formula induced_subgraph_sentence(const Graph& h);

/// Induced-subgraph sentence for smallest_unipolar_not_counipolar().
Formula build_unip();

inline constexpr std::size_t kDefaultSpectrumCap = 6;

/// True iff some labelled graph on n vertices satisfies `phi`. Exhaustive; n <= cap.
bool spectrum_contains(const Formula& phi, std::size_t n, std::size_t cap = kDefaultSpectrumCap);

}  // namespace perfolab
