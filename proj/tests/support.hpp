#pragma once

// Test-only helpers: a deliberately naive evaluator and random generators.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "perfolab/errors.hpp"
#include "perfolab/formula.hpp"
#include "perfolab/graph.hpp"
#include "perfolab/structure.hpp"

namespace testsupport {

using namespace perfolab;

// Direct Tarskian recursion, no lowering, no guards, no memo.
inline bool eval_in(const Structure& s, const Formula& f, std::map<std::string, Vertex>& env) {
    const std::size_t n = s.graph.order();
    auto val = [&](const std::string& v) {
        auto it = env.find(v);
        if (it == env.end()) throw UnboundVariableError(v);
        return it->second;
    };
    switch (f.kind()) {
        case FormulaKind::Adj: return s.graph.adjacent(val(f.args()[0]), val(f.args()[1]));
        case FormulaKind::Eq: return val(f.args()[0]) == val(f.args()[1]);
        case FormulaKind::Rel: {
            auto it = s.relations.find(f.name());
            if (it == s.relations.end()) throw UnknownRelationError(f.name());
            std::vector<Vertex> args;
            for (const auto& a : f.args()) args.push_back(val(a));
            // Linear scan over the tuple list rather than the indexed lookup.
            const auto flat = it->second.flat_tuples();
            const std::size_t k = it->second.arity();
            for (std::size_t i = 0; i + k <= flat.size(); i += k)
                if (std::equal(args.begin(), args.end(), flat.begin() + static_cast<std::ptrdiff_t>(i))) return true;
            return false;
        }
        case FormulaKind::Not: return !eval_in(s, f.child(), env);
        case FormulaKind::And: return eval_in(s, f.child(0), env) && eval_in(s, f.child(1), env);
        case FormulaKind::Or: return eval_in(s, f.child(0), env) || eval_in(s, f.child(1), env);
        case FormulaKind::Implies: return !eval_in(s, f.child(0), env) || eval_in(s, f.child(1), env);
        case FormulaKind::Iff: return eval_in(s, f.child(0), env) == eval_in(s, f.child(1), env);
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::ExistsUnique: {
            const auto saved = env.find(f.name()) == env.end() ? std::optional<Vertex>{} : env[f.name()];
            std::size_t hits = 0;
            for (Vertex v = 0; v < n; ++v) {
                env[f.name()] = v;
                hits += eval_in(s, f.child(), env);
            }
            if (saved) env[f.name()] = *saved; else env.erase(f.name());
            if (f.kind() == FormulaKind::Forall) return hits == n;
            if (f.kind() == FormulaKind::Exists) return hits > 0;
            return hits == 1;
        }
    }
    return false;
}

inline bool reference_eval(const Structure& s, const Formula& f, std::map<std::string, Vertex> env = {}) {
    return eval_in(s, f, env);
}

inline bool reference_eval(const Graph& g, const Formula& f, std::map<std::string, Vertex> env = {}) {
    return reference_eval(Structure(g), f, env);
}

inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

// Graph number `code` on n vertices, bit p for the p-th pair (0,1),(0,2),...
inline Graph graph_from_code(std::size_t n, std::uint64_t code) {
    Graph g(n);
    std::size_t p = 0;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v, ++p)
            if ((code >> p) & 1U) g.add_edge(u, v);
    return g;
}

struct FormulaGen {
    std::mt19937_64& rng;
    std::vector<std::string> vars{"x", "y", "z", "w"};
    std::size_t max_quantifier_depth = 3;
    std::size_t max_connective_depth = 3;
    bool relations = false;  // U/1, R/2, T/3

    std::size_t pick(std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); }
    const std::string& var() { return vars[pick(vars.size())]; }

    Formula atom() {
        const std::size_t kinds = relations ? 5 : 2;
        switch (pick(kinds)) {
            case 0: return Formula::adj(var(), var());
            case 1: return Formula::eq(var(), var());
            case 2: return Formula::rel("U", {var()});
            case 3: return Formula::rel("R", {var(), var()});
            default: return Formula::rel("T", {var(), var(), var()});
        }
    }

    Formula formula(std::size_t qdepth, std::size_t cdepth) {
        const std::size_t roll = pick(10);
        if (cdepth == 0 || roll < 3) return atom();
        if (roll < 6 && qdepth > 0) {
            const std::string v = var();
            Formula body = formula(qdepth - 1, cdepth);
            switch (pick(3)) {
                case 0: return Formula::forall(v, body);
                case 1: return Formula::exists(v, body);
                default: return Formula::exists_unique(v, body);
            }
        }
        switch (pick(5)) {
            case 0: return Formula::negate(formula(qdepth, cdepth - 1));
            case 1: return Formula::conj(formula(qdepth, cdepth - 1), formula(qdepth, cdepth - 1));
            case 2: return Formula::disj(formula(qdepth, cdepth - 1), formula(qdepth, cdepth - 1));
            case 3: return Formula::implies(formula(qdepth, cdepth - 1), formula(qdepth, cdepth - 1));
            default: return Formula::iff(formula(qdepth, cdepth - 1), formula(qdepth, cdepth - 1));
        }
    }

    Formula any() { return formula(max_quantifier_depth, max_connective_depth); }

    // Closes free variables with random quantifiers, retrying until the total depth fits.
    Formula sentence();
};

inline std::size_t quantifier_depth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& c : f.children()) d = std::max(d, quantifier_depth(c));
    return d + (f.is_quantifier() ? 1 : 0);
}

inline Formula FormulaGen::sentence() {
    for (;;) {
        Formula f = formula(max_quantifier_depth, max_connective_depth);
        const auto fv = free_vars(f);
        if (quantifier_depth(f) + fv.size() > max_quantifier_depth) continue;
        for (const auto& v : fv) f = pick(2) ? Formula::forall(v, f) : Formula::exists(v, f);
        return f;
    }
}

}  // namespace testsupport
