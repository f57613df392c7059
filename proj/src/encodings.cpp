#include "perfolab/encodings.hpp"

#include <cstdint>

#include "perfolab/errors.hpp"
#include "perfolab/evaluator.hpp"

namespace perfolab {

using F = Formula;

const char* to_string(PredicateKind k) {
    switch (k) {
        case PredicateKind::InC0: return "InC0";
        case PredicateKind::CN: return "CN";
        case PredicateKind::Hedge: return "Hedge";
        case PredicateKind::Bigger: return "Bigger";
    }
    return "?";
}

PredicateKind predicate_from_string(const std::string& s) {
    if (s == "InC0" || s == "inc0") return PredicateKind::InC0;
    if (s == "CN" || s == "cn") return PredicateKind::CN;
    if (s == "Hedge" || s == "hedge") return PredicateKind::Hedge;
    if (s == "Bigger" || s == "bigger") return PredicateKind::Bigger;
    throw InvalidArgumentError("unknown predicate '" + s + "'");
}

namespace {

F not_(F f) { return F::negate(std::move(f)); }
F and_(std::initializer_list<F> parts) { return F::conj_all(std::vector<F>(parts)); }
F inc0(const std::string& v) { return F::rel("InC0", {v}); }
F cn(const std::string& a, const std::string& b) { return F::rel("CN", {a, b}); }
F hedge(const std::string& a, const std::string& b, const std::string& c) { return F::rel("Hedge", {a, b, c}); }

F inc0_definition() {
    return F::exists_all({"x1", "x2", "x3"},
                         and_({F::adj("x", "x1"), F::adj("x", "x2"), F::adj("x", "x3"), not_(F::eq("x1", "x2")),
                               not_(F::eq("x1", "x3")), not_(F::eq("x2", "x3")), not_(F::adj("x1", "x2")),
                               not_(F::adj("x1", "x3")), not_(F::adj("x2", "x3"))}));
}

F cn_definition() {
    return and_({inc0("x"), not_(inc0("y")), F::adj("x", "y"),
                 F::forall("z", F::implies(F::conj(not_(inc0("z")), F::adj("z", "y")), F::adj("x", "z")))});
}

F hedge_definition() {
    // Grouping: exists z1 : (z1 = z | (!InC0(z1) & z1 ~ z)) & x ~ z1 & y ~ z1.
    const F witness = F::disj(F::eq("z1", "z"), F::conj(not_(inc0("z1")), F::adj("z1", "z")));
    return and_({inc0("x"), inc0("y"), not_(inc0("z")), not_(F::eq("x", "y")),
                 F::exists("z1", and_({witness, F::adj("x", "z1"), F::adj("y", "z1")}))});
}

F bigger_definition() {
    const F x1_side = F::conj(cn("x1", "x"), not_(cn("x1", "y")));
    const F y1_side = F::conj(cn("y1", "y"), not_(cn("y1", "x")));
    const F y2_side = F::conj(cn("y2", "y"), not_(cn("y2", "x")));
    const F saturates =
        F::forall("y1", F::implies(y1_side, F::exists_unique("x1", F::conj(x1_side, hedge("x1", "y1", "z")))));
    const F matching = F::forall_all(
        {"x1", "y1", "y2"},
        F::implies(and_({x1_side, y1_side, y2_side, hedge("x1", "y1", "z"), hedge("x1", "y2", "z")}), F::eq("y1", "y2")));
    const F spare = F::exists("x1", F::conj(x1_side, F::forall("y1", F::implies(y1_side, not_(hedge("x1", "y1", "z"))))));
    return and_({not_(inc0("x")), not_(inc0("y")), not_(F::eq("x", "y")), not_(F::adj("x", "y")),
                 F::exists("z", and_({saturates, matching, spare}))});
}

const F& interpreted_definition(PredicateKind k) {
    static const F defs[] = {inc0_definition(), cn_definition(), hedge_definition(), bigger_definition()};
    return defs[static_cast<int>(k)];
}

const std::vector<std::string>& parameters(PredicateKind k) {
    static const std::vector<std::string> one{"x"}, two{"x", "y"}, three{"x", "y", "z"};
    switch (k) {
        case PredicateKind::InC0: return one;
        case PredicateKind::Hedge: return three;
        default: return two;
    }
}

F instantiate(PredicateKind k, const std::vector<std::string>& args) {
    const auto& params = parameters(k);
    std::vector<std::pair<std::string, std::string>> mapping;
    for (std::size_t i = 0; i < params.size(); ++i) mapping.emplace_back(params[i], args.at(i));
    return substitute(interpreted_definition(k), mapping);
}

void require_graph_sentence(const F& phi, const char* what) {
    if (!is_sentence(phi)) throw NotASentenceError(std::string(what) + " must be a sentence");
    if (uses_relations(phi)) throw RelationAtomError(std::string(what) + " must use only ~ and = atoms");
}

F relativize_body(const F& f) {
    switch (f.kind()) {
        case FormulaKind::Adj: return hedge(f.args()[0], f.args()[1], "y");
        case FormulaKind::Eq: return f;
        case FormulaKind::Not: return not_(relativize_body(f.child()));
        case FormulaKind::And: return F::conj(relativize_body(f.child(0)), relativize_body(f.child(1)));
        case FormulaKind::Or: return F::disj(relativize_body(f.child(0)), relativize_body(f.child(1)));
        case FormulaKind::Implies: return F::implies(relativize_body(f.child(0)), relativize_body(f.child(1)));
        case FormulaKind::Iff: return F::iff(relativize_body(f.child(0)), relativize_body(f.child(1)));
        case FormulaKind::Exists: return F::exists(f.name(), F::conj(cn(f.name(), "x"), relativize_body(f.child())));
        case FormulaKind::Forall: return F::forall(f.name(), F::implies(cn(f.name(), "x"), relativize_body(f.child())));
        case FormulaKind::ExistsUnique:
            return F::exists_unique(f.name(), F::conj(cn(f.name(), "x"), relativize_body(f.child())));
        case FormulaKind::Rel: break;
    }
    throw RelationAtomError("relation atom in relativized sentence");
}

F finish(F f, BuildMode mode) { return mode == BuildMode::Pure ? inline_predicates(f) : f; }

}  // namespace

Formula build_base_formula(PredicateKind kind, BuildMode mode) { return finish(interpreted_definition(kind), mode); }

Formula inline_predicates(const Formula& f) {
    if (f.kind() == FormulaKind::Rel) {
        if (f.name() == "InC0" && f.args().size() == 1) return inline_predicates(instantiate(PredicateKind::InC0, f.args()));
        if (f.name() == "CN" && f.args().size() == 2) return inline_predicates(instantiate(PredicateKind::CN, f.args()));
        if (f.name() == "Hedge" && f.args().size() == 3)
            return inline_predicates(instantiate(PredicateKind::Hedge, f.args()));
        return f;
    }
    if (f.is_atom()) return f;
    switch (f.kind()) {
        case FormulaKind::Not: return not_(inline_predicates(f.child()));
        case FormulaKind::And: return F::conj(inline_predicates(f.child(0)), inline_predicates(f.child(1)));
        case FormulaKind::Or: return F::disj(inline_predicates(f.child(0)), inline_predicates(f.child(1)));
        case FormulaKind::Implies: return F::implies(inline_predicates(f.child(0)), inline_predicates(f.child(1)));
        case FormulaKind::Iff: return F::iff(inline_predicates(f.child(0)), inline_predicates(f.child(1)));
        case FormulaKind::Forall: return F::forall(f.name(), inline_predicates(f.child()));
        case FormulaKind::Exists: return F::exists(f.name(), inline_predicates(f.child()));
        case FormulaKind::ExistsUnique: return F::exists_unique(f.name(), inline_predicates(f.child()));
        default: return f;
    }
}

Formula relativize(const Formula& phi, BuildMode mode) {
    require_graph_sentence(phi, "relativized formula");
    const F renamed = alpha_rename(phi, {"x", "y"});
    return finish(and_({not_(inc0("x")), not_(inc0("y")), relativize_body(renamed)}), mode);
}

Formula build_psi(const Formula& phi, BuildMode mode) {
    return F::exists_all({"x", "y"}, relativize(phi, mode));
}

Formula build_theorem1(const Formula& phi0, const Formula& phi1, BuildMode mode) {
    const F big = substitute(interpreted_definition(PredicateKind::Bigger), {{"x", "xp"}, {"y", "x"}});
    const F phi0_rel = substitute(relativize(phi0, BuildMode::Interpreted), {{"x", "xp"}, {"y", "yp"}});
    const F rival = F::exists_all({"xp", "yp"}, F::conj(big, phi0_rel));
    const F body = F::conj(relativize(phi1, BuildMode::Interpreted), not_(rival));
    return finish(F::exists_all({"x", "y"}, body), mode);
}

Formula induced_subgraph_sentence(const Graph& h) {
    const std::size_t k = h.order();
    if (k == 0) return F::forall("v0", F::eq("v0", "v0"));
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= k; ++i) vars.push_back("v" + std::to_string(i));
    std::vector<F> parts;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) parts.push_back(not_(F::eq(vars[i], vars[j])));
    for (Vertex i = 0; i < k; ++i)
        for (Vertex j = i + 1; j < k; ++j) {
            F a = F::adj(vars[i], vars[j]);
            parts.push_back(h.adjacent(i, j) ? a : not_(a));
        }
    if (parts.empty()) parts.push_back(F::eq(vars[0], vars[0]));
    return F::exists_all(vars, F::conj_all(parts));
}

Formula build_unip() { return induced_subgraph_sentence(smallest_unipolar_not_counipolar()); }

bool spectrum_contains(const Formula& phi, std::size_t n, std::size_t cap) {
    if (n > cap) throw CapExceededError("spectrum search limited to n <= " + std::to_string(cap));
    if (!is_sentence(phi)) throw NotASentenceError("spectrum search needs a sentence");
    const std::size_t pairs = n * (n - 1) / 2;
    if (pairs >= 63) throw CapExceededError("spectrum search too large");
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs); ++code) {
        Graph g(n);
        std::size_t p = 0;
        for (Vertex i = 0; i < n; ++i)
            for (Vertex j = i + 1; j < n; ++j, ++p)
                if ((code >> p) & 1U) g.add_edge(i, j);
        if (evaluate(g, phi)) return true;
    }
    return false;
}

}  // namespace perfolab
