#include "perfolab/evaluator.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

#include "perfolab/errors.hpp"

namespace perfolab {

namespace {

enum class Op { True, False, Adj, Eq, Rel, Not, And, Or, Iff, Exists, Unique };

// Intermediate tree in negation normal form; variables are resolved to slots.
struct Term {
    Op op = Op::True;
    int a = -1, b = -1;  // Adj / Eq slots
    const Relation* rel = nullptr;
    std::vector<int> args;  // Rel slots
    int var = -1;           // Exists / Unique slot
    std::vector<Term> kids;
};

bool is_literal(const Term& t) {
    const Term& base = t.op == Op::Not ? t.kids[0] : t;
    return base.op == Op::Adj || base.op == Op::Eq || base.op == Op::Rel;
}

void collect_slots(const Term& t, std::set<int>& out) {
    if (t.a >= 0) out.insert(t.a);
    if (t.b >= 0) out.insert(t.b);
    out.insert(t.args.begin(), t.args.end());
    if (t.var >= 0) out.insert(t.var);
    for (const auto& k : t.kids) collect_slots(k, out);
}

bool mentions(const Term& t, int slot) {
    if (t.a == slot || t.b == slot || t.var == slot) return true;
    if (std::find(t.args.begin(), t.args.end(), slot) != t.args.end()) return true;
    for (const auto& k : t.kids)
        if (mentions(k, slot)) return true;
    return false;
}

Term make(Op op, std::vector<Term> kids = {}) {
    Term t;
    t.op = op;
    t.kids = std::move(kids);
    return t;
}

void append_flat(Op op, Term t, std::vector<Term>& out) {
    if (t.op == op) {
        for (auto& k : t.kids) append_flat(op, std::move(k), out);
    } else {
        out.push_back(std::move(t));
    }
}

Term flat(Op op, std::vector<Term> kids) {
    std::vector<Term> out;
    for (auto& k : kids) append_flat(op, std::move(k), out);
    if (out.size() == 1) return std::move(out[0]);
    return make(op, std::move(out));
}

class Lowering {
public:
    explicit Lowering(const Structure& s) : s_(s) {}

    int slot_count() const { return next_slot_; }

    int bind_free(const std::string& name) {
        const int slot = next_slot_++;
        scope_[name].push_back(slot);
        return slot;
    }

    Term lower(const Formula& f, bool negated) {
        switch (f.kind()) {
            case FormulaKind::Adj:
            case FormulaKind::Eq:
            case FormulaKind::Rel: return negated ? make(Op::Not, {atom(f)}) : atom(f);
            case FormulaKind::Not: return lower(f.child(), !negated);
            case FormulaKind::And:
                return flat(negated ? Op::Or : Op::And, {lower(f.child(0), negated), lower(f.child(1), negated)});
            case FormulaKind::Or:
                return flat(negated ? Op::And : Op::Or, {lower(f.child(0), negated), lower(f.child(1), negated)});
            case FormulaKind::Implies:
                return negated ? flat(Op::And, {lower(f.child(0), false), lower(f.child(1), true)})
                               : flat(Op::Or, {lower(f.child(0), true), lower(f.child(1), false)});
            case FormulaKind::Iff: return make(Op::Iff, {lower(f.child(0), false), lower(f.child(1), negated)});
            case FormulaKind::Exists: {
                Term ex = quantifier(Op::Exists, f, false);
                return negated ? make(Op::Not, {std::move(ex)}) : ex;
            }
            case FormulaKind::Forall: {
                // forall v: p  ==  not exists v: not p
                Term ex = quantifier(Op::Exists, f, true);
                return negated ? ex : make(Op::Not, {std::move(ex)});
            }
            case FormulaKind::ExistsUnique: {
                Term ex = quantifier(Op::Unique, f, false);
                return negated ? make(Op::Not, {std::move(ex)}) : ex;
            }
        }
        throw InternalConsistencyError("unknown formula kind");
    }

private:
    int resolve(const std::string& name) const {
        auto it = scope_.find(name);
        if (it == scope_.end() || it->second.empty()) throw UnboundVariableError("unbound variable '" + name + "'");
        return it->second.back();
    }

    Term atom(const Formula& f) {
        Term t;
        if (f.kind() == FormulaKind::Rel) {
            auto it = s_.relations.find(f.name());
            if (it == s_.relations.end()) throw UnknownRelationError("unknown relation '" + f.name() + "'");
            if (it->second.arity() != f.args().size())
                throw UnknownRelationError("relation '" + f.name() + "' has arity " + std::to_string(it->second.arity()));
            t.op = Op::Rel;
            t.rel = &it->second;
            for (const auto& a : f.args()) t.args.push_back(resolve(a));
            return t;
        }
        t.op = f.kind() == FormulaKind::Adj ? Op::Adj : Op::Eq;
        t.a = resolve(f.args()[0]);
        t.b = resolve(f.args()[1]);
        return t;
    }

    Term quantifier(Op op, const Formula& f, bool negate_body) {
        const int slot = next_slot_++;
        scope_[f.name()].push_back(slot);
        Term body = lower(f.child(), negate_body);
        scope_[f.name()].pop_back();
        return scope(op, slot, std::move(body));
    }

    // Mini-scoping: conjuncts free of the bound slot move outside, and an
    // existential distributes over a top-level disjunction.
    Term scope(Op op, int slot, Term body) {
        if (op == Op::Exists && body.op == Op::Or) {
            std::vector<Term> parts;
            for (auto& d : body.kids) parts.push_back(scope(op, slot, std::move(d)));
            return flat(Op::Or, std::move(parts));
        }
        std::vector<Term> conjuncts;
        append_flat(Op::And, std::move(body), conjuncts);
        std::vector<Term> hoisted, kept;
        for (auto& c : conjuncts) (mentions(c, slot) ? kept : hoisted).push_back(std::move(c));
        if (op == Op::Exists && kept.size() == 1 && kept[0].op == Op::Or) {
            hoisted.push_back(scope(op, slot, std::move(kept[0])));
            return flat(Op::And, std::move(hoisted));
        }
        Term q;
        q.op = op;
        q.var = slot;
        q.kids = std::move(kept);
        hoisted.push_back(std::move(q));
        return flat(Op::And, std::move(hoisted));
    }

    const Structure& s_;
    std::map<std::string, std::vector<int>> scope_;
    int next_slot_ = 0;
};

enum class GuardKind { All, AdjRow, NotAdjRow, EqOne, NotEqOne, RelSlice, NotRelSlice, Empty };

struct Guard {
    explicit Guard(GuardKind k, int o = -1) : kind(k), other(o) {}

    GuardKind kind;
    int other = -1;
    const Relation* rel = nullptr;
    std::size_t pos = 0;
    std::vector<int> others;
};

struct Node {
    Op op = Op::True;
    int a = -1, b = -1;
    const Relation* rel = nullptr;
    std::vector<int> args;
    int var = -1;
    std::vector<int> kids;
    std::vector<Guard> guards;
    std::vector<int> free_slots;
    // memo: -1 unknown, 0 false, 1 true
    int memo_arity = -1;
    std::int8_t memo0 = -1;
    std::vector<std::int8_t> memo_dense;
    std::unordered_map<std::uint64_t, bool> memo_sparse;
    std::vector<Word> scratch;
};

constexpr std::size_t kDenseMemoLimit = 2048;

}  // namespace

struct Evaluator::Impl {
    const Structure& s;
    std::vector<Node> nodes;
    int root = -1;
    std::vector<std::pair<std::string, int>> free_slots;
    std::vector<Vertex> values;
    std::vector<Word> universe;
    std::vector<Vertex> arg_buf;

    Impl(const Structure& st, const Formula& f) : s(st) {
        Lowering low(st);
        for (const auto& v : free_vars(f)) free_slots.emplace_back(v, low.bind_free(v));
        Term t = low.lower(f, false);
        root = flatten(std::move(t));
        values.assign(static_cast<std::size_t>(low.slot_count()), 0);
        const VertexSet all = VertexSet::all(s.graph.order());
        universe.assign(all.words().begin(), all.words().end());
    }

    std::optional<Guard> guard_for(const Term& lit, int var) {
        const bool neg = lit.op == Op::Not;
        const Term& t = neg ? lit.kids[0] : lit;
        if (t.op == Op::Adj || t.op == Op::Eq) {
            if (t.a != var && t.b != var) return std::nullopt;
            if (t.a == var && t.b == var) {
                // v ~ v is false; v = v is true.
                const bool value = (t.op == Op::Eq) != neg;
                if (value) return Guard{GuardKind::All};
                return Guard{GuardKind::Empty};
            }
            const int other = t.a == var ? t.b : t.a;
            if (t.op == Op::Adj) return Guard{neg ? GuardKind::NotAdjRow : GuardKind::AdjRow, other};
            return Guard{neg ? GuardKind::NotEqOne : GuardKind::EqOne, other};
        }
        if (t.op == Op::Rel) {
            if (std::count(t.args.begin(), t.args.end(), var) != 1) return std::nullopt;
            Guard g{neg ? GuardKind::NotRelSlice : GuardKind::RelSlice};
            g.rel = t.rel;
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (t.args[i] == var)
                    g.pos = i;
                else
                    g.others.push_back(t.args[i]);
            }
            return g;
        }
        return std::nullopt;
    }

    int flatten(Term t) {
        Node n;
        n.op = t.op;
        n.a = t.a;
        n.b = t.b;
        n.rel = t.rel;
        n.args = t.args;
        n.var = t.var;
        if (t.op == Op::Exists || t.op == Op::Unique) {
            std::set<int> used;
            for (const auto& k : t.kids) collect_slots(k, used);
            used.erase(t.var);
            n.free_slots.assign(used.begin(), used.end());
            std::vector<Term> residual_lits, residual_rest;
            for (auto& k : t.kids) {
                if (is_literal(k)) {
                    if (auto g = guard_for(k, t.var)) {
                        if (g->kind == GuardKind::All) continue;
                        n.guards.push_back(std::move(*g));
                        continue;
                    }
                    residual_lits.push_back(std::move(k));
                } else {
                    residual_rest.push_back(std::move(k));
                }
            }
            for (auto& k : residual_lits) n.kids.push_back(flatten(std::move(k)));
            for (auto& k : residual_rest) n.kids.push_back(flatten(std::move(k)));
            n.scratch.assign(s.graph.stride(), 0);
            n.memo_arity = n.free_slots.size() <= 2 ? static_cast<int>(n.free_slots.size()) : -1;
            const std::size_t order = s.graph.order();
            if (n.memo_arity == 1) n.memo_dense.assign(order, -1);
            if (n.memo_arity == 2 && order <= kDenseMemoLimit) n.memo_dense.assign(order * order, -1);
        } else {
            for (auto& k : t.kids) n.kids.push_back(flatten(std::move(k)));
        }
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    }

    bool run(const Environment& env) {
        for (const auto& [name, slot] : free_slots) {
            auto it = env.find(name);
            if (it == env.end()) throw UnboundVariableError("no binding for free variable '" + name + "'");
            if (it->second >= s.graph.order())
                throw InvalidVertexError("binding for '" + name + "' is not a vertex");
            values[static_cast<std::size_t>(slot)] = it->second;
        }
        return eval(root);
    }

    bool eval(int idx) {
        Node& n = nodes[static_cast<std::size_t>(idx)];
        switch (n.op) {
            case Op::True: return true;
            case Op::False: return false;
            case Op::Adj: return s.graph.adjacent(values[n.a], values[n.b]);
            case Op::Eq: return values[n.a] == values[n.b];
            case Op::Rel: {
                arg_buf.clear();
                for (int a : n.args) arg_buf.push_back(values[a]);
                return n.rel->contains(arg_buf);
            }
            case Op::Not: return !eval(n.kids[0]);
            case Op::And:
                for (int k : n.kids)
                    if (!eval(k)) return false;
                return true;
            case Op::Or:
                for (int k : n.kids)
                    if (eval(k)) return true;
                return false;
            case Op::Iff: return eval(n.kids[0]) == eval(n.kids[1]);
            case Op::Exists:
            case Op::Unique: return quantify(idx);
        }
        return false;
    }

    std::int8_t* memo_slot(Node& n, std::uint64_t& key) {
        const std::size_t order = s.graph.order();
        switch (n.memo_arity) {
            case 0: return &n.memo0;
            case 1: return &n.memo_dense[values[n.free_slots[0]]];
            case 2:
                key = std::uint64_t{values[n.free_slots[0]]} * order + values[n.free_slots[1]];
                if (!n.memo_dense.empty()) return &n.memo_dense[key];
                return nullptr;
            default: return nullptr;
        }
    }

    bool quantify(int idx) {
        Node& n = nodes[static_cast<std::size_t>(idx)];
        std::uint64_t key = 0;
        std::int8_t* slot = memo_slot(n, key);
        if (slot && *slot >= 0) return *slot == 1;
        if (!slot && n.memo_arity == 2) {
            if (auto it = n.memo_sparse.find(key); it != n.memo_sparse.end()) return it->second;
        }
        const bool result = compute(idx);
        // The node vector is not resized during evaluation, so references stay valid.
        Node& m = nodes[static_cast<std::size_t>(idx)];
        if (slot) *slot = result ? 1 : 0;
        else if (m.memo_arity == 2) m.memo_sparse.emplace(key, result);
        return result;
    }

    void restrict_candidates(Node& n) {
        std::vector<Word>& cand = n.scratch;
        std::copy(universe.begin(), universe.end(), cand.begin());
        for (const Guard& g : n.guards) {
            switch (g.kind) {
                case GuardKind::AdjRow: bits::and_into(cand, s.graph.row(values[g.other])); break;
                case GuardKind::NotAdjRow: bits::andnot_into(cand, s.graph.row(values[g.other])); break;
                case GuardKind::EqOne: {
                    const Vertex v = values[g.other];
                    const bool had = bits::test(cand, v);
                    std::fill(cand.begin(), cand.end(), 0);
                    if (had) bits::set(cand, v);
                    break;
                }
                case GuardKind::NotEqOne: bits::reset(cand, values[g.other]); break;
                case GuardKind::RelSlice:
                case GuardKind::NotRelSlice: {
                    Vertex others[2] = {0, 0};
                    for (std::size_t i = 0; i < g.others.size(); ++i) others[i] = values[g.others[i]];
                    auto slice = g.rel->slice(g.pos, std::span<const Vertex>(others, g.others.size()));
                    if (g.kind == GuardKind::RelSlice)
                        bits::and_into(cand, slice);
                    else
                        bits::andnot_into(cand, slice);
                    break;
                }
                case GuardKind::Empty: std::fill(cand.begin(), cand.end(), 0); break;
                case GuardKind::All: break;
            }
        }
    }

    bool compute(int idx) {
        restrict_candidates(nodes[static_cast<std::size_t>(idx)]);
        const Node& n = nodes[static_cast<std::size_t>(idx)];
        const bool unique = n.op == Op::Unique;
        if (n.kids.empty()) {
            const std::size_t c = unique ? bits::count(n.scratch) : (bits::any(n.scratch) ? 1 : 0);
            return unique ? c == 1 : c > 0;
        }
        const std::size_t var = static_cast<std::size_t>(n.var);
        std::size_t hits = 0;
        for (std::size_t w = 0; w < n.scratch.size(); ++w) {
            Word x = nodes[static_cast<std::size_t>(idx)].scratch[w];
            while (x) {
                const auto b = static_cast<std::size_t>(std::countr_zero(x));
                x &= x - 1;
                values[var] = static_cast<Vertex>(w * kWordBits + b);
                bool ok = true;
                for (int k : nodes[static_cast<std::size_t>(idx)].kids) {
                    if (!eval(k)) {
                        ok = false;
                        break;
                    }
                }
                if (ok && (++hits > (unique ? 1U : 0U))) return !unique;
            }
        }
        return unique ? hits == 1 : false;
    }
};

Evaluator::Evaluator(const Structure& s, const Formula& f) : impl_(std::make_unique<Impl>(s, f)) {}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

bool Evaluator::operator()(const Environment& env) { return impl_->run(env); }

bool evaluate(const Structure& s, const Formula& f, const Environment& env) { return Evaluator(s, f)(env); }

bool evaluate(const Graph& g, const Formula& f, const Environment& env) {
    Structure s(g);
    return Evaluator(s, f)(env);
}

}  // namespace perfolab
