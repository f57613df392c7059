#include "perfolab/formula.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "perfolab/errors.hpp"

namespace perfolab {

Formula Formula::make(FormulaNode n) { return Formula(std::make_shared<const FormulaNode>(std::move(n))); }

Formula Formula::adj(std::string a, std::string b) { return make({FormulaKind::Adj, {}, {std::move(a), std::move(b)}, {}}); }
Formula Formula::eq(std::string a, std::string b) { return make({FormulaKind::Eq, {}, {std::move(a), std::move(b)}, {}}); }
Formula Formula::rel(std::string name, std::vector<std::string> args) {
    if (args.empty()) throw InvalidArgumentError("relation atom needs at least one argument");
    return make({FormulaKind::Rel, std::move(name), std::move(args), {}});
}
Formula Formula::negate(Formula f) { return make({FormulaKind::Not, {}, {}, {std::move(f)}}); }
Formula Formula::conj(Formula a, Formula b) { return make({FormulaKind::And, {}, {}, {std::move(a), std::move(b)}}); }
Formula Formula::disj(Formula a, Formula b) { return make({FormulaKind::Or, {}, {}, {std::move(a), std::move(b)}}); }
Formula Formula::implies(Formula a, Formula b) { return make({FormulaKind::Implies, {}, {}, {std::move(a), std::move(b)}}); }
Formula Formula::iff(Formula a, Formula b) { return make({FormulaKind::Iff, {}, {}, {std::move(a), std::move(b)}}); }
Formula Formula::forall(std::string var, Formula body) { return make({FormulaKind::Forall, std::move(var), {}, {std::move(body)}}); }
Formula Formula::exists(std::string var, Formula body) { return make({FormulaKind::Exists, std::move(var), {}, {std::move(body)}}); }
Formula Formula::exists_unique(std::string var, Formula body) {
    return make({FormulaKind::ExistsUnique, std::move(var), {}, {std::move(body)}});
}

Formula Formula::conj_all(const std::vector<Formula>& parts) {
    if (parts.empty()) throw InvalidArgumentError("empty conjunction");
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& parts) {
    if (parts.empty()) throw InvalidArgumentError("empty disjunction");
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
    return acc;
}

Formula Formula::forall_all(const std::vector<std::string>& vars, Formula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, body);
    return body;
}

Formula Formula::exists_all(const std::vector<std::string>& vars, Formula body) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, body);
    return body;
}

bool Formula::is_atom() const {
    return kind() == FormulaKind::Adj || kind() == FormulaKind::Eq || kind() == FormulaKind::Rel;
}

bool Formula::is_quantifier() const {
    return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists || kind() == FormulaKind::ExistsUnique;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    return a.kind() == b.kind() && a.name() == b.name() && a.args() == b.args() && a.children() == b.children();
}

namespace {

void collect_free(const Formula& f, VarSet& bound, VarSet& out) {
    if (f.is_atom()) {
        for (const auto& a : f.args())
            if (!bound.contains(a)) out.insert(a);
        return;
    }
    if (f.is_quantifier()) {
        const bool fresh = bound.insert(f.name()).second;
        collect_free(f.child(), bound, out);
        if (fresh) bound.erase(f.name());
        return;
    }
    for (const auto& c : f.children()) collect_free(c, bound, out);
}

void collect_all(const Formula& f, VarSet& out) {
    for (const auto& a : f.args()) out.insert(a);
    if (f.is_quantifier()) out.insert(f.name());
    for (const auto& c : f.children()) collect_all(c, out);
}

void collect_relations(const Formula& f, std::set<std::string>& out) {
    if (f.kind() == FormulaKind::Rel) out.insert(f.name());
    for (const auto& c : f.children()) collect_relations(c, out);
}

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
    switch (f.kind()) {
        case FormulaKind::Not: return Formula::negate(kids[0]);
        case FormulaKind::And: return Formula::conj(kids[0], kids[1]);
        case FormulaKind::Or: return Formula::disj(kids[0], kids[1]);
        case FormulaKind::Implies: return Formula::implies(kids[0], kids[1]);
        case FormulaKind::Iff: return Formula::iff(kids[0], kids[1]);
        case FormulaKind::Forall: return Formula::forall(f.name(), kids[0]);
        case FormulaKind::Exists: return Formula::exists(f.name(), kids[0]);
        case FormulaKind::ExistsUnique: return Formula::exists_unique(f.name(), kids[0]);
        default: return f;
    }
}

Formula rebind(FormulaKind kind, const std::string& var, Formula body) {
    switch (kind) {
        case FormulaKind::Forall: return Formula::forall(var, std::move(body));
        case FormulaKind::Exists: return Formula::exists(var, std::move(body));
        default: return Formula::exists_unique(var, std::move(body));
    }
}

Formula rename_atom(const Formula& f, const std::map<std::string, std::string>& m) {
    std::vector<std::string> args = f.args();
    bool changed = false;
    for (auto& a : args) {
        if (auto it = m.find(a); it != m.end()) {
            a = it->second;
            changed = true;
        }
    }
    if (!changed) return f;
    switch (f.kind()) {
        case FormulaKind::Adj: return Formula::adj(args[0], args[1]);
        case FormulaKind::Eq: return Formula::eq(args[0], args[1]);
        default: return Formula::rel(f.name(), args);
    }
}

// Substitution engine shared by alpha_rename and substitute. `m` maps free names to replacements;
// binders whose name is in `forbidden` are renamed to fresh names outside `taken`.
Formula subst(const Formula& f, std::map<std::string, std::string> m, const VarSet& forbidden, VarSet& taken) {
    if (f.is_atom()) return rename_atom(f, m);
    if (f.is_quantifier()) {
        std::string var = f.name();
        if (forbidden.contains(var)) {
            std::string fresh = fresh_name(var, taken);
            taken.insert(fresh);
            m[var] = fresh;
            var = fresh;
        } else {
            m.erase(var);
        }
        return rebind(f.kind(), var, subst(f.child(), std::move(m), forbidden, taken));
    }
    std::vector<Formula> kids;
    kids.reserve(f.children().size());
    for (const auto& c : f.children()) kids.push_back(subst(c, m, forbidden, taken));
    return rebuild(f, std::move(kids));
}

}  // namespace

VarSet free_vars(const Formula& f) {
    VarSet bound, out;
    collect_free(f, bound, out);
    return out;
}

VarSet all_vars(const Formula& f) {
    VarSet out;
    collect_all(f, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

std::set<std::string> relation_names(const Formula& f) {
    std::set<std::string> out;
    collect_relations(f, out);
    return out;
}

bool uses_relations(const Formula& f) { return !relation_names(f).empty(); }

std::vector<std::string> unbound_variables(const Formula& f) {
    const VarSet fv = free_vars(f);
    return {fv.begin(), fv.end()};
}

std::string fresh_name(const std::string& base, const VarSet& taken) {
    for (std::size_t i = 1;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!taken.contains(candidate)) return candidate;
    }
}

Formula alpha_rename(const Formula& f, const VarSet& avoid) {
    VarSet taken = all_vars(f);
    taken.insert(avoid.begin(), avoid.end());
    return subst(f, {}, avoid, taken);
}

Formula substitute(const Formula& f, const std::vector<std::pair<std::string, std::string>>& mapping) {
    std::map<std::string, std::string> m(mapping.begin(), mapping.end());
    VarSet targets;
    for (const auto& [from, to] : mapping) targets.insert(to);
    VarSet taken = all_vars(f);
    taken.insert(targets.begin(), targets.end());
    return subst(f, std::move(m), targets, taken);
}

Formula desugar_exists_unique(const Formula& f) {
    if (f.is_atom()) return f;
    std::vector<Formula> kids;
    for (const auto& c : f.children()) kids.push_back(desugar_exists_unique(c));
    if (f.kind() != FormulaKind::ExistsUnique) return rebuild(f, std::move(kids));
    const Formula& body = kids[0];
    VarSet taken = all_vars(body);
    taken.insert(f.name());
    const std::string other = fresh_name(f.name(), taken);
    const Formula moved = substitute(body, {{f.name(), other}});
    return Formula::exists(f.name(),
                           Formula::conj(body, Formula::forall(other, Formula::implies(moved, Formula::eq(other, f.name())))));
}

Formula complement_formula(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Adj: {
            // Loops are absent on both sides; otherwise the complement edge also needs distinct ends.
            const auto& a = f.args();
            if (a[0] == a[1]) return f;
            return Formula::conj(Formula::negate(f), Formula::negate(Formula::eq(a[0], a[1])));
        }
        case FormulaKind::Eq: return f;
        case FormulaKind::Rel:
            throw RelationAtomError("complement undefined for interpreted relation " + f.name());
        default: {
            std::vector<Formula> kids;
            for (const auto& c : f.children()) kids.push_back(complement_formula(c));
            return rebuild(f, std::move(kids));
        }
    }
}

Formula strip_double_negation(const Formula& f) {
    if (f.is_atom()) return f;
    if (f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::Not)
        return strip_double_negation(f.child().child());
    std::vector<Formula> kids;
    for (const auto& c : f.children()) kids.push_back(strip_double_negation(c));
    return rebuild(f, std::move(kids));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; quantifiers only appear at formula level (or inside parentheses).
int precedence(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::ExistsUnique: return 0;
        case FormulaKind::Iff: return 1;
        case FormulaKind::Implies: return 2;
        case FormulaKind::Or: return 3;
        case FormulaKind::And: return 4;
        default: return 5;
    }
}

void print(const Formula& f, std::ostream& os);

void print_at(const Formula& f, int min_prec, std::ostream& os) {
    if (precedence(f) < min_prec) {
        os << '(';
        print(f, os);
        os << ')';
    } else {
        print(f, os);
    }
}

void print(const Formula& f, std::ostream& os) {
    switch (f.kind()) {
        case FormulaKind::Adj: os << f.args()[0] << " ~ " << f.args()[1]; return;
        case FormulaKind::Eq: os << f.args()[0] << " = " << f.args()[1]; return;
        case FormulaKind::Rel: {
            os << f.name() << '(';
            for (std::size_t i = 0; i < f.args().size(); ++i) os << (i ? "," : "") << f.args()[i];
            os << ')';
            return;
        }
        case FormulaKind::Not: {
            os << '!';
            const Formula& c = f.child();
            const bool infix_atom = c.kind() == FormulaKind::Adj || c.kind() == FormulaKind::Eq;
            if (infix_atom) {
                os << '(';
                print(c, os);
                os << ')';
            } else {
                print_at(c, 5, os);
            }
            return;
        }
        case FormulaKind::And: print_at(f.child(0), 4, os); os << " & "; print_at(f.child(1), 5, os); return;
        case FormulaKind::Or: print_at(f.child(0), 3, os); os << " | "; print_at(f.child(1), 4, os); return;
        case FormulaKind::Implies: print_at(f.child(0), 3, os); os << " -> "; print_at(f.child(1), 2, os); return;
        case FormulaKind::Iff: print_at(f.child(0), 1, os); os << " <-> "; print_at(f.child(1), 2, os); return;
        case FormulaKind::ExistsUnique: os << "existsu " << f.name() << " : "; print(f.child(), os); return;
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            os << (f.kind() == FormulaKind::Forall ? "forall" : "exists");
            const Formula* cur = &f;
            while (true) {
                os << ' ' << cur->name();
                if (cur->child().kind() != f.kind()) break;
                cur = &cur->child();
            }
            os << " : ";
            print(cur->child(), os);
            return;
        }
    }
}

}  // namespace

std::string to_string(const Formula& f) {
    std::ostringstream os;
    print(f, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Var, Name, Forall, Exists, ExistsU, Tilde, Equals, Bang, Amp, Bar, Arrow, DArrow, LParen, RParen, Comma, Colon, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {  // comment to end of line
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        const std::size_t l = line, k = col;
        if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < s.size() && (std::islower(static_cast<unsigned char>(s[j])) ||
                                    std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                                    (std::isupper(static_cast<unsigned char>(c)) && std::isupper(static_cast<unsigned char>(s[j])))))
                ++j;
            std::string word = s.substr(i, j - i);
            if (std::islower(static_cast<unsigned char>(c)) && j < s.size() && std::isupper(static_cast<unsigned char>(s[j])))
                throw SyntaxError("upper-case letter in variable name '" + word + s[j] + "'", l, k);
            Tok kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Name : Tok::Var;
            if (word == "forall") kind = Tok::Forall;
            else if (word == "exists") kind = Tok::Exists;
            else if (word == "existsu") kind = Tok::ExistsU;
            out.push_back({kind, std::move(word), l, k});
            advance(j - i);
            continue;
        }
        auto starts = [&](const char* p) { return s.compare(i, std::char_traits<char>::length(p), p) == 0; };
        if (starts("<->")) { out.push_back({Tok::DArrow, "<->", l, k}); advance(3); continue; }
        if (starts("->")) { out.push_back({Tok::Arrow, "->", l, k}); advance(2); continue; }
        Tok kind;
        switch (c) {
            case '~': kind = Tok::Tilde; break;
            case '=': kind = Tok::Equals; break;
            case '!': kind = Tok::Bang; break;
            case '&': kind = Tok::Amp; break;
            case '|': kind = Tok::Bar; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            case ':': kind = Tok::Colon; break;
            default: throw SyntaxError(std::string("unexpected character '") + c + "'", l, k);
        }
        out.push_back({kind, std::string(1, c), l, k});
        advance(1);
    }
    out.push_back({Tok::End, "end of input", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Formula parse_all() {
        Formula f = formula();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what + ", found '" + peek().text + "'");
        return next();
    }

    Formula formula() {
        const Tok k = peek().kind;
        if (k == Tok::Forall || k == Tok::Exists || k == Tok::ExistsU) {
            next();
            std::vector<std::string> vars;
            vars.push_back(expect(Tok::Var, "variable").text);
            while (peek().kind == Tok::Var) vars.push_back(next().text);
            if (k == Tok::ExistsU && vars.size() != 1) fail("existsu binds exactly one variable");
            expect(Tok::Colon, "':'");
            Formula body = formula();
            if (k == Tok::ExistsU) return Formula::exists_unique(vars[0], body);
            return k == Tok::Forall ? Formula::forall_all(vars, body) : Formula::exists_all(vars, body);
        }
        return iff();
    }

    Formula iff() {
        Formula acc = imp();
        while (accept(Tok::DArrow)) acc = Formula::iff(acc, imp());
        return acc;
    }

    Formula imp() {
        Formula lhs = disj();
        if (accept(Tok::Arrow)) return Formula::implies(lhs, imp());
        return lhs;
    }

    Formula disj() {
        Formula acc = conj();
        while (accept(Tok::Bar)) acc = Formula::disj(acc, conj());
        return acc;
    }

    Formula conj() {
        Formula acc = neg();
        while (accept(Tok::Amp)) acc = Formula::conj(acc, neg());
        return acc;
    }

    Formula neg() {
        if (accept(Tok::Bang)) return Formula::negate(neg());
        if (accept(Tok::LParen)) {
            Formula f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        return atom();
    }

    Formula atom() {
        if (peek().kind == Tok::Name) {
            std::string name = next().text;
            expect(Tok::LParen, "'('");
            std::vector<std::string> args;
            args.push_back(expect(Tok::Var, "variable").text);
            while (accept(Tok::Comma)) args.push_back(expect(Tok::Var, "variable").text);
            expect(Tok::RParen, "')'");
            return Formula::rel(std::move(name), std::move(args));
        }
        if (peek().kind != Tok::Var) fail("expected a formula, found '" + peek().text + "'");
        std::string a = next().text;
        if (accept(Tok::Tilde)) return Formula::adj(a, expect(Tok::Var, "variable").text);
        if (accept(Tok::Equals)) return Formula::eq(a, expect(Tok::Var, "variable").text);
        fail("expected '~' or '=' after variable '" + a + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(lex(text)).parse_all(); }

}  // namespace perfolab
