#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace perfolab {

enum class FormulaKind { Adj, Eq, Rel, Not, And, Or, Implies, Iff, Forall, Exists, ExistsUnique };

class Formula;

struct FormulaNode {
    FormulaKind kind;
    std::string name;               // relation name for Rel, bound variable for quantifiers
    std::vector<std::string> args;  // atom arguments
    std::vector<Formula> children;
};

/// Immutable first-order formula over the graph vocabulary {~, =} plus named relations.
/// Copies share structure.
class Formula {
public:
    static Formula adj(std::string a, std::string b);
    static Formula eq(std::string a, std::string b);
    static Formula rel(std::string name, std::vector<std::string> args);
    static Formula negate(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);
    static Formula exists_unique(std::string var, Formula body);

    /// Left-nested conjunction of a non-empty list.
    static Formula conj_all(const std::vector<Formula>& parts);
    static Formula disj_all(const std::vector<Formula>& parts);
    static Formula forall_all(const std::vector<std::string>& vars, Formula body);
    static Formula exists_all(const std::vector<std::string>& vars, Formula body);

    FormulaKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<std::string>& args() const { return node_->args; }
    const std::vector<Formula>& children() const { return node_->children; }
    const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }

    bool is_atom() const;
    bool is_quantifier() const;

    /// Node identity, stable for the lifetime of the formula.
    const FormulaNode* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
    static Formula make(FormulaNode n);

    std::shared_ptr<const FormulaNode> node_;
};

using VarSet = std::set<std::string>;

VarSet free_vars(const Formula& f);
/// Every variable name occurring anywhere (free, bound, or binder).
VarSet all_vars(const Formula& f);
bool is_sentence(const Formula& f);
bool uses_relations(const Formula& f);
std::set<std::string> relation_names(const Formula& f);

/// Returns a name not in `taken`, derived from `base` as base_1, base_2, ...
std::string fresh_name(const std::string& base, const VarSet& taken);

/// Renames bound variables so no binder uses a name from `avoid` (or captures a free variable).
Formula alpha_rename(const Formula& f, const VarSet& avoid);

/// Capture-avoiding substitution of free variables.
Formula substitute(const Formula& f, const std::vector<std::pair<std::string, std::string>>& mapping);

/// Replaces existsu x: p by exists x: (p & forall x': (p[x'/x] -> x' = x)), recursively.
Formula desugar_exists_unique(const Formula& f);

/// Negates every adjacency atom in place; equality atoms stay. Throws on relation atoms.
Formula complement_formula(const Formula& f);

/// Removes double negations.
Formula strip_double_negation(const Formula& f);

/// Canonical ASCII rendering in the concrete grammar.
std::string to_string(const Formula& f);

/// Parses the concrete grammar; throws SyntaxError with line/column.
Formula parse_formula(const std::string& text);

/// Variables that occur free; for diagnostics on sentences.
std::vector<std::string> unbound_variables(const Formula& f);

}  // namespace perfolab
