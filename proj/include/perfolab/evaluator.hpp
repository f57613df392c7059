#pragma once

#include <map>
#include <memory>
#include <string>

#include "perfolab/formula.hpp"
#include "perfolab/structure.hpp"

namespace perfolab {

using Environment = std::map<std::string, Vertex>;

/// Compiled model checker for one (structure, formula) pair.
///
/// The formula is put in negation normal form, quantifiers are mini-scoped, and
/// literal conjuncts that mention the quantified variable restrict its candidate
/// set by bitset intersection. Quantifier nodes with at most two free variables
/// memoize their value per assignment; memo tables live as long as the evaluator.
class Evaluator {
public:
    Evaluator(const Structure& s, const Formula& f);
    ~Evaluator();
    Evaluator(Evaluator&&) noexcept;
    Evaluator& operator=(Evaluator&&) noexcept;

    /// `env` must bind every free variable; extra bindings are ignored.
    bool operator()(const Environment& env);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool evaluate(const Structure& s, const Formula& f, const Environment& env = {});
bool evaluate(const Graph& g, const Formula& f, const Environment& env = {});

}  // namespace perfolab
