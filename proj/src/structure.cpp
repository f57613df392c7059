#include "perfolab/structure.hpp"

#include <algorithm>

#include "perfolab/errors.hpp"

namespace perfolab {

Relation::Relation(std::size_t universe, std::size_t arity, std::vector<std::vector<Vertex>> tuples)
    : n_(universe), arity_(arity), stride_(words_for(universe)), empty_(words_for(universe), 0) {
    if (arity < 1 || arity > 3) throw InvalidArgumentError("relation arity must be 1, 2 or 3");
    for (const auto& t : tuples) {
        if (t.size() != arity) throw InvalidArgumentError("relation tuple has wrong arity");
        for (Vertex v : t)
            if (v >= n_) throw InvalidVertexError("relation tuple references vertex " + std::to_string(v));
    }
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    tuples_.reserve(tuples.size() * arity);
    for (const auto& t : tuples) tuples_.insert(tuples_.end(), t.begin(), t.end());

    if (arity == 1) {
        unary_.assign(stride_, 0);
        for (const auto& t : tuples) bits::set(unary_, t[0]);
    } else if (arity == 2) {
        for (auto& rows : binary_rows_) rows.assign(n_ * stride_, 0);
        for (const auto& t : tuples) {
            // binary_rows_[0][b] holds {a : (a,b)}; binary_rows_[1][a] holds {b : (a,b)}.
            bits::set(std::span<Word>(binary_rows_[0].data() + std::size_t{t[1]} * stride_, stride_), t[0]);
            bits::set(std::span<Word>(binary_rows_[1].data() + std::size_t{t[0]} * stride_, stride_), t[1]);
        }
    } else {
        for (const auto& t : tuples) {
            for (std::size_t pos = 0; pos < 3; ++pos) {
                const Vertex a = pos == 0 ? t[1] : t[0];
                const Vertex b = pos == 2 ? t[1] : t[2];
                auto& row = ternary_[pos][key(a, b)];
                if (row.empty()) row.assign(stride_, 0);
                bits::set(row, t[pos]);
            }
        }
    }
}

bool Relation::contains(std::span<const Vertex> args) const {
    if (args.size() != arity_) return false;
    for (Vertex v : args)
        if (v >= n_) return false;
    switch (arity_) {
        case 1: return bits::test(unary_, args[0]);
        case 2: return bits::test({binary_rows_[1].data() + std::size_t{args[0]} * stride_, stride_}, args[1]);
        default: {
            auto it = ternary_[2].find(key(args[0], args[1]));
            return it != ternary_[2].end() && bits::test(it->second, args[2]);
        }
    }
}

std::span<const Word> Relation::slice(std::size_t pos, std::span<const Vertex> others) const {
    switch (arity_) {
        case 1: return unary_;
        case 2: return {binary_rows_[pos].data() + std::size_t{others[0]} * stride_, stride_};
        default: {
            auto it = ternary_[pos].find(key(others[0], others[1]));
            if (it == ternary_[pos].end()) return empty_;
            return it->second;
        }
    }
}

void Structure::add_relation(const std::string& name, std::size_t arity, std::vector<std::vector<Vertex>> tuples) {
    relations[name] = Relation(graph.order(), arity, std::move(tuples));
}

}  // namespace perfolab
