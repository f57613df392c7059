#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "perfolab/graph.hpp"

namespace perfolab {

/// Finite relation of arity 1..3 over the vertices of a graph.
///
/// Tuples are kept sorted; bitset slices index every argument position so a
/// quantifier can intersect its candidate set with "all v such that R(.., v, ..)".
class Relation {
public:
    Relation() = default;
    Relation(std::size_t universe, std::size_t arity, std::vector<std::vector<Vertex>> tuples);

    std::size_t arity() const noexcept { return arity_; }
    std::size_t universe() const noexcept { return n_; }
    std::size_t size() const noexcept { return tuples_.size() / (arity_ ? arity_ : 1); }

    bool contains(std::span<const Vertex> args) const;

    /// Values at position `pos` completing the other (arity-1) coordinates, given in order.
    std::span<const Word> slice(std::size_t pos, std::span<const Vertex> others) const;

    /// Sorted flat tuple list, arity entries per tuple.
    std::span<const Vertex> flat_tuples() const noexcept { return tuples_; }

private:
    std::uint64_t key(Vertex a, Vertex b) const { return std::uint64_t{a} * n_ + b; }

    std::size_t n_ = 0;
    std::size_t arity_ = 0;
    std::size_t stride_ = 0;
    std::vector<Vertex> tuples_;
    std::vector<Word> unary_;
    std::array<std::vector<Word>, 2> binary_rows_;  // [pos][other * stride_]
    std::array<std::unordered_map<std::uint64_t, std::vector<Word>>, 3> ternary_;
    std::vector<Word> empty_;
};

/// A graph plus named interpreted relations.
struct Structure {
    Graph graph;
    std::map<std::string, Relation> relations;

    Structure() = default;
    explicit Structure(Graph g) : graph(std::move(g)) {}

    void add_relation(const std::string& name, std::size_t arity, std::vector<std::vector<Vertex>> tuples);
};

}  // namespace perfolab
