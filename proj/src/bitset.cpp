#include "perfolab/bitset.hpp"

#include <algorithm>

#include "perfolab/errors.hpp"

namespace perfolab {

namespace bits {

void transpose64(Word* a) {
    // Recursive block swap; see Hacker's Delight 7-3.
    Word m = 0x00000000FFFFFFFFULL;
    for (std::size_t j = 32; j != 0; j >>= 1, m ^= (m << j)) {
        for (std::size_t k = 0; k < 64; k = ((k | j) + 1) & ~j) {
            const Word t = ((a[k] >> j) ^ a[k | j]) & m;
            a[k] ^= t << j;
            a[k | j] ^= t;
        }
    }
}

}  // namespace bits

namespace {

void check_member(std::size_t n, Vertex v) {
    if (v >= n) throw InvalidVertexError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n));
}

}  // namespace

VertexSet VertexSet::all(std::size_t n) {
    VertexSet s(n);
    std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
    if (n % kWordBits) s.words_.back() = (Word{1} << (n % kWordBits)) - 1;
    return s;
}

VertexSet VertexSet::of(std::size_t n, std::span<const Vertex> members) {
    VertexSet s(n);
    for (Vertex v : members) s.insert(v);
    return s;
}

void VertexSet::insert(Vertex v) {
    check_member(n_, v);
    bits::set(words_, v);
}

void VertexSet::erase(Vertex v) {
    check_member(n_, v);
    bits::reset(words_, v);
}

std::vector<Vertex> VertexSet::members() const {
    std::vector<Vertex> out;
    bits::for_each(words_, [&](Vertex v) { out.push_back(v); });
    return out;
}

VertexSet& VertexSet::operator&=(const VertexSet& o) {
    if (o.n_ != n_) throw InvalidArgumentError("vertex set universe mismatch");
    bits::and_into(words_, o.words_);
    return *this;
}

VertexSet& VertexSet::operator|=(const VertexSet& o) {
    if (o.n_ != n_) throw InvalidArgumentError("vertex set universe mismatch");
    bits::or_into(words_, o.words_);
    return *this;
}

VertexSet& VertexSet::operator-=(const VertexSet& o) {
    if (o.n_ != n_) throw InvalidArgumentError("vertex set universe mismatch");
    bits::andnot_into(words_, o.words_);
    return *this;
}

bool VertexSet::is_subset_of(const VertexSet& o) const {
    if (o.n_ != n_) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

}  // namespace perfolab
