#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace perfolab {

using Word = std::uint64_t;
using Vertex = std::uint32_t;

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

namespace bits {

inline bool test(std::span<const Word> w, std::size_t i) { return (w[i / kWordBits] >> (i % kWordBits)) & 1U; }
inline void set(std::span<Word> w, std::size_t i) { w[i / kWordBits] |= Word{1} << (i % kWordBits); }
inline void reset(std::span<Word> w, std::size_t i) { w[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

inline std::size_t count(std::span<const Word> w) {
    std::size_t c = 0;
    for (Word x : w) c += static_cast<std::size_t>(std::popcount(x));
    return c;
}

inline bool any(std::span<const Word> w) {
    for (Word x : w)
        if (x) return true;
    return false;
}

inline void and_into(std::span<Word> dst, std::span<const Word> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= src[i];
}
inline void or_into(std::span<Word> dst, std::span<const Word> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
}
inline void andnot_into(std::span<Word> dst, std::span<const Word> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] &= ~src[i];
}

/// Calls f(i) for every set bit, in increasing order.
template <class F>
void for_each(std::span<const Word> w, F&& f) {
    for (std::size_t k = 0; k < w.size(); ++k) {
        Word x = w[k];
        while (x) {
            const auto b = static_cast<std::size_t>(std::countr_zero(x));
            f(static_cast<Vertex>(k * kWordBits + b));
            x &= x - 1;
        }
    }
}

/// Smallest set bit, or `npos` if empty.
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);
inline std::size_t first(std::span<const Word> w) {
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k]) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(w[k]));
    return npos;
}

/// In-place transpose of a 64x64 bit block (row r, bit c) -> (row c, bit r).
void transpose64(Word* block);

}  // namespace bits

/// Membership bitmask over {0..n-1}.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t n) : n_(n), words_(words_for(n), 0) {}

    static VertexSet all(std::size_t n);
    static VertexSet of(std::size_t n, std::span<const Vertex> members);

    std::size_t universe() const noexcept { return n_; }
    std::size_t size() const { return bits::count(words_); }
    bool empty() const { return !bits::any(words_); }
    bool contains(Vertex v) const { return v < n_ && bits::test(words_, v); }

    void insert(Vertex v);
    void erase(Vertex v);

    std::span<const Word> words() const noexcept { return words_; }
    std::span<Word> words() noexcept { return words_; }

    std::vector<Vertex> members() const;

    VertexSet& operator&=(const VertexSet& o);
    VertexSet& operator|=(const VertexSet& o);
    VertexSet& operator-=(const VertexSet& o);
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

    bool is_subset_of(const VertexSet& o) const;
    friend bool operator==(const VertexSet&, const VertexSet&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Word> words_;
};

}  // namespace perfolab
