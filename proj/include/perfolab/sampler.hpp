#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "perfolab/combinatorics.hpp"
#include "perfolab/graph.hpp"

namespace perfolab {

/// (seed, stream) pair; the stream is normally the trial index.
struct SampleSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child generator for (seed, stream, purpose): mt19937_64 seeded with
/// mix64(mix64(seed) ^ mix64(stream ^ (purpose << 32))) as two 32-bit halves.
Rng make_rng(SampleSeed s, std::uint64_t purpose = 0);

/// Partition half of the unipolar scheme: parts[0] = C_0, parts[1..] = C_1..C_k.
struct UnipolarLayout {
    std::size_t n = 0;
    std::vector<std::vector<Vertex>> parts;
};

UnipolarLayout sample_unipolar_layout(std::size_t n, Rng& rng);

/// Random unipolar graph: central clique size from central_size_pmf, uniform C_0, uniform
/// partition of the rest, all parts cliqued, every C_0-to-rest pair an independent fair coin.
PartitionedGraph sample_unipolar(std::size_t n, SampleSeed seed);

enum class Orientation { Unipolar, CoUnipolar };

struct PerfectSample {
    Graph graph;
    Orientation orientation = Orientation::Unipolar;
    PartitionedGraph witness;  // unipolar side
};

/// The unipolar sample, complemented on tails of an independent fair coin.
PerfectSample sample_perfect(std::size_t n, SampleSeed seed);

/// Cached central_size_pmf(n); safe to call concurrently.
const std::vector<double>& cached_central_size_pmf(std::size_t n);

const char* to_string(Orientation o);

}  // namespace perfolab
