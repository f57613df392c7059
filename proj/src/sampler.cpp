#include "perfolab/sampler.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "perfolab/errors.hpp"

namespace perfolab {

namespace {

constexpr std::uint64_t kPurposeGraph = 0;
constexpr std::uint64_t kPurposeCoin = 1;

}  // namespace

Rng make_rng(SampleSeed s, std::uint64_t purpose) {
    const std::uint64_t key = mix64(mix64(s.seed) ^ mix64(s.stream ^ (purpose << 32)));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    return Rng(seq);
}

const std::vector<double>& cached_central_size_pmf(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<const std::vector<double>>(central_size_pmf(n));
    return *slot;
}

UnipolarLayout sample_unipolar_layout(std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidArgumentError("unipolar sampler needs n >= 1");
    UnipolarLayout layout;
    layout.n = n;
    const std::size_t m = sample_index(cached_central_size_pmf(n), rng) + 1;

    // Uniform m-subset via partial Fisher-Yates.
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), Vertex{0});
    for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(perm[i], perm[pick(rng)]);
    }
    std::vector<Vertex> centre(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<Vertex> rest(perm.begin() + static_cast<std::ptrdiff_t>(m), perm.end());
    std::sort(centre.begin(), centre.end());
    std::sort(rest.begin(), rest.end());

    const SetPartition sp = sample_set_partition(rest.size(), rng);
    layout.parts.reserve(sp.block_count + 1);
    layout.parts.push_back(std::move(centre));
    for (const auto& block : sp.blocks()) {
        std::vector<Vertex> part;
        part.reserve(block.size());
        for (auto i : block) part.push_back(rest[i]);
        layout.parts.push_back(std::move(part));
    }
    return layout;
}

PartitionedGraph sample_unipolar(std::size_t n, SampleSeed seed) {
    Rng rng = make_rng(seed, kPurposeGraph);
    UnipolarLayout layout = sample_unipolar_layout(n, rng);

    PartitionedGraph pg;
    pg.graph = Graph(n);
    const std::size_t stride = pg.graph.stride();
    std::vector<Word> rest_mask(stride, 0);
    for (std::size_t i = 1; i < layout.parts.size(); ++i)
        for (Vertex v : layout.parts[i]) bits::set(rest_mask, v);

    // Cross edges: C_0 rows in increasing vertex order, one fair bit per column, masked to the rest.
    for (Vertex v : layout.parts[0]) {
        auto row = pg.graph.mutable_row(v);
        for (std::size_t w = 0; w < stride; ++w) row[w] = rng() & rest_mask[w];
    }
    pg.graph.symmetrize();
    for (const auto& part : layout.parts) pg.graph.add_clique(part);

    pg.parts = std::move(layout.parts);
    pg.part_of = index_parts(n, pg.parts);
    return pg;
}

PerfectSample sample_perfect(std::size_t n, SampleSeed seed) {
    PerfectSample s;
    s.witness = sample_unipolar(n, seed);
    Rng coin = make_rng(seed, kPurposeCoin);
    const bool heads = (coin() >> 63) == 0;
    s.orientation = heads ? Orientation::Unipolar : Orientation::CoUnipolar;
    s.graph = heads ? s.witness.graph : complement(s.witness.graph);
    return s;
}

const char* to_string(Orientation o) { return o == Orientation::Unipolar ? "unipolar" : "co-unipolar"; }

}  // namespace perfolab
