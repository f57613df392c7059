#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace perfolab {

using BigInt = boost::multiprecision::cpp_int;
using Rng = std::mt19937_64;

/// T(6) = 2^T(5) has 2^65536 binary digits; T(5) is the last representable tower.
inline constexpr unsigned kMaxTowerHeight = 5;
inline constexpr std::size_t kMaxExactBell = 1000;
inline constexpr std::size_t kMaxExactCentralPmf = 64;

/// T(0) = 1, T(k+1) = 2^T(k). Throws CapExceededError for k > 5.
BigInt tower(unsigned k);

/// Least k with T(k) >= x. Every representable x above T(5) yields 6.
unsigned log_star(const BigInt& x);

/// Natural log of a positive big integer.
long double log_big(const BigInt& x);

/// Exact Bell numbers B(0..n_max) from the Bell triangle, plus their logs.
class BellTable {
public:
    explicit BellTable(std::size_t n_max);

    std::size_t max_n() const noexcept { return exact_.size() - 1; }
    const BigInt& exact(std::size_t n) const;
    long double log_value(std::size_t n) const;

private:
    std::vector<BigInt> exact_;
    std::vector<long double> logs_;
};

/// Process-wide table up to kMaxExactBell, built on first use.
const BellTable& bell_table();

/// Exact B(n) for n <= 1000.
BigInt bell(std::size_t n);

/// ln B(n) from Dobinski's series, summed in log space. Valid for every n.
long double log_bell(std::size_t n);

/// Root r > 0 of r e^r = s with |r e^r - s| <= 1e-9 max(1, s).
double solve_r(double s);

/// Canonical set partition: block_of[i] is the block of element i, blocks numbered by first appearance.
struct SetPartition {
    std::vector<std::uint32_t> block_of;
    std::size_t block_count = 0;

    std::vector<std::vector<std::uint32_t>> blocks() const;
    bool is_canonical() const;
    friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// Urn-count law for a uniform partition of an m-set: P(U = u) proportional to u^m / u!.
/// Entry u-1 holds P(U = u); the tail past the last entry carries relative mass below 1e-12.
std::vector<double> urn_count_distribution(std::size_t m);

/// Uniformly random set partition of {0..m-1} (urn method).
SetPartition sample_set_partition(std::size_t m, Rng& rng);

/// P(|C_0| = m) for m = 1..n, stored at index m-1; proportional to C(n,m) 2^{m(n-m)} B(n-m).
std::vector<double> central_size_pmf(std::size_t n);

std::size_t sample_central_size(std::size_t n, Rng& rng);

/// Inverse-CDF draw from a probability vector (index returned).
std::size_t sample_index(const std::vector<double>& probs, Rng& rng);

}  // namespace perfolab
