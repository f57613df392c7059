#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "perfolab/combinatorics.hpp"
#include "perfolab/errors.hpp"
#include "stats.hpp"

using namespace perfolab;
using testsupport::chi_square_p;

namespace {

// All restricted growth strings of length m, i.e. canonical set partitions.
void enumerate_partitions(std::size_t m, std::vector<std::uint32_t>& cur, std::uint32_t blocks,
                          std::vector<std::vector<std::uint32_t>>& out) {
    if (cur.size() == m) {
        out.push_back(cur);
        return;
    }
    for (std::uint32_t b = 0; b <= blocks; ++b) {
        cur.push_back(b);
        enumerate_partitions(m, cur, std::max(blocks, b + 1), out);
        cur.pop_back();
    }
}

std::vector<std::vector<std::uint32_t>> all_partitions(std::size_t m) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    enumerate_partitions(m, cur, 0, out);
    return out;
}

double bisect_r(double s) {
    double lo = 0, hi = std::max(1.0, std::log(s) + 1);
    while (hi * std::exp(hi) < s) hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(mid) < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("combinatorics") {
    TEST_CASE("tower values") {
        CHECK(tower(0) == 1);
        CHECK(tower(1) == 2);
        CHECK(tower(3) == 16);
        CHECK(tower(4) == 65536);
        CHECK(tower(5) == BigInt(1) << 65536);
        CHECK_THROWS_AS(tower(6), CapExceededError);
    }

    TEST_CASE("log star examples and adjunction") {
        CHECK(log_star(0) == 0);
        CHECK(log_star(1) == 0);
        CHECK(log_star(5) == 3);
        CHECK(log_star(65536) == 4);
        for (unsigned k = 0; k <= 5; ++k) CHECK(log_star(tower(k)) == k);
        CHECK(log_star(BigInt(1) << 1000000) == 6);
        for (unsigned k = 1; k <= 5; ++k) CHECK(log_star(tower(k) + 1) == k + 1);
    }

    TEST_CASE("Bell numbers equal partition enumeration") {
        CHECK(bell(0) == 1);
        CHECK(bell(3) == 5);
        CHECK(bell(10) == 115975);
        for (std::size_t n = 0; n <= 10; ++n) CHECK(bell(n) == all_partitions(n).size());
        CHECK(bell_table().exact(10) == 115975);
        CHECK_THROWS_AS(bell(1001), CapExceededError);
    }

    TEST_CASE("Bell triangle recurrence B(n+1) = sum C(n,k) B(k)") {
        for (std::size_t n = 0; n < 60; ++n) {
            BigInt sum = 0, c = 1;
            for (std::size_t k = 0; k <= n; ++k) {
                sum += c * bell(k);
                c = c * (n - k) / (k + 1);
            }
            CHECK(bell(n + 1) == sum);
        }
    }

    TEST_CASE("log Bell agrees with exact values") {
        for (std::size_t n = 0; n <= 300; ++n) {
            const long double exact = log_big(bell(n));
            CHECK(std::abs(std::expm1(static_cast<double>(log_bell(n) - exact))) <= 1e-6);
            const long double tab = bell_table().log_value(n);
            CHECK(std::abs(tab - exact) <= 1e-9L * std::max(1.0L, std::abs(exact)));
        }
        CHECK(std::isfinite(static_cast<double>(log_bell(100000))));
        CHECK(log_bell(100000) > log_bell(99999));
    }

    TEST_CASE("solve_r") {
        CHECK(solve_r(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(solve_r(2 * std::exp(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(solve_r(1000) == doctest::Approx(bisect_r(1000)).epsilon(1e-10));
        for (double ls = -3; ls <= 9.0001; ls += 0.125) {
            const double s = std::pow(10.0, ls);
            const double r = solve_r(s);
            CHECK(std::abs(r * std::exp(r) - s) <= 1e-9 * std::max(1.0, s));
        }
        CHECK_THROWS_AS(solve_r(0), InvalidArgumentError);
        CHECK_THROWS_AS(solve_r(-1), InvalidArgumentError);
    }

    TEST_CASE("set partitions of tiny sets") {
        Rng rng(1);
        const SetPartition empty = sample_set_partition(0, rng);
        CHECK(empty.block_of.empty());
        CHECK(empty.block_count == 0);
        const SetPartition one = sample_set_partition(1, rng);
        CHECK(one.block_of == std::vector<std::uint32_t>{0});
        CHECK(one.block_count == 1);
    }

    TEST_CASE("urn count law sums to one") {
        for (std::size_t m : {0, 1, 5, 50, 500}) {
            const auto d = urn_count_distribution(m);
            double s = 0;
            for (double p : d) s += p;
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("set partitions are uniform") {
        for (std::size_t m : {4, 5}) {
            const auto parts = all_partitions(m);
            std::map<std::vector<std::uint32_t>, std::size_t> index;
            for (std::size_t i = 0; i < parts.size(); ++i) index[parts[i]] = i;
            std::vector<std::size_t> counts(parts.size(), 0);
            Rng rng(42 + m);
            for (int s = 0; s < 100000; ++s) {
                const SetPartition p = sample_set_partition(m, rng);
                REQUIRE(p.is_canonical());
                ++counts.at(index.at(p.block_of));
            }
            const std::vector<double> probs(parts.size(), 1.0 / static_cast<double>(parts.size()));
            CHECK(chi_square_p(counts, probs) > 0.001);
        }
    }

    TEST_CASE("block counts follow the Stirling law") {
        for (std::size_t m = 1; m <= 8; ++m) {
            // S(m,k) by enumeration, law S(m,k)/B(m).
            std::vector<double> probs(m + 1, 0.0);
            for (const auto& p : all_partitions(m)) probs[*std::max_element(p.begin(), p.end()) + 1] += 1;
            for (double& p : probs) p /= static_cast<double>(all_partitions(m).size());
            std::vector<std::size_t> counts(m + 1, 0);
            Rng rng(100 + m);
            for (int s = 0; s < 100000; ++s) ++counts[sample_set_partition(m, rng).block_count];
            CHECK(chi_square_p(counts, probs) > 0.001);
        }
    }

    TEST_CASE("central size law: small exact cases") {
        const auto p2 = central_size_pmf(2);
        REQUIRE(p2.size() == 2);
        CHECK(p2[0] == doctest::Approx(0.8).epsilon(1e-15));
        CHECK(p2[1] == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(central_size_pmf(1) == std::vector<double>{1.0});
        CHECK_THROWS_AS(central_size_pmf(0), InvalidArgumentError);
    }

    TEST_CASE("central size law matches direct weights") {
        for (std::size_t n : {3, 7, 12, 40}) {
            const auto pmf = central_size_pmf(n);
            std::vector<BigInt> w(n + 1);
            BigInt total = 0, c = 1;
            for (std::size_t m = 0; m <= n; ++m) {
                if (m > 0) {
                    w[m] = c * (BigInt(1) << (m * (n - m))) * bell(n - m);
                    total += w[m];
                }
                c = c * (n - m) / (m + 1);
            }
            for (std::size_t m = 1; m <= n; ++m) {
                const double expect = static_cast<double>(boost::multiprecision::cpp_rational(w[m], total));
                CHECK(pmf[m - 1] == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("central size sampling matches the exact law at n = 12") {
        const auto pmf = central_size_pmf(12);
        std::vector<std::size_t> counts(12, 0);
        Rng rng(12);
        for (int s = 0; s < 100000; ++s) ++counts.at(sample_central_size(12, rng) - 1);
        CHECK(chi_square_p(counts, pmf) > 0.001);
    }

    TEST_CASE("windowed central size law on large n") {
        for (std::size_t n : {65, 200, 2000, 30000}) {
            const auto pmf = central_size_pmf(n);
            REQUIRE(pmf.size() == n);
            double s = 0, mean = 0;
            for (std::size_t m = 1; m <= n; ++m) s += pmf[m - 1], mean += static_cast<double>(m) * pmf[m - 1];
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(mean / static_cast<double>(n) - 0.5) < 0.1);
        }
    }
}
