#include "perfolab/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "perfolab/errors.hpp"

namespace perfolab {

namespace mp = boost::multiprecision;

BigInt tower(unsigned k) {
    if (k > kMaxTowerHeight)
        throw CapExceededError("tower height " + std::to_string(k) + " is not representable (max " +
                               std::to_string(kMaxTowerHeight) + ")");
    BigInt t = 1;
    for (unsigned i = 0; i < k; ++i) {
        BigInt next = 0;
        mp::bit_set(next, static_cast<unsigned>(t));
        t = std::move(next);
    }
    return t;
}

unsigned log_star(const BigInt& x) {
    for (unsigned k = 0; k <= kMaxTowerHeight; ++k)
        if (tower(k) >= x) return k;
    // T(k+1) has T(k)+1 bits, far beyond any integer that fits in memory.
    return kMaxTowerHeight + 1;
}

long double log_big(const BigInt& x) {
    if (x <= 0) throw InvalidArgumentError("log of non-positive integer");
    const std::size_t msb = mp::msb(x);
    if (msb < 60) return std::log(static_cast<long double>(x.convert_to<std::uint64_t>()));
    const std::size_t shift = msb - 60;
    const BigInt top = x >> shift;
    return std::log(static_cast<long double>(top.convert_to<std::uint64_t>())) +
           static_cast<long double>(shift) * std::log(2.0L);
}

BellTable::BellTable(std::size_t n_max) : exact_(n_max + 1), logs_(n_max + 1) {
    // Bell triangle: each row starts with the last entry of the previous row.
    exact_[0] = 1;
    std::vector<BigInt> row{1};
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<BigInt> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (const auto& v : row) next.push_back(next.back() + v);
        exact_[n] = next.front();
        row = std::move(next);
    }
    for (std::size_t n = 0; n <= n_max; ++n) logs_[n] = log_big(exact_[n]);
}

const BigInt& BellTable::exact(std::size_t n) const {
    if (n > max_n()) throw CapExceededError("Bell table holds n <= " + std::to_string(max_n()));
    return exact_[n];
}

long double BellTable::log_value(std::size_t n) const {
    if (n > max_n()) throw CapExceededError("Bell table holds n <= " + std::to_string(max_n()));
    return logs_[n];
}

const BellTable& bell_table() {
    static const BellTable table(kMaxExactBell);
    return table;
}

BigInt bell(std::size_t n) {
    if (n > kMaxExactBell) throw CapExceededError("exact Bell numbers limited to n <= 1000");
    if (n <= 64) {
        // Small values without forcing the full table.
        static const BellTable small(64);
        return small.exact(n);
    }
    return bell_table().exact(n);
}

long double log_bell(std::size_t n) {
    if (n == 0) return 0.0L;
    const long double nn = static_cast<long double>(n);
    long double max_term = -std::numeric_limits<long double>::infinity();
    std::vector<long double> terms;
    long double log_fact = 0.0L;
    for (std::size_t j = 1;; ++j) {
        const long double lj = std::log(static_cast<long double>(j));
        log_fact += lj;
        const long double term = nn * lj - log_fact;
        terms.push_back(term);
        if (term > max_term) {
            max_term = term;
        } else if (term < max_term - 60.0L) {
            break;
        }
    }
    long double sum = 0.0L;
    for (long double t : terms) sum += std::exp(t - max_term);
    return max_term + std::log(sum) - 1.0L;
}

double solve_r(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgumentError("solve_r needs a positive finite argument");
    auto f = [s](double r) { return r * std::exp(r) - s; };
    double lo = 0.0;
    double hi = std::max(1.0, std::log(s) + 1.0);
    while (f(hi) < 0.0) hi *= 2.0;
    double r = std::min(hi, std::max(lo, s < 1.0 ? s : std::log(s) - std::log(std::log(s) + 1.0)));
    if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);
    const double tol = 1e-12 * std::max(1.0, s);
    for (int it = 0; it < 200; ++it) {
        const double fr = f(r);
        if (std::abs(fr) <= tol) return r;
        if (fr < 0.0)
            lo = r;
        else
            hi = r;
        const double step = fr / ((r + 1.0) * std::exp(r));
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == r) break;
        r = next;
    }
    // Newton stalled at rounding level; settle on the better bracket end.
    return std::abs(f(lo)) < std::abs(f(r)) ? lo : (std::abs(f(hi)) < std::abs(f(r)) ? hi : r);
}

std::vector<std::vector<std::uint32_t>> SetPartition::blocks() const {
    std::vector<std::vector<std::uint32_t>> out(block_count);
    for (std::uint32_t i = 0; i < block_of.size(); ++i) out[block_of[i]].push_back(i);
    return out;
}

bool SetPartition::is_canonical() const {
    std::uint32_t next = 0;
    for (auto b : block_of) {
        if (b > next) return false;
        if (b == next) ++next;
    }
    return next == block_count;
}

std::vector<double> urn_count_distribution(std::size_t m) {
    if (m == 0) return {1.0};
    const long double mm = static_cast<long double>(m);
    std::vector<long double> logw;
    long double log_fact = 0.0L;
    long double max_w = -std::numeric_limits<long double>::infinity();
    long double running = 0.0L;  // sum of exp(logw - max_w)
    for (std::size_t u = 1;; ++u) {
        const long double lu = std::log(static_cast<long double>(u));
        log_fact += lu;
        const long double w = mm * lu - log_fact;
        if (w > max_w) {
            running = running * std::exp(max_w - w) + 1.0L;
            max_w = w;
        } else {
            running += std::exp(w - max_w);
        }
        logw.push_back(w);
        if (w < max_w) {
            // Consecutive ratio q decreases past the mode, so the tail is at most term * q / (1 - q).
            const long double q = std::exp(mm * std::log1p(1.0L / static_cast<long double>(u)) -
                                           std::log(static_cast<long double>(u + 1)));
            if (q < 1.0L) {
                const long double tail = std::exp(w - max_w) * q / (1.0L - q);
                if (tail < 1e-12L * running) break;
            }
        }
    }
    std::vector<double> probs(logw.size());
    long double total = 0.0L;
    for (std::size_t i = 0; i < logw.size(); ++i) total += std::exp(logw[i] - max_w);
    for (std::size_t i = 0; i < logw.size(); ++i) probs[i] = static_cast<double>(std::exp(logw[i] - max_w) / total);
    return probs;
}

std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double x = unit(rng);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        x -= probs[i];
        if (x < 0.0) return i;
    }
    // Rounding left a sliver; return the last index with positive mass.
    for (std::size_t i = probs.size(); i-- > 0;)
        if (probs[i] > 0.0) return i;
    throw InternalConsistencyError("empty probability vector");
}

SetPartition sample_set_partition(std::size_t m, Rng& rng) {
    SetPartition p;
    if (m == 0) return p;
    const auto urns = urn_count_distribution(m);
    const std::size_t u = sample_index(urns, rng) + 1;
    std::uniform_int_distribution<std::size_t> pick(0, u - 1);
    std::vector<std::uint32_t> label(u, std::numeric_limits<std::uint32_t>::max());
    p.block_of.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t urn = pick(rng);
        if (label[urn] == std::numeric_limits<std::uint32_t>::max()) label[urn] = static_cast<std::uint32_t>(p.block_count++);
        p.block_of[i] = label[urn];
    }
    return p;
}

namespace {

std::vector<double> exact_central_pmf(std::size_t n) {
    std::vector<BigInt> weights(n);
    BigInt total = 0;
    BigInt binom = 1;  // C(n, m), updated incrementally
    for (std::size_t m = 1; m <= n; ++m) {
        binom = binom * (n - m + 1) / m;
        BigInt w = binom * bell(n - m);
        w <<= static_cast<unsigned>(m * (n - m));
        total += w;
        weights[m - 1] = std::move(w);
    }
    std::vector<double> probs(n);
    for (std::size_t i = 0; i < n; ++i)
        probs[i] = mp::cpp_rational(weights[i], total).convert_to<double>();
    return probs;
}

long double log_central_weight(std::size_t n, std::size_t m) {
    const long double ln2 = std::log(2.0L);
    const long double nn = static_cast<long double>(n);
    const long double mm = static_cast<long double>(m);
    return std::lgamma(nn + 1.0L) - std::lgamma(mm + 1.0L) - std::lgamma(nn - mm + 1.0L) + mm * (nn - mm) * ln2 +
           log_bell(n - m);
}

std::vector<double> windowed_central_pmf(std::size_t n) {
    const double half_width = 10.0 * std::log(static_cast<double>(n)) + 20.0;
    const double centre = static_cast<double>(n) / 2.0;
    const auto lo = static_cast<std::size_t>(std::max(1.0, std::floor(centre - half_width)));
    const auto hi = static_cast<std::size_t>(std::min(static_cast<double>(n), std::ceil(centre + half_width)));
    std::vector<long double> logw(hi - lo + 1);
    long double max_w = -std::numeric_limits<long double>::infinity();
    for (std::size_t m = lo; m <= hi; ++m) {
        logw[m - lo] = log_central_weight(n, m);
        max_w = std::max(max_w, logw[m - lo]);
    }
    if ((lo > 1 && logw.front() > max_w - 40.0L) || (hi < n && logw.back() > max_w - 40.0L))
        throw InternalConsistencyError("central-size window truncates non-negligible mass at n=" + std::to_string(n));
    long double total = 0.0L;
    for (auto w : logw) total += std::exp(w - max_w);
    std::vector<double> probs(n, 0.0);
    for (std::size_t m = lo; m <= hi; ++m) probs[m - 1] = static_cast<double>(std::exp(logw[m - lo] - max_w) / total);
    return probs;
}

}  // namespace

std::vector<double> central_size_pmf(std::size_t n) {
    if (n == 0) throw InvalidArgumentError("central_size_pmf needs n >= 1");
    return n <= kMaxExactCentralPmf ? exact_central_pmf(n) : windowed_central_pmf(n);
}

std::size_t sample_central_size(std::size_t n, Rng& rng) { return sample_index(central_size_pmf(n), rng) + 1; }

}  // namespace perfolab
