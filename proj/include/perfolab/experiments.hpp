#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "perfolab/formula.hpp"
#include "perfolab/sampler.hpp"

namespace perfolab {

using Json = nlohmann::ordered_json;

inline constexpr std::size_t kDefaultMaxN = 100000;
inline constexpr std::size_t kFullEvaluationMaxN = 300;
inline constexpr std::size_t kLargeSupportCap = 16;

/// Largest n accepted by the harness: kDefaultMaxN unless PERFOLAB_MAX_N says otherwise.
std::size_t max_supported_n();
/// Throws ConfigError when n exceeds max_supported_n().
void check_size_guard(std::size_t n);

/// ceil(ln ln ln n); ConfigError for n < 16.
std::size_t ell(std::size_t n);
/// ceil(sqrt(ln n)), n >= 2.
std::size_t t_param(std::size_t n);

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

enum class Model { Unipolar, Perfect };

struct ExperimentConfig {
    std::string experiment;
    std::size_t n = 0;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    std::optional<Formula> phi;             // dichotomy, frequency
    std::optional<Formula> phi0, phi1;      // theorem1
    std::optional<std::size_t> max_support; // dichotomy; default depends on n
    Model model = Model::Unipolar;          // frequency
    bool complement_formula = false;        // frequency: evaluate the complemented sentence
    bool complement_graph = false;          // frequency: evaluate on the complemented graph
};

struct ExperimentReport {
    std::string experiment;
    Json config;
    Json metrics;
    Json trials = Json::array();
    double wall_clock_seconds = 0;

    /// {"experiment","config","metrics","trials"} plus "wall_clock_seconds" when asked.
    Json to_json(bool with_wall_clock = true) const;
};

/// Per-vertex stable-triple criterion against ground-truth C_0 membership.
ExperimentReport validate_criterion(const ExperimentConfig& cfg);
/// Counts of side parts with |N(C_i)| = l' for l' = 0..ell.
ExperimentReport validate_rightsize(const ExperimentConfig& cfg);
/// For supports S = N(C_i) u N(C_j) with |S| <= 2 ell, whether every labelled graph on S is some H(S, C_k).
ExperimentReport validate_realise(const ExperimentConfig& cfg);
/// Frequency of the combinatorial psi for cfg.phi.
ExperimentReport dichotomy_experiment(const ExperimentConfig& cfg);
/// Frequency of the composed theorem-1 sentence for (phi0, phi1), evaluated on the graph with
/// InC0 / CN / Hedge bound to their oracle tables. n <= 300.
ExperimentReport theorem1_experiment(const ExperimentConfig& cfg);
/// Frequency of cfg.phi by full evaluation (n <= 300, CostGuardError otherwise).
ExperimentReport run_frequency(const ExperimentConfig& cfg);

/// Frequency of an arbitrary predicate on the sampled perfect graph; no size guard.
using SamplePredicate = std::function<bool(const PerfectSample&)>;
ExperimentReport run_frequency(const ExperimentConfig& cfg, const std::string& label, const SamplePredicate& pred);

/// Dispatch on cfg.experiment: criterion, rightsize, realise, dichotomy, theorem1, frequency.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Trial table of a report as CSV: one row per trial, columns in first-trial key order.
std::string report_to_csv(const Json& report);

/// P(X <= k) for X the number of successes among independent trials with probabilities p.
double poisson_binomial_cdf(const std::vector<double>& p, std::size_t k);
/// P(Bin(m, q) = k).
double binomial_pmf(std::size_t m, double q, std::size_t k);

}  // namespace perfolab
