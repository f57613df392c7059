#include "perfolab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "perfolab/encodings.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/evaluator.hpp"
#include "perfolab/graph.hpp"
#include "perfolab/oracles.hpp"

namespace perfolab {

std::size_t max_supported_n() {
    const char* env = std::getenv("PERFOLAB_MAX_N");
    if (!env || !*env) return kDefaultMaxN;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw ConfigError(std::string("PERFOLAB_MAX_N is not a positive integer: ") + env);
    return static_cast<std::size_t>(v);
}

void check_size_guard(std::size_t n) {
    const std::size_t cap = max_supported_n();
    if (n > cap)
        throw ConfigError("n = " + std::to_string(n) + " exceeds the limit " + std::to_string(cap) +
                          " (set PERFOLAB_MAX_N to raise it)");
}

std::size_t ell(std::size_t n) {
    if (n < 16) throw ConfigError("ell needs n >= 16");
    return static_cast<std::size_t>(std::ceil(std::log(std::log(std::log(static_cast<double>(n))))));
}

std::size_t t_param(std::size_t n) {
    if (n < 2) throw ConfigError("t needs n >= 2");
    return static_cast<std::size_t>(std::ceil(std::sqrt(std::log(static_cast<double>(n)))));
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials) {
    if (trials == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nn;
    const double denom = 1 + z * z / nn;
    const double centre = (p + z * z / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double binomial_pmf(std::size_t m, double q, std::size_t k) {
    if (k > m) return 0;
    if (q <= 0) return k == 0 ? 1 : 0;
    if (q >= 1) return k == m ? 1 : 0;
    const double dm = static_cast<double>(m), dk = static_cast<double>(k);
    const double lg = std::lgamma(dm + 1) - std::lgamma(dk + 1) - std::lgamma(dm - dk + 1);
    return std::exp(lg + dk * std::log(q) + (dm - dk) * std::log1p(-q));
}

double poisson_binomial_cdf(const std::vector<double>& p, std::size_t k) {
    std::vector<double> dist(k + 2, 0.0);  // last slot absorbs "more than k"
    dist[0] = 1;
    for (double pi : p) {
        for (std::size_t j = k + 1; j > 0; --j) {
            const double stay = j == k + 1 ? dist[j] : dist[j] * (1 - pi);
            dist[j] = stay + dist[j - 1] * pi;
        }
        dist[0] *= 1 - pi;
    }
    double s = 0;
    for (std::size_t j = 0; j <= k; ++j) s += dist[j];
    return s;
}

Json ExperimentReport::to_json(bool with_wall_clock) const {
    Json j;
    j["experiment"] = experiment;
    j["config"] = config;
    j["metrics"] = metrics;
    j["trials"] = trials;
    if (with_wall_clock) j["wall_clock_seconds"] = wall_clock_seconds;
    return j;
}

namespace {

using Clock = std::chrono::steady_clock;

void check_common(const ExperimentConfig& cfg, bool needs_ell) {
    if (cfg.n < 1) throw ConfigError("n must be at least 1");
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    check_size_guard(cfg.n);
    if (needs_ell && cfg.n < 16) throw ConfigError("experiment '" + cfg.experiment + "' needs n >= 16");
}

Json base_config(const ExperimentConfig& cfg) {
    Json c;
    c["n"] = cfg.n;
    c["trials"] = cfg.trials;
    c["seed"] = cfg.seed;
    c["ell"] = cfg.n >= 16 ? Json(ell(cfg.n)) : Json(nullptr);
    c["t"] = cfg.n >= 2 ? Json(t_param(cfg.n)) : Json(nullptr);
    return c;
}

/// r solving r e^r = n - |C_0|, or null when the central clique is everything.
Json r_value(const PartitionedGraph& pg) {
    const std::size_t rest = pg.graph.order() - pg.parts[0].size();
    return rest ? Json(solve_r(static_cast<double>(rest))) : Json(nullptr);
}

/// Runs body(i) for every trial index, optionally on several threads, results in index order.
template <class Body>
std::vector<Json> run_trials(const ExperimentConfig& cfg, Body body) {
    std::vector<Json> out(cfg.trials);
    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.threads, cfg.trials));
    if (workers == 1) {
        for (std::size_t i = 0; i < cfg.trials; ++i) out[i] = body(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < cfg.trials; i += workers) out[i] = body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

void add_rate(Json& metrics, const std::string& key, std::size_t hits, std::size_t total) {
    metrics[key] = total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
    const auto [lo, hi] = wilson_interval(hits, total);
    metrics[key + "_wilson95"] = {lo, hi};
}

double mean_r(const std::vector<Json>& trials) {
    double s = 0;
    std::size_t c = 0;
    for (const auto& t : trials)
        if (!t["r"].is_null()) s += t["r"].get<double>(), ++c;
    return c ? s / static_cast<double>(c) : 0.0;
}

ExperimentReport finish(const std::string& name, Json config, Json metrics,
                        std::vector<Json> trials, Clock::time_point start) {
    ExperimentReport rep;
    rep.experiment = name;
    rep.config = std::move(config);
    rep.metrics = std::move(metrics);
    rep.trials = Json(std::move(trials));
    rep.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
}

}  // namespace

ExperimentReport validate_criterion(const ExperimentConfig& cfg) {
    check_common(cfg, true);
    const auto start = Clock::now();
    auto trials = run_trials(cfg, [&](std::size_t i) {
        const PartitionedGraph pg = sample_unipolar(cfg.n, {cfg.seed, i});
        std::size_t missed_central = 0, false_central = 0;
        for (Vertex v = 0; v < cfg.n; ++v) {
            const bool says_central = has_independent_triple_in_neighborhood(pg.graph, v);
            if (pg.in_central(v) && !says_central) ++missed_central;
            if (!pg.in_central(v) && says_central) ++false_central;
        }
        // A central vertex can only be missed if it touches at most two side parts.
        std::vector<double> touch;
        for (std::size_t k = 1; k < pg.parts.size(); ++k)
            touch.push_back(1 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(pg.parts[k].size(), 1000))));
        const double bound = static_cast<double>(pg.parts[0].size()) * poisson_binomial_cdf(touch, 2);
        Json t;
        t["stream"] = i;
        t["central_size"] = pg.parts[0].size();
        t["side_parts"] = pg.side_count();
        t["r"] = r_value(pg);
        t["misclassified"] = missed_central + false_central;
        t["missed_central"] = missed_central;
        t["false_central"] = false_central;
        t["expected_misclassified_bound"] = bound;
        return t;
    });
    std::size_t zero = 0, false_central = 0;
    double frac = 0, bound = 0;
    for (const auto& t : trials) {
        const auto m = t["misclassified"].get<std::size_t>();
        zero += m == 0;
        false_central += t["false_central"].get<std::size_t>();
        frac += static_cast<double>(m) / static_cast<double>(cfg.n);
        bound += t["expected_misclassified_bound"].get<double>();
    }
    Json metrics;
    add_rate(metrics, "zero_misclassified_fraction", zero, cfg.trials);
    metrics["mean_misclassified_fraction"] = frac / static_cast<double>(cfg.trials);
    metrics["false_central_total"] = false_central;
    metrics["mean_expected_misclassified_bound"] = bound / static_cast<double>(cfg.trials);
    metrics["mean_r"] = mean_r(trials);
    return finish("criterion", base_config(cfg), std::move(metrics), std::move(trials), start);
}

ExperimentReport validate_rightsize(const ExperimentConfig& cfg) {
    check_common(cfg, true);
    const std::size_t l = ell(cfg.n);
    const auto start = Clock::now();
    auto trials = run_trials(cfg, [&](std::size_t i) {
        const PartitionedGraph pg = sample_unipolar(cfg.n, {cfg.seed, i});
        const auto nbhd = side_neighborhoods(pg);
        std::vector<std::size_t> counts(l + 1, 0);
        std::vector<double> predicted(l + 1, 0.0);
        const std::size_t c0 = pg.parts[0].size();
        for (std::size_t k = 1; k < pg.parts.size(); ++k) {
            const std::size_t s = nbhd[k].size();
            if (s <= l) ++counts[s];
            const double q = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(pg.parts[k].size(), 1000)));
            for (std::size_t lp = 0; lp <= l; ++lp) predicted[lp] += binomial_pmf(c0, q, lp);
        }
        Json t;
        t["stream"] = i;
        t["central_size"] = c0;
        t["side_parts"] = pg.side_count();
        t["r"] = r_value(pg);
        t["counts"] = counts;
        t["expected_counts"] = predicted;
        return t;
    });
    Json metrics;
    for (std::size_t lp = 0; lp <= l; ++lp) {
        std::size_t hit = 0;
        std::vector<std::size_t> vals;
        for (const auto& t : trials) {
            const auto c = t["counts"][lp].get<std::size_t>();
            hit += c >= 1;
            vals.push_back(c);
        }
        std::sort(vals.begin(), vals.end());
        const std::string key = "size_" + std::to_string(lp);
        add_rate(metrics, key + "_present_fraction", hit, cfg.trials);
        metrics[key + "_median_count"] = vals[vals.size() / 2];
    }
    metrics["mean_r"] = mean_r(trials);
    return finish("rightsize", base_config(cfg), std::move(metrics), std::move(trials), start);
}

ExperimentReport validate_realise(const ExperimentConfig& cfg) {
    check_common(cfg, true);
    const std::size_t limit = 2 * ell(cfg.n);
    if (limit > 11) throw ConfigError("realise enumerates all graphs on 2*ell vertices; too many for this n");
    const auto start = Clock::now();
    auto trials = run_trials(cfg, [&](std::size_t i) {
        const PartitionedGraph pg = sample_unipolar(cfg.n, {cfg.seed, i});
        const auto nbhd = side_neighborhoods(pg);
        std::vector<std::size_t> small;
        for (std::size_t k = 1; k < nbhd.size(); ++k)
            if (nbhd[k].size() <= limit) small.push_back(k);

        std::set<std::vector<Vertex>> supports;
        for (std::size_t a = 0; a < small.size(); ++a)
            for (std::size_t b = a; b < small.size(); ++b) {
                const VertexSet s = nbhd[small[a]] | nbhd[small[b]];
                if (s.size() <= limit) supports.insert(s.members());
            }

        std::size_t targets = 0, realised = 0, complete_supports = 0;
        for (const auto& members : supports) {
            const VertexSet s = VertexSet::of(cfg.n, members);
            const std::size_t m = members.size();
            const std::size_t pairs = m * (m - 1) / 2;
            std::set<std::uint64_t> codes;
            for (const Graph& h : distinct_derived_graphs(pg, s)) {
                std::uint64_t code = 0;
                std::size_t p = 0;
                for (Vertex x = 0; x < m; ++x)
                    for (Vertex y = x + 1; y < m; ++y, ++p)
                        if (h.adjacent(x, y)) code |= std::uint64_t{1} << p;
                codes.insert(code);
            }
            const std::size_t total = std::size_t{1} << pairs;
            targets += total;
            realised += codes.size();
            complete_supports += codes.size() == total;
        }
        Json t;
        t["stream"] = i;
        t["central_size"] = pg.parts[0].size();
        t["r"] = r_value(pg);
        t["eligible_parts"] = small.size();
        t["supports"] = supports.size();
        t["targets"] = targets;
        t["realised"] = realised;
        t["all_realised"] = !supports.empty() && complete_supports == supports.size();
        return t;
    });
    std::size_t eligible = 0, full = 0;
    for (const auto& t : trials) {
        if (t["supports"].get<std::size_t>() == 0) continue;
        ++eligible;
        full += t["all_realised"].get<bool>();
    }
    Json config = base_config(cfg);
    config["support_limit"] = limit;
    Json metrics;
    metrics["eligible_trials"] = eligible;
    add_rate(metrics, "all_realised_fraction", full, eligible);
    metrics["mean_r"] = mean_r(trials);
    return finish("realise", std::move(config), std::move(metrics), std::move(trials), start);
}

ExperimentReport dichotomy_experiment(const ExperimentConfig& cfg) {
    check_common(cfg, true);
    if (!cfg.phi) throw ConfigError("dichotomy needs a sentence");
    const Formula& phi = *cfg.phi;
    if (!is_sentence(phi)) throw NotASentenceError("dichotomy needs a sentence");
    if (uses_relations(phi)) throw RelationAtomError("dichotomy sentence must use only ~ and =");
    const std::size_t cap =
        cfg.max_support.value_or(cfg.n <= kFullEvaluationMaxN ? kUnlimitedSupport : kLargeSupportCap);
    const auto start = Clock::now();
    auto trials = run_trials(cfg, [&](std::size_t i) {
        const PartitionedGraph pg = sample_unipolar(cfg.n, {cfg.seed, i});
        const PsiOutcome o = oracle_psi(pg, phi, cap);
        Json t;
        t["stream"] = i;
        t["central_size"] = pg.parts[0].size();
        t["r"] = r_value(pg);
        t["holds"] = o.holds;
        t["supports_examined"] = o.supports_examined;
        t["supports_skipped"] = o.supports_skipped;
        t["graphs_checked"] = o.graphs_checked;
        return t;
    });
    std::size_t hits = 0;
    for (const auto& t : trials) hits += t["holds"].get<bool>();
    Json config = base_config(cfg);
    config["phi"] = to_string(phi);
    config["max_support"] = cap == kUnlimitedSupport ? Json(nullptr) : Json(cap);
    Json metrics;
    add_rate(metrics, "frequency", hits, cfg.trials);
    metrics["mean_r"] = mean_r(trials);
    return finish("dichotomy", std::move(config), std::move(metrics), std::move(trials), start);
}

ExperimentReport theorem1_experiment(const ExperimentConfig& cfg) {
    check_common(cfg, true);
    if (!cfg.phi0 || !cfg.phi1) throw ConfigError("theorem1 needs phi0 and phi1");
    if (cfg.n > kFullEvaluationMaxN)
        throw CostGuardError("full evaluation is limited to n <= " + std::to_string(kFullEvaluationMaxN));
    const Formula sentence = build_theorem1(*cfg.phi0, *cfg.phi1, BuildMode::Interpreted);
    const auto start = Clock::now();
    auto trials = run_trials(cfg, [&](std::size_t i) {
        const PartitionedGraph pg = sample_unipolar(cfg.n, {cfg.seed, i});
        Json t;
        t["stream"] = i;
        t["central_size"] = pg.parts[0].size();
        t["side_parts"] = pg.side_count();
        t["r"] = r_value(pg);
        t["holds"] = evaluate(oracle_structure(pg), sentence);
        return t;
    });
    std::size_t hits = 0;
    for (const auto& t : trials) hits += t["holds"].get<bool>();
    Json config = base_config(cfg);
    config["phi0"] = to_string(*cfg.phi0);
    config["phi1"] = to_string(*cfg.phi1);
    Json metrics;
    add_rate(metrics, "frequency", hits, cfg.trials);
    metrics["mean_r"] = mean_r(trials);
    return finish("theorem1", std::move(config), std::move(metrics), std::move(trials), start);
}

namespace {

const char* model_name(Model m) { return m == Model::Perfect ? "perfect" : "unipolar"; }

PerfectSample draw(const ExperimentConfig& cfg, std::size_t i) {
    if (cfg.model == Model::Perfect) return sample_perfect(cfg.n, {cfg.seed, i});
    PerfectSample s;
    s.witness = sample_unipolar(cfg.n, {cfg.seed, i});
    s.graph = s.witness.graph;
    return s;
}

ExperimentReport frequency_core(const ExperimentConfig& cfg, Json config, const SamplePredicate& pred) {
    const auto start = Clock::now();
    auto trials = run_trials(cfg, [&](std::size_t i) {
        const PerfectSample s = draw(cfg, i);
        Json t;
        t["stream"] = i;
        t["orientation"] = to_string(s.orientation);
        t["central_size"] = s.witness.parts[0].size();
        t["r"] = r_value(s.witness);
        t["holds"] = pred(s);
        return t;
    });
    std::size_t hits = 0;
    for (const auto& t : trials) hits += t["holds"].get<bool>();
    Json metrics;
    add_rate(metrics, "frequency", hits, cfg.trials);
    metrics["mean_r"] = mean_r(trials);
    return finish("frequency", std::move(config), std::move(metrics), std::move(trials), start);
}

}  // namespace

ExperimentReport run_frequency(const ExperimentConfig& cfg) {
    check_common(cfg, false);
    if (!cfg.phi) throw ConfigError("frequency needs a sentence");
    if (cfg.n > kFullEvaluationMaxN)
        throw CostGuardError("full evaluation is limited to n <= " + std::to_string(kFullEvaluationMaxN));
    if (!is_sentence(*cfg.phi)) throw NotASentenceError("frequency needs a sentence");
    const Formula phi = cfg.complement_formula ? complement_formula(*cfg.phi) : *cfg.phi;
    Json config = base_config(cfg);
    config["model"] = model_name(cfg.model);
    config["phi"] = to_string(*cfg.phi);
    config["complement_formula"] = cfg.complement_formula;
    config["complement_graph"] = cfg.complement_graph;
    const bool flip = cfg.complement_graph;
    return frequency_core(cfg, std::move(config), [&](const PerfectSample& s) {
        return flip ? evaluate(complement(s.graph), phi) : evaluate(s.graph, phi);
    });
}

ExperimentReport run_frequency(const ExperimentConfig& cfg, const std::string& label, const SamplePredicate& pred) {
    check_common(cfg, false);
    Json config = base_config(cfg);
    config["model"] = model_name(cfg.model);
    config["predicate"] = label;
    return frequency_core(cfg, std::move(config), pred);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "criterion") return validate_criterion(cfg);
    if (cfg.experiment == "rightsize") return validate_rightsize(cfg);
    if (cfg.experiment == "realise" || cfg.experiment == "realize") return validate_realise(cfg);
    if (cfg.experiment == "dichotomy") return dichotomy_experiment(cfg);
    if (cfg.experiment == "theorem1") return theorem1_experiment(cfg);
    if (cfg.experiment == "frequency") return run_frequency(cfg);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

namespace {

std::string csv_cell(const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string report_to_csv(const Json& report) {
    if (!report.is_object() || !report.contains("trials") || !report["trials"].is_array())
        throw InvalidArgumentError("report has no trial array");
    const Json& trials = report["trials"];
    std::vector<std::string> columns;
    for (const auto& t : trials)
        for (const auto& [k, v] : t.items())
            if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_cell(columns[c]);
    out << '\n';
    for (const auto& t : trials) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ',';
            if (t.contains(columns[c])) out << csv_cell(t[columns[c]]);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace perfolab
