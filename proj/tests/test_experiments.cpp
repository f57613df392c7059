#include <doctest.h>

#include <cstdlib>

#include "perfolab/errors.hpp"
#include "perfolab/experiments.hpp"
#include "perfolab/oracles.hpp"

using namespace perfolab;

namespace {

ExperimentConfig config(const std::string& name, std::size_t n, std::size_t trials, std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.experiment = name;
    c.n = n;
    c.trials = trials;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("experiments") {
    TEST_CASE("derived parameters") {
        CHECK(ell(16) == 1);
        CHECK(ell(30000) == 1);
        CHECK(ell(100000) == 1);
        CHECK_THROWS_AS(ell(15), ConfigError);
        CHECK(t_param(30000) == 4);
        CHECK(t_param(2) == 1);
    }

    TEST_CASE("Wilson interval") {
        const auto [lo0, hi0] = wilson_interval(0, 10);
        CHECK(lo0 == doctest::Approx(0.0));
        CHECK(hi0 == doctest::Approx(0.27753).epsilon(1e-4));
        const auto [lo5, hi5] = wilson_interval(5, 10);
        CHECK(lo5 == doctest::Approx(0.23659).epsilon(1e-4));
        CHECK(hi5 == doctest::Approx(0.76341).epsilon(1e-4));
    }

    TEST_CASE("Poisson-binomial tail and binomial terms") {
        const std::vector<double> p{0.1, 0.5, 0.9, 0.3};
        for (std::size_t k = 0; k <= 4; ++k) {
            double brute = 0;
            for (unsigned mask = 0; mask < 16; ++mask) {
                double pr = 1;
                for (unsigned i = 0; i < 4; ++i) pr *= (mask >> i & 1U) ? p[i] : 1 - p[i];
                if (static_cast<std::size_t>(__builtin_popcount(mask)) <= k) brute += pr;
            }
            CHECK(poisson_binomial_cdf(p, k) == doctest::Approx(brute).epsilon(1e-12));
        }
        CHECK(binomial_pmf(4, 0.5, 2) == doctest::Approx(0.375));
        CHECK(binomial_pmf(10, 0.0, 0) == 1.0);
        CHECK(binomial_pmf(3, 0.5, 4) == 0.0);
    }

    TEST_CASE("configuration errors") {
        CHECK_THROWS_AS(run_experiment(config("criterion", 15, 1)), ConfigError);
        CHECK_THROWS_AS(run_experiment(config("criterion", 100, 0)), ConfigError);
        CHECK_THROWS_AS(run_experiment(config("nonsense", 100, 1)), ConfigError);
        CHECK_THROWS_AS(run_experiment(config("dichotomy", 100, 1)), ConfigError);
        CHECK_THROWS_AS(run_experiment(config("criterion", 100001, 1)), ConfigError);
        ::setenv("PERFOLAB_MAX_N", "50", 1);
        CHECK_THROWS_AS(run_experiment(config("criterion", 60, 1)), ConfigError);
        ::setenv("PERFOLAB_MAX_N", "abc", 1);
        CHECK_THROWS_AS(max_supported_n(), ConfigError);
        ::unsetenv("PERFOLAB_MAX_N");
        CHECK(max_supported_n() == kDefaultMaxN);
    }

    TEST_CASE("criterion report is deterministic and self-describing") {
        auto c = config("criterion", 150, 4, 9);
        const Json a = run_experiment(c).to_json(false);
        c.threads = 3;
        const Json b = run_experiment(c).to_json(false);
        CHECK(a.dump() == b.dump());
        CHECK(a["experiment"] == "criterion");
        CHECK(a["config"]["ell"] == 1);
        CHECK(a["config"]["t"] == 3);
        CHECK(a["trials"].size() == 4);
        CHECK(a["metrics"]["false_central_total"] == 0);
        for (const auto& t : a["trials"]) CHECK(t.contains("r"));
        CHECK(run_experiment(c).to_json(true).contains("wall_clock_seconds"));
    }

    TEST_CASE("rightsize and realise run at small n") {
        const Json r = run_experiment(config("rightsize", 300, 3)).to_json(false);
        CHECK(r["trials"][0]["counts"].size() == 2);
        CHECK(r["metrics"].contains("size_0_present_fraction"));
        const Json z = run_experiment(config("realise", 300, 3)).to_json(false);
        CHECK(z["config"]["support_limit"] == 2);
        for (const auto& t : z["trials"]) CHECK(t["realised"].get<std::size_t>() <= t["targets"].get<std::size_t>());
    }

    TEST_CASE("dichotomy with an unsatisfiable sentence never fires") {
        auto c = config("dichotomy", 200, 5);
        c.phi = parse_formula("exists a : !(a = a)");
        const Json r = run_experiment(c).to_json(false);
        CHECK(r["metrics"]["frequency"] == 0.0);
        c.phi = parse_formula("exists a : a = a");
        CHECK(run_experiment(c).to_json(false)["metrics"]["frequency"].get<double>() > 0.0);
        c.phi = parse_formula("a = a");
        CHECK_THROWS_AS(run_experiment(c), NotASentenceError);
    }

    TEST_CASE("theorem-1 composition runs on oracle tables") {
        auto c = config("theorem1", 60, 4);
        CHECK_THROWS_AS(run_experiment(c), ConfigError);
        c.phi0 = parse_formula("exists a : !(a = a)");
        c.phi1 = parse_formula("exists a : a = a");
        // No rival can satisfy phi0, so this is psi(phi1).
        const Json r = run_experiment(c).to_json(false);
        CHECK(r["experiment"] == "theorem1");
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(r["trials"][i]["holds"] ==
                  oracle_psi(sample_unipolar(60, {1, i}), parse_formula("exists a : a = a")).holds);
        c.n = 301;
        CHECK_THROWS_AS(run_experiment(c), CostGuardError);
    }

    TEST_CASE("frequency: tautology, cost guard and complement duality") {
        auto c = config("frequency", 40, 10);
        c.phi = parse_formula("exists x : x = x");
        CHECK(run_experiment(c).to_json(false)["metrics"]["frequency"] == 1.0);
        c.n = 301;
        CHECK_THROWS_AS(run_experiment(c), CostGuardError);

        c.n = 30;
        c.trials = 40;
        c.model = Model::Perfect;
        c.phi = parse_formula("exists x y z : x ~ y & !(y ~ z) & x ~ z & !(x = z)");
        auto flipped_formula = c;
        flipped_formula.complement_formula = true;
        auto flipped_graph = c;
        flipped_graph.complement_graph = true;
        const Json a = run_experiment(flipped_formula).to_json(false);
        const Json b = run_experiment(flipped_graph).to_json(false);
        for (std::size_t i = 0; i < 40; ++i) CHECK(a["trials"][i]["holds"] == b["trials"][i]["holds"]);
    }

    TEST_CASE("predicate-backed frequency") {
        auto c = config("frequency", 2000, 20);
        c.model = Model::Perfect;
        const Json r = run_frequency(c, "unipolar orientation", [](const PerfectSample& s) {
            return s.orientation == Orientation::Unipolar;
        }).to_json(false);
        CHECK(r["config"]["predicate"] == "unipolar orientation");
        CHECK(r["trials"].size() == 20);
    }

    TEST_CASE("CSV export") {
        const Json rep = run_experiment(config("criterion", 50, 2)).to_json(false);
        const std::string csv = report_to_csv(rep);
        CHECK(csv.rfind("stream,central_size,side_parts,r,misclassified", 0) == 0);
        std::size_t lines = 0;
        for (char ch : csv) lines += ch == '\n';
        CHECK(lines == 3);
        CHECK_THROWS_AS(report_to_csv(Json::object()), InvalidArgumentError);
    }
}
