// Longer worked examples for the experiment harness; each is a fixed-seed run.
#include <doctest.h>

#include <algorithm>

#include "perfolab/encodings.hpp"
#include "perfolab/experiments.hpp"

using namespace perfolab;

namespace {

Json run(const std::string& name, std::size_t n, std::size_t trials, std::uint64_t seed) {
    ExperimentConfig c;
    c.experiment = name;
    c.n = n;
    c.trials = trials;
    c.seed = seed;
    return run_experiment(c).to_json(false);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_SUITE("examples") {
    TEST_CASE("central vertices are the only ones ever misclassified") {
        const Json r = run("criterion", 300, 20, 11);
        CHECK(r["metrics"]["false_central_total"] == 0);
    }

    TEST_CASE("misclassification does not grow from n = 200 to n = 2000") {
        const double small = run("criterion", 200, 50, 12)["metrics"]["mean_misclassified_fraction"];
        const double large = run("criterion", 2000, 50, 12)["metrics"]["mean_misclassified_fraction"];
        CAPTURE(small);
        CAPTURE(large);
        CHECK(large <= small);
    }

    TEST_CASE("parts with a single common neighbour become more numerous with n") {
        std::vector<double> medians;
        for (std::size_t n : {10000, 20000, 30000}) {
            const Json r = run("rightsize", n, 15, 13);
            std::vector<double> c;
            for (const auto& t : r["trials"]) c.push_back(t["counts"][1].get<double>());
            medians.push_back(median(c));
        }
        CAPTURE(medians[0]);
        CAPTURE(medians[1]);
        CAPTURE(medians[2]);
        CHECK(medians[0] < medians[1]);
        CHECK(medians[1] < medians[2]);
    }

    TEST_CASE("any nonempty derived graph models 'exists a : a = a'") {
        ExperimentConfig c;
        c.experiment = "dichotomy";
        c.n = 30000;
        c.trials = 20;
        c.seed = 14;
        c.phi = parse_formula("exists a : a = a");
        CHECK(run_experiment(c).to_json(false)["metrics"]["frequency"].get<double>() >= 0.9);
    }

    TEST_CASE("the UniP sentence tracks the orientation coin") {
        ExperimentConfig c;
        c.experiment = "frequency";
        c.n = 200;
        c.trials = 200;
        c.seed = 15;
        c.model = Model::Perfect;
        c.phi = build_unip();
        const Json r = run_experiment(c).to_json(false);
        const double f = r["metrics"]["frequency"];
        CAPTURE(f);
        CHECK(f >= 0.35);
        CHECK(f <= 0.65);
        std::size_t agree = 0;
        for (const auto& t : r["trials"]) agree += t["holds"].get<bool>() == (t["orientation"] == "unipolar");
        CHECK(agree >= 190);
    }
}
