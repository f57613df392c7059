// perfolab: sampling, FO evaluation, sentence builders and experiments from the shell.
//
// Sentence arguments accept a file path, "-" for stdin, or the sentence text itself.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "perfolab/combinatorics.hpp"
#include "perfolab/encodings.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/evaluator.hpp"
#include "perfolab/experiments.hpp"
#include "perfolab/sampler.hpp"

#ifndef PERFOLAB_DATA_DIR
#define PERFOLAB_DATA_DIR "data"
#endif

using namespace perfolab;
namespace fs = std::filesystem;

namespace {

std::string slurp(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    return slurp(in);
}

Formula load_formula(const std::string& arg) {
    if (arg == "-") return parse_formula(slurp(std::cin));
    std::error_code ec;
    if (fs::is_regular_file(arg, ec)) return parse_formula(read_file(arg));
    return parse_formula(arg);
}

// Default theorem-1 sentences; PERFOLAB_DATA overrides the install location.
std::string default_sentence(const std::string& name) {
    const char* env = std::getenv("PERFOLAB_DATA");
    const fs::path dir = env && *env ? fs::path(env) : fs::path(PERFOLAB_DATA_DIR);
    return (dir / "sentences" / name).string();
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw ConfigError("cannot write '" + out + "'");
    f << text;
}

Json graph_json(const Graph& g) { return Json::parse(to_json(g)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random perfect graphs and first-order sentences"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "Draw a random unipolar (or perfect) graph as JSON");
    std::size_t s_n = 0;
    std::uint64_t s_seed = 0, s_stream = 0;
    bool s_perfect = false;
    sample->add_option("--n", s_n, "Number of vertices")->required();
    sample->add_option("--seed", s_seed, "Seed");
    sample->add_option("--stream", s_stream, "Stream index");
    sample->add_flag("--perfect", s_perfect, "Complement on a fair coin and report the orientation");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a sentence (or formula with --assign) on a JSON graph");
    std::string e_graph, e_sentence = "-";
    std::vector<std::string> e_assign;
    eval->add_option("graph", e_graph, "Graph JSON file")->required();
    eval->add_option("sentence", e_sentence, "Sentence file, text, or - for stdin");
    eval->add_option("--assign", e_assign, "Free variable binding var=vertex")->take_all();

    // formulas
    auto* formulas = app.add_subcommand("formulas", "Print a constructed sentence in canonical form");
    std::string f_kind, f_phi, f_phi0, f_phi1;
    bool f_interpreted = false;
    formulas
        ->add_option("kind", f_kind,
                     "InC0 | CN | Hedge | Bigger | relativize | psi | theorem1 | unip | complement")
        ->required();
    formulas->add_flag("--interpreted", f_interpreted, "Keep InC0/CN/Hedge as relation atoms");
    formulas->add_option("--phi", f_phi, "Inner sentence (relativize, psi, complement)");
    formulas->add_option("--phi0", f_phi0, "theorem1: first sentence");
    formulas->add_option("--phi1", f_phi1, "theorem1: second sentence");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Does some graph on n vertices satisfy the sentence?");
    std::string sp_sentence;
    std::size_t sp_n = 0, sp_cap = kDefaultSpectrumCap;
    spectrum->add_option("sentence", sp_sentence, "Sentence file, text, or -")->required();
    spectrum->add_option("n", sp_n, "Vertex count")->required();
    spectrum->add_option("--cap", sp_cap, "Largest n searched exhaustively");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a seeded experiment and print its JSON report");
    ExperimentConfig cfg;
    std::string x_phi, x_phi0, x_phi1, x_model = "unipolar", x_out;
    std::size_t x_max_support = 0;
    bool x_no_clock = false;
    experiment
        ->add_option("name", cfg.experiment, "criterion | rightsize | realise | dichotomy | theorem1 | frequency")
        ->required();
    experiment->add_option("--n", cfg.n, "Number of vertices")->required();
    experiment->add_option("--trials", cfg.trials, "Number of samples")->default_val(1);
    experiment->add_option("--seed", cfg.seed, "Seed")->default_val(0);
    experiment->add_option("--threads", cfg.threads, "Worker threads")->default_val(1);
    experiment->add_option("--phi", x_phi, "Sentence (dichotomy, frequency)");
    experiment->add_option("--phi0", x_phi0, "theorem1: first sentence");
    experiment->add_option("--phi1", x_phi1, "theorem1: second sentence");
    experiment->add_option("--max-support", x_max_support, "dichotomy: largest support examined");
    experiment->add_option("--model", x_model, "frequency: unipolar | perfect")
        ->check(CLI::IsMember({"unipolar", "perfect"}));
    experiment->add_flag("--complement-formula", cfg.complement_formula, "frequency: evaluate the complemented sentence");
    experiment->add_flag("--complement-graph", cfg.complement_graph, "frequency: evaluate on the complement graph");
    experiment->add_option("--out", x_out, "Write the report here instead of stdout");
    experiment->add_flag("--no-wall-clock", x_no_clock, "Omit wall_clock_seconds (byte-stable output)");

    // report
    auto* report = app.add_subcommand("report", "Convert a JSON report's trial table to CSV");
    std::string r_in = "-", r_out;
    report->add_option("report", r_in, "Report JSON file or -");
    report->add_option("--out", r_out, "CSV destination");

    // pmf
    auto* pmf = app.add_subcommand("pmf", "Central clique size law as CSV (m,probability)");
    std::size_t p_n = 0;
    pmf->add_option("n", p_n, "Number of vertices")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sample) {
            check_size_guard(s_n);
            if (s_n < 1) throw ConfigError("n must be at least 1");
            Json out;
            if (s_perfect) {
                const PerfectSample ps = sample_perfect(s_n, {s_seed, s_stream});
                out = graph_json(ps.graph);
                out["parts"] = ps.witness.parts;
                out["orientation"] = to_string(ps.orientation);
            } else {
                const PartitionedGraph pg = sample_unipolar(s_n, {s_seed, s_stream});
                out = graph_json(pg.graph);
                out["parts"] = pg.parts;
            }
            std::cout << out.dump() << '\n';
        } else if (*eval) {
            const Graph g = graph_from_json(read_file(e_graph));
            const Formula f = load_formula(e_sentence);
            Environment env;
            for (const auto& a : e_assign) {
                const auto eq = a.find('=');
                if (eq == std::string::npos) throw ConfigError("binding '" + a + "' is not var=vertex");
                env[a.substr(0, eq)] = static_cast<Vertex>(std::stoul(a.substr(eq + 1)));
            }
            std::cout << (evaluate(g, f, env) ? "true" : "false") << '\n';
        } else if (*formulas) {
            const BuildMode mode = f_interpreted ? BuildMode::Interpreted : BuildMode::Pure;
            auto need_phi = [&]() {
                if (f_phi.empty()) throw ConfigError("'" + f_kind + "' needs --phi");
                return load_formula(f_phi);
            };
            Formula out = Formula::eq("x", "x");
            if (f_kind == "relativize")
                out = relativize(need_phi(), mode);
            else if (f_kind == "psi")
                out = build_psi(need_phi(), mode);
            else if (f_kind == "complement")
                out = complement_formula(need_phi());
            else if (f_kind == "theorem1")
                out = build_theorem1(load_formula(f_phi0.empty() ? default_sentence("phi0.fo") : f_phi0),
                                     load_formula(f_phi1.empty() ? default_sentence("phi1.fo") : f_phi1), mode);
            else if (f_kind == "unip")
                out = build_unip();
            else
                out = build_base_formula(predicate_from_string(f_kind), mode);
            std::cout << to_string(out) << '\n';
        } else if (*spectrum) {
            std::cout << (spectrum_contains(load_formula(sp_sentence), sp_n, sp_cap) ? "true" : "false") << '\n';
        } else if (*experiment) {
            if (!x_phi.empty()) cfg.phi = load_formula(x_phi);
            if (cfg.experiment == "theorem1") {
                cfg.phi0 = load_formula(x_phi0.empty() ? default_sentence("phi0.fo") : x_phi0);
                cfg.phi1 = load_formula(x_phi1.empty() ? default_sentence("phi1.fo") : x_phi1);
            }
            if (experiment->count("--max-support")) cfg.max_support = x_max_support;
            cfg.model = x_model == "perfect" ? Model::Perfect : Model::Unipolar;
            emit(run_experiment(cfg).to_json(!x_no_clock).dump(2) + "\n", x_out);
        } else if (*report) {
            const std::string text = r_in == "-" ? slurp(std::cin) : read_file(r_in);
            emit(report_to_csv(Json::parse(text)), r_out);
        } else if (*pmf) {
            const auto p = central_size_pmf(p_n);
            std::ostringstream out;
            out.precision(17);
            out << "m,probability\n";
            for (std::size_t m = 1; m <= p.size(); ++m) out << m << ',' << p[m - 1] << '\n';
            std::cout << out.str();
        }
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error at " << e.line() << ':' << e.column() << ": " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad JSON: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
