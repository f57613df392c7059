#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "perfolab/combinatorics.hpp"
#include "perfolab/encodings.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/evaluator.hpp"
#include "perfolab/experiments.hpp"
#include "perfolab/oracles.hpp"
#include "perfolab/sampler.hpp"

namespace py = pybind11;
using namespace perfolab;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Hex keeps clear of CPython's cap on decimal conversions of huge ints.
py::int_ big_int(const BigInt& x) {
    std::ostringstream s;
    s << std::hex << x;
    return py::reinterpret_steal<py::int_>(PyLong_FromString(s.str().c_str(), nullptr, 16));
}

BigInt from_py_int(const py::int_& x) {
    if (x.attr("__lt__")(0).cast<bool>()) throw InvalidArgumentError("expected a non-negative integer");
    return BigInt("0x" + x.attr("__format__")("x").cast<std::string>());
}

Formula as_formula(const py::object& o) {
    if (py::isinstance<py::str>(o)) return parse_formula(o.cast<std::string>());
    return o.cast<Formula>();
}

BuildMode mode_of(bool interpreted) { return interpreted ? BuildMode::Interpreted : BuildMode::Pure; }

}  // namespace

PYBIND11_MODULE(_perfolab, m) {
    m.doc() = "Random perfect graphs and a first-order model checker";

    auto base = py::register_exception<Error>(m, "PerfolabError", PyExc_RuntimeError);
    py::register_exception<InvalidVertexError>(m, "InvalidVertexError", base);
    py::register_exception<CapExceededError>(m, "CapExceededError", base);
    py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", base);
    py::register_exception<SyntaxError>(m, "FormulaSyntaxError", base);
    py::register_exception<UnboundVariableError>(m, "UnboundVariableError", base);
    py::register_exception<UnknownRelationError>(m, "UnknownRelationError", base);
    py::register_exception<NotASentenceError>(m, "NotASentenceError", base);
    py::register_exception<RelationAtomError>(m, "RelationAtomError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<CostGuardError>(m, "CostGuardError", base);

    py::class_<Graph>(m, "Graph")
        .def(py::init<std::size_t>(), py::arg("n") = 0)
        .def_static("from_edges",
                    [](std::size_t n, const std::vector<Edge>& e) { return Graph::from_edges(n, e); })
        .def_static("complete", &Graph::complete)
        .def_static("from_json", &graph_from_json)
        .def("to_json", [](const Graph& g) { return to_json(g); })
        .def_property_readonly("n", &Graph::order)
        .def("__len__", &Graph::order)
        .def("adjacent", &Graph::adjacent)
        .def("add_edge", &Graph::add_edge)
        .def("edges", &Graph::edges)
        .def("edge_count", &Graph::edge_count)
        .def("degree", &Graph::degree)
        .def("complement", [](const Graph& g) { return complement(g); })
        .def("is_unipolar", [](const Graph& g, std::size_t cap) { return is_unipolar(g, cap); },
             py::arg("cap") = kDefaultUnipolarCap)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.order()) + ", edges=" + std::to_string(g.edge_count()) + ")";
        });

    py::class_<PartitionedGraph>(m, "PartitionedGraph")
        .def_readonly("graph", &PartitionedGraph::graph)
        .def_readonly("parts", &PartitionedGraph::parts)
        .def("in_central", &PartitionedGraph::in_central)
        .def("validate", &PartitionedGraph::validate);

    py::class_<PerfectSample>(m, "PerfectSample")
        .def_readonly("graph", &PerfectSample::graph)
        .def_readonly("witness", &PerfectSample::witness)
        .def_property_readonly("orientation", [](const PerfectSample& s) { return std::string(to_string(s.orientation)); });

    m.def("sample_unipolar", [](std::size_t n, std::uint64_t seed, std::uint64_t stream) {
        check_size_guard(n);
        return sample_unipolar(n, {seed, stream});
    }, py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);
    m.def("sample_perfect", [](std::size_t n, std::uint64_t seed, std::uint64_t stream) {
        check_size_guard(n);
        return sample_perfect(n, {seed, stream});
    }, py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);
    m.def("has_independent_triple_in_neighborhood", &has_independent_triple_in_neighborhood);

    py::class_<Formula>(m, "Formula")
        .def(py::init([](const std::string& text) { return parse_formula(text); }))
        .def("__str__", [](const Formula& f) { return to_string(f); })
        .def("__repr__", [](const Formula& f) { return "Formula('" + to_string(f) + "')"; })
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
        .def_property_readonly("free_vars", [](const Formula& f) { return free_vars(f); })
        .def_property_readonly("is_sentence", [](const Formula& f) { return is_sentence(f); })
        .def_property_readonly("uses_relations", [](const Formula& f) { return uses_relations(f); });
    m.def("parse_formula", &parse_formula);
    m.def("complement_formula", [](const py::object& f) { return complement_formula(as_formula(f)); });

    m.def("evaluate", [](const Graph& g, const py::object& f, const Environment& env) {
        return evaluate(g, as_formula(f), env);
    }, py::arg("graph"), py::arg("formula"), py::arg("env") = Environment{});
    m.def("evaluate_with_oracles", [](const PartitionedGraph& pg, const py::object& f, const Environment& env) {
        return evaluate(oracle_structure(pg), as_formula(f), env);
    }, py::arg("sample"), py::arg("formula"), py::arg("env") = Environment{},
       "Evaluate with InC0, CN and Hedge bound to the witness partition's tables.");

    m.def("base_formula", [](const std::string& kind, bool interpreted) {
        return build_base_formula(predicate_from_string(kind), mode_of(interpreted));
    }, py::arg("kind"), py::arg("interpreted") = false);
    m.def("relativize", [](const py::object& phi, bool interpreted) {
        return relativize(as_formula(phi), mode_of(interpreted));
    }, py::arg("phi"), py::arg("interpreted") = false);
    m.def("build_psi", [](const py::object& phi, bool interpreted) {
        return build_psi(as_formula(phi), mode_of(interpreted));
    }, py::arg("phi"), py::arg("interpreted") = false);
    m.def("build_theorem1", [](const py::object& phi0, const py::object& phi1, bool interpreted) {
        return build_theorem1(as_formula(phi0), as_formula(phi1), mode_of(interpreted));
    }, py::arg("phi0"), py::arg("phi1"), py::arg("interpreted") = false);
    m.def("build_unip", &build_unip);
    m.def("spectrum_contains", [](const py::object& phi, std::size_t n, std::size_t cap) {
        return spectrum_contains(as_formula(phi), n, cap);
    }, py::arg("phi"), py::arg("n"), py::arg("cap") = kDefaultSpectrumCap);

    m.def("tower", [](unsigned k) { return big_int(tower(k)); });
    m.def("log_star", [](const py::int_& x) { return log_star(from_py_int(x)); });
    m.def("bell", [](std::size_t n) { return big_int(bell(n)); });
    m.def("log_bell", [](std::size_t n) { return static_cast<double>(log_bell(n)); });
    m.def("solve_r", &solve_r);
    m.def("central_size_pmf", &central_size_pmf);

    m.def("run_experiment", [](const std::string& name, std::size_t n, std::size_t trials, std::uint64_t seed,
                               std::size_t threads, const py::object& phi, const py::object& phi0,
                               const py::object& phi1, std::optional<std::size_t> max_support,
                               const std::string& model, bool complement_formula, bool complement_graph,
                               bool wall_clock) {
        ExperimentConfig c;
        c.experiment = name;
        c.n = n;
        c.trials = trials;
        c.seed = seed;
        c.threads = threads;
        if (!phi.is_none()) c.phi = as_formula(phi);
        if (!phi0.is_none()) c.phi0 = as_formula(phi0);
        if (!phi1.is_none()) c.phi1 = as_formula(phi1);
        c.max_support = max_support;
        if (model != "unipolar" && model != "perfect") throw ConfigError("model must be unipolar or perfect");
        c.model = model == "perfect" ? Model::Perfect : Model::Unipolar;
        c.complement_formula = complement_formula;
        c.complement_graph = complement_graph;
        Json report;
        {
            py::gil_scoped_release unlocked;
            report = run_experiment(c).to_json(wall_clock);
        }
        return to_python(report);
    }, py::arg("name"), py::arg("n"), py::arg("trials") = 1, py::arg("seed") = 0, py::arg("threads") = 1,
       py::arg("phi") = py::none(), py::arg("phi0") = py::none(), py::arg("phi1") = py::none(),
       py::arg("max_support") = py::none(), py::arg("model") = "unipolar", py::arg("complement_formula") = false,
       py::arg("complement_graph") = false, py::arg("wall_clock") = true);
    m.def("report_to_csv", [](const py::object& report) {
        const std::string text = py::module_::import("json").attr("dumps")(report).cast<std::string>();
        return report_to_csv(Json::parse(text));
    });
}
