#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "architext/bracketed.hpp"
#include "architext/corpus.hpp"
#include "architext/engine.hpp"
#include "architext/grammar.hpp"
#include "architext/metagrammar.hpp"
#include "architext/similarity.hpp"
#include "architext/synth.hpp"

namespace py = pybind11;
using namespace architext;

namespace {

SimilarityFn similarity_by_name(const std::string& name) {
    if (name == "jaccard") return SimilarityFn::jaccard();
    if (name == "jaccard-multiset") return SimilarityFn::label_multiset();
    if (name == "tree-edit") return SimilarityFn::tree_edit();
    throw std::invalid_argument("unknown similarity: " + name);
}

CorpusConfig corpus_config(const std::vector<std::string>& keep_tags,
                           const std::vector<std::string>& conj_tags) {
    CorpusConfig cfg;
    cfg.keep_tags = {keep_tags.begin(), keep_tags.end()};
    if (!conj_tags.empty()) cfg.conjunction_tags = {conj_tags.begin(), conj_tags.end()};
    return cfg;
}

py::dict report_to_dict(const ValidationReport& r) {
    py::dict out;
    out["valid"] = r.valid;
    py::list violations;
    for (const auto& v : r.violations) {
        py::dict d;
        d["meta_rule"] = v.meta_rule;
        d["message"] = v.message;
        d["rule_index"] = v.rule_index;
        violations.append(d);
    }
    out["violations"] = violations;
    auto names = [](const std::set<std::string>& s) {
        return std::vector<std::string>(s.begin(), s.end());
    };
    py::dict attrs;
    attrs["eL"] = names(r.attributes.eL);
    attrs["gL"] = names(r.attributes.gL);
    attrs["rL"] = names(r.attributes.rL);
    attrs["cgL"] = names(r.attributes.cgL);
    attrs["crL"] = names(r.attributes.crL);
    out["attributes"] = attrs;
    return out;
}

} // namespace

PYBIND11_MODULE(_architext, m) {
    m.doc() = "Grammar induction over entity-annotated syntax trees";

    py::class_<Tree>(m, "Tree")
        .def(py::init<>())
        .def("__len__", &Tree::size)
        .def("__eq__", [](const Tree& a, const Tree& b) { return a == b; })
        .def("__str__", [](const Tree& t) { return write_instance(t); })
        .def("entity_signature", [](const Tree& t) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& p : entity_signature(t)) out.push_back(p);
            return out;
        });

    m.def("parse_instance", [](const std::string& text) { return parse_instance(text); },
          py::arg("text"), "Parse a bracketed instance (or one sentence per line).");

    m.def(
        "ingest",
        [](const std::string& trees_path, const std::string& entities_path,
           const std::vector<std::string>& keep_tags, const std::vector<std::string>& conj_tags) {
            return ingest(trees_path, entities_path, corpus_config(keep_tags, conj_tags));
        },
        py::arg("trees_path"), py::arg("entities_path"),
        py::arg("keep_tags") = std::vector<std::string>{},
        py::arg("conj_tags") = std::vector<std::string>{},
        "Read, enrich and simplify a corpus into an instance tree.");

    m.def(
        "extract_grammar",
        [](const Tree& t) { return write_grammar(extract_grammar(t)); }, py::arg("tree"),
        "Extract the condensed grammar of an instance, as text.");

    m.def(
        "validate",
        [](const std::string& grammar_text) { return report_to_dict(validate(parse_grammar(grammar_text))); },
        py::arg("grammar"), "Validate a grammar (text) against the meta-grammar.");

    m.def(
        "accepts",
        [](const std::string& grammar_text, const Tree& t, bool allow_missing) {
            return accepts(parse_grammar(grammar_text), t, allow_missing);
        },
        py::arg("grammar"), py::arg("tree"), py::arg("allow_missing") = true);

    m.def(
        "sim",
        [](const Tree& t, const std::string& a, const std::string& b, const std::string& kind) {
            SubTreeRef x{&t, Position::parse(a)}, y{&t, Position::parse(b)};
            return sim(x, y, similarity_by_name(kind));
        },
        py::arg("tree"), py::arg("a"), py::arg("b"), py::arg("kind") = "jaccard",
        "Contextual similarity of the sub-trees at dotted positions a and b.");

    m.def(
        "equivalence_classes",
        [](const Tree& t, double tau, const std::string& kind) {
            std::vector<Position> scope;
            for (const auto& [p, l] : t.nodes())
                if (!t.is_leaf(p)) scope.push_back(p);
            SimParams params{similarity_by_name(kind), tau};
            Partition part = equivalence_classes(t, scope, params);
            std::vector<std::vector<std::string>> out;
            for (const auto& block : part.blocks) {
                std::vector<std::string> b;
                for (const auto& p : block) b.push_back(p.to_string());
                out.push_back(std::move(b));
            }
            return out;
        },
        py::arg("tree"), py::arg("tau") = 0.7, py::arg("kind") = "jaccard",
        "tau-equivalence classes over the internal positions, as dotted strings.");

    m.def(
        "structure",
        [](const Tree& t, double tau, std::size_t min_support, std::size_t max_cycles,
           const std::string& similarity) {
            StructuringConfig cfg;
            cfg.sim.f = similarity_by_name(similarity);
            cfg.sim.tau = tau;
            cfg.min_support = min_support;
            cfg.max_cycles = max_cycles;
            StructuringResult res = structure(t, cfg);
            py::dict out;
            out["instance"] = res.instance;
            out["grammar"] = write_grammar(res.grammar);
            out["valid"] = res.valid;
            out["iterations"] = res.iterations_used;
            out["frontier"] = res.frontier_size;
            out["csv"] = metrics_csv(res.logs);
            py::list logs;
            for (const auto& log : res.logs) {
                py::dict d;
                d["iteration"] = log.iteration;
                d["op"] = edit_op_name(log.op);
                d["nb_prod"] = log.metrics.nb_prod;
                d["nb_unlabelled"] = log.metrics.nb_unlabelled;
                logs.append(d);
            }
            out["logs"] = logs;
            return out;
        },
        py::arg("tree"), py::arg("tau") = 0.7, py::arg("min_support") = 2,
        py::arg("max_cycles") = 50, py::arg("similarity") = "jaccard",
        "Run the structuring loop; returns instance, grammar text, logs.");

    m.def(
        "generate",
        [](const std::string& schema_text, std::size_t n, std::uint64_t seed) {
            GeneratedCorpus corpus = generate(parse_schema(schema_text), n, seed);
            py::dict out;
            out["trees"] = corpus.trees_text;
            out["entities"] = corpus.entities_text;
            out["grammar"] = write_grammar(corpus.ground_truth);
            return out;
        },
        py::arg("schema"), py::arg("n"), py::arg("seed"),
        "Generate a synthetic annotated corpus from a planted schema.");
}
