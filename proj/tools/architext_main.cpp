// architext: grammar induction over entity-annotated treebanks.
//
// Subcommands: structure (run the full loop), validate (check a grammar
// against the meta-grammar), extract (grammar of an instance), generate
// (synthetic corpora from a planted schema).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "architext/bracketed.hpp"
#include "architext/corpus.hpp"
#include "architext/engine.hpp"
#include "architext/grammar.hpp"
#include "architext/metagrammar.hpp"
#include "architext/synth.hpp"

namespace {

using namespace architext;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

SimilarityFn similarity_by_name(const std::string& name) {
    if (name == "jaccard") return SimilarityFn::jaccard();
    if (name == "jaccard-multiset") return SimilarityFn::label_multiset();
    if (name == "tree-edit") return SimilarityFn::tree_edit();
    throw ParseError("unknown similarity: " + name);
}

std::set<std::string> split_tags(const std::string& csv) {
    std::set<std::string> out;
    std::size_t i = 0;
    while (i <= csv.size()) {
        std::size_t j = csv.find(',', i);
        if (j == std::string::npos) j = csv.size();
        if (j > i) out.insert(csv.substr(i, j - i));
        i = j + 1;
    }
    return out;
}

int cmd_structure(const std::string& trees_path, const std::string& entities_path, double tau,
                  std::size_t min_support, std::size_t max_cycles, const std::string& similarity,
                  const std::string& keep_tags, const std::string& conj_tags,
                  const std::string& out_grammar, const std::string& out_instance,
                  const std::string& out_metrics, bool verbose) {
    CorpusConfig corpus_cfg;
    corpus_cfg.keep_tags = split_tags(keep_tags);
    if (!conj_tags.empty()) corpus_cfg.conjunction_tags = split_tags(conj_tags);

    Tree instance = ingest(trees_path, entities_path, corpus_cfg);

    StructuringConfig cfg;
    cfg.sim.f = similarity_by_name(similarity);
    cfg.sim.tau = tau;
    cfg.min_support = min_support;
    cfg.max_cycles = max_cycles;

    StructuringResult res = structure(instance, cfg);

    if (!out_grammar.empty()) spit(out_grammar, write_grammar(res.grammar));
    if (!out_instance.empty()) spit(out_instance, write_instance(res.instance) + "\n");
    if (!out_metrics.empty()) spit(out_metrics, metrics_csv(res.logs));

    if (verbose) {
        for (const auto& log : res.logs)
            std::cout << "iteration " << log.iteration << ": " << edit_op_name(log.op)
                      << " (rules " << log.metrics.nb_prod << ", unlabelled "
                      << log.metrics.nb_unlabelled << ")\n";
    }
    std::cout << "iterations: " << res.iterations_used << "\n"
              << "grammar: " << (res.valid ? "valid" : "invalid") << "\n"
              << "frontier: " << res.frontier_size << " position(s)"
              << (res.valid ? "" : " (best instance from iteration " +
                                       std::to_string(res.best_iteration) + ")")
              << "\n";
    return res.valid ? 0 : 3;
}

int cmd_validate(const std::string& grammar_path) {
    CondensedGrammar g;
    try {
        g = parse_grammar(slurp(grammar_path));
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    ValidationReport report = validate(g);
    for (const auto& v : report.violations)
        std::cout << "meta-rule " << v.meta_rule << ": " << v.message << " (rule " << v.rule_index
                  << ")\n";
    std::cout << (report.valid ? "valid" : "invalid") << "\n";
    return report.valid ? 0 : 1;
}

int cmd_extract(const std::string& instance_path, const std::string& out_path) {
    Tree instance = parse_instance(slurp(instance_path));
    std::string text = write_grammar(extract_grammar(instance));
    if (out_path.empty())
        std::cout << text;
    else
        spit(out_path, text);
    return 0;
}

int cmd_generate(const std::string& schema_path, std::size_t n, std::uint64_t seed,
                 const std::string& out_dir) {
    PlantedSchema schema = parse_schema(slurp(schema_path));
    GeneratedCorpus corpus = generate(schema, n, seed);
    std::filesystem::create_directories(out_dir);
    spit(out_dir + "/trees.txt", corpus.trees_text);
    spit(out_dir + "/entities.tsv", corpus.entities_text);
    spit(out_dir + "/grammar.txt", write_grammar(corpus.ground_truth));
    std::cout << "wrote " << n << " sentences to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"architext: structure entity-annotated syntax trees into a database-style "
                 "instance and grammar"};
    app.require_subcommand(1);

    // structure
    auto* s = app.add_subcommand("structure", "run the structuring loop over a corpus");
    s->set_config("--config");
    std::string trees_path, entities_path;
    double tau = 0.7;
    std::size_t min_support = 2, max_cycles = 50;
    std::string similarity = "jaccard", keep_tags, conj_tags;
    std::string out_grammar, out_instance, out_metrics;
    bool verbose = false;
    s->add_option("--trees", trees_path, "bracketed trees, one per line")->required();
    s->add_option("--entities", entities_path, "entity TSV (sentence/entity/start/end)")
        ->required();
    s->add_option("--tau", tau, "similarity threshold")->check(CLI::Range(0.0, 1.0));
    s->add_option("--min-support", min_support, "minimum class support for groups");
    s->add_option("--max-cycles", max_cycles, "iteration budget K");
    s->add_option("--similarity", similarity, "jaccard | jaccard-multiset | tree-edit");
    s->add_option("--keep-tags", keep_tags, "comma list of tags exempt from the unary collapse");
    s->add_option("--conj-tags", conj_tags, "comma list of coordination tags");
    s->add_option("--out-grammar", out_grammar, "write the final grammar here");
    s->add_option("--out-instance", out_instance, "write the final instance here");
    s->add_option("--out-metrics", out_metrics, "write the per-iteration CSV here");
    s->add_flag("-v,--verbose", verbose, "print one line per iteration");

    // validate
    auto* v = app.add_subcommand("validate", "validate a grammar against the meta-grammar");
    std::string grammar_path;
    v->add_option("--grammar", grammar_path, "grammar file")->required();

    // extract
    auto* e = app.add_subcommand("extract", "extract the grammar of an instance");
    std::string instance_path, extract_out;
    e->add_option("instance", instance_path, "instance file (bracketed)")->required();
    e->add_option("--out", extract_out, "write the grammar here instead of stdout");

    // generate
    auto* g = app.add_subcommand("generate", "generate a synthetic corpus from a schema");
    std::string schema_path, out_dir;
    std::size_t n_sentences = 100;
    std::uint64_t seed = 0;
    g->add_option("--schema", schema_path, "planted schema file")->required();
    g->add_option("--n", n_sentences, "number of sentences")->required();
    g->add_option("--seed", seed, "random seed")->required();
    g->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (s->parsed())
            return cmd_structure(trees_path, entities_path, tau, min_support, max_cycles,
                                 similarity, keep_tags, conj_tags, out_grammar, out_instance,
                                 out_metrics, verbose);
        if (v->parsed()) return cmd_validate(grammar_path);
        if (e->parsed()) return cmd_extract(instance_path, extract_out);
        if (g->parsed()) return cmd_generate(schema_path, n_sentences, seed, out_dir);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
