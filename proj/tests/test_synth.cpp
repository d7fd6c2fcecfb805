#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "architext/corpus.hpp"
#include "architext/engine.hpp"
#include "architext/metagrammar.hpp"
#include "architext/synth.hpp"
#include "helpers.hpp"

using namespace architext;

namespace {

const char* kSchema =
    "group G0 = dose frequency substance mode\n"
    "group G1 = exam value unit anatomy\n"
    "relation R0 = G0 G1\n"
    "template 2 group G0\n"
    "template 2 group G1\n"
    "template 1 relation R0\n";

} // namespace

TEST_CASE("schema parsing accepts the documented format") {
    PlantedSchema s = parse_schema(kSchema);
    CHECK(s.groups.size() == 2);
    CHECK(s.relations.size() == 1);
    CHECK(s.templates.size() == 3);
    CHECK(s.noise.dropout == 0.0);

    PlantedSchema noisy = parse_schema(std::string(kSchema) +
                                       "noise dropout 0.1\nnoise extra_depth 0 2\nnoise shuffle 0.5\n");
    CHECK(noisy.noise.dropout == doctest::Approx(0.1));
    CHECK(noisy.noise.extra_depth_max == 2);
    CHECK(noisy.noise.shuffle == doctest::Approx(0.5));
}

TEST_CASE("schema parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_schema("group G0 =\n"), ParseError);
    CHECK_THROWS_AS(parse_schema("relation R0 = G0 G1\n"), ParseError); // undefined groups
    CHECK_THROWS_AS(parse_schema("group G0 = a\nrelation R0 = G0 G0\n"), ParseError);
    CHECK_THROWS_AS(parse_schema("group G0 = a\ntemplate 1 group G9\n"), ParseError);
    CHECK_THROWS_AS(parse_schema("group G0 = a\nnoise dropout 1.5\n"), ParseError);
    CHECK_THROWS_AS(parse_schema("group G0 = a\n"), ParseError); // no templates
}

TEST_CASE("generation is byte-for-byte deterministic in the seed") {
    PlantedSchema schema = parse_schema(kSchema);
    GeneratedCorpus a = generate(schema, 40, 42);
    GeneratedCorpus b = generate(schema, 40, 42);
    CHECK(a.trees_text == b.trees_text);
    CHECK(a.entities_text == b.entities_text);
    CHECK(write_grammar(a.ground_truth) == write_grammar(b.ground_truth));

    GeneratedCorpus c = generate(schema, 40, 43);
    CHECK(a.trees_text != c.trees_text);
}

TEST_CASE("the ground truth validates and accepts the canonical instance") {
    PlantedSchema schema =
        parse_schema(std::string(kSchema) + "noise dropout 0.15\nnoise extra_depth 0 1\n");
    GeneratedCorpus corpus = generate(schema, 60, 9);
    ValidationReport report = validate(corpus.ground_truth);
    CHECK(report.valid);
    CHECK(accepts(corpus.ground_truth, corpus.canonical_instance, true));
}

TEST_CASE("annotations agree with the emitted sentences") {
    PlantedSchema schema = parse_schema(std::string(kSchema) + "noise extra_depth 1 2\n");
    GeneratedCorpus corpus = generate(schema, 25, 5);
    auto dir = std::filesystem::temp_directory_path();
    auto trees = dir / "synth_trees.txt";
    auto ents = dir / "synth_ents.tsv";
    std::ofstream(trees) << corpus.trees_text;
    std::ofstream(ents) << corpus.entities_text;
    // every annotation is in range and names a real token span
    Tree merged = read_corpus(trees.string(), ents.string(), {});
    CHECK(merged.child_count(Position::root()) == 25);
    // and the enrichment pipeline consumes it whole
    Tree enriched = ingest(trees.string(), ents.string(), {});
    CHECK(enriched.size() > 1);
}

TEST_CASE("a uniform corpus forms one full-support class of phrases") {
    PlantedSchema schema = parse_schema(
        "group G0 = alpha beta gamma\ntemplate 1 group G0\n");
    GeneratedCorpus corpus = generate(schema, 10, 21);
    auto dir = std::filesystem::temp_directory_path();
    auto trees = dir / "uniform_trees.txt";
    auto ents = dir / "uniform_ents.tsv";
    std::ofstream(trees) << corpus.trees_text;
    std::ofstream(ents) << corpus.entities_text;
    Tree t = ingest(trees.string(), ents.string(), {});
    REQUIRE(t.child_count(Position::root()) == 10);
    EquivContext ctx = EquivContext::compute(t, SimParams{});
    std::size_t block = ctx.partition.block_of(Position::parse("0"));
    // every sentence's phrase node lands in the same class
    for (std::uint32_t i = 0; i < 10; ++i)
        CHECK(ctx.partition.block_of(Position(std::vector<std::uint32_t>{i})) == block);
    CHECK(support(t, ctx.partition, block) >= 10);
}

TEST_CASE("a one-sentence corpus round-trips through ingest") {
    PlantedSchema schema = parse_schema(kSchema);
    GeneratedCorpus corpus = generate(schema, 1, 3);
    auto dir = std::filesystem::temp_directory_path();
    auto trees = dir / "one_trees.txt";
    auto ents = dir / "one_ents.tsv";
    std::ofstream(trees) << corpus.trees_text;
    std::ofstream(ents) << corpus.entities_text;
    Tree t = ingest(trees.string(), ents.string(), {});
    CHECK(t.child_count(Position::root()) >= 1);
    CHECK(!entity_signature(t).empty());
}

TEST_CASE("the seeded dropout pipeline is a frozen regression") {
    // 4 groups, 2 relations, 100 sentences, 10% dropout, seed 42: recorded
    // once and pinned. The run ends valid after 4 iterations with 5 rules.
    PlantedSchema schema = parse_schema(
        "group G0 = dose frequency substance mode\n"
        "group G1 = exam value unit anatomy\n"
        "group G2 = sosy severity localization moment\n"
        "group G3 = treatment duration pathology genre\n"
        "relation R0 = G0 G1\n"
        "relation R1 = G2 G3\n"
        "template 2 group G0\ntemplate 2 group G1\ntemplate 2 group G2\ntemplate 2 group G3\n"
        "template 1 relation R0\ntemplate 1 relation R1\n"
        "noise dropout 0.1\n");
    GeneratedCorpus corpus = generate(schema, 100, 42);
    auto dir = std::filesystem::temp_directory_path();
    auto trees = dir / "pin_trees.txt";
    auto ents = dir / "pin_ents.tsv";
    std::ofstream(trees) << corpus.trees_text;
    std::ofstream(ents) << corpus.entities_text;
    Tree t = ingest(trees.string(), ents.string(), {});

    StructuringConfig cfg; // defaults
    auto res = structure(t, cfg);
    CHECK(res.valid);
    CHECK(res.iterations_used == 4);
    CHECK(res.grammar.rules.size() == 5);
    CHECK(res.logs.front().metrics.nb_prod == 18);
    CHECK(res.logs.front().metrics.nb_unlabelled == 138);
    CHECK(res.logs.back().metrics.nb_unlabelled == 0);
}
