#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "architext/grammar.hpp"
#include "helpers.hpp"

using namespace architext;
namespace fs = std::filesystem;

namespace {

const char* kCli = ARCHITEXT_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    fs::path out = fs::temp_directory_path() / "cli_stdout.txt";
    std::string cmd = std::string(kCli) + " " + args + " > " + out.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(rc), buf.str()};
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("validate exits 0 on valid, 1 on invalid, 2 on garbage") {
    auto good = write_file("cli_good.grammar",
                           "ROOT -> COLL_1\nCOLL_1 -> REL_1+\nREL_1 -> GROUP_1 GROUP_2\n"
                           "GROUP_1 -> ENT_1 ENT_2\nGROUP_2 -> ENT_3\n");
    CHECK(run("validate --grammar " + good.string()).exit_code == 0);

    auto bad = write_file("cli_bad.grammar",
                          "ROOT -> COLL_1\nCOLL_1 -> REL_1+\nREL_1 -> GROUP_1\n"
                          "GROUP_1 -> ENT_1 ENT_2\n");
    RunResult r = run("validate --grammar " + bad.string());
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("meta-rule 16") != std::string::npos);

    auto garbage = write_file("cli_garbage.grammar", "this is not a grammar\n");
    CHECK(run("validate --grammar " + garbage.string()).exit_code == 2);
}

TEST_CASE("extract prints the grammar of an instance") {
    auto inst = write_file("cli_instance.txt", "(ROOT (X (a) (b)) (X (b) (c)) (Y (a)))\n");
    RunResult r = run("extract " + inst.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text == "ROOT -> X+ Y\nX -> a b c\nY -> a\n");

    auto single = write_file("cli_single.txt", "(ROOT)\n");
    RunResult r2 = run("extract " + single.string());
    CHECK(r2.exit_code == 0);
    CHECK(r2.stdout_text.empty());

    auto broken = write_file("cli_broken.txt", "(X (Y\n");
    CHECK(run("extract " + broken.string()).exit_code == 2);
}

TEST_CASE("structure recovers the reference shape from a toy corpus") {
    auto trees = write_file("cli_toy_trees.txt",
                            "(S (NG (AA t1) (AA t2)) (NG (BB t3)))\n"
                            "(S (NG (AA u1) (AA u2)) (NG (BB u3)))\n"
                            "(S (NG (AA v1) (AA v2)) (NG (BB v3)))\n");
    auto ents = write_file("cli_toy_ents.tsv",
                           "sentence\tentity\tstart\tend\n"
                           "0\te1\t0\t0\n0\te2\t1\t1\n0\te3\t2\t2\n"
                           "1\te1\t0\t0\n1\te2\t1\t1\n1\te3\t2\t2\n"
                           "2\te1\t0\t0\n2\te2\t1\t1\n2\te3\t2\t2\n");
    fs::path grammar_out = fs::temp_directory_path() / "cli_toy.grammar";
    RunResult r = run("structure --trees " + trees.string() + " --entities " + ents.string() +
                      " --keep-tags NG --out-grammar " + grammar_out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("grammar: valid") != std::string::npos);

    // same structure as the reference grammar, up to renaming
    CondensedGrammar got = parse_grammar(slurp(grammar_out));
    CondensedGrammar want = parse_grammar(
        "ROOT -> COLL_1\nCOLL_1 -> REL_1+\nREL_1 -> GROUP_1 GROUP_2\n"
        "GROUP_1 -> ENT_e1 ENT_e2\nGROUP_2 -> ENT_e3\n");
    CHECK(test_helpers::canonicalize(got) == test_helpers::canonicalize(want));
}

TEST_CASE("structure of an empty corpus is valid and empty") {
    auto trees = write_file("cli_empty_trees.txt", "# empty corpus\n");
    auto ents = write_file("cli_empty_ents.tsv", "sentence\tentity\tstart\tend\n");
    fs::path grammar_out = fs::temp_directory_path() / "cli_empty.grammar";
    RunResult r = run("structure --trees " + trees.string() + " --entities " + ents.string() +
                      " --out-grammar " + grammar_out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("iterations: 0") != std::string::npos);
    CHECK(slurp(grammar_out).empty());
}

TEST_CASE("structure reports I/O problems with exit 2") {
    CHECK(run("structure --trees /nonexistent.txt --entities /nonexistent.tsv").exit_code == 2);
}

TEST_CASE("generate writes a corpus that validates") {
    auto schema = write_file("cli_schema.txt",
                             "group G0 = a b c\ngroup G1 = d e f\nrelation R0 = G0 G1\n"
                             "template 2 group G0\ntemplate 2 group G1\ntemplate 1 relation R0\n");
    fs::path dir = fs::temp_directory_path() / "cli_gen";
    RunResult r = run("generate --schema " + schema.string() + " --n 20 --seed 5 --out " +
                      dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "trees.txt"));
    CHECK(fs::exists(dir / "entities.tsv"));
    CHECK(run("validate --grammar " + (dir / "grammar.txt").string()).exit_code == 0);

    // structure the generated corpus end to end
    RunResult s = run("structure --trees " + (dir / "trees.txt").string() + " --entities " +
                      (dir / "entities.tsv").string());
    CHECK(s.exit_code == 0);
}

TEST_CASE("a config file supplies defaults that flags override") {
    auto trees = write_file("cli_cfg_trees.txt",
                            "(S (NG (AA t1) (AA t2)) (NG (BB t3)))\n"
                            "(S (NG (AA u1) (AA u2)) (NG (BB u3)))\n");
    auto ents = write_file("cli_cfg_ents.tsv",
                           "sentence\tentity\tstart\tend\n"
                           "0\te1\t0\t0\n0\te2\t1\t1\n0\te3\t2\t2\n"
                           "1\te1\t0\t0\n1\te2\t1\t1\n1\te3\t2\t2\n");
    auto cfg = write_file("cli_cfg.ini", "tau=0.6\nmin-support=2\nkeep-tags=NG\n");
    RunResult r = run("structure --config " + cfg.string() + " --trees " + trees.string() +
                      " --entities " + ents.string());
    CHECK(r.exit_code == 0);
}

TEST_CASE("alternative similarity kinds run end to end") {
    auto trees = write_file("cli_sim_trees.txt",
                            "(S (NG (AA t1) (AA t2)) (NG (BB t3)))\n"
                            "(S (NG (AA u1) (AA u2)) (NG (BB u3)))\n"
                            "(S (NG (AA v1) (AA v2)) (NG (BB v3)))\n");
    auto ents = write_file("cli_sim_ents.tsv",
                           "sentence\tentity\tstart\tend\n"
                           "0\te1\t0\t0\n0\te2\t1\t1\n0\te3\t2\t2\n"
                           "1\te1\t0\t0\n1\te2\t1\t1\n1\te3\t2\t2\n"
                           "2\te1\t0\t0\n2\te2\t1\t1\n2\te3\t2\t2\n");
    for (const char* kind : {"jaccard-multiset", "tree-edit"}) {
        RunResult r = run("structure --trees " + trees.string() + " --entities " + ents.string() +
                          " --keep-tags NG --similarity " + std::string(kind));
        CHECK(r.exit_code == 0);
    }
    CHECK(run("structure --trees " + trees.string() + " --entities " + ents.string() +
              " --similarity bogus")
              .exit_code == 2);
}
