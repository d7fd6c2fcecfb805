#include <doctest.h>

#include <queue>
#include <random>

#include "architext/similarity.hpp"
#include "helpers.hpp"

using namespace architext;
using test_helpers::instance;

namespace {

// Independent oracle: connected components of the thresholded graph by
// breadth-first search.
std::vector<std::vector<std::size_t>> closure_oracle(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& s, double tau) {
    std::vector<int> comp(n, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        std::vector<std::size_t> block;
        std::queue<std::size_t> q;
        q.push(i);
        comp[i] = static_cast<int>(out.size());
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            block.push_back(u);
            for (std::size_t v = 0; v < n; ++v) {
                if (comp[v] >= 0 || v == u) continue;
                if ((u < v ? s(u, v) : s(v, u)) >= tau) {
                    comp[v] = comp[i];
                    q.push(v);
                }
            }
        }
        std::sort(block.begin(), block.end());
        out.push_back(std::move(block));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::size_t>> sorted_blocks(std::vector<std::vector<std::size_t>> b) {
    for (auto& x : b) std::sort(x.begin(), x.end());
    std::sort(b.begin(), b.end());
    return b;
}

} // namespace

TEST_CASE("contextual similarity pins the worked example at 0.94") {
    // lambda -> CONJ -> NP -> X, so the X pair sits at depth 3 and the
    // levels X, NP, CONJ, root carry weights 1, 1/2, 1/3, 1/4.
    Tree t = instance(
        "(ROOT (CONJ (NP (X (ENT_VALUE 500) (ENT_UNIT mg)) (ENT_DRUG Paracetamol)) "
        "(NP (X (ENT_VALUE 200) (ENT_UNIT mg)) (ENT_FREQ every_day))))");
    Position x1 = Position::parse("0.0.0");
    Position x2 = Position::parse("0.1.0");

    // Per-level base similarities of the example: 1 at the X level, 0.75 at
    // the NP level, 1 above.
    SimilarityFn f = SimilarityFn::make_custom([](const SubTreeRef& a, const SubTreeRef& b) {
        return a.at.depth() == 2 && b.at.depth() == 2 ? 0.75 : 1.0;
    });
    double s = sim(SubTreeRef{&t, x1}, SubTreeRef{&t, x2}, f);
    CHECK(s == doctest::Approx(0.94).epsilon(0.001));
}

TEST_CASE("level weights are harmonic over the shared ancestry range") {
    Tree t = instance("(ROOT (A (B (C (X x)))) (A (B (C (X y)))))");
    // f contributes 1 at level 0 and 0 at levels 1-2; the shared root at
    // level 3 is identical on both sides, so it scores 1 axiomatically.
    // The denominator is the full harmonic sum over levels 0..3.
    SimilarityFn f = SimilarityFn::make_custom([](const SubTreeRef& a, const SubTreeRef& b) {
        return a.at.depth() == 3 && b.at.depth() == 3 ? 1.0 : 0.0;
    });
    double s = sim(SubTreeRef{&t, Position::parse("0.0.0")},
                   SubTreeRef{&t, Position::parse("1.0.0")}, f);
    CHECK(s == doctest::Approx((1.0 + 0.25) / (1.0 + 0.5 + 1.0 / 3.0 + 0.25)));
}

TEST_CASE("similarity of a sub-tree with itself is 1") {
    Tree t = instance("(ROOT (S (ENT_A x) (ENT_B y)) (S (ENT_A z)))");
    for (const auto& [p, _] : t.nodes()) {
        SubTreeRef r{&t, p};
        CHECK(sim(r, r, SimilarityFn::jaccard()) == doctest::Approx(1.0));
    }
    SubTreeRef root{&t, Position::root()};
    CHECK(sim(root, root, SimilarityFn::jaccard()) == doctest::Approx(1.0));
}

TEST_CASE("jaccard on entity names") {
    Tree t = instance(
        "(ROOT (NP (ENT_VALUE 500) (ENT_UNIT mg) (ENT_DRUG p)) "
        "(NP (ENT_VALUE 200) (ENT_UNIT mg) (ENT_FREQ daily)) "
        "(NP (ENT_VALUE 1) (ENT_UNIT g) (ENT_DRUG q)) "
        "(X plain) (Y word))");
    SubTreeRef np1{&t, Position::parse("0")}, np2{&t, Position::parse("1")},
        np3{&t, Position::parse("2")}, x{&t, Position::parse("3")}, y{&t, Position::parse("4")};
    // {VALUE,UNIT,DRUG} vs {VALUE,UNIT,FREQ}: plain Jaccard gives 2/4.
    CHECK(jaccard_entity_names(np1, np2) == doctest::Approx(0.5));
    CHECK(jaccard_entity_names(np1, np3) == doctest::Approx(1.0)); // identical name sets
    CHECK(jaccard_entity_names(x, y) == doctest::Approx(1.0));     // both empty
    CHECK(jaccard_entity_names(x, np1) == doctest::Approx(0.0));   // empty vs non-empty
    Tree u = instance("(ROOT (A (ENT_P x)) (B (ENT_Q y)))");
    CHECK(jaccard_entity_names(SubTreeRef{&u, Position::parse("0")},
                               SubTreeRef{&u, Position::parse("1")}) == doctest::Approx(0.0));
}

TEST_CASE("symmetry and bounds hold on random trees") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        Tree t = Tree::from_node(test_helpers::random_tree(rng, 20));
        auto pos = t.positions();
        for (int k = 0; k < 10; ++k) {
            SubTreeRef a{&t, pos[rng() % pos.size()]};
            SubTreeRef b{&t, pos[rng() % pos.size()]};
            for (auto f : {SimilarityFn::jaccard(), SimilarityFn::label_multiset(),
                           SimilarityFn::tree_edit()}) {
                double s1 = sim(a, b, f), s2 = sim(b, a, f);
                CHECK(s1 == doctest::Approx(s2));
                CHECK(s1 >= 0.0);
                CHECK(s1 <= 1.0);
            }
        }
    }
}

TEST_CASE("tree edit similarity counts one rename") {
    Tree t = instance("(ROOT (A a b) (A a c))");
    double s = base_similarity(SubTreeRef{&t, Position::parse("0")},
                               SubTreeRef{&t, Position::parse("1")},
                               SimilarityFn::tree_edit());
    CHECK(s == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("single-link cut matches the three-threshold narrative") {
    // s(a,b)=0.4, s(b,c)=0.2, s(c,d)=0.8, s(d,e)=0.6, everything else 0.1
    auto s = [](std::size_t i, std::size_t j) {
        if (i == 0 && j == 1) return 0.4;
        if (i == 1 && j == 2) return 0.2;
        if (i == 2 && j == 3) return 0.8;
        if (i == 3 && j == 4) return 0.6;
        return 0.1;
    };
    using Blocks = std::vector<std::vector<std::size_t>>;
    CHECK(sorted_blocks(cluster_matrix(5, s, 0.3)) == Blocks{{0, 1}, {2, 3, 4}});
    CHECK(sorted_blocks(cluster_matrix(5, s, 0.5)) == Blocks{{0}, {1}, {2, 3, 4}});
    CHECK(sorted_blocks(cluster_matrix(5, s, 0.7)) == Blocks{{0}, {1}, {2, 3}, {4}});
    CHECK(sorted_blocks(cluster_matrix(5, s, 0.0)) == Blocks{{0, 1, 2, 3, 4}});
    CHECK(sorted_blocks(cluster_matrix(5, s, 1.0)) == Blocks{{0}, {1}, {2}, {3}, {4}});
}

TEST_CASE("clustering equals the brute-force transitive closure") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 100; ++round) {
        std::size_t n = 2 + rng() % 18;
        std::vector<double> m(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                m[i * n + j] = double(rng() % 1000) / 999.0;
        auto s = [&](std::size_t i, std::size_t j) { return m[i * n + j]; };
        double tau1 = double(rng() % 1000) / 999.0;
        double tau2 = std::min(1.0, tau1 + double(rng() % 300) / 999.0);
        auto c1 = cluster_matrix(n, s, tau1);
        CHECK(sorted_blocks(c1) == closure_oracle(n, s, tau1));
        // monotonicity: the partition at tau2 >= tau1 refines the one at tau1
        auto c2 = cluster_matrix(n, s, tau2);
        std::vector<std::size_t> coarse(n);
        for (std::size_t b = 0; b < c1.size(); ++b)
            for (std::size_t x : c1[b]) coarse[x] = b;
        for (const auto& block : c2) {
            for (std::size_t x : block) CHECK(coarse[x] == coarse[block.front()]);
        }
    }
}

TEST_CASE("equivalence_classes yields a valid partition of the scope") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 30; ++round) {
        Tree t = Tree::from_node(test_helpers::random_tree(rng, 18));
        std::vector<Position> scope;
        for (const auto& [p, _] : t.nodes())
            if (!t.is_leaf(p)) scope.push_back(p);
        SimParams params{SimilarityFn::label_multiset(), 0.5};
        Partition part = equivalence_classes(t, scope, params);
        std::size_t covered = 0;
        for (const auto& block : part.blocks) {
            CHECK(!block.empty());
            covered += block.size();
        }
        CHECK(covered == scope.size());
        for (const auto& p : scope) CHECK(part.covers(p));
    }
}

TEST_CASE("the engine evaluator agrees with the direct formula") {
    std::mt19937_64 rng(43);
    for (int round = 0; round < 20; ++round) {
        Tree t = Tree::from_node(test_helpers::random_tree(rng, 16));
        for (auto f : {SimilarityFn::jaccard(), SimilarityFn::label_multiset(),
                       SimilarityFn::tree_edit()}) {
            SimEngine engine(t, f);
            auto pos = t.positions();
            for (int k = 0; k < 8; ++k) {
                Position a = pos[rng() % pos.size()], b = pos[rng() % pos.size()];
                CHECK(engine.sim_positions(a, b) ==
                      doctest::Approx(sim(SubTreeRef{&t, a}, SubTreeRef{&t, b}, f)));
            }
        }
    }
}

TEST_CASE("label_classes partitions by exact label") {
    Tree t = instance("(ROOT (X a b) (X b c) (Y a))");
    Partition p = label_classes(t);
    auto block = [&](const char* pos) { return p.blocks[p.block_of(Position::parse(pos))]; };
    CHECK(block("e") == std::vector<Position>{Position::root()});
    CHECK(block("0") == std::vector<Position>{Position::parse("0"), Position::parse("1")});
    CHECK(block("2") == std::vector<Position>{Position::parse("2")});
    CHECK(block("0.0") == std::vector<Position>{Position::parse("0.0"), Position::parse("2.0")});
    CHECK(block("0.1") == std::vector<Position>{Position::parse("0.1"), Position::parse("1.0")});
    CHECK(block("1.1") == std::vector<Position>{Position::parse("1.1")});
    CHECK(p.blocks.size() == 6);

    SUBCASE("single node tree has a single block") {
        Tree u;
        CHECK(label_classes(u).blocks.size() == 1);
    }
    SUBCASE("all-distinct labels give singletons") {
        Tree u = instance("(ROOT (A x) (B y))");
        Partition q = label_classes(u);
        for (const auto& b : q.blocks) CHECK(b.size() == 1);
    }
}
