#include <doctest.h>

#include <random>

#include "architext/tree.hpp"
#include "helpers.hpp"

using namespace architext;
using test_helpers::instance;

namespace {

Tree example1_tree() {
    // root with child1, child2; child2 has grandchildren1, grandchildren
    Node c1(NodeLabel::syn("child1"));
    Node c2(NodeLabel::syn("child2"),
            {Node(NodeLabel::syn("grandchildren1")), Node(NodeLabel::syn("grandchildren"))});
    return Tree::from_hedge({c1, c2});
}

} // namespace

TEST_CASE("subtree keeps original positions and labels") {
    Tree t = example1_tree();
    Fragment f = subtree(t, Position::parse("1"));
    REQUIRE(f.nodes.size() == 3);
    CHECK(f.nodes.count(Position::parse("1")) == 1);
    CHECK(f.nodes.count(Position::parse("1.0")) == 1);
    CHECK(f.nodes.count(Position::parse("1.1")) == 1);
    CHECK(f.nodes.at(Position::parse("1")) == NodeLabel::syn("child2"));
    CHECK(f.nodes.at(Position::parse("1.0")) == NodeLabel::syn("grandchildren1"));
    CHECK(f.nodes.at(Position::parse("1.1")) == NodeLabel::syn("grandchildren"));
}

TEST_CASE("subtree at the root is the whole tree") {
    Tree t = example1_tree();
    Fragment f = subtree(t, Position::root());
    CHECK(f.nodes.size() == t.size());
    for (const auto& [p, l] : t.nodes()) CHECK(f.nodes.at(p) == l);
}

TEST_CASE("subtree of the first X node of the quotient example") {
    Tree t = instance("(ROOT (X a b) (X b c) (Y a))");
    Fragment f = subtree(t, Position::parse("0"));
    REQUIRE(f.nodes.size() == 3);
    CHECK(f.nodes.at(Position::parse("0")) == NodeLabel::syn("X"));
    CHECK(f.nodes.at(Position::parse("0.0")) == NodeLabel::token("a"));
    CHECK(f.nodes.at(Position::parse("0.1")) == NodeLabel::token("b"));
}

TEST_CASE("subtree rejects positions outside the domain") {
    Tree t = example1_tree();
    CHECK_THROWS_AS(subtree(t, Position::parse("7")), PositionNotInDomain);
}

TEST_CASE("ancestor walks prefixes") {
    Tree t = example1_tree();
    SubTreeRef ref{&t, Position::parse("1")};
    CHECK(ancestor(ref, 1).at == Position::root());
    CHECK(ancestor(ref, 0).at == ref.at);

    Tree deep = instance("(ROOT (A (B (C (D leaf)))))");
    SubTreeRef r2{&deep, Position::parse("0.0.0")};
    CHECK(ancestor(r2, 2).at == Position::parse("0"));
    CHECK_THROWS_AS(ancestor(r2, 4), std::out_of_range);
}

TEST_CASE("splice_children rewrites the child hedge") {
    Tree t = example1_tree();

    SUBCASE("empty hedge leaves a single node") {
        Tree out = splice_children(t, Position::root(), {});
        CHECK(out.size() == 1);
        CHECK(out.label(Position::root()) == NodeLabel::root());
    }
    SUBCASE("permutation preserves the leaf count") {
        Node a = t.to_node(Position::parse("0"));
        Node b = t.to_node(Position::parse("1"));
        Tree out = splice_children(t, Position::root(), {b, a});
        CHECK(out.leaves().size() == t.leaves().size());
        CHECK(out.label(Position::parse("0")) == NodeLabel::syn("child2"));
        CHECK(out.label(Position::parse("1")) == NodeLabel::syn("child1"));
        out.check_invariants();
    }
    SUBCASE("duplicating one child doubles its leaves") {
        Node b = t.to_node(Position::parse("1"));
        std::size_t before = 2; // leaves of child2
        Tree out = splice_children(t, Position::parse("1"), {b, b});
        CHECK(out.leaves().size() == t.leaves().size() - before + 2 * before);
        out.check_invariants();
    }
    SUBCASE("position must be in the domain") {
        CHECK_THROWS_AS(splice_children(t, Position::parse("3.1"), {}), PositionNotInDomain);
    }
}

TEST_CASE("ancestor of a subtree ref round-trips") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Tree t = Tree::from_node(test_helpers::random_tree(rng, 25));
        t.check_invariants();
        for (const auto& [p, _] : t.nodes()) {
            SubTreeRef ref{&t, p};
            for (std::size_t strip = 0; strip <= p.depth(); ++strip)
                CHECK(ancestor(ref, strip).at == p.ancestor(strip));
        }
    }
}

TEST_CASE("splice preserves domain invariants and purity on random trees") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Tree t = Tree::from_node(test_helpers::random_tree(rng, 20));
        auto positions = t.positions();
        Position at = positions[rng() % positions.size()];
        Hedge h;
        for (std::size_t k = rng() % 3; k > 0; --k) h.push_back(Node(NodeLabel::syn("x")));
        Tree before = t;
        Tree out = splice_children(t, at, h);
        out.check_invariants();
        CHECK(t == before);
    }
}
