#include <doctest.h>

#include "architext/corpus.hpp"
#include "architext/pattern.hpp"
#include "helpers.hpp"

using namespace architext;
using test_helpers::instance;

TEST_CASE("rule(0.2) deletes the A sub-tree") {
    // lhs: U[x, A]  ->  rhs: U[x]  with |x| = 2
    Tree t = instance("(ROOT (X C B A) (Y D))");
    RewriteRule rule;
    rule.lhs = Pattern::label_var(
        "U", {Pattern::hedge_var("x"), Pattern::capture(NodeLabel::token("A"))});
    rule.rhs = Pattern::label_var("U", {Pattern::hedge_var("x")});
    rule.guard = [](const Substitution& s) { return s.hedge("x").size() == 2; };

    Tree snapshot = t;
    auto out = apply_rule(t, Position::parse("0"), rule);
    REQUIRE(out.has_value());
    CHECK(*out == instance("(ROOT (X C B) (Y D))"));
    CHECK(t == snapshot); // rewriting is pure
    out->check_invariants();

    SUBCASE("guard can reject") {
        auto none = apply_rule(t, Position::parse("1"), rule); // Y has 1 child
        CHECK(!none.has_value());
    }
}

TEST_CASE("non-matching lhs is a normal no-match") {
    Tree t = instance("(ROOT (X C B A))");
    RewriteRule rule;
    rule.lhs = Pattern::node(NodeLabel::syn("Z"), {Pattern::hedge_var("x")});
    rule.rhs = Pattern::node(NodeLabel::syn("Z"), {});
    CHECK(!apply_rule(t, Position::parse("0"), rule).has_value());
    CHECK(!apply_rule(t, Position::root(), rule).has_value());
}

TEST_CASE("positions outside the sub-tree are untouched") {
    Tree t = instance("(ROOT (X C B A) (Y D) (Z e f))");
    RewriteRule rule;
    rule.lhs = Pattern::label_var(
        "U", {Pattern::hedge_var("x"), Pattern::capture(NodeLabel::token("A"))});
    rule.rhs = Pattern::label_var("U", {Pattern::hedge_var("x")});
    auto out = apply_rule(t, Position::parse("0"), rule);
    REQUIRE(out.has_value());
    for (const auto& [p, l] : t.nodes()) {
        if (Position::parse("0").is_prefix_of(p)) continue;
        CHECK(out->label(p) == l);
    }
}

TEST_CASE("the unnest rewriting rule matches unnest_entities") {
    // One nested entity: ENT_A holding t1, ENT_B(t2), t3.
    Tree t = instance("(ROOT (U (ENT_A t1 (ENT_B t2) t3)))");

    RewriteRule unnest;
    unnest.lhs = Pattern::node(
        NodeLabel::entity("A"),
        {Pattern::hedge_var("z0"),
         Pattern::node(NodeLabel::entity("B"), {Pattern::hedge_var("y0")}),
         Pattern::hedge_var("z1")});
    unnest.rhs = Pattern::node(
        NodeLabel::aux(AuxKind::ER),
        {Pattern::node(NodeLabel::entity("A"),
                       {Pattern::hedge_var("z0"), Pattern::hedge_var("y0"),
                        Pattern::hedge_var("z1")}),
         Pattern::node(NodeLabel::aux(AuxKind::EC),
                       {Pattern::node(NodeLabel::entity("B"), {Pattern::hedge_var("y0")})})});

    auto via_rule = apply_rule(t, Position::parse("0.0"), unnest);
    REQUIRE(via_rule.has_value());
    Tree expected = instance("(ROOT (U (ER (ENT_A t1 t2 t3) (EC (ENT_B t2)))))");
    CHECK(*via_rule == expected);
    CHECK(unnest_entities(t) == expected);
    via_rule->check_invariants();
}

TEST_CASE("a repeated variable must bind the same hedge") {
    RewriteRule rule;
    rule.lhs = Pattern::node(NodeLabel::syn("U"),
                             {Pattern::hedge_var("x"), Pattern::capture(NodeLabel::token("M")),
                              Pattern::hedge_var("x")});
    rule.rhs = Pattern::node(NodeLabel::syn("U"), {Pattern::hedge_var("x")});
    Tree same = instance("(ROOT (U a b M a b))");
    auto out = apply_rule(same, Position::parse("0"), rule);
    REQUIRE(out.has_value());
    CHECK(*out == instance("(ROOT (U a b))"));
    Tree differ = instance("(ROOT (U a b M b a))");
    CHECK(!apply_rule(differ, Position::parse("0"), rule).has_value());
}

TEST_CASE("a captured label re-emits the whole matched sub-tree") {
    Tree t = instance("(ROOT (U (A x y) (B z)))");
    RewriteRule swap;
    swap.lhs = Pattern::node(NodeLabel::syn("U"), {Pattern::capture(NodeLabel::syn("A")),
                                                   Pattern::capture(NodeLabel::syn("B"))});
    swap.rhs = Pattern::node(NodeLabel::syn("U"), {Pattern::capture(NodeLabel::syn("B")),
                                                   Pattern::capture(NodeLabel::syn("A"))});
    auto out = apply_rule(t, Position::parse("0"), swap);
    REQUIRE(out.has_value());
    CHECK(*out == instance("(ROOT (U (B z) (A x y)))"));
}
