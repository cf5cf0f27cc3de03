#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "refstore/equiv.hpp"
#include "refstore/laws.hpp"
#include "refstore/rewrite.hpp"

using namespace refstore;

namespace {

RuleErrorKind errorKind(const std::function<void()> &f) {
    try {
        f();
    } catch (const RuleError &e) {
        return e.kind();
    }
    FAIL("expected a RuleError");
    return RuleErrorKind::UnknownRule;
}

const IsoWitness kNeg{mkNegFn(), mkNegFn()};

}  // namespace

TEST_CASE("the catalogue") {
    auto &rs = ruleSet();
    std::set<std::string> names;
    for (auto &r : rs) {
        CHECK(names.insert(r.name).second);
        CHECK_FALSE(r.origin.empty());
        CHECK_FALSE(r.summary.empty());
    }
    for (const char *n : {"set-get", "alloc-set", "set-set", "get-get-commute", "get-set", "get-discard", "rec-unfold",
                          "bind-left-unit", "bind-right-unit", "bind-assoc", "step-central", "alloc-permute",
                          "rep-indep", "beta", "eta"})
        CHECK(names.count(n));
    const Rule &ss = findRule("set-set");
    CHECK(matchPattern(parseTerm("set ?e ?a; set ?e ?b"), parseTerm("set l 1; set l 2")).has_value());
    CHECK(alphaEq(applyRule(parseTerm("l <- alloc 0; set l 1; set l 2"), "set-set", {1}),
                  parseTerm("l <- alloc 0; set l 2")));
    CHECK(ss.summary == "set ?r ?a; set ?r ?b  ==  set ?r ?b");
    CHECK_THROWS_AS(findRule("no-such-rule"), RuleError);
}

TEST_CASE("alloc-permute works at any ground types") {
    Context ctx;
    ctx.metas = {{"e", tInt()}, {"f", tProd(tUnit(), tInt())}};
    const Rule &r = findRule("alloc-permute");
    auto t = tComp(tProd(tRef(tInt()), tRef(tProd(tUnit(), tInt()))));
    CHECK(typeEq(infer(ctx, r.lhs), t));
    CHECK(typeEq(infer(ctx, r.rhs), t));
}

TEST_CASE("schematic rules check at a common type") {
    Context ctx;
    ctx.metas = {{"r", tRef(tInt())}, {"s", tRef(tUnit())}, {"v", tInt()}, {"a", tInt()}, {"b", tInt()},
                 {"e", tInt()}, {"k", tComp(tInt())}, {"m", tComp(tInt())}, {"n", tComp(tInt())},
                 {"f", tFn(tInt(), tInt())}, {"p", tProd(tInt(), tUnit())}, {"c", tInt()}};
    for (auto &r : ruleSet()) {
        if (r.isBuiltin() || r.name == "alloc-permute") continue;
        INFO(r.name);
        auto l = tryInfer(ctx, r.lhs), rt = tryInfer(ctx, r.rhs);
        REQUIRE(l);
        REQUIRE(rt);
        CHECK(typeEq(*l, *rt));
    }
}

TEST_CASE("applying store laws") {
    auto t = parseTerm("r <- alloc 1; set r 5; get r");
    CHECK(alphaEq(applyRule(t, "set-get", {1}), parseTerm("r <- alloc 1; step; set r 5; ret 5")));
    auto back = applyRule(applyRule(t, "set-get", {1}), "set-get", {1}, {}, Direction::RightToLeft);
    CHECK(alphaEq(back, t));
    CHECK(errorKind([&] { applyRule(t, "set-get", {0}); }) == RuleErrorKind::NoMatch);
    CHECK(errorKind([&] { applyRule(t, "set-get", {5, 1}); }) == RuleErrorKind::NoMatch);
    CHECK(errorKind([&] { applyRule(t, "nope", {1}); }) == RuleErrorKind::UnknownRule);
}

TEST_CASE("a metavariable cannot capture a variable the rule would unbind") {
    // get-discard may only drop a read whose result is unused
    auto t = parseTerm("r <- alloc 1; x <- get r; ret x");
    CHECK(errorKind([&] { applyRule(t, "get-discard", {1}); }) == RuleErrorKind::NoMatch);
    auto u = parseTerm("r <- alloc 1; x <- get r; ret 3");
    CHECK(alphaEq(applyRule(u, "get-discard", {1}), parseTerm("r <- alloc 1; step; ret 3")));
}

TEST_CASE("right-hand binders avoid capturing free variables") {
    auto t = parseTerm("x <- alloc 0; step; get x");
    auto r = applyRule(t, "step-central", {1});
    CHECK(alphaEq(r, parseTerm("x <- alloc 0; y <- get x; step; ret y")));
    CHECK(freeVars(r).empty());
}

TEST_CASE("rules that need explicit bindings") {
    auto t = parseTerm("l <- alloc 0; set l 2");
    CHECK(errorKind([&] { applyRule(t, "set-set", {1}, {}, Direction::RightToLeft); }) == RuleErrorKind::BadBinding);
    auto r = applyRule(t, "set-set", {1}, {{"a", mkInt(7)}}, Direction::RightToLeft);
    CHECK(alphaEq(r, parseTerm("l <- alloc 0; set l 7; set l 2")));
    CHECK(errorKind([&] { applyRule(t, "set-set", {1}, {{"b", mkInt(3)}, {"a", mkInt(1)}}, Direction::RightToLeft); }) ==
          RuleErrorKind::BadBinding);
}

TEST_CASE("built-in rules") {
    CHECK(alphaEq(applyRule(parseTerm("(rec f (x : Int) : Int. ret x) 9"), "rec-unfold", {}), parseTerm("step; ret 9")));
    CHECK(alphaEq(applyRule(parseTerm("x <- ret 3; ret (x + x)"), "bind-left-unit", {}), parseTerm("ret (3 + 3)")));
    CHECK(alphaEq(applyRule(parseTerm("ret (3 + 3)"), "arith-fold", {0}), parseTerm("ret 6")));
    auto back = applyRule(parseTerm("ret 6"), "bind-left-unit", {}, {{"result", parseTerm("y <- ret 6; ret y")}},
                          Direction::RightToLeft);
    CHECK(alphaEq(back, parseTerm("y <- ret 6; ret y")));
    CHECK(errorKind([&] {
              applyRule(parseTerm("ret 6"), "bind-left-unit", {}, {{"result", parseTerm("y <- ret 5; ret y")}},
                        Direction::RightToLeft);
          }) == RuleErrorKind::NoMatch);
}

TEST_CASE("type regressions are refused") {
    CHECK_NOTHROW(applyRule(parseTerm("ret 1"), "fst-beta", {0}, {{"b", mkUnit()}}, Direction::RightToLeft));
    CHECK(errorKind([&] {
              applyRule(parseTerm("ret 1"), "fst-beta", {0}, {{"b", parseTerm("get 3")}}, Direction::RightToLeft);
          }) == RuleErrorKind::TypeRegression);
}

TEST_CASE("representation independence on the positive counter") {
    auto pos = testutil::corpusTerm("posCounter.ref");
    auto r = applyRule(pos, "rep-indep", {}, {}, Direction::LeftToRight, &kNeg);
    auto expected = parseTerm(
        "l <- alloc (neg 0); ret {incr -> i <- map neg (get l); set l (neg (i + 1)), read -> map neg (get l)}");
    CHECK(alphaEq(r, expected));
    CHECK(errorKind([&] { applyRule(pos, "rep-indep", {}); }) == RuleErrorKind::UndischargedObligation);
    IsoWitness bad{parseTerm("fun (x : Int) -> x + 1"), parseTerm("fun (x : Int) -> x + 1")};
    CHECK(errorKind([&] { applyRule(pos, "rep-indep", {}, {}, Direction::LeftToRight, &bad); }) ==
          RuleErrorKind::UndischargedObligation);
    // a cell that escapes its interface cannot be re-represented
    auto leaky = parseTerm("l <- alloc 0; ret l");
    CHECK(errorKind([&] { applyRule(leaky, "rep-indep", {}, {}, Direction::LeftToRight, &kNeg); }) ==
          RuleErrorKind::NoMatch);
}

TEST_CASE("iso obligations") {
    auto ok = checkIso(kNeg, tInt(), tInt());
    CHECK(ok.forwardThenBack == "normalization");
    CHECK(ok.backThenForward == "normalization");
    try {
        checkIso({parseTerm("fun (x : Int) -> x + 1"), parseTerm("fun (x : Int) -> x + 1")}, tInt(), tInt());
        FAIL("expected ObligationFailed");
    } catch (const ObligationFailed &e) {
        REQUIRE(e.counterexample());
        CHECK(valueEq(e.counterexample(), vInt(0)));
    }
    auto shift = checkIso({parseTerm("fun (x : Int) -> x + 1"), parseTerm("fun (x : Int) -> x - 1")}, tInt(), tInt());
    CHECK(shift.forwardThenBack == "normalization");
    auto swap = checkIso({parseTerm("fun (p : Int * Unit) -> (snd p, fst p)"), parseTerm("fun (p : Unit * Int) -> (snd p, fst p)")},
                         tProd(tInt(), tUnit()), tProd(tUnit(), tInt()));
    CHECK(swap.forwardThenBack == "normalization");
    CHECK_THROWS_AS(checkIso(kNeg, tUnit(), tUnit()), TypeError);
}

TEST_CASE("every rule application preserves the type") {
    LawSuiteOptions opts;
    for (auto &rule : ruleSet()) {
        Rng rng(77);
        for (int i = 0; i < 30; ++i) {
            auto inst = genLawInstance(rule.name, rng);
            INFO(rule.name << ": " << print(inst.program));
            TermPtr out;
            REQUIRE_NOTHROW(out = applyRule(inst.program, rule.name, inst.site, {}, Direction::LeftToRight,
                                            inst.iso ? &*inst.iso : nullptr));
            CHECK(typeEq(infer({}, out), infer({}, inst.program)));
        }
    }
}

TEST_CASE("schematic rules run backwards to where they started") {
    Rng rng(99);
    for (auto &rule : ruleSet()) {
        if (rule.isBuiltin()) continue;
        for (int i = 0; i < 20; ++i) {
            auto inst = genLawInstance(rule.name, rng);
            INFO(rule.name << ": " << print(inst.program));
            auto fwd = applyRule(inst.program, rule.name, inst.site);
            // metavariables that the right-hand side drops are supplied from the forward match
            auto m = matchPattern(rule.lhs, subtermAt(inst.program, inst.site));
            REQUIRE(m);
            Bindings b;
            for (auto &v : metaVars(rule.lhs))
                if (!metaVars(rule.rhs).count(v)) b[v] = m->at(v);
            auto back = applyRule(fwd, rule.name, inst.site, b, Direction::RightToLeft);
            CHECK(alphaEq(back, inst.program));
        }
    }
}
