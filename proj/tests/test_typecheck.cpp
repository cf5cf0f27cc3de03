#include <doctest.h>

#include "helpers.hpp"
#include "refstore/equiv.hpp"
#include "refstore/laws.hpp"
#include "refstore/typecheck.hpp"

using namespace refstore;

TEST_CASE("typing of the store operations") {
    CHECK(typeEq(infer({}, mkStep()), tComp(tUnit())));
    CHECK(typeEq(infer({}, mkAlloc(mkInt(0))), tComp(tRef(tInt()))));
    Context ctx{{"l", tRef(tInt())}};
    CHECK(typeEq(infer(ctx, parseTerm("get l")), tComp(tInt())));
    CHECK(typeEq(infer(ctx, parseTerm("set l 3")), tComp(tUnit())));
    CHECK(typeEq(infer({}, parseTerm("(rec f (x : Int) : Int. ret x)")), tFn(tInt(), tComp(tInt()))));
}

TEST_CASE("the counters have the counter type") {
    auto counter = parseType("T {incr : T Unit, read : T Int}");
    CHECK(typeEq(infer({}, testutil::corpusTerm("posCounter.ref")), counter));
    CHECK(typeEq(infer({}, testutil::corpusTerm("negCounter.ref")), counter));
}

TEST_CASE("check against an expected type") {
    CHECK_NOTHROW(check({}, mkRet(mkUnit()), tComp(tUnit())));
    CHECK_THROWS_AS(check({}, mkStep(), tComp(tInt())), TypeError);
}

TEST_CASE("ill-typed terms are rejected with a rule and path") {
    CHECK_THROWS_AS(infer({}, parseTerm("get 3")), TypeError);
    CHECK_THROWS_AS(infer({}, parseTerm("x")), TypeError);
    CHECK_THROWS_AS(infer({}, parseTerm("ret (1 + ())")), TypeError);
    try {
        infer({}, parseTerm("l <- alloc 0; set l ()"));
        FAIL("expected a type error");
    } catch (const TypeError &e) {
        CHECK(e.path() == Path{1, 1});
    }
}

TEST_CASE("ambiguous terms are reported, not guessed") {
    CHECK_THROWS_AS(infer({}, parseTerm("fun x -> ret x")), TypeError);
    CHECK(typeEq(infer({}, parseTerm("(fun x -> ret x) 3")), tComp(tInt())));
}

TEST_CASE("elaboration fills in cell types") {
    auto e = elaborate({}, parseTerm("l <- alloc (1, ()); ret l"));
    auto &b = std::get<tm::Bind>(e.term->node);
    auto &a = std::get<tm::Alloc>(b.first->node);
    REQUIRE(a.tag);
    CHECK(typeEq(a.tag, tProd(tInt(), tUnit())));
}

TEST_CASE("both sides of the univalent rules typecheck at their stated types") {
    Rng rng(3);
    TermGen g(rng);
    for (int i = 0; i < 20; ++i) {
        TypePtr sigma = g.groundType(2), tau = g.groundType(2);
        Context ctx{{"e", sigma}, {"e2", tau}, {"fp", tFn(sigma, tau)}, {"fm", tFn(tau, sigma)}};
        auto perm = tComp(tProd(tRef(sigma), tRef(tau)));
        CHECK(typeEq(infer(ctx, parseTerm("l <- alloc e; k <- alloc e2; ret (l, k)")), perm));
        CHECK(typeEq(infer(ctx, parseTerm("k <- alloc e2; l <- alloc e; ret (l, k)")), perm));
        CHECK(typeEq(infer(ctx, parseTerm("l <- alloc e; ret (get l, fun x -> set l x)")), tComp(tCell(sigma))));
        CHECK(typeEq(infer(ctx, parseTerm("l <- alloc (fp e); ret (map fm (get l), fun x -> set l (fp x))")),
                     tComp(tCell(sigma))));
    }
}

TEST_CASE("rule schemas typecheck through metavariable types") {
    Context ctx;
    ctx.metas = {{"r", tRef(tInt())}, {"v", tInt()}};
    CHECK(typeEq(infer(ctx, parseTerm("set ?r ?v; get ?r")), tComp(tInt())));
    CHECK(typeEq(infer(ctx, parseTerm("step; set ?r ?v; ret ?v")), tComp(tInt())));
}
