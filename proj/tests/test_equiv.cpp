#include <doctest.h>

#include "helpers.hpp"
#include "refstore/equiv.hpp"

using namespace refstore;

TEST_CASE("strict equivalence") {
    auto ladder = defaultFuelLadder();
    auto gg1 = parseTerm("r <- alloc 1; s <- alloc (); x <- get r; y <- get s; ret (x, y)");
    auto gg2 = parseTerm("r <- alloc 1; s <- alloc (); y <- get s; x <- get r; ret (x, y)");
    CHECK(strictEquiv(gg1, gg2, ladder).kind == VerdictKind::Equivalent);

    auto v = strictEquiv(parseTerm("l <- alloc 0; ret 10"), parseTerm("ret 10"), ladder);
    CHECK(v.kind == VerdictKind::Distinguished);
    CHECK(v.left.find("#0") != std::string::npos);

    auto t = testutil::corpusTerm("storeLaws.ref", "getGetL");
    auto self = strictEquiv(t, t, ladder);
    CHECK(self.kind == VerdictKind::Equivalent);
    CHECK(self.checks == ladder.size());
}

TEST_CASE("strict equivalence sees step counts unless told not to") {
    auto a = parseTerm("step; ret 1"), b = parseTerm("ret 1");
    CHECK(strictEquiv(a, b, {4}).kind == VerdictKind::Distinguished);
    CHECK(strictEquiv(a, b, {4}, true).kind == VerdictKind::Equivalent);
    // at fuel 0 only one side finishes; ignoring steps skips that rung
    CHECK(strictEquiv(a, b, {0, 4}, true).kind == VerdictKind::Equivalent);
    CHECK(strictEquiv(a, b, {0}, true).kind == VerdictKind::Inconclusive);
}

TEST_CASE("diverging programs are inconclusive, not equivalent") {
    auto d = testutil::corpusTerm("knot.ref", "diverge");
    CHECK(strictEquiv(d, d, defaultFuelLadder()).kind == VerdictKind::Inconclusive);
    auto c = testutil::corpusTerm("knot.ref", "converge");
    CHECK(strictEquiv(d, c, defaultFuelLadder()).kind == VerdictKind::Distinguished);
}

TEST_CASE("strict equivalence requires equal types") {
    CHECK_THROWS_AS(strictEquiv(parseTerm("ret 1"), parseTerm("ret ()"), {4}), std::invalid_argument);
}

TEST_CASE("script generation") {
    auto counter = parseType("{incr : T Unit, read : T Int}");
    auto one = genScripts(counter, 1);
    REQUIRE(one.size() == 2);
    CHECK(printScript(one[0]) == "[incr]");
    CHECK(printScript(one[1]) == "[read]");
    CHECK(genScripts(counter, 2).size() == 4);
    std::size_t total = 0;
    for (std::size_t n = 1; n <= 6; ++n) total += genScripts(counter, n).size();
    CHECK(total == 126);
    auto a = genScripts(counter, 3), b = genScripts(counter, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(printScript(a[i]) == printScript(b[i]));

    auto cell = genScripts(tCell(tInt()), 1);
    REQUIRE(cell.size() == 6);
    CHECK(printScript(cell[1]) == "[snd(-2)]");
    CHECK_THROWS_AS(genScripts(parseType("{f : T (Int -> Int)}"), 1), UnsupportedType);
    CHECK_THROWS_AS(genScripts(parseType("{f : T Int -> T Int}"), 1), UnsupportedType);
}

TEST_CASE("probe equivalence of the counters") {
    auto pos = testutil::corpusTerm("posCounter.ref");
    auto neg = testutil::corpusTerm("negCounter.ref");
    auto v = probeEquiv(pos, neg, 6, {16, 64, 256});
    CHECK(v.kind == VerdictKind::Equivalent);
    CHECK(v.checks == 126 * 3);
    CHECK(v.bounds.find("126 scripts") != std::string::npos);
    CHECK(probeEquiv(pos, pos, 3, defaultFuelLadder()).kind == VerdictKind::Equivalent);
}

TEST_CASE("probe equivalence finds the shortest witness") {
    auto pos = testutil::corpusTerm("posCounter.ref");
    auto stuck = testutil::corpusTerm("stuckCounter.ref");
    auto v = probeEquiv(pos, stuck, 2, defaultFuelLadder());
    REQUIRE(v.kind == VerdictKind::Distinguished);
    REQUIRE(v.script);
    CHECK(printScript(*v.script) == "[incr, read]");
    // the witness replays
    auto a = probe(prepare(pos), *v.script, v.fuel), b = probe(prepare(stuck), *v.script, v.fuel);
    CHECK_FALSE(probeTraceEq(a, b));
}

TEST_CASE("fuel ladders parse") {
    CHECK(parseFuelLadder("4,16,64,256") == FuelLadder{4, 16, 64, 256});
    CHECK_THROWS_AS(parseFuelLadder("4,,8"), std::invalid_argument);
    CHECK_THROWS_AS(parseFuelLadder("x"), std::invalid_argument);
}
