#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "refstore/syntax.hpp"

using namespace refstore;

TEST_CASE("parsing produces the expected trees") {
    auto t = parseTerm("ret 5");
    auto r = std::get_if<tm::Ret>(&t->node);
    REQUIRE(r);
    CHECK(std::get<tm::IntLit>(r->arg->node).value == 5);

    auto b = parseTerm("l <- alloc 0; get l");
    auto bind = std::get_if<tm::Bind>(&b->node);
    REQUIRE(bind);
    CHECK(bind->var == "l");
    REQUIRE(std::holds_alternative<tm::Alloc>(bind->first->node));
    auto get = std::get_if<tm::Get>(&bind->rest->node);
    REQUIRE(get);
    CHECK(std::get<tm::Var>(get->ref->node).name == "l");

    auto rec = parseTerm("{incr -> ret (), read -> ret 0}");
    auto fields = std::get<tm::Record>(rec->node).fields;
    REQUIRE(fields.size() == 2);
    CHECK(fields[0].first == "incr");
    CHECK(fields[1].first == "read");
}

TEST_CASE("sequencing is a bind with the anonymous binder") {
    auto t = parseTerm("step; ret 1");
    auto b = std::get_if<tm::Bind>(&t->node);
    REQUIRE(b);
    CHECK(b->var == kAnonymous);
    CHECK(print(t) == "step; ret 1");
}

TEST_CASE("neg is an ordinary function constant") {
    auto t = parseTerm("neg (neg 4)");
    auto a = std::get_if<tm::App>(&t->node);
    REQUIRE(a);
    CHECK(std::holds_alternative<tm::Neg>(a->fn->node));
    CHECK(print(parseTerm("map neg (get l)")) == "map neg (get l)");
}

TEST_CASE("printing basics") {
    CHECK(print(mkRet(mkInt(5))) == "ret 5");
    CHECK(print(mkStep()) == "step");
    CHECK(print(mkInt(-3)) == "(-3)");
    CHECK(print(parseTerm("(a + b) - (c - d)")) == "a + b - (c - d)");
    CHECK(print(parseTerm("rec f (x : Int) : Int. ret x")) == "rec f (x : Int) : Int. ret x");
}

TEST_CASE("print then parse is the identity up to alpha on the corpus") {
    for (const char *f : {"posCounter.ref", "negCounter.ref", "stuckCounter.ref", "knot.ref", "cell.ref",
                          "storeLaws.ref", "straightline.ref", "observable.ref", "getalloc.ref"}) {
        for (auto &d : parseProgram(testutil::readCorpus(f))) {
            INFO(f << ": " << d.name);
            auto printed = print(d.body);
            CHECK(alphaEq(parseTerm(printed), d.body));
            CHECK(print(parseTerm(printed)) == printed);
        }
    }
}

TEST_CASE("parse errors carry positions") {
    try {
        parseTerm("l <- alloc 0;\n  get (l");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parseTerm("{a -> ret 1, a -> ret 2}"), ParseError);
    CHECK_THROWS_AS(parseTerm("ret"), ParseError);
}

TEST_CASE("types parse and print") {
    CHECK(printType(parseType("Int -> T Unit")) == "Int -> T Unit");
    CHECK(typeEq(parseType("Cell Int"), tProd(tComp(tInt()), tFn(tInt(), tComp(tUnit())))));
    CHECK(typeEq(parseType("{incr : T Unit, read : T Int}"),
                 tRecord({{"incr", tComp(tUnit())}, {"read", tComp(tInt())}})));
}

TEST_CASE("substitution") {
    CHECK(alphaEq(subst(mkVar("x"), "x", mkInt(3)), mkInt(3)));
    auto lam = mkLam("x", mkVar("x"));
    CHECK(alphaEq(subst(lam, "x", mkInt(3)), lam));
    // capture is avoided by renaming the binder
    auto t = subst(parseTerm("fun y -> x + y"), "x", mkVar("y"));
    CHECK(alphaEq(t, parseTerm("fun z -> y + z")));
    CHECK(freeVars(t) == std::set<std::string>{"y"});
}

TEST_CASE("substitution unfolds recursion as the rule displays it") {
    auto fn = parseTerm("rec f (n : Int) : Int. x <- f n; ret (x + n)");
    auto body = std::get<tm::Rec>(fn->node).body;
    auto unfolded = substMany(body, {{"f", fn}, {"n", mkInt(9)}});
    auto expected = parseTerm("x <- (rec f (n : Int) : Int. x <- f n; ret (x + n)) 9; ret (x + 9)");
    CHECK(alphaEq(unfolded, expected));
}

TEST_CASE("alpha equivalence") {
    CHECK(alphaEq(mkLam("x", mkVar("x")), mkLam("y", mkVar("y"))));
    CHECK_FALSE(alphaEq(mkLam("x", mkVar("x")), mkLam("x", mkInt(0))));
    CHECK_FALSE(alphaEq(parseTerm("fun x -> y"), parseTerm("fun y -> y")));
    CHECK(alphaEq(parseTerm("a <- get l; ret a"), parseTerm("b <- get l; ret b")));
}

namespace {

// Renames every binder to a fresh random name, consistently.
TermPtr renameBinders(const TermPtr &t, std::mt19937_64 &rng, int &counter) {
    auto fresh = [&] { return "v" + std::to_string(counter++) + "_" + std::to_string(rng() % 1000); };
    if (auto l = std::get_if<tm::Lam>(&t->node)) {
        auto x = fresh();
        return mkLam(x, renameBinders(subst(l->body, l->param, mkVar(x)), rng, counter), l->annot);
    }
    if (auto b = std::get_if<tm::Bind>(&t->node)) {
        if (b->var == kAnonymous) return mkBind(b->var, renameBinders(b->first, rng, counter), renameBinders(b->rest, rng, counter));
        auto x = fresh();
        return mkBind(x, renameBinders(b->first, rng, counter), renameBinders(subst(b->rest, b->var, mkVar(x)), rng, counter));
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) out = withChild(out, i, renameBinders(cs[i], rng, counter));
    return out;
}

// A term of exactly `size` nodes built from binders, applications and arithmetic.
TermPtr sizedTerm(std::mt19937_64 &rng, int size, std::vector<std::string> &scope) {
    if (size <= 1) {
        if (!scope.empty() && rng() % 2) return mkVar(scope[rng() % scope.size()]);
        return mkInt(static_cast<int>(rng() % 5));
    }
    switch (rng() % 3) {
        case 0: {
            std::string x = "x" + std::to_string(scope.size());
            scope.push_back(x);
            auto body = sizedTerm(rng, size - 1, scope);
            scope.pop_back();
            return mkLam(x, body);
        }
        case 1: {
            if (size < 3) break;
            int left = 1 + static_cast<int>(rng() % static_cast<unsigned>(size - 2));
            auto a = sizedTerm(rng, left, scope);
            return mkAdd(a, sizedTerm(rng, size - 1 - left, scope));
        }
        default: {
            if (size < 3) break;
            std::string x = "y" + std::to_string(scope.size());
            int left = 1 + static_cast<int>(rng() % static_cast<unsigned>(size - 2));
            auto first = sizedTerm(rng, left, scope);
            scope.push_back(x);
            auto rest = sizedTerm(rng, size - 1 - left, scope);
            scope.pop_back();
            return mkBind(x, mkRet(first), rest);
        }
    }
    std::string x = "z" + std::to_string(scope.size());
    scope.push_back(x);
    auto body = sizedTerm(rng, size - 1, scope);
    scope.pop_back();
    return mkLam(x, body);
}

}  // namespace

TEST_CASE("random renamings of 50-node terms stay alpha-equivalent") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::string> scope;
        auto t = sizedTerm(rng, 50, scope);
        int counter = 0;
        auto r = renameBinders(t, rng, counter);
        CHECK(alphaEq(t, r));
        CHECK(print(alphaNormalize(t)) == print(alphaNormalize(r)));
    }
}

TEST_CASE("paths address subterms") {
    auto t = parseTerm("l <- alloc 0; ret {incr -> i <- get l; set l (i + 1), read -> get l}");
    CHECK(print(subtermAt(t, {0, 0})) == "0");
    CHECK(print(subtermAt(t, {1, 0, 0, 1, 1})) == "i + 1");
    CHECK(subtermAt(t, {2}) == nullptr);
    CHECK(printPath({1, 0, 2}) == "[1,0,2]");
    CHECK(parsePath("[1, 0,2]") == Path{1, 0, 2});
    CHECK(parsePath("[]") == Path{});
    CHECK_FALSE(parsePath("1,0").has_value());
    auto r = replaceAt(t, {0, 0}, mkInt(7));
    CHECK(print(r).rfind("l <- alloc 7;", 0) == 0);
}

TEST_CASE("definitions are inlined into later ones") {
    auto defs = parseProgram("def one = 1\ndef two = one + one\n");
    REQUIRE(defs.size() == 2);
    CHECK(alphaEq(defs[1].body, parseTerm("1 + 1")));
    auto bare = parseProgram("-- comment\nret 3\n");
    REQUIRE(bare.size() == 1);
    CHECK(bare[0].name == "main");
}
