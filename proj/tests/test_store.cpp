#include <doctest.h>

#include "helpers.hpp"
#include "refstore/interp.hpp"
#include "refstore/store.hpp"

using namespace refstore;

namespace {

Config run(const std::string &src, Fuel fuel = 100) {
    auto r = observe(parseTerm(src), fuel);
    REQUIRE_FALSE(timedOut(r));
    return std::get<Config>(r);
}

}  // namespace

TEST_CASE("allocation") {
    auto [h, l] = allocCell(Heap{}, tInt(), vInt(0));
    CHECK(l == Location{0});
    CHECK(h.size() == 1);
    CHECK(valueEq(h.at(l).value, vInt(0)));
    auto [h2, l2] = allocCell(h, tInt(), vInt(0));
    CHECK(l2 != l);
    CHECK(h2.size() == 2);
    CHECK(h.size() == 1);
    CHECK_THROWS_AS(allocCell(Heap{}, tInt(), vUnit()), TagMismatch);
    CHECK(run("alloc 0").steps == 0);
}

TEST_CASE("reading costs one step") {
    auto [h, l] = allocCell(Heap{}, tInt(), vInt(4));
    auto r = guarded::run(getCell(h, l), 1);
    REQUIRE(guarded::converged(r));
    CHECK(std::get<guarded::Converged<ValuePtr>>(r).steps == 1);
    CHECK_FALSE(guarded::converged(guarded::run(getCell(h, l), 0)));
    CHECK_THROWS_AS(getCell(Heap{}, Location{0}), DanglingLocation);

    Config c = run("l <- alloc 0; get l");
    CHECK(c.steps == 1);
    CHECK(valueEq(c.result, vInt(0)));
    CHECK(c.heap.size() == 1);

    Config s = run("l <- alloc 0; set l 9; get l");
    CHECK(s.steps == 1);
    CHECK(valueEq(s.result, vInt(9)));
}

TEST_CASE("writing") {
    auto [h, l] = allocCell(Heap{}, tInt(), vInt(0));
    Heap h2 = setCell(h, l, vInt(5));
    CHECK(valueEq(h2.at(l).value, vInt(5)));
    CHECK(valueEq(h.at(l).value, vInt(0)));
    CHECK_THROWS_AS(setCell(h, l, vUnit()), TagMismatch);
    CHECK_THROWS_AS(setCell(h, Location{3}, vInt(1)), DanglingLocation);
    CHECK(run("l <- alloc 0; set l 5").steps == 0);
}

TEST_CASE("store laws hold as configurations") {
    CHECK(configEq(run("l <- alloc 0; set l 1; set l 2"), run("l <- alloc 0; set l 2")));
    CHECK(configEq(run("x <- alloc 3; set x 3; ret x"), run("alloc 3")));
    CHECK_FALSE(configEq(run("l <- alloc 0; set l 1"), run("l <- alloc 0; set l 2")));
}

TEST_CASE("canonical forms identify permuted allocations") {
    auto raw = [](const std::string &src) {
        return std::get<Config>(runComp(vComp({}, prepare(parseTerm(src)).term), Heap{}, 10));
    };
    auto a = raw("l <- alloc 1; k <- alloc (); ret (l, k)");
    auto b = raw("k <- alloc (); l <- alloc 1; ret (l, k)");
    CHECK_FALSE(configEq(a, b));
    CHECK(configEq(canonicalize(a), canonicalize(b)));
    CHECK(dumpConfig(canonicalize(a)) == dumpConfig(canonicalize(b)));
}

TEST_CASE("canonicalize is idempotent and renaming-invariant") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        Config c = testutil::randomConfig(rng, 4);
        Config k = canonicalize(c);
        CHECK(configEq(canonicalize(k), k));
        CHECK(configEq(canonicalize(testutil::randomlyRenamed(rng, c)), k));
    }
}

TEST_CASE("unreachable cells are ordered independently of their names") {
    auto mk = [](std::uint64_t a, std::uint64_t b) {
        std::map<Location, Cell> cells;
        cells[Location{a}] = Cell{tInt(), vInt(1)};
        cells[Location{b}] = Cell{tRef(tInt()), vLoc(Location{a}, tInt())};
        return Config{Heap::fromCells(cells), vUnit(), 0};
    };
    CHECK(configEq(canonicalize(mk(0, 1)), canonicalize(mk(1, 0))));
}

TEST_CASE("bijection search") {
    std::mt19937_64 rng(9);
    Config c = testutil::randomConfig(rng, 4);
    CHECK(bijectionEquiv(c, c));
    CHECK(bijectionEquiv(c, testutil::randomlyRenamed(rng, c)));
    auto one = [](int v) {
        std::map<Location, Cell> cells;
        cells[Location{0}] = Cell{tInt(), vInt(v)};
        return Config{Heap::fromCells(cells), vUnit(), 0};
    };
    CHECK_FALSE(bijectionEquiv(one(1), one(2)));
    CHECK_FALSE(configEq(canonicalize(one(1)), canonicalize(one(2))));
}
