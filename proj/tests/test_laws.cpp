#include <doctest.h>

#include <fstream>
#include <regex>

#include "helpers.hpp"
#include "refstore/laws.hpp"

using namespace refstore;

TEST_CASE("every rule has an instance generator and passes a small suite") {
    LawSuiteOptions opts;
    opts.cases = 10;
    opts.probeScriptLen = 2;
    for (auto &r : runLawSuite(opts)) {
        INFO(r.rule << ": " << r.firstFailure);
        CHECK(r.passed == r.cases);
        CHECK(r.checks > 0);
    }
}

TEST_CASE("the suite is deterministic for a seed") {
    LawSuiteOptions opts;
    opts.cases = 5;
    Rng a(opts.seed), b(opts.seed);
    for (int i = 0; i < 20; ++i) CHECK(print(randomStraightline(a)) == print(randomStraightline(b)));
}

TEST_CASE("the README rule table matches the catalogue") {
    std::ifstream in(std::string(REFSTORE_SOURCE_DIR) + "/README.md");
    REQUIRE(in);
    std::string line;
    std::set<std::string> documented;
    std::regex row(R"(^\| `([a-z-]+)` \|)");
    std::smatch m;
    while (std::getline(in, line))
        if (std::regex_search(line, m, row)) documented.insert(m[1]);
    std::set<std::string> actual;
    for (auto &r : ruleSet()) actual.insert(r.name);
    CHECK(documented == actual);
    CHECK(documented.size() == ruleSet().size());
}
