#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "refstore/equiv.hpp"
#include "refstore/rewrite.hpp"

namespace refstore {

using Rng = std::mt19937_64;

// Random terms over a few Int cells. Generated terms are closed once wrapped by withCells.
class TermGen {
public:
    explicit TermGen(Rng &rng) : rng_(rng) {}

    int pick(int lo, int hi);
    bool coin() { return pick(0, 1) == 1; }

    // Pure Int expression over `vars`.
    TermPtr intExpr(int depth, const std::vector<std::string> &vars);
    // Pure value of a ground type built from Int, Unit and products.
    TermPtr valueOf(const TypePtr &t);
    TypePtr groundType(int depth);
    // Pure Int -> Int function.
    TermPtr intFunction();
    // Straight-line computation of type T Int using `vars` (Int) and `cells` (Ref Int).
    TermPtr comp(int depth, const std::vector<std::string> &vars, const std::vector<std::string> &cells);

    std::string fresh(const std::string &stem) { return stem + std::to_string(counter_++); }

private:
    Rng &rng_;
    int counter_ = 0;
};

// `c0 <- alloc e0; ...; body`, with the path to `body`.
struct Wrapped {
    TermPtr term;
    Path site;
};
Wrapped withCells(const std::vector<std::pair<std::string, TermPtr>> &cells, const TermPtr &body);

// A closed program containing one instance of a rule's left-hand side at `site`.
struct LawInstance {
    std::string rule;
    TermPtr program;
    Path site;
    std::optional<IsoWitness> iso;
};

// Rules the generator can instantiate: every rule in ruleSet().
LawInstance genLawInstance(const std::string &rule, Rng &rng);

// Closed straight-line program of type T Int over a few Int cells.
TermPtr randomStraightline(Rng &rng);

// The representation independence setting: an Int cell behind the Cell Int interface.
TermPtr cellObject(std::size_t variant, const TermPtr &init);
std::size_t cellObjectVariants();

struct LawResult {
    std::string rule;
    std::string origin;
    std::string method;  // "strict" or "probe"
    std::size_t cases = 0;
    std::size_t passed = 0;
    std::size_t checks = 0;  // comparisons in which both sides converged
    std::string firstFailure;
};

struct LawSuiteOptions {
    std::size_t cases = 100;
    std::uint64_t seed = 20240611;
    FuelLadder ladder = defaultFuelLadder();
    FuelLadder probeLadder{16, 64, 256};
    std::size_t probeScriptLen = 4;
};

// Applies each rule left to right to generated instances and compares both sides in the model:
// strictEquiv for every rule except rep-indep, which is probed at the Cell interface.
LawResult checkLaw(const std::string &rule, const LawSuiteOptions &opts);
std::vector<LawResult> runLawSuite(const LawSuiteOptions &opts);

}  // namespace refstore
