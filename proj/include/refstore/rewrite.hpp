#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refstore/typecheck.hpp"
#include "refstore/value.hpp"

namespace refstore {

enum class Direction { LeftToRight, RightToLeft };

// A pair of functions claimed to be mutually inverse, used by representation independence.
struct IsoWitness {
    TermPtr forward;   // sigma -> tau, applied when storing
    TermPtr backward;  // tau -> sigma, applied when reading
};

using Bindings = std::map<std::string, TermPtr>;

struct Rule {
    std::string name;
    std::string origin;  // which family of laws the rule belongs to
    std::string summary;
    // Schematic rules: both sides are patterns over ?metavariables, usable in both directions.
    TermPtr lhs, rhs;
    // Built-in rules rewrite left to right by code; right to left they need `result` bound.
    std::function<TermPtr(const TermPtr &, const IsoWitness *)> builtin;
    bool needsIso = false;

    bool isBuiltin() const { return static_cast<bool>(builtin); }
};

const std::vector<Rule> &ruleSet();
const Rule &findRule(const std::string &name);

enum class RuleErrorKind { NoMatch, TypeRegression, UndischargedObligation, UnknownRule, BadBinding };
std::string to_string(RuleErrorKind k);

class RuleError : public std::runtime_error {
public:
    RuleError(RuleErrorKind kind, const std::string &detail);
    RuleErrorKind kind() const { return kind_; }

private:
    RuleErrorKind kind_;
};

// Rewrites the subterm of `t` at `path` with one rule instance. The whole term must typecheck
// in `ctx` before and after, at the same type. Metavariables that the matched side does not
// determine are taken from `bindings`. Built-in rules applied right to left take the new
// subterm from bindings["result"] and check that rewriting it forward gives back the old one.
TermPtr applyRule(const TermPtr &t, const std::string &rule, const Path &path, const Bindings &bindings = {},
                  Direction dir = Direction::LeftToRight, const IsoWitness *iso = nullptr,
                  const Context &ctx = {});

// First-order matching modulo renaming of bound variables. Instances are returned with the
// names of variables bound by the pattern replaced by the term's own names.
std::optional<Bindings> matchPattern(const TermPtr &pattern, const TermPtr &t);

class ObligationFailed : public std::runtime_error {
public:
    ObligationFailed(const std::string &detail, ValuePtr counterexample);
    const ValuePtr &counterexample() const { return counterexample_; }

private:
    ValuePtr counterexample_;
};

struct IsoReport {
    std::string forwardThenBack;  // "normalization" or "testing (N values)"
    std::string backThenForward;
};

// Checks that backward . forward = id on sigma and forward . backward = id on tau,
// by normalization when it decides the question and otherwise by testing a pool of values.
// Throws TypeError for ill-typed witnesses and ObligationFailed with the first counterexample.
IsoReport checkIso(const IsoWitness &w, const TypePtr &sigma, const TypePtr &tau);

// Test values used by checkIso: 0, 1, -1, 2, -2, ... for Int; products pair smaller pools.
std::vector<TermPtr> isoPool(const TypePtr &t);

}  // namespace refstore
