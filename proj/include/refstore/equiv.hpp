#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "refstore/interp.hpp"

namespace refstore {

enum class VerdictKind { Equivalent, Distinguished, Inconclusive };

std::string to_string(VerdictKind k);

// Equivalence verdicts are evidence up to the recorded bounds, not proofs.
struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::size_t checks = 0;  // comparisons where both sides finished
    std::string bounds;
    // Distinguished only: a replayable witness and what each side produced.
    std::string witness;
    std::optional<MethodScript> script;
    Fuel fuel = 0;
    std::string left, right;
};

using FuelLadder = std::vector<Fuel>;
const FuelLadder &defaultFuelLadder();
FuelLadder parseFuelLadder(const std::string &text);

class UnsupportedType : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Compares canonical configurations of two closed T-ground programs at every fuel.
Verdict strictEquiv(const Program &a, const Program &b, const FuelLadder &ladder, bool ignoreSteps = false);
Verdict strictEquiv(const TermPtr &a, const TermPtr &b, const FuelLadder &ladder, bool ignoreSteps = false);

// Argument pool for a method parameter type: Int {-2..2}, Unit {()}, products by cartesian product.
std::vector<TermPtr> argumentPool(const TypePtr &t);

// All method scripts of exactly `length` calls, in label order then pool order.
// `objectType` is a record of methods, or a pair (methods fst and snd, e.g. Cell s).
std::vector<MethodScript> genScripts(const TypePtr &objectType, std::size_t length);

// Probes both objects with every script of length 1..maxScriptLen at every fuel.
Verdict probeEquiv(const Program &a, const Program &b, std::size_t maxScriptLen, const FuelLadder &ladder,
                   bool ignoreSteps = false);
Verdict probeEquiv(const TermPtr &a, const TermPtr &b, std::size_t maxScriptLen, const FuelLadder &ladder,
                   bool ignoreSteps = false);

}  // namespace refstore
