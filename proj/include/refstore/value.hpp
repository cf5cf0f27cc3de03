#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "refstore/syntax.hpp"

namespace refstore {

struct Location {
    std::uint64_t id = 0;
    auto operator<=>(const Location &) const = default;
};

struct Value;
using ValuePtr = std::shared_ptr<const Value>;
// Sorted by name so that traversals over environments are deterministic.
using Env = std::map<std::string, ValuePtr>;

namespace val {
struct Int {
    Integer n;
};
struct Unit {};
struct Pair {
    ValuePtr fst, snd;
};
struct Record {
    std::vector<std::pair<std::string, ValuePtr>> fields;
};
struct Loc {
    Location loc;
    TypePtr tag;
};
// `self` is empty for an ordinary lambda; a recursive closure binds `self` to itself on application.
struct Closure {
    Env env;
    std::string self, param;
    TermPtr body;
};
struct NegFn {};
// A suspended computation: re-runnable against any heap.
struct Comp {
    Env env;
    TermPtr term;
};
}  // namespace val

struct Value {
    std::variant<val::Int, val::Unit, val::Pair, val::Record, val::Loc, val::Closure, val::NegFn, val::Comp> node;
};

ValuePtr vInt(Integer n);
ValuePtr vUnit();
ValuePtr vPair(ValuePtr a, ValuePtr b);
ValuePtr vRecord(std::vector<std::pair<std::string, ValuePtr>> fields);
ValuePtr vLoc(Location l, TypePtr tag);
ValuePtr vClosure(Env env, std::string self, std::string param, TermPtr body);
ValuePtr vNegFn();
ValuePtr vComp(Env env, TermPtr term);

// Structural equality; closures and computations compare bodies up to alpha-equivalence.
bool valueEq(const ValuePtr &a, const ValuePtr &b);
std::string printValue(const ValuePtr &v);

// Whether `v` can inhabit `t`. Exact for first-order values; closures and computations
// are only checked for the shape of the type.
bool conformsTo(const ValuePtr &v, const TypePtr &t);

// Replaces every location inside `v` using `rename`.
ValuePtr renameLocations(const ValuePtr &v, const std::map<Location, Location> &rename);
// Locations occurring in `v`, left to right, depth first (environments in name order).
void locationsIn(const ValuePtr &v, std::vector<Location> &out);

}  // namespace refstore
