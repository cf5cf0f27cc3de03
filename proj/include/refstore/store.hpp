#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "refstore/guarded.hpp"
#include "refstore/value.hpp"

namespace refstore {

using guarded::StepCount;

// Location -> cell type. Grows monotonically along a run.
using World = std::map<Location, TypePtr>;

struct Cell {
    TypePtr tag;
    ValuePtr value;
};

class DanglingLocation : public std::runtime_error {
public:
    explicit DanglingLocation(Location l);
};

class TagMismatch : public std::runtime_error {
public:
    TagMismatch(Location l, const TypePtr &tag, const ValuePtr &v);
};

class SizeLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A typed heap. Value semantics: every operation returns a new heap.
class Heap {
public:
    Heap() = default;

    const std::map<Location, Cell> &cells() const { return cells_; }
    World world() const;
    std::size_t size() const { return cells_.size(); }
    bool contains(Location l) const { return cells_.count(l) > 0; }
    const Cell &at(Location l) const;
    // next fresh location; never reused within a run
    Location nextFresh() const { return next_; }

    // Raw construction for tests and canonicalization; does not check tags.
    static Heap fromCells(std::map<Location, Cell> cells);

    friend std::pair<Heap, Location> allocCell(const Heap &h, const TypePtr &tag, const ValuePtr &v);
    friend Heap setCell(const Heap &h, Location l, const ValuePtr &v);

private:
    std::map<Location, Cell> cells_;
    Location next_{0};
};

struct Config {
    Heap heap;
    ValuePtr result;
    StepCount steps = 0;
};

std::pair<Heap, Location> allocCell(const Heap &h, const TypePtr &tag, const ValuePtr &v);
// Reading costs one step and leaves the heap untouched.
guarded::Delayed<ValuePtr> getCell(const Heap &h, Location l);
Heap setCell(const Heap &h, Location l, const ValuePtr &v);

bool heapEq(const Heap &a, const Heap &b);
bool configEq(const Config &a, const Config &b, bool ignoreSteps = false);

// Renames locations to 0, 1, 2, ...: first those reachable from the result (depth first,
// left to right, following cell contents), then the unreachable remainder in an order
// chosen to be invariant under renaming. Two configs have equal canonical forms iff a
// location bijection maps one onto the other.
Config canonicalize(const Config &c);

// Exhaustive search for a location bijection mapping c1 onto c2. Throws SizeLimit above 8 cells.
bool bijectionEquiv(const Config &c1, const Config &c2, bool ignoreSteps = false);

Config renameConfig(const Config &c, const std::map<Location, Location> &rename);

// Deterministic textual dump, locations in ascending order.
std::string dumpConfig(const Config &c);

}  // namespace refstore
