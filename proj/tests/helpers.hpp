#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "refstore/store.hpp"
#include "refstore/syntax.hpp"

namespace testutil {

inline std::string corpusPath(const std::string &name) { return std::string(REFSTORE_CORPUS_DIR) + "/" + name; }

inline std::string readCorpus(const std::string &name) {
    std::ifstream in(corpusPath(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline refstore::TermPtr corpusTerm(const std::string &name, const std::string &def = "main") {
    for (auto &d : refstore::parseProgram(readCorpus(name)))
        if (d.name == def) return d.body;
    throw std::runtime_error("missing definition " + def + " in " + name);
}

// Random heap of up to `maxCells` cells whose cells may point at each other, with location ids
// drawn sparsely so that renaming is not the identity.
inline refstore::Config randomConfig(std::mt19937_64 &rng, std::size_t maxCells) {
    using namespace refstore;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::size_t n = static_cast<std::size_t>(pick(0, static_cast<int>(maxCells)));
    std::vector<Location> locs;
    while (locs.size() < n) {
        Location l{static_cast<std::uint64_t>(pick(0, 20))};
        if (std::find(locs.begin(), locs.end(), l) == locs.end()) locs.push_back(l);
    }
    // kind 0: Int, kind 1: Ref Int, kind 2: Ref (Ref Int)
    std::vector<int> kind(n);
    for (auto &k : kind) k = pick(0, 2);
    auto tagOf = [](int k) {
        TypePtr t = tInt();
        for (int i = 0; i < k; ++i) t = tRef(t);
        return t;
    };
    auto target = [&](int k) -> std::optional<std::size_t> {
        std::vector<std::size_t> c;
        for (std::size_t i = 0; i < n; ++i)
            if (kind[i] == k) c.push_back(i);
        if (c.empty()) return std::nullopt;
        return c[static_cast<std::size_t>(pick(0, static_cast<int>(c.size()) - 1))];
    };
    // demoting one cell can strand another, so repeat until every pointer has a target kind
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            if (kind[i] > 0 && std::count(kind.begin(), kind.end(), kind[i] - 1) == 0) {
                kind[i] = 0;
                changed = true;
            }
    }
    std::map<Location, Cell> cells;
    for (std::size_t i = 0; i < n; ++i) {
        ValuePtr v;
        if (kind[i] == 0) v = vInt(pick(0, 1));
        else {
            std::size_t j = *target(kind[i] - 1);
            v = vLoc(locs[j], tagOf(kind[i] - 1));
        }
        cells[locs[i]] = Cell{tagOf(kind[i]), v};
    }
    auto leaf = [&]() -> ValuePtr {
        if (n > 0 && pick(0, 1)) {
            std::size_t j = static_cast<std::size_t>(pick(0, static_cast<int>(n) - 1));
            return vLoc(locs[j], tagOf(kind[j]));
        }
        return vInt(pick(0, 1));
    };
    ValuePtr result = pick(0, 1) ? vPair(leaf(), leaf()) : leaf();
    return Config{Heap::fromCells(std::move(cells)), result, static_cast<StepCount>(pick(0, 1))};
}

// The same config with its locations moved to fresh random ids.
inline refstore::Config randomlyRenamed(std::mt19937_64 &rng, const refstore::Config &c) {
    using namespace refstore;
    std::vector<std::uint64_t> ids(40);
    for (std::uint64_t i = 0; i < ids.size(); ++i) ids[i] = 100 + i;
    std::shuffle(ids.begin(), ids.end(), rng);
    std::map<Location, Location> ren;
    std::size_t k = 0;
    for (auto &[l, cell] : c.heap.cells()) ren[l] = Location{ids[k++]};
    return renameConfig(c, ren);
}

}  // namespace testutil
