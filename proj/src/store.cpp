#include "refstore/store.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

namespace refstore {

DanglingLocation::DanglingLocation(Location l)
    : std::runtime_error("dangling location #" + std::to_string(l.id)) {}

TagMismatch::TagMismatch(Location l, const TypePtr &tag, const ValuePtr &v)
    : std::runtime_error("value " + printValue(v) + " does not fit cell #" + std::to_string(l.id) + " : " +
                         printType(tag)) {}

World Heap::world() const {
    World w;
    for (auto &[l, c] : cells_) w.emplace(l, c.tag);
    return w;
}

const Cell &Heap::at(Location l) const {
    auto it = cells_.find(l);
    if (it == cells_.end()) throw DanglingLocation(l);
    return it->second;
}

Heap Heap::fromCells(std::map<Location, Cell> cells) {
    Heap h;
    h.cells_ = std::move(cells);
    h.next_ = h.cells_.empty() ? Location{0} : Location{h.cells_.rbegin()->first.id + 1};
    return h;
}

std::pair<Heap, Location> allocCell(const Heap &h, const TypePtr &tag, const ValuePtr &v) {
    Location l = h.next_;
    if (!conformsTo(v, tag)) throw TagMismatch(l, tag, v);
    Heap out = h;
    out.cells_.emplace(l, Cell{tag, v});
    out.next_ = Location{l.id + 1};
    return {std::move(out), l};
}

guarded::Delayed<ValuePtr> getCell(const Heap &h, Location l) {
    return guarded::delay(guarded::now(h.at(l).value));
}

Heap setCell(const Heap &h, Location l, const ValuePtr &v) {
    const Cell &c = h.at(l);
    if (!conformsTo(v, c.tag)) throw TagMismatch(l, c.tag, v);
    Heap out = h;
    out.cells_[l].value = v;
    return out;
}

bool heapEq(const Heap &a, const Heap &b) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.cells().begin(), ib = b.cells().begin(); ia != a.cells().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!typeEq(ia->second.tag, ib->second.tag)) return false;
        if (!valueEq(ia->second.value, ib->second.value)) return false;
    }
    return true;
}

bool configEq(const Config &a, const Config &b, bool ignoreSteps) {
    if (!ignoreSteps && a.steps != b.steps) return false;
    return valueEq(a.result, b.result) && heapEq(a.heap, b.heap);
}

Config renameConfig(const Config &c, const std::map<Location, Location> &rename) {
    std::map<Location, Cell> cells;
    for (auto &[l, cell] : c.heap.cells()) {
        auto it = rename.find(l);
        Location to = it == rename.end() ? l : it->second;
        cells.emplace(to, Cell{cell.tag, renameLocations(cell.value, rename)});
    }
    return Config{Heap::fromCells(std::move(cells)), renameLocations(c.result, rename), c.steps};
}

// ------------------------------
// canonicalization
// ------------------------------

namespace {

std::string keyEnv(const Env &env);

// Like printValue, but alpha-invariant for code.
std::string keyValue(const ValuePtr &v) {
    if (auto x = std::get_if<val::Pair>(&v->node)) return "(" + keyValue(x->fst) + "," + keyValue(x->snd) + ")";
    if (auto x = std::get_if<val::Record>(&v->node)) {
        std::string s = "{";
        for (auto &[k, f] : x->fields) s += k + "=" + keyValue(f) + ",";
        return s + "}";
    }
    if (auto x = std::get_if<val::Loc>(&v->node)) return "#" + std::to_string(x->loc.id) + ":" + printType(x->tag);
    if (auto x = std::get_if<val::Closure>(&v->node)) {
        TermPtr code = x->self.empty() ? mkLam(x->param, x->body) : mkRec(x->self, x->param, x->body);
        return "<" + print(alphaNormalize(code)) + keyEnv(x->env) + ">";
    }
    if (auto x = std::get_if<val::Comp>(&v->node)) return "<comp " + print(alphaNormalize(x->term)) + keyEnv(x->env) + ">";
    return printValue(v);
}

std::string keyEnv(const Env &env) {
    std::string s = "[";
    for (auto &[k, v] : env) s += k + "=" + keyValue(v) + ",";
    return s + "]";
}

struct Numbering {
    std::map<Location, Location> rename;
    std::vector<Location> order;  // original locations, in canonical order
};

void number(const Heap &h, Location l, Numbering &n);

void visit(const Heap &h, const ValuePtr &v, Numbering &n) {
    std::vector<Location> locs;
    locationsIn(v, locs);
    for (Location l : locs) number(h, l, n);
}

void number(const Heap &h, Location l, Numbering &n) {
    if (n.rename.count(l)) return;
    n.rename.emplace(l, Location{n.order.size()});
    n.order.push_back(l);
    visit(h, h.at(l).value, n);
}

// Length-prefixed, hence prefix-free: comparing concatenations of blocks compares the first differing block.
std::string block(const Heap &h, const Numbering &n, std::size_t from) {
    std::string s;
    for (std::size_t i = from; i < n.order.size(); ++i) {
        const Cell &c = h.at(n.order[i]);
        s += "#" + std::to_string(i) + ":" + printType(c.tag) + "=" + keyValue(renameLocations(c.value, n.rename)) + ";";
    }
    return std::to_string(s.size()) + ":" + s;
}

std::pair<std::string, Numbering> numberRemainder(const Heap &h, const Numbering &cur) {
    std::vector<Location> remaining;
    for (auto &[l, c] : h.cells())
        if (!cur.rename.count(l)) remaining.push_back(l);
    if (remaining.empty()) return {"", cur};

    std::set<Location> referenced;
    for (Location l : remaining) {
        std::vector<Location> locs;
        locationsIn(h.at(l).value, locs);
        referenced.insert(locs.begin(), locs.end());
    }

    struct Candidate {
        Location root;
        Numbering numbering;
        std::string block;
    };
    std::vector<Candidate> cands;
    for (Location r : remaining) {
        Numbering n = cur;
        number(h, r, n);
        cands.push_back({r, n, block(h, n, cur.order.size())});
    }
    const std::string &best =
        std::min_element(cands.begin(), cands.end(), [](auto &a, auto &b) { return a.block < b.block; })->block;

    std::vector<const Candidate *> tied;
    bool haveFreeLeaf = false;
    for (auto &c : cands) {
        if (c.block != best) continue;
        std::vector<Location> inner;
        locationsIn(h.at(c.root).value, inner);
        // Unreferenced cells holding no locations are interchangeable with each other.
        bool freeLeaf = inner.empty() && !referenced.count(c.root);
        if (freeLeaf) {
            if (haveFreeLeaf) continue;
            haveFreeLeaf = true;
        }
        tied.push_back(&c);
    }

    std::pair<std::string, Numbering> result;
    bool first = true;
    for (const Candidate *c : tied) {
        auto [rest, numbering] = numberRemainder(h, c->numbering);
        std::string total = c->block + rest;
        if (first || total < result.first) result = {std::move(total), std::move(numbering)};
        first = false;
    }
    return result;
}

}  // namespace

Config canonicalize(const Config &c) {
    Numbering n;
    visit(c.heap, c.result, n);
    n = numberRemainder(c.heap, n).second;
    return renameConfig(c, n.rename);
}

bool bijectionEquiv(const Config &c1, const Config &c2, bool ignoreSteps) {
    if (c1.heap.size() > 8 || c2.heap.size() > 8) throw SizeLimit("bijectionEquiv supports at most 8 locations");
    if (c1.heap.size() != c2.heap.size()) return false;
    if (!ignoreSteps && c1.steps != c2.steps) return false;
    std::vector<Location> from, to;
    for (auto &[l, cell] : c1.heap.cells()) from.push_back(l);
    for (auto &[l, cell] : c2.heap.cells()) to.push_back(l);
    do {
        std::map<Location, Location> pi;
        for (std::size_t i = 0; i < from.size(); ++i) pi.emplace(from[i], to[i]);
        if (configEq(renameConfig(c1, pi), c2, ignoreSteps)) return true;
    } while (std::next_permutation(to.begin(), to.end()));
    return false;
}

std::string dumpConfig(const Config &c) {
    std::ostringstream os;
    os << "steps: " << c.steps << "\n";
    os << "result: " << printValue(c.result) << "\n";
    os << "heap:";
    if (c.heap.cells().empty()) os << " {}";
    os << "\n";
    for (auto &[l, cell] : c.heap.cells())
        os << "  #" << l.id << " : " << printType(cell.tag) << " = " << printValue(cell.value) << "\n";
    return os.str();
}

}  // namespace refstore
