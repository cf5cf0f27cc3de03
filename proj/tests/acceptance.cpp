// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>

#include "helpers.hpp"
#include "refstore/guarded.hpp"
#include "refstore/laws.hpp"
#include "refstore/normalize.hpp"
#include "refstore/trace.hpp"

using namespace refstore;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string &why) {
        if (ok) detail = why;
        ok = false;
    }
};

int failures = 0;

void criterion(int id, const std::string &name, double limitSeconds, const std::function<Outcome()> &body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limitSeconds > 0 && secs >= limitSeconds)
        o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limitSeconds) + " s");
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << id << " " << name << " (" << std::fixed << std::setprecision(2)
              << secs << " s)";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
}

// law suite over a list of rules, requiring every instance to pass
Outcome lawsPass(const std::vector<std::string> &rules, std::size_t cases) {
    Outcome o;
    LawSuiteOptions opts;
    opts.cases = cases;
    std::size_t total = 0;
    for (auto &rule : rules) {
        LawResult r = checkLaw(rule, opts);
        total += r.passed;
        if (r.cases < cases || r.passed != r.cases)
            o.fail(rule + " " + std::to_string(r.passed) + "/" + std::to_string(r.cases) + ": " + r.firstFailure);
    }
    if (o.ok) o.detail = std::to_string(rules.size()) + " rules, " + std::to_string(total) + " instances";
    return o;
}

// ------------------------------
// random guarded composites
// ------------------------------

using guarded::Delayed;

struct Composite {
    Delayed<long> tree;
    guarded::StepCount depth;  // number of delays on the path to the value
    long value;
};

Composite randomComposite(Rng &rng, int budget) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int kind = budget <= 0 ? 0 : pick(0, 3);
    switch (kind) {
        case 0: {
            long v = pick(-5, 5);
            return {guarded::now(v), 0, v};
        }
        case 1: {
            auto c = randomComposite(rng, budget - 1);
            return {guarded::delay(c.tree), c.depth + 1, c.value};
        }
        case 2: {
            auto c = randomComposite(rng, budget - 1);
            long k = pick(-3, 3);
            return {guarded::mapDelayed(c.tree, [k](const long &v) { return v * 2 + k; }), c.depth, c.value * 2 + k};
        }
        default: {
            auto c = randomComposite(rng, budget - 1);
            int extra = pick(0, 3);
            long k = pick(-3, 3);
            auto f = [extra, k](const long &v) {
                Delayed<long> d = guarded::now(v + k);
                for (int i = 0; i < extra; ++i) d = guarded::delay(d);
                return d;
            };
            return {guarded::bindDelayed(c.tree, f), c.depth + static_cast<guarded::StepCount>(extra), c.value + k};
        }
    }
}

Outcome guardedKernel() {
    Outcome o;
    Rng rng(7);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int i = 0; i < 1000; ++i) {
        Composite c = randomComposite(rng, 6);
        // step additivity: the steps of the composite are the sum of the delays it was built from
        auto full = guarded::run(c.tree, c.depth);
        auto *conv = std::get_if<guarded::Converged<long>>(&full);
        if (!conv || conv->steps != c.depth || conv->value != c.value) {
            o.fail("additivity broken on composite " + std::to_string(i));
            continue;
        }
        // fuel monotonicity: below the depth it times out, at or above it the answer never changes
        for (guarded::Fuel n = 0; n <= c.depth + 5; ++n) {
            auto r = guarded::run(c.tree, n);
            bool ok = n < c.depth ? !guarded::converged(r)
                                  : guarded::converged(r) &&
                                        std::get<guarded::Converged<long>>(r).steps == conv->steps &&
                                        std::get<guarded::Converged<long>>(r).value == conv->value;
            if (!ok) o.fail("monotonicity broken on composite " + std::to_string(i) + " at fuel " + std::to_string(n));
        }
    }

    // r(a) = delay(h(r)(a)) for guarded fixed points in the kernel
    for (int i = 0; i < 100; ++i) {
        int dec = pick(1, 3), lag = pick(0, 2);
        long scale = pick(-2, 2);
        using K = guarded::Kleisli<long, long>;
        auto h = [dec, lag, scale](K self) -> K {
            return [self, dec, lag, scale](const long &a) {
                Delayed<long> d = a <= 0 ? guarded::now(a * scale) : self(a - dec);
                for (int j = 0; j < lag; ++j) d = guarded::delay(d);
                return d;
            };
        };
        K r = guarded::lobFix<long, long>(h);
        long a = pick(-3, 20);
        guarded::Fuel n = static_cast<guarded::Fuel>(pick(0, 64));
        auto lhs = guarded::run(r(a), n);
        auto rhs = guarded::run(guarded::delay(h(r)(a)), n);
        bool same = guarded::converged(lhs) == guarded::converged(rhs);
        if (same && guarded::converged(lhs)) {
            auto &x = std::get<guarded::Converged<long>>(lhs);
            auto &y = std::get<guarded::Converged<long>>(rhs);
            same = x.value == y.value && x.steps == y.steps;
        }
        if (!same) o.fail("kernel unfolding differs for case " + std::to_string(i));
    }

    // the same law for rec terms in the interpreter
    for (int i = 0; i < 100; ++i) {
        LawInstance inst = genLawInstance("rec-unfold", rng);
        TermPtr unfolded = applyRule(inst.program, "rec-unfold", inst.site);
        Fuel n = static_cast<Fuel>(pick(0, 64));
        if (!observationEq(observe(inst.program, n), observe(unfolded, n)))
            o.fail("rec unfolding differs at fuel " + std::to_string(n) + " on " + print(inst.program));
    }
    if (o.ok) o.detail = "1000 composites, 100 kernel and 100 term unfoldings";
    return o;
}

// a near miss: the same shape with one Int cell changed, when there is one
Config flipOneIntCell(Rng &rng, const Config &c) {
    std::vector<Location> ints;
    for (auto &[l, cell] : c.heap.cells())
        if (std::holds_alternative<ty::Int>(cell.tag->node)) ints.push_back(l);
    if (ints.empty()) return c;
    Location victim = ints[rng() % ints.size()];
    std::map<Location, Cell> cells = c.heap.cells();
    cells[victim].value = vInt(valueEq(cells[victim].value, vInt(0)) ? 1 : 0);
    return Config{Heap::fromCells(std::move(cells)), c.result, c.steps};
}

Outcome canonicalizationOracle() {
    Outcome o;
    Rng rng(5);
    std::size_t cases = 0, equal = 0;
    for (int i = 0; i < 600; ++i) {
        Config a = testutil::randomConfig(rng, 4);
        Config b = (i % 2 == 0) ? testutil::randomlyRenamed(rng, a) : testutil::randomConfig(rng, 4);
        if (i % 4 == 1) b = testutil::randomlyRenamed(rng, b);
        if (i % 4 == 2) b = flipOneIntCell(rng, b);
        bool viaCanon = configEq(canonicalize(a), canonicalize(b));
        bool viaSearch = bijectionEquiv(a, b);
        ++cases;
        if (viaSearch) ++equal;
        if (viaCanon != viaSearch) o.fail("disagreement on\n" + dumpConfig(a) + "vs\n" + dumpConfig(b));
    }
    if (o.ok) o.detail = std::to_string(cases) + " pairs, " + std::to_string(equal) + " isomorphic";
    return o;
}

Outcome normalizerAgreement() {
    Outcome o;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        TermPtr t = randomStraightline(rng);
        TermPtr n = normalizeStraightline(t);
        for (Fuel fuel : {Fuel{256}}) {
            if (!observationEq(observe(t, fuel), observe(n, fuel)))
                o.fail("observations differ for " + print(t) + " and its normal form " + print(n));
        }
    }
    if (o.ok) o.detail = "200 programs";
    return o;
}

Outcome repIndep() {
    Outcome o;
    Rng rng(11);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::vector<std::pair<std::string, IsoWitness>> witnesses{
        {"(neg, neg)", IsoWitness{mkNegFn(), mkNegFn()}},
        {"(x + 1, x - 1)", IsoWitness{parseTerm("fun (x : Int) -> x + 1"), parseTerm("fun (x : Int) -> x - 1")}},
    };
    std::size_t instances = 0;
    for (auto &[name, w] : witnesses) {
        for (int i = 0; i < 50; ++i) {
            TermPtr init = mkInt(pick(-20, 20));
            TermPtr obj = cellObject(static_cast<std::size_t>(i) % cellObjectVariants(), init);
            TermPtr moved = applyRule(obj, "rep-indep", {}, {}, Direction::LeftToRight, &w);
            Verdict v = probeEquiv(obj, moved, 4, {16, 64, 256});
            ++instances;
            if (v.kind != VerdictKind::Equivalent)
                o.fail(name + ": " + to_string(v.kind) + " on " + print(obj) + " " + v.witness);
        }
    }
    if (o.ok) o.detail = std::to_string(instances) + " objects, scripts up to length 4";
    return o;
}

}  // namespace

int main() {
    criterion(1, "counter derivation replays", 1.0, [] {
        Outcome o;
        DerivationTrace tr = parseTrace(testutil::readCorpus("counter.trace"));
        TraceReport rep = checkTrace(tr);
        if (!rep.valid) o.fail(rep.message);
        if (tr.steps.empty() || tr.steps.front().rule != "rep-indep" || !tr.steps.front().iso)
            o.fail("derivation does not open with representation independence");
        if (!alphaEq(tr.end, testutil::corpusTerm("negCounter.ref")))
            o.fail("derivation does not end at negCounter");
        if (o.ok) o.detail = rep.message;
        return o;
    });

    criterion(2, "posCounter and negCounter agree on every script", 10.0, [] {
        Outcome o;
        TermPtr pos = testutil::corpusTerm("posCounter.ref"), neg = testutil::corpusTerm("negCounter.ref");
        std::size_t scripts = 0;
        for (std::size_t len = 1; len <= 6; ++len) scripts += genScripts(prepare(pos).resultType, len).size();
        if (scripts != 126) o.fail(std::to_string(scripts) + " scripts instead of 126");
        Verdict v = probeEquiv(pos, neg, 6, {16, 64, 256});
        if (v.kind != VerdictKind::Equivalent) o.fail(to_string(v.kind) + " " + v.witness);
        if (o.ok) o.detail = std::to_string(scripts) + " scripts, " + std::to_string(v.checks) + " comparisons";
        return o;
    });

    criterion(3, "store, monad and step laws", 60.0, [] {
        return lawsPass({"set-get", "alloc-set", "set-set", "get-get-commute", "get-set", "get-discard", "rec-unfold",
                         "bind-left-unit", "bind-right-unit", "bind-assoc", "step-central"},
                        100);
    });

    criterion(4, "allocation permutation", 0, [] { return lawsPass({"alloc-permute"}, 100); });

    criterion(5, "representation independence at the Cell interface", 0, repIndep);

    criterion(6, "guarded kernel laws", 0, guardedKernel);

    criterion(7, "canonicalization agrees with bijection search", 0, canonicalizationOracle);

    criterion(8, "normalizer agrees with the interpreter", 0, normalizerAgreement);

    criterion(9, "negative controls", 0, [] {
        Outcome o;
        Verdict s = strictEquiv(parseTerm("l <- alloc 0; ret 10"), parseTerm("ret 10"), defaultFuelLadder());
        if (s.kind != VerdictKind::Distinguished) o.fail("unused allocation not observed: " + to_string(s.kind));
        Verdict p = probeEquiv(testutil::corpusTerm("posCounter.ref"), testutil::corpusTerm("stuckCounter.ref"), 6,
                               {16, 64, 256});
        if (p.kind != VerdictKind::Distinguished || !p.script || p.script->size() > 2)
            o.fail("stuck counter: " + to_string(p.kind) + " " + p.witness);
        if (o.ok) o.detail = "allocation observed; stuck counter witness " + printScript(*p.script);
        return o;
    });

    std::cout << (failures ? "FAILED " + std::to_string(failures) + " criteria" : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
