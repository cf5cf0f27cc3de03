#include "refstore/equiv.hpp"

#include <sstream>

namespace refstore {

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Equivalent: return "Equivalent";
        case VerdictKind::Distinguished: return "Distinguished";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const FuelLadder &defaultFuelLadder() {
    static const FuelLadder ladder{4, 16, 64, 256};
    return ladder;
}

FuelLadder parseFuelLadder(const std::string &text) {
    FuelLadder out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789 ") != std::string::npos)
            throw std::invalid_argument("bad fuel ladder entry '" + item + "'");
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw std::invalid_argument("empty fuel ladder");
    return out;
}

namespace {

std::string ladderText(const FuelLadder &ladder) {
    std::string s = "{";
    for (std::size_t i = 0; i < ladder.size(); ++i) s += (i ? "," : "") + std::to_string(ladder[i]);
    return s + "}";
}

}  // namespace

Verdict strictEquiv(const Program &a, const Program &b, const FuelLadder &ladder, bool ignoreSteps) {
    if (!typeEq(a.type, b.type))
        throw std::invalid_argument("programs have different types: " + printType(a.type) + " vs " +
                                    printType(b.type));
    Verdict v;
    v.bounds = "fuels " + ladderText(ladder) + (ignoreSteps ? ", steps ignored" : ", steps observed");
    for (Fuel fuel : ladder) {
        Observation oa = observe(a, fuel), ob = observe(b, fuel);
        bool ca = !timedOut(oa), cb = !timedOut(ob);
        if (ca && cb) {
            ++v.checks;
            if (observationEq(oa, ob, ignoreSteps)) continue;
        } else if (!ca && !cb) {
            continue;
        } else if (ignoreSteps) {
            continue;
        }
        v.kind = VerdictKind::Distinguished;
        v.fuel = fuel;
        v.witness = "fuel " + std::to_string(fuel);
        v.left = describeObservation(oa);
        v.right = describeObservation(ob);
        return v;
    }
    v.kind = v.checks ? VerdictKind::Equivalent : VerdictKind::Inconclusive;
    return v;
}

Verdict strictEquiv(const TermPtr &a, const TermPtr &b, const FuelLadder &ladder, bool ignoreSteps) {
    return strictEquiv(prepare(a), prepare(b), ladder, ignoreSteps);
}

std::vector<TermPtr> argumentPool(const TypePtr &t) {
    if (std::holds_alternative<ty::Int>(t->node)) {
        std::vector<TermPtr> out;
        for (int i = -2; i <= 2; ++i) out.push_back(mkInt(i));
        return out;
    }
    if (std::holds_alternative<ty::Unit>(t->node)) return {mkUnit()};
    if (auto p = std::get_if<ty::Prod>(&t->node)) {
        std::vector<TermPtr> out;
        for (auto &a : argumentPool(p->fst))
            for (auto &b : argumentPool(p->snd)) out.push_back(mkPair(a, b));
        return out;
    }
    throw UnsupportedType("no argument pool for type " + printType(t));
}

namespace {

bool isObservableResult(const TypePtr &t) {
    if (std::holds_alternative<ty::Int>(t->node) || std::holds_alternative<ty::Unit>(t->node)) return true;
    if (auto p = std::get_if<ty::Prod>(&t->node)) return isObservableResult(p->fst) && isObservableResult(p->snd);
    if (auto r = std::get_if<ty::Record>(&t->node)) {
        for (auto &f : r->fields)
            if (!isObservableResult(f.second)) return false;
        return true;
    }
    return false;
}

std::vector<std::pair<std::string, TypePtr>> methodsOf(const TypePtr &objectType) {
    if (auto r = std::get_if<ty::Record>(&objectType->node)) return r->fields;
    if (auto p = std::get_if<ty::Prod>(&objectType->node)) return {{"fst", p->fst}, {"snd", p->snd}};
    throw UnsupportedType("probed objects must be records or pairs of methods, not " + printType(objectType));
}

// Every single call available on the object.
std::vector<MethodCall> callsOf(const TypePtr &objectType) {
    std::vector<MethodCall> calls;
    for (auto &[label, t] : methodsOf(objectType)) {
        if (auto c = std::get_if<ty::Comp>(&t->node)) {
            if (!isObservableResult(c->body))
                throw UnsupportedType("method " + label + " returns unobservable type " + printType(c->body));
            calls.push_back({label, std::nullopt});
            continue;
        }
        auto f = std::get_if<ty::Fn>(&t->node);
        auto c = f ? std::get_if<ty::Comp>(&f->cod->node) : nullptr;
        if (!c || !isObservableResult(c->body))
            throw UnsupportedType("method " + label + " has unsupported type " + printType(t));
        for (auto &arg : argumentPool(f->dom)) calls.push_back({label, arg});
    }
    return calls;
}

}  // namespace

std::vector<MethodScript> genScripts(const TypePtr &objectType, std::size_t length) {
    auto calls = callsOf(objectType);
    std::vector<MethodScript> out{MethodScript{}};
    for (std::size_t i = 0; i < length; ++i) {
        std::vector<MethodScript> next;
        next.reserve(out.size() * calls.size());
        for (auto &prefix : out)
            for (auto &c : calls) {
                auto s = prefix;
                s.push_back(c);
                next.push_back(std::move(s));
            }
        out = std::move(next);
    }
    return out;
}

Verdict probeEquiv(const Program &a, const Program &b, std::size_t maxScriptLen, const FuelLadder &ladder,
                   bool ignoreSteps) {
    if (!typeEq(a.type, b.type))
        throw std::invalid_argument("objects have different types: " + printType(a.type) + " vs " +
                                    printType(b.type));
    Verdict v;
    std::size_t scripts = 0;
    for (std::size_t len = 1; len <= maxScriptLen; ++len) {
        for (const auto &script : genScripts(a.resultType, len)) {
            ++scripts;
            for (Fuel fuel : ladder) {
                ProbeTrace ta = probe(a, script, fuel), tb = probe(b, script, fuel);
                bool done = !ta.timedOut && !tb.timedOut;
                if (done) ++v.checks;
                if (probeTraceEq(ta, tb, ignoreSteps)) continue;
                if (!done && ignoreSteps) continue;
                v.kind = VerdictKind::Distinguished;
                v.script = script;
                v.fuel = fuel;
                v.witness = "script " + printScript(script) + " at fuel " + std::to_string(fuel);
                v.left = describeTrace(ta);
                v.right = describeTrace(tb);
                v.bounds = "scripts of length <= " + std::to_string(len) + ", fuels " + ladderText(ladder);
                return v;
            }
        }
    }
    v.bounds = "scripts of length <= " + std::to_string(maxScriptLen) + " (" + std::to_string(scripts) +
               " scripts), fuels " + ladderText(ladder) + (ignoreSteps ? ", steps ignored" : ", steps observed");
    v.kind = v.checks ? VerdictKind::Equivalent : VerdictKind::Inconclusive;
    return v;
}

Verdict probeEquiv(const TermPtr &a, const TermPtr &b, std::size_t maxScriptLen, const FuelLadder &ladder,
                   bool ignoreSteps) {
    return probeEquiv(prepare(a), prepare(b), maxScriptLen, ladder, ignoreSteps);
}

}  // namespace refstore
