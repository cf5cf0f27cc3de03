#include "refstore/interp.hpp"

#include <algorithm>
#include <sstream>

namespace refstore {

namespace {

using guarded::Delayed;

Env restrictTo(const Env &env, const TermPtr &t) {
    Env out;
    for (const auto &name : freeVars(t)) {
        auto it = env.find(name);
        if (it != env.end()) out.emplace(name, it->second);
    }
    return out;
}

const ValuePtr &lookupVar(const Env &env, const std::string &name) {
    auto it = env.find(name);
    if (it == env.end()) throw RuntimeError("unbound variable '" + name + "' at run time");
    return it->second;
}

const Integer &asInt(const ValuePtr &v, const char *what) {
    auto i = std::get_if<val::Int>(&v->node);
    if (!i) throw RuntimeError(std::string(what) + " expects an integer, got " + printValue(v));
    return i->n;
}

const val::Loc &asLoc(const ValuePtr &v, const char *what) {
    auto l = std::get_if<val::Loc>(&v->node);
    if (!l) throw RuntimeError(std::string(what) + " expects a reference, got " + printValue(v));
    return *l;
}

bool isComputationForm(const TermPtr &t) {
    return std::visit(
        [](const auto &n) {
            using N = std::decay_t<decltype(n)>;
            return std::is_same_v<N, tm::Ret> || std::is_same_v<N, tm::Bind> || std::is_same_v<N, tm::Alloc> ||
                   std::is_same_v<N, tm::Get> || std::is_same_v<N, tm::Set> || std::is_same_v<N, tm::Step> ||
                   std::is_same_v<N, tm::Map>;
        },
        t->node);
}

Delayed<State> exec(const Env &env, const TermPtr &t, const Heap &heap);

}  // namespace

ValuePtr apply(const ValuePtr &fn, const ValuePtr &arg) {
    if (std::holds_alternative<val::NegFn>(fn->node)) return vInt(-asInt(arg, "neg"));
    auto c = std::get_if<val::Closure>(&fn->node);
    if (!c) throw RuntimeError("application of a non-function " + printValue(fn));
    Env env = c->env;
    if (c->self.empty()) {
        env[c->param] = arg;
        return evalPure(env, c->body);
    }
    // (rec f x. e) v = step; e[rec f x. e / f, v / x]
    env[c->self] = fn;
    env[c->param] = arg;
    TermPtr unfolded = mkSeq(mkStep(), c->body);
    return vComp(restrictTo(env, unfolded), unfolded);
}

ValuePtr evalPure(const Env &env, const TermPtr &t) {
    const auto &n = t->node;
    if (auto v = std::get_if<tm::Var>(&n)) return lookupVar(env, v->name);
    if (auto l = std::get_if<tm::Lam>(&n)) return vClosure(restrictTo(env, t), "", l->param, l->body);
    if (auto r = std::get_if<tm::Rec>(&n)) return vClosure(restrictTo(env, t), r->self, r->param, r->body);
    if (auto a = std::get_if<tm::App>(&n)) {
        ValuePtr f = evalPure(env, a->fn);
        ValuePtr x = evalPure(env, a->arg);
        return refstore::apply(f, x);
    }
    if (auto p = std::get_if<tm::Pair>(&n)) {
        ValuePtr a = evalPure(env, p->fst);
        return vPair(a, evalPure(env, p->snd));
    }
    if (auto p = std::get_if<tm::Fst>(&n)) {
        ValuePtr v = evalPure(env, p->arg);
        auto pr = std::get_if<val::Pair>(&v->node);
        if (!pr) throw RuntimeError("fst of non-pair " + printValue(v));
        return pr->fst;
    }
    if (auto p = std::get_if<tm::Snd>(&n)) {
        ValuePtr v = evalPure(env, p->arg);
        auto pr = std::get_if<val::Pair>(&v->node);
        if (!pr) throw RuntimeError("snd of non-pair " + printValue(v));
        return pr->snd;
    }
    if (auto r = std::get_if<tm::Record>(&n)) {
        std::vector<std::pair<std::string, ValuePtr>> fields;
        for (auto &[label, e] : r->fields) fields.emplace_back(label, evalPure(env, e));
        return vRecord(std::move(fields));
    }
    if (auto p = std::get_if<tm::Proj>(&n)) {
        ValuePtr v = evalPure(env, p->record);
        auto rec = std::get_if<val::Record>(&v->node);
        if (!rec) throw RuntimeError("projection from non-record " + printValue(v));
        for (auto &[label, f] : rec->fields)
            if (label == p->label) return f;
        throw RuntimeError("record has no label " + p->label);
    }
    if (auto i = std::get_if<tm::IntLit>(&n)) return vInt(i->value);
    if (auto a = std::get_if<tm::Add>(&n)) {
        ValuePtr x = evalPure(env, a->lhs);
        ValuePtr y = evalPure(env, a->rhs);
        return vInt(asInt(x, "+") + asInt(y, "+"));
    }
    if (auto a = std::get_if<tm::Sub>(&n)) {
        ValuePtr x = evalPure(env, a->lhs);
        ValuePtr y = evalPure(env, a->rhs);
        return vInt(asInt(x, "-") - asInt(y, "-"));
    }
    if (std::holds_alternative<tm::Neg>(n)) return vNegFn();
    if (std::holds_alternative<tm::UnitLit>(n)) return vUnit();
    if (isComputationForm(t)) return vComp(restrictTo(env, t), t);
    throw RuntimeError("cannot evaluate " + print(t));
}

namespace {

Delayed<State> runSuspended(const ValuePtr &v, const Heap &heap) {
    auto c = std::get_if<val::Comp>(&v->node);
    if (!c) throw RuntimeError("expected a computation, got " + printValue(v));
    return exec(c->env, c->term, heap);
}

Delayed<State> exec(const Env &env, const TermPtr &t, const Heap &heap) {
    const auto &n = t->node;
    if (auto r = std::get_if<tm::Ret>(&n)) return guarded::now(State{heap, evalPure(env, r->arg)});
    if (auto b = std::get_if<tm::Bind>(&n)) {
        return guarded::bindDelayed(exec(env, b->first, heap), [env, b = *b](const State &s) {
            if (b.var == kAnonymous) return exec(env, b.rest, s.heap);
            Env inner = env;
            inner[b.var] = s.value;
            return exec(inner, b.rest, s.heap);
        });
    }
    if (auto a = std::get_if<tm::Alloc>(&n)) {
        if (!a->tag) throw RuntimeError("alloc without a cell type; elaborate the program first");
        ValuePtr v = evalPure(env, a->init);
        auto [h, l] = allocCell(heap, a->tag, v);
        return guarded::now(State{std::move(h), vLoc(l, a->tag)});
    }
    if (auto g = std::get_if<tm::Get>(&n)) {
        const val::Loc &l = asLoc(evalPure(env, g->ref), "get");
        return guarded::mapDelayed(getCell(heap, l.loc), [heap](const ValuePtr &v) { return State{heap, v}; });
    }
    if (auto s = std::get_if<tm::Set>(&n)) {
        ValuePtr r = evalPure(env, s->ref);
        ValuePtr v = evalPure(env, s->value);
        return guarded::now(State{setCell(heap, asLoc(r, "set").loc, v), vUnit()});
    }
    if (std::holds_alternative<tm::Step>(n)) return guarded::delay(guarded::now(State{heap, vUnit()}));
    if (auto m = std::get_if<tm::Map>(&n)) {
        ValuePtr f = evalPure(env, m->fn);
        return guarded::mapDelayed(exec(env, m->comp, heap),
                                   [f](const State &s) { return State{s.heap, refstore::apply(f, s.value)}; });
    }
    return runSuspended(evalPure(env, t), heap);
}

}  // namespace

Delayed<State> execComp(const ValuePtr &comp, const Heap &heap) { return runSuspended(comp, heap); }

RunResult runComp(const ValuePtr &comp, const Heap &heap, Fuel fuel) {
    auto out = guarded::run(execComp(comp, heap), fuel);
    if (auto c = std::get_if<guarded::Converged<State>>(&out))
        return Config{c->value.heap, c->value.value, c->steps};
    return guarded::Timeout{};
}

bool isGroundType(const TypePtr &t) {
    if (std::holds_alternative<ty::Int>(t->node) || std::holds_alternative<ty::Unit>(t->node)) return true;
    if (auto p = std::get_if<ty::Prod>(&t->node)) return isGroundType(p->fst) && isGroundType(p->snd);
    if (auto r = std::get_if<ty::Record>(&t->node))
        return std::all_of(r->fields.begin(), r->fields.end(), [](auto &f) { return isGroundType(f.second); });
    // locations are observed up to canonical renaming, whatever the cell type
    if (std::holds_alternative<ty::Ref>(t->node)) return true;
    return false;
}

Program prepare(const TermPtr &t) {
    auto e = elaborate(Context{}, t);
    auto c = std::get_if<ty::Comp>(&e.type->node);
    if (!c) throw TypeError("program", {}, "expected a computation of type T A, found " + printType(e.type));
    return Program{e.term, e.type, c->body};
}

Observation observe(const Program &p, Fuel fuel) {
    if (!isGroundType(p.resultType))
        throw std::invalid_argument("observe needs a ground result type, got " + printType(p.resultType));
    RunResult r = runComp(vComp({}, p.term), Heap{}, fuel);
    if (auto c = std::get_if<Config>(&r)) return canonicalize(*c);
    return r;
}

Observation observe(const TermPtr &t, Fuel fuel) { return observe(prepare(t), fuel); }

bool observationEq(const Observation &a, const Observation &b, bool ignoreSteps) {
    auto ca = std::get_if<Config>(&a);
    auto cb = std::get_if<Config>(&b);
    if (!ca || !cb) return !ca && !cb;
    return configEq(*ca, *cb, ignoreSteps);
}

std::string describeObservation(const Observation &o) {
    if (auto c = std::get_if<Config>(&o)) return dumpConfig(*c);
    return "timeout\n";
}

// ------------------------------
// probing
// ------------------------------

std::string printScript(const MethodScript &s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += s[i].label;
        if (auto lit = s[i].arg ? std::get_if<tm::IntLit>(&(*s[i].arg)->node) : nullptr)
            out += "(" + lit->value.str() + ")";
        else if (s[i].arg)
            out += "(" + print(*s[i].arg) + ")";
    }
    return out + "]";
}

MethodScript parseScript(const std::string &text) {
    MethodScript script;
    std::vector<std::string> items;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(cur);
            cur.clear();
            continue;
        }
        cur += c;
    }
    items.push_back(cur);
    for (auto item : items) {
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        item = trim(item);
        if (item.empty()) continue;
        MethodCall call;
        auto open = item.find('(');
        if (open == std::string::npos) {
            call.label = item;
        } else {
            if (item.back() != ')') throw std::invalid_argument("malformed method call '" + item + "'");
            call.label = trim(item.substr(0, open));
            call.arg = parseTerm(item.substr(open + 1, item.size() - open - 2));
        }
        script.push_back(std::move(call));
    }
    return script;
}

namespace {

ValuePtr selectMethod(const ValuePtr &object, const std::string &label) {
    if (auto r = std::get_if<val::Record>(&object->node)) {
        for (auto &[l, v] : r->fields)
            if (l == label) return v;
        throw UnknownLabel("object has no method '" + label + "'");
    }
    if (auto p = std::get_if<val::Pair>(&object->node)) {
        if (label == "fst") return p->fst;
        if (label == "snd") return p->snd;
        throw UnknownLabel("pair object has no method '" + label + "' (use fst or snd)");
    }
    throw UnknownLabel("probed value " + printValue(object) + " is not an object");
}

}  // namespace

ProbeTrace probe(const Program &object, const MethodScript &script, Fuel fuel) {
    ProbeTrace trace;
    RunResult built = runComp(vComp({}, object.term), Heap{}, fuel);
    auto cfg = std::get_if<Config>(&built);
    if (!cfg) {
        trace.timedOut = true;
        return trace;
    }
    trace.constructed = true;
    trace.constructionSteps = cfg->steps;
    fuel -= cfg->steps;
    Heap heap = cfg->heap;
    ValuePtr obj = cfg->result;
    for (const auto &call : script) {
        ValuePtr method = selectMethod(obj, call.label);
        if (call.arg) method = refstore::apply(method, evalPure({}, *call.arg));
        RunResult r = runComp(method, heap, fuel);
        auto c = std::get_if<Config>(&r);
        if (!c) {
            trace.timedOut = true;
            return trace;
        }
        fuel -= c->steps;
        heap = c->heap;
        trace.calls.push_back({c->result, c->steps});
    }
    return trace;
}

bool probeTraceEq(const ProbeTrace &a, const ProbeTrace &b, bool ignoreSteps) {
    if (a.timedOut != b.timedOut || a.constructed != b.constructed || a.calls.size() != b.calls.size()) return false;
    if (!ignoreSteps && a.constructionSteps != b.constructionSteps) return false;
    for (std::size_t i = 0; i < a.calls.size(); ++i) {
        if (!valueEq(a.calls[i].value, b.calls[i].value)) return false;
        if (!ignoreSteps && a.calls[i].steps != b.calls[i].steps) return false;
    }
    return true;
}

std::string describeTrace(const ProbeTrace &t) {
    std::ostringstream os;
    if (!t.constructed) return "construction timed out";
    os << "construct steps=" << t.constructionSteps;
    for (std::size_t i = 0; i < t.calls.size(); ++i)
        os << "; call " << i << " -> " << printValue(t.calls[i].value) << " steps=" << t.calls[i].steps;
    if (t.timedOut) os << "; call " << t.calls.size() << " timed out";
    return os.str();
}

}  // namespace refstore
