#include "refstore/value.hpp"

#include <functional>

namespace refstore {

namespace {
ValuePtr make(auto node) { return std::make_shared<const Value>(Value{std::move(node)}); }
}  // namespace

ValuePtr vInt(Integer n) { return make(val::Int{std::move(n)}); }
ValuePtr vUnit() {
    static const ValuePtr v = make(val::Unit{});
    return v;
}
ValuePtr vPair(ValuePtr a, ValuePtr b) { return make(val::Pair{std::move(a), std::move(b)}); }
ValuePtr vRecord(std::vector<std::pair<std::string, ValuePtr>> fields) { return make(val::Record{std::move(fields)}); }
ValuePtr vLoc(Location l, TypePtr tag) { return make(val::Loc{l, std::move(tag)}); }
ValuePtr vClosure(Env env, std::string self, std::string param, TermPtr body) {
    return make(val::Closure{std::move(env), std::move(self), std::move(param), std::move(body)});
}
ValuePtr vNegFn() {
    static const ValuePtr v = make(val::NegFn{});
    return v;
}
ValuePtr vComp(Env env, TermPtr term) { return make(val::Comp{std::move(env), std::move(term)}); }

namespace {

bool envEq(const Env &a, const Env &b) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first || !valueEq(ia->second, ib->second)) return false;
    return true;
}

TermPtr closureAsTerm(const val::Closure &c) {
    if (c.self.empty()) return mkLam(c.param, c.body);
    return mkRec(c.self, c.param, c.body);
}

}  // namespace

bool valueEq(const ValuePtr &a, const ValuePtr &b) {
    if (a == b) return true;
    if (a->node.index() != b->node.index()) return false;
    if (auto x = std::get_if<val::Int>(&a->node)) return x->n == std::get<val::Int>(b->node).n;
    if (auto x = std::get_if<val::Pair>(&a->node)) {
        auto &y = std::get<val::Pair>(b->node);
        return valueEq(x->fst, y.fst) && valueEq(x->snd, y.snd);
    }
    if (auto x = std::get_if<val::Record>(&a->node)) {
        auto &y = std::get<val::Record>(b->node);
        if (x->fields.size() != y.fields.size()) return false;
        for (std::size_t i = 0; i < x->fields.size(); ++i)
            if (x->fields[i].first != y.fields[i].first || !valueEq(x->fields[i].second, y.fields[i].second))
                return false;
        return true;
    }
    if (auto x = std::get_if<val::Loc>(&a->node)) {
        auto &y = std::get<val::Loc>(b->node);
        return x->loc == y.loc && typeEq(x->tag, y.tag);
    }
    if (auto x = std::get_if<val::Closure>(&a->node)) {
        auto &y = std::get<val::Closure>(b->node);
        return x->self.empty() == y.self.empty() && alphaEq(closureAsTerm(*x), closureAsTerm(y)) &&
               envEq(x->env, y.env);
    }
    if (auto x = std::get_if<val::Comp>(&a->node)) {
        auto &y = std::get<val::Comp>(b->node);
        return alphaEq(x->term, y.term) && envEq(x->env, y.env);
    }
    return true;  // Unit, NegFn
}

namespace {

std::string printEnv(const Env &env) {
    if (env.empty()) return "";
    std::string s = " with ";
    bool first = true;
    for (auto &[k, v] : env) {
        if (!first) s += ", ";
        first = false;
        s += k + " = " + printValue(v);
    }
    return s;
}

}  // namespace

std::string printValue(const ValuePtr &v) {
    if (auto x = std::get_if<val::Int>(&v->node)) return x->n.str();
    if (std::holds_alternative<val::Unit>(v->node)) return "()";
    if (auto x = std::get_if<val::Pair>(&v->node)) return "(" + printValue(x->fst) + ", " + printValue(x->snd) + ")";
    if (auto x = std::get_if<val::Record>(&v->node)) {
        std::string s = "{";
        for (std::size_t i = 0; i < x->fields.size(); ++i) {
            if (i) s += ", ";
            s += x->fields[i].first + " = " + printValue(x->fields[i].second);
        }
        return s + "}";
    }
    if (auto x = std::get_if<val::Loc>(&v->node)) return "#" + std::to_string(x->loc.id);
    if (auto x = std::get_if<val::Closure>(&v->node)) return "<" + print(closureAsTerm(*x)) + printEnv(x->env) + ">";
    if (std::holds_alternative<val::NegFn>(v->node)) return "<neg>";
    auto &c = std::get<val::Comp>(v->node);
    return "<comp " + print(c.term) + printEnv(c.env) + ">";
}

bool conformsTo(const ValuePtr &v, const TypePtr &t) {
    if (std::holds_alternative<ty::Hole>(t->node)) return true;
    if (std::holds_alternative<val::Int>(v->node)) return std::holds_alternative<ty::Int>(t->node);
    if (std::holds_alternative<val::Unit>(v->node)) return std::holds_alternative<ty::Unit>(t->node);
    if (auto x = std::get_if<val::Pair>(&v->node)) {
        auto p = std::get_if<ty::Prod>(&t->node);
        return p && conformsTo(x->fst, p->fst) && conformsTo(x->snd, p->snd);
    }
    if (auto x = std::get_if<val::Record>(&v->node)) {
        auto r = std::get_if<ty::Record>(&t->node);
        if (!r || r->fields.size() != x->fields.size()) return false;
        for (std::size_t i = 0; i < x->fields.size(); ++i)
            if (r->fields[i].first != x->fields[i].first || !conformsTo(x->fields[i].second, r->fields[i].second))
                return false;
        return true;
    }
    if (auto x = std::get_if<val::Loc>(&v->node)) {
        auto r = std::get_if<ty::Ref>(&t->node);
        return r && typeEq(r->body, x->tag);
    }
    if (std::holds_alternative<val::Closure>(v->node) || std::holds_alternative<val::NegFn>(v->node))
        return std::holds_alternative<ty::Fn>(t->node);
    return std::holds_alternative<ty::Comp>(t->node);
}

namespace {

Env renameEnv(const Env &env, const std::map<Location, Location> &rename) {
    Env out;
    for (auto &[k, v] : env) out.emplace(k, renameLocations(v, rename));
    return out;
}

}  // namespace

ValuePtr renameLocations(const ValuePtr &v, const std::map<Location, Location> &rename) {
    if (auto x = std::get_if<val::Loc>(&v->node)) {
        auto it = rename.find(x->loc);
        return it == rename.end() ? v : vLoc(it->second, x->tag);
    }
    if (auto x = std::get_if<val::Pair>(&v->node))
        return vPair(renameLocations(x->fst, rename), renameLocations(x->snd, rename));
    if (auto x = std::get_if<val::Record>(&v->node)) {
        auto fields = x->fields;
        for (auto &f : fields) f.second = renameLocations(f.second, rename);
        return vRecord(std::move(fields));
    }
    if (auto x = std::get_if<val::Closure>(&v->node))
        return vClosure(renameEnv(x->env, rename), x->self, x->param, x->body);
    if (auto x = std::get_if<val::Comp>(&v->node)) return vComp(renameEnv(x->env, rename), x->term);
    return v;
}

void locationsIn(const ValuePtr &v, std::vector<Location> &out) {
    if (auto x = std::get_if<val::Loc>(&v->node)) {
        out.push_back(x->loc);
    } else if (auto x = std::get_if<val::Pair>(&v->node)) {
        locationsIn(x->fst, out);
        locationsIn(x->snd, out);
    } else if (auto x = std::get_if<val::Record>(&v->node)) {
        for (auto &f : x->fields) locationsIn(f.second, out);
    } else if (auto x = std::get_if<val::Closure>(&v->node)) {
        for (auto &[k, e] : x->env) locationsIn(e, out);
    } else if (auto x = std::get_if<val::Comp>(&v->node)) {
        for (auto &[k, e] : x->env) locationsIn(e, out);
    }
}

}  // namespace refstore
