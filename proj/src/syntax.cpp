#include "refstore/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace refstore {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

TypePtr makeType(auto node) { return std::make_shared<const Type>(Type{std::move(node)}); }
TermPtr makeTerm(auto node) { return std::make_shared<const Term>(Term{std::move(node)}); }

}  // namespace

// ------------------------------
// types
// ------------------------------

TypePtr tUnit() {
    static const TypePtr t = makeType(ty::Unit{});
    return t;
}
TypePtr tInt() {
    static const TypePtr t = makeType(ty::Int{});
    return t;
}
TypePtr tFn(TypePtr dom, TypePtr cod) { return makeType(ty::Fn{std::move(dom), std::move(cod)}); }
TypePtr tProd(TypePtr fst, TypePtr snd) { return makeType(ty::Prod{std::move(fst), std::move(snd)}); }
TypePtr tRecord(std::vector<std::pair<std::string, TypePtr>> fields) {
    return makeType(ty::Record{std::move(fields)});
}
TypePtr tComp(TypePtr body) { return makeType(ty::Comp{std::move(body)}); }
TypePtr tRef(TypePtr body) { return makeType(ty::Ref{std::move(body)}); }
TypePtr tHole(int id) { return makeType(ty::Hole{id}); }
TypePtr tCell(TypePtr s) { return tProd(tComp(s), tFn(s, tComp(tUnit()))); }

bool typeEq(const TypePtr &a, const TypePtr &b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [](const ty::Unit &) { return true; },
            [](const ty::Int &) { return true; },
            [&](const ty::Fn &x) {
                const auto &y = std::get<ty::Fn>(b->node);
                return typeEq(x.dom, y.dom) && typeEq(x.cod, y.cod);
            },
            [&](const ty::Prod &x) {
                const auto &y = std::get<ty::Prod>(b->node);
                return typeEq(x.fst, y.fst) && typeEq(x.snd, y.snd);
            },
            [&](const ty::Record &x) {
                const auto &y = std::get<ty::Record>(b->node);
                if (x.fields.size() != y.fields.size()) return false;
                for (std::size_t i = 0; i < x.fields.size(); ++i) {
                    if (x.fields[i].first != y.fields[i].first) return false;
                    if (!typeEq(x.fields[i].second, y.fields[i].second)) return false;
                }
                return true;
            },
            [&](const ty::Comp &x) { return typeEq(x.body, std::get<ty::Comp>(b->node).body); },
            [&](const ty::Ref &x) { return typeEq(x.body, std::get<ty::Ref>(b->node).body); },
            [&](const ty::Hole &x) { return x.id == std::get<ty::Hole>(b->node).id; },
        },
        a->node);
}

namespace {

// arrow 0, product 1, prefix application 2, atom 3
std::string printTypeAt(const TypePtr &t, int level) {
    std::string s;
    int own = 3;
    std::visit(overloaded{
                   [&](const ty::Unit &) { s = "Unit"; },
                   [&](const ty::Int &) { s = "Int"; },
                   [&](const ty::Fn &x) {
                       s = printTypeAt(x.dom, 1) + " -> " + printTypeAt(x.cod, 0);
                       own = 0;
                   },
                   [&](const ty::Prod &x) {
                       s = printTypeAt(x.fst, 2) + " * " + printTypeAt(x.snd, 1);
                       own = 1;
                   },
                   [&](const ty::Record &x) {
                       s = "{";
                       for (std::size_t i = 0; i < x.fields.size(); ++i) {
                           if (i) s += ", ";
                           s += x.fields[i].first + " : " + printTypeAt(x.fields[i].second, 0);
                       }
                       s += "}";
                   },
                   [&](const ty::Comp &x) {
                       s = "T " + printTypeAt(x.body, 2);
                       own = 2;
                   },
                   [&](const ty::Ref &x) {
                       s = "Ref " + printTypeAt(x.body, 2);
                       own = 2;
                   },
                   [&](const ty::Hole &x) { s = "?" + std::to_string(x.id); },
               },
               t->node);
    return own < level ? "(" + s + ")" : s;
}

}  // namespace

std::string printType(const TypePtr &t) {
    if (!t) return "<none>";
    return printTypeAt(t, 0);
}

// ------------------------------
// term constructors
// ------------------------------

TermPtr mkVar(std::string name) { return makeTerm(tm::Var{std::move(name)}); }
TermPtr mkLam(std::string param, TermPtr body, TypePtr annot) {
    return makeTerm(tm::Lam{std::move(param), std::move(annot), std::move(body)});
}
TermPtr mkApp(TermPtr fn, TermPtr arg) { return makeTerm(tm::App{std::move(fn), std::move(arg)}); }
TermPtr mkPair(TermPtr a, TermPtr b) { return makeTerm(tm::Pair{std::move(a), std::move(b)}); }
TermPtr mkFst(TermPtr a) { return makeTerm(tm::Fst{std::move(a)}); }
TermPtr mkSnd(TermPtr a) { return makeTerm(tm::Snd{std::move(a)}); }
TermPtr mkRecord(std::vector<std::pair<std::string, TermPtr>> fields) {
    return makeTerm(tm::Record{std::move(fields)});
}
TermPtr mkProj(TermPtr record, std::string label) {
    return makeTerm(tm::Proj{std::move(record), std::move(label)});
}
TermPtr mkInt(Integer n) { return makeTerm(tm::IntLit{std::move(n)}); }
TermPtr mkAdd(TermPtr a, TermPtr b) { return makeTerm(tm::Add{std::move(a), std::move(b)}); }
TermPtr mkSub(TermPtr a, TermPtr b) { return makeTerm(tm::Sub{std::move(a), std::move(b)}); }
TermPtr mkNegFn() {
    static const TermPtr t = makeTerm(tm::Neg{});
    return t;
}
TermPtr mkNeg(TermPtr a) { return mkApp(mkNegFn(), std::move(a)); }
TermPtr mkUnit() {
    static const TermPtr t = makeTerm(tm::UnitLit{});
    return t;
}
TermPtr mkRet(TermPtr a) { return makeTerm(tm::Ret{std::move(a)}); }
TermPtr mkBind(std::string var, TermPtr first, TermPtr rest) {
    return makeTerm(tm::Bind{std::move(var), std::move(first), std::move(rest)});
}
TermPtr mkSeq(TermPtr first, TermPtr rest) { return mkBind(kAnonymous, std::move(first), std::move(rest)); }
TermPtr mkAlloc(TermPtr init, TypePtr tag) { return makeTerm(tm::Alloc{std::move(init), std::move(tag)}); }
TermPtr mkGet(TermPtr ref) { return makeTerm(tm::Get{std::move(ref)}); }
TermPtr mkSet(TermPtr ref, TermPtr value) { return makeTerm(tm::Set{std::move(ref), std::move(value)}); }
TermPtr mkStep() {
    static const TermPtr t = makeTerm(tm::Step{});
    return t;
}
TermPtr mkMap(TermPtr fn, TermPtr comp) { return makeTerm(tm::Map{std::move(fn), std::move(comp)}); }
TermPtr mkRec(std::string self, std::string param, TermPtr body, TypePtr paramAnnot, TypePtr resultAnnot) {
    return makeTerm(tm::Rec{std::move(self), std::move(param), std::move(paramAnnot), std::move(resultAnnot),
                            std::move(body)});
}
TermPtr mkMeta(std::string name) { return makeTerm(tm::Meta{std::move(name)}); }

// ------------------------------
// paths
// ------------------------------

std::vector<TermPtr> children(const TermPtr &t) {
    return std::visit(overloaded{
                          [](const tm::Lam &x) -> std::vector<TermPtr> { return {x.body}; },
                          [](const tm::App &x) -> std::vector<TermPtr> { return {x.fn, x.arg}; },
                          [](const tm::Pair &x) -> std::vector<TermPtr> { return {x.fst, x.snd}; },
                          [](const tm::Fst &x) -> std::vector<TermPtr> { return {x.arg}; },
                          [](const tm::Snd &x) -> std::vector<TermPtr> { return {x.arg}; },
                          [](const tm::Record &x) {
                              std::vector<TermPtr> out;
                              for (const auto &f : x.fields) out.push_back(f.second);
                              return out;
                          },
                          [](const tm::Proj &x) -> std::vector<TermPtr> { return {x.record}; },
                          [](const tm::Add &x) -> std::vector<TermPtr> { return {x.lhs, x.rhs}; },
                          [](const tm::Sub &x) -> std::vector<TermPtr> { return {x.lhs, x.rhs}; },
                          [](const tm::Ret &x) -> std::vector<TermPtr> { return {x.arg}; },
                          [](const tm::Bind &x) -> std::vector<TermPtr> { return {x.first, x.rest}; },
                          [](const tm::Alloc &x) -> std::vector<TermPtr> { return {x.init}; },
                          [](const tm::Get &x) -> std::vector<TermPtr> { return {x.ref}; },
                          [](const tm::Set &x) -> std::vector<TermPtr> { return {x.ref, x.value}; },
                          [](const tm::Map &x) -> std::vector<TermPtr> { return {x.fn, x.comp}; },
                          [](const tm::Rec &x) -> std::vector<TermPtr> { return {x.body}; },
                          [](const auto &) -> std::vector<TermPtr> { return {}; },
                      },
                      t->node);
}

TermPtr withChild(const TermPtr &t, std::size_t i, TermPtr c) {
    auto bad = [] { throw std::out_of_range("child index out of range"); };
    return std::visit(overloaded{
                          [&](const tm::Lam &x) {
                              if (i != 0) bad();
                              return mkLam(x.param, c, x.annot);
                          },
                          [&](const tm::App &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkApp(c, x.arg) : mkApp(x.fn, c);
                          },
                          [&](const tm::Pair &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkPair(c, x.snd) : mkPair(x.fst, c);
                          },
                          [&](const tm::Fst &) {
                              if (i != 0) bad();
                              return mkFst(c);
                          },
                          [&](const tm::Snd &) {
                              if (i != 0) bad();
                              return mkSnd(c);
                          },
                          [&](const tm::Record &x) {
                              if (i >= x.fields.size()) bad();
                              auto fields = x.fields;
                              fields[i].second = c;
                              return mkRecord(std::move(fields));
                          },
                          [&](const tm::Proj &x) {
                              if (i != 0) bad();
                              return mkProj(c, x.label);
                          },
                          [&](const tm::Add &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkAdd(c, x.rhs) : mkAdd(x.lhs, c);
                          },
                          [&](const tm::Sub &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkSub(c, x.rhs) : mkSub(x.lhs, c);
                          },
                          [&](const tm::Ret &) {
                              if (i != 0) bad();
                              return mkRet(c);
                          },
                          [&](const tm::Bind &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkBind(x.var, c, x.rest) : mkBind(x.var, x.first, c);
                          },
                          [&](const tm::Alloc &x) {
                              if (i != 0) bad();
                              return mkAlloc(c, x.tag);
                          },
                          [&](const tm::Get &) {
                              if (i != 0) bad();
                              return mkGet(c);
                          },
                          [&](const tm::Set &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkSet(c, x.value) : mkSet(x.ref, c);
                          },
                          [&](const tm::Map &x) {
                              if (i > 1) bad();
                              return i == 0 ? mkMap(c, x.comp) : mkMap(x.fn, c);
                          },
                          [&](const tm::Rec &x) {
                              if (i != 0) bad();
                              return mkRec(x.self, x.param, c, x.paramAnnot, x.resultAnnot);
                          },
                          [&](const auto &) -> TermPtr {
                              bad();
                              return nullptr;
                          },
                      },
                      t->node);
}

TermPtr subtermAt(const TermPtr &t, const Path &p) {
    TermPtr cur = t;
    for (std::size_t i : p) {
        auto cs = children(cur);
        if (i >= cs.size()) return nullptr;
        cur = cs[i];
    }
    return cur;
}

TermPtr replaceAt(const TermPtr &t, const Path &p, TermPtr replacement) {
    std::function<TermPtr(const TermPtr &, std::size_t)> go = [&](const TermPtr &cur, std::size_t depth) {
        if (depth == p.size()) return replacement;
        auto cs = children(cur);
        if (p[depth] >= cs.size()) throw std::out_of_range("path " + printPath(p) + " does not address a subterm");
        return withChild(cur, p[depth], go(cs[p[depth]], depth + 1));
    };
    return go(t, 0);
}

std::vector<std::string> bindersFor(const TermPtr &t, std::size_t index) {
    if (auto l = std::get_if<tm::Lam>(&t->node)) return {l->param};
    if (auto b = std::get_if<tm::Bind>(&t->node); b && index == 1) return {b->var};
    if (auto r = std::get_if<tm::Rec>(&t->node)) return {r->self, r->param};
    return {};
}

std::string printPath(const Path &p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    return s + "]";
}

std::optional<Path> parsePath(const std::string &text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
    Path p;
    std::string inner = s.substr(1, s.size() - 2);
    if (inner.empty()) return p;
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(c); }))
            return std::nullopt;
        p.push_back(std::stoul(item));
    }
    return p;
}

// ------------------------------
// names and substitution
// ------------------------------

namespace {

void collectFree(const TermPtr &t, std::vector<std::string> &bound, std::set<std::string> &out) {
    if (auto v = std::get_if<tm::Var>(&t->node)) {
        if (std::find(bound.begin(), bound.end(), v->name) == bound.end()) out.insert(v->name);
        return;
    }
    auto cs = children(t);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto bs = bindersFor(t, i);
        for (auto &b : bs) bound.push_back(b);
        collectFree(cs[i], bound, out);
        bound.resize(bound.size() - bs.size());
    }
}

}  // namespace

std::set<std::string> freeVars(const TermPtr &t) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    collectFree(t, bound, out);
    return out;
}

std::set<std::string> metaVars(const TermPtr &t) {
    std::set<std::string> out;
    std::function<void(const TermPtr &)> go = [&](const TermPtr &u) {
        if (auto m = std::get_if<tm::Meta>(&u->node)) out.insert(m->name);
        for (auto &c : children(u)) go(c);
    };
    go(t);
    return out;
}

bool occursFree(const TermPtr &t, const std::string &name) { return freeVars(t).count(name) > 0; }

std::string freshName(const std::string &base, const std::set<std::string> &avoid) {
    if (!base.empty() && base != kAnonymous && base[0] != '%' && !avoid.count(base)) return base;
    std::string stem = base;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.empty() || stem == kAnonymous || stem[0] == '%') stem = "x";
    if (!avoid.count(stem)) return stem;
    for (int i = 1;; ++i) {
        std::string cand = stem + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

namespace {

using Sigma = std::vector<std::pair<std::string, TermPtr>>;

const TermPtr *lookup(const Sigma &sigma, const std::string &x) {
    for (auto it = sigma.rbegin(); it != sigma.rend(); ++it)
        if (it->first == x) return &it->second;
    return nullptr;
}

TermPtr substGo(const TermPtr &t, const Sigma &sigma);

// Pushes `sigma` under binders `names` of a child, renaming binders that would capture.
// Returns the renamed binder list and the extended substitution.
std::pair<std::vector<std::string>, Sigma> underBinders(const std::vector<std::string> &names, const Sigma &sigma,
                                                        const TermPtr &body) {
    Sigma inner;
    for (const auto &[x, s] : sigma)
        if (std::find(names.begin(), names.end(), x) == names.end()) inner.emplace_back(x, s);
    std::set<std::string> bodyFree = freeVars(body);
    std::set<std::string> danger;
    for (const auto &[x, s] : inner) {
        if (!bodyFree.count(x)) continue;
        for (auto &v : freeVars(s)) danger.insert(v);
    }
    std::vector<std::string> renamed = names;
    std::set<std::string> avoid = danger;
    avoid.insert(bodyFree.begin(), bodyFree.end());
    for (auto &[x, s] : inner) avoid.insert(x);
    for (auto &n : names) avoid.insert(n);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == kAnonymous || !danger.count(names[i])) continue;
        std::string fresh = freshName(names[i], avoid);
        avoid.insert(fresh);
        renamed[i] = fresh;
        inner.emplace_back(names[i], mkVar(fresh));
    }
    return {renamed, inner};
}

TermPtr substGo(const TermPtr &t, const Sigma &sigma) {
    if (sigma.empty()) return t;
    if (auto v = std::get_if<tm::Var>(&t->node)) {
        if (auto s = lookup(sigma, v->name)) return *s;
        return t;
    }
    if (auto l = std::get_if<tm::Lam>(&t->node)) {
        auto [names, inner] = underBinders({l->param}, sigma, l->body);
        return mkLam(names[0], substGo(l->body, inner), l->annot);
    }
    if (auto b = std::get_if<tm::Bind>(&t->node)) {
        auto first = substGo(b->first, sigma);
        auto [names, inner] = underBinders({b->var}, sigma, b->rest);
        return mkBind(names[0], first, substGo(b->rest, inner));
    }
    if (auto r = std::get_if<tm::Rec>(&t->node)) {
        auto [names, inner] = underBinders({r->self, r->param}, sigma, r->body);
        return mkRec(names[0], names[1], substGo(r->body, inner), r->paramAnnot, r->resultAnnot);
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto c = substGo(cs[i], sigma);
        if (c != cs[i]) out = withChild(out, i, c);
    }
    return out;
}

}  // namespace

TermPtr subst(const TermPtr &t, const std::string &x, const TermPtr &s) { return substGo(t, Sigma{{x, s}}); }

TermPtr substMany(const TermPtr &t, const std::vector<std::pair<std::string, TermPtr>> &sigma) {
    return substGo(t, sigma);
}

TermPtr instantiateMetas(const TermPtr &t, const std::vector<std::pair<std::string, TermPtr>> &sigma) {
    if (auto m = std::get_if<tm::Meta>(&t->node)) {
        if (auto s = lookup(sigma, m->name)) return *s;
        return t;
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto c = instantiateMetas(cs[i], sigma);
        if (c != cs[i]) out = withChild(out, i, c);
    }
    return out;
}

// ------------------------------
// alpha-equivalence
// ------------------------------

namespace {

long boundIndex(const std::vector<std::string> &stack, const std::string &name) {
    for (long i = static_cast<long>(stack.size()) - 1; i >= 0; --i)
        if (stack[i] == name) return i;
    return -1;
}

bool alphaGo(const TermPtr &a, const TermPtr &b, std::vector<std::string> &sa, std::vector<std::string> &sb) {
    if (a->node.index() != b->node.index()) return false;
    if (auto va = std::get_if<tm::Var>(&a->node)) {
        const auto &vb = std::get<tm::Var>(b->node);
        long ia = boundIndex(sa, va->name), ib = boundIndex(sb, vb.name);
        if (ia != ib) return false;
        return ia >= 0 || va->name == vb.name;
    }
    if (auto ia = std::get_if<tm::IntLit>(&a->node)) return ia->value == std::get<tm::IntLit>(b->node).value;
    if (auto ma = std::get_if<tm::Meta>(&a->node)) return ma->name == std::get<tm::Meta>(b->node).name;
    if (auto ra = std::get_if<tm::Record>(&a->node)) {
        const auto &rb = std::get<tm::Record>(b->node);
        if (ra->fields.size() != rb.fields.size()) return false;
        for (std::size_t i = 0; i < ra->fields.size(); ++i)
            if (ra->fields[i].first != rb.fields[i].first) return false;
    }
    if (auto pa = std::get_if<tm::Proj>(&a->node))
        if (pa->label != std::get<tm::Proj>(b->node).label) return false;
    auto ca = children(a), cb = children(b);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        auto ba = bindersFor(a, i), bb = bindersFor(b, i);
        for (auto &n : ba) sa.push_back(n);
        for (auto &n : bb) sb.push_back(n);
        bool ok = alphaGo(ca[i], cb[i], sa, sb);
        sa.resize(sa.size() - ba.size());
        sb.resize(sb.size() - bb.size());
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool alphaEq(const TermPtr &a, const TermPtr &b) {
    std::vector<std::string> sa, sb;
    return alphaGo(a, b, sa, sb);
}

namespace {

TermPtr normalizeNames(const TermPtr &t, std::vector<std::pair<std::string, std::string>> &scope) {
    if (auto v = std::get_if<tm::Var>(&t->node)) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == v->name) return mkVar(it->second);
        return t;
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto bs = bindersFor(t, i);
        for (auto &b : bs) scope.emplace_back(b, "%" + std::to_string(scope.size()));
        auto c = normalizeNames(cs[i], scope);
        scope.resize(scope.size() - bs.size());
        if (c != cs[i]) out = withChild(out, i, c);
    }
    auto rename = [&](const std::string &, std::size_t offset) { return "%" + std::to_string(scope.size() + offset); };
    if (auto l = std::get_if<tm::Lam>(&out->node)) return mkLam(rename(l->param, 0), l->body, l->annot);
    if (auto b = std::get_if<tm::Bind>(&out->node)) return mkBind(rename(b->var, 0), b->first, b->rest);
    if (auto r = std::get_if<tm::Rec>(&out->node))
        return mkRec(rename(r->self, 0), rename(r->param, 1), r->body, r->paramAnnot, r->resultAnnot);
    return out;
}

}  // namespace

TermPtr alphaNormalize(const TermPtr &t) {
    std::vector<std::pair<std::string, std::string>> scope;
    return normalizeNames(t, scope);
}

std::size_t termSize(const TermPtr &t) {
    std::size_t n = 1;
    for (auto &c : children(t)) n += termSize(c);
    return n;
}

// ------------------------------
// lexer
// ------------------------------

ParseError::ParseError(const std::string &msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Int, Meta, Punct, Keyword, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

const std::set<std::string> &keywords() {
    static const std::set<std::string> k = {"fun", "rec", "ret",  "alloc", "get", "set", "step", "map",
                                            "fst", "snd", "neg",  "def",   "T",   "Ref", "Int",  "Unit",
                                            "Cell"};
    return k;
}

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(const std::string &src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    std::vector<std::pair<char, std::pair<int, int>>> delims;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        int l = line, k = col;
        if (isIdentStart(c)) {
            std::size_t j = i;
            while (j < src.size() && isIdentChar(src[j])) ++j;
            std::string word = src.substr(i, j - i);
            out.push_back({keywords().count(word) ? Tok::Keyword : Tok::Ident, word, l, k});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Int, src.substr(i, j - i), l, k});
            advance(j - i);
            continue;
        }
        if (c == '?') {
            std::size_t j = i + 1;
            while (j < src.size() && isIdentChar(src[j])) ++j;
            if (j == i + 1) throw ParseError("expected metavariable name after '?'", l, k);
            out.push_back({Tok::Meta, src.substr(i + 1, j - i - 1), l, k});
            advance(j - i);
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == "->" || two == "<-") {
            out.push_back({Tok::Punct, two, l, k});
            advance(2);
            continue;
        }
        static const std::string single = "(){},;.:+-*=";
        if (single.find(c) == std::string::npos)
            throw ParseError(std::string("unexpected character '") + c + "'", l, k);
        if (c == '(' || c == '{') delims.push_back({c, {l, k}});
        if (c == ')' || c == '}') {
            char want = c == ')' ? '(' : '{';
            if (delims.empty() || delims.back().first != want)
                throw ParseError(std::string("unbalanced delimiter '") + c + "'", l, k);
            delims.pop_back();
        }
        out.push_back({Tok::Punct, std::string(1, c), l, k});
        advance(1);
    }
    if (!delims.empty())
        throw ParseError(std::string("unbalanced delimiter '") + delims.back().first + "'",
                         delims.back().second.first, delims.back().second.second);
    out.push_back({Tok::End, "", line, col});
    return out;
}

// ------------------------------
// parser
// ------------------------------

class Parser {
public:
    explicit Parser(const std::string &src) : toks_(lex(src)) {}

    bool atEnd() const { return peek().kind == Tok::End; }
    const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

    bool isPunct(const std::string &p, std::size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text == p;
    }
    bool isKeyword(const std::string &w, std::size_t k = 0) const {
        return peek(k).kind == Tok::Keyword && peek(k).text == w;
    }

    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, peek().line, peek().col); }

    void expectPunct(const std::string &p) {
        if (!isPunct(p)) fail("expected '" + p + "' but found " + describe(peek()));
        ++pos_;
    }
    void expectKeyword(const std::string &w) {
        if (!isKeyword(w)) fail("expected '" + w + "' but found " + describe(peek()));
        ++pos_;
    }
    std::string expectIdent() {
        if (peek().kind != Tok::Ident) fail("expected identifier but found " + describe(peek()));
        return toks_[pos_++].text;
    }

    static std::string describe(const Token &t) {
        switch (t.kind) {
            case Tok::End: return "end of input";
            case Tok::Ident: return "identifier '" + t.text + "'";
            case Tok::Int: return "integer " + t.text;
            case Tok::Meta: return "metavariable ?" + t.text;
            default: return "'" + t.text + "'";
        }
    }

    // ---- types

    TypePtr type() {
        TypePtr lhs = typeProd();
        if (isPunct("->")) {
            ++pos_;
            return tFn(lhs, type());
        }
        return lhs;
    }

    TypePtr typeProd() {
        TypePtr lhs = typeApp();
        if (isPunct("*")) {
            ++pos_;
            return tProd(lhs, typeProd());
        }
        return lhs;
    }

    TypePtr typeApp() {
        if (isKeyword("T")) {
            ++pos_;
            return tComp(typeApp());
        }
        if (isKeyword("Ref")) {
            ++pos_;
            return tRef(typeApp());
        }
        if (isKeyword("Cell")) {
            ++pos_;
            return tCell(typeApp());
        }
        return typeAtom();
    }

    TypePtr typeAtom() {
        if (isKeyword("Int")) {
            ++pos_;
            return tInt();
        }
        if (isKeyword("Unit")) {
            ++pos_;
            return tUnit();
        }
        if (isPunct("(")) {
            ++pos_;
            if (isPunct(")")) {
                ++pos_;
                return tUnit();
            }
            TypePtr t = type();
            expectPunct(")");
            return t;
        }
        if (isPunct("{")) {
            ++pos_;
            std::vector<std::pair<std::string, TypePtr>> fields;
            std::set<std::string> seen;
            while (!isPunct("}")) {
                const Token &at = peek();
                std::string label = expectIdent();
                if (!seen.insert(label).second) throw ParseError("duplicate record label '" + label + "'", at.line, at.col);
                expectPunct(":");
                fields.emplace_back(label, type());
                if (!isPunct(",")) break;
                ++pos_;
            }
            expectPunct("}");
            return tRecord(std::move(fields));
        }
        if (peek().kind == Tok::Keyword) fail("unknown type keyword '" + peek().text + "'");
        fail("expected a type but found " + describe(peek()));
    }

    // ---- terms

    TermPtr seq() {
        if ((peek().kind == Tok::Ident) && isPunct("<-", 1)) {
            std::string x = expectIdent();
            ++pos_;
            TermPtr first = op();
            expectPunct(";");
            return mkBind(x, first, seq());
        }
        TermPtr first = op();
        if (isPunct(";")) {
            ++pos_;
            return mkSeq(first, seq());
        }
        return first;
    }

    TermPtr op() {
        if (isKeyword("fun")) return lambda();
        if (isKeyword("rec")) return recursive();
        TermPtr lhs = app();
        while (isPunct("+") || isPunct("-")) {
            bool plus = peek().text == "+";
            ++pos_;
            TermPtr rhs = app();
            lhs = plus ? mkAdd(lhs, rhs) : mkSub(lhs, rhs);
        }
        return lhs;
    }

    TermPtr lambda() {
        expectKeyword("fun");
        std::string x;
        TypePtr annot;
        if (isPunct("(")) {
            ++pos_;
            x = expectIdent();
            expectPunct(":");
            annot = type();
            expectPunct(")");
        } else {
            x = expectIdent();
        }
        expectPunct("->");
        return mkLam(x, seq(), annot);
    }

    TermPtr recursive() {
        expectKeyword("rec");
        std::string f = expectIdent();
        std::string x;
        TypePtr paramAnnot, resultAnnot;
        if (isPunct("(")) {
            ++pos_;
            x = expectIdent();
            expectPunct(":");
            paramAnnot = type();
            expectPunct(")");
        } else {
            x = expectIdent();
        }
        if (isPunct(":")) {
            ++pos_;
            resultAnnot = type();
        }
        expectPunct(".");
        return mkRec(f, x, seq(), paramAnnot, resultAnnot);
    }

    bool startsAtom() const {
        const Token &t = peek();
        if (t.kind == Tok::Ident || t.kind == Tok::Int || t.kind == Tok::Meta) return true;
        if (t.kind == Tok::Keyword) return t.text == "step" || t.text == "neg";
        return t.kind == Tok::Punct && (t.text == "(" || t.text == "{");
    }

    TermPtr app() {
        TermPtr head;
        if (peek().kind == Tok::Keyword) {
            const std::string &w = peek().text;
            if (w == "ret") {
                ++pos_;
                head = mkRet(atom());
            } else if (w == "alloc") {
                ++pos_;
                head = mkAlloc(atom());
            } else if (w == "get") {
                ++pos_;
                head = mkGet(atom());
            } else if (w == "set") {
                ++pos_;
                TermPtr r = atom();
                head = mkSet(r, atom());
            } else if (w == "map") {
                ++pos_;
                TermPtr f = atom();
                head = mkMap(f, atom());
            } else if (w == "fst") {
                ++pos_;
                head = mkFst(atom());
            } else if (w == "snd") {
                ++pos_;
                head = mkSnd(atom());
            } else if (w == "step" || w == "neg") {
                head = atom();
            } else if (w == "def") {
                fail("unexpected 'def' inside a term");
            } else {
                fail("unknown keyword '" + w + "' in term position");
            }
        } else {
            head = atom();
        }
        while (startsAtom()) head = mkApp(head, atom());
        return head;
    }

    TermPtr atom() {
        TermPtr t = atomCore();
        while (isPunct(".") && peek(1).kind == Tok::Ident) {
            ++pos_;
            t = mkProj(t, toks_[pos_++].text);
        }
        return t;
    }

    TermPtr atomCore() {
        const Token &t = peek();
        switch (t.kind) {
            case Tok::Ident:
                ++pos_;
                if (t.text == kAnonymous) throw ParseError("'_' cannot be used as a variable", t.line, t.col);
                return mkVar(t.text);
            case Tok::Int: ++pos_; return mkInt(Integer(t.text));
            case Tok::Meta: ++pos_; return mkMeta(t.text);
            case Tok::Keyword:
                if (t.text == "step") {
                    ++pos_;
                    return mkStep();
                }
                if (t.text == "neg") {
                    ++pos_;
                    return mkNegFn();
                }
                fail("keyword '" + t.text + "' must be parenthesized here");
            case Tok::End: fail("unexpected end of input");
            case Tok::Punct: break;
        }
        if (isPunct("-") && peek(1).kind == Tok::Int) {
            ++pos_;
            return mkInt(-Integer(toks_[pos_++].text));
        }
        if (isPunct("(")) {
            ++pos_;
            if (isPunct(")")) {
                ++pos_;
                return mkUnit();
            }
            TermPtr a = seq();
            if (isPunct(",")) {
                ++pos_;
                TermPtr b = seq();
                expectPunct(")");
                return mkPair(a, b);
            }
            expectPunct(")");
            return a;
        }
        if (isPunct("{")) {
            ++pos_;
            std::vector<std::pair<std::string, TermPtr>> fields;
            std::set<std::string> seen;
            while (!isPunct("}")) {
                const Token &at = peek();
                std::string label = expectIdent();
                if (!seen.insert(label).second) throw ParseError("duplicate record label '" + label + "'", at.line, at.col);
                expectPunct("->");
                fields.emplace_back(label, seq());
                if (!isPunct(",")) break;
                ++pos_;
            }
            expectPunct("}");
            return mkRecord(std::move(fields));
        }
        fail("expected a term but found " + describe(t));
    }

    std::vector<Definition> program() {
        std::vector<Definition> defs;
        if (!isKeyword("def")) {
            int line = peek().line;
            TermPtr t = seq();
            if (!atEnd()) fail("unexpected " + describe(peek()) + " after term");
            defs.push_back({"main", t, line});
            return defs;
        }
        while (!atEnd()) {
            if (!isKeyword("def")) {
                if (peek().kind == Tok::Ident || peek().kind == Tok::Keyword)
                    fail("unknown keyword '" + peek().text + "' at top level (expected 'def')");
                fail("expected 'def' but found " + describe(peek()));
            }
            int line = peek().line;
            ++pos_;
            const Token &nameTok = peek();
            std::string name = expectIdent();
            for (auto &d : defs)
                if (d.name == name) throw ParseError("duplicate definition '" + name + "'", nameTok.line, nameTok.col);
            expectPunct("=");
            defs.push_back({name, seq(), line});
        }
        return defs;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

TermPtr parseTerm(const std::string &text) {
    Parser p(text);
    TermPtr t = p.seq();
    if (!p.atEnd()) p.fail("unexpected " + Parser::describe(p.peek()) + " after term");
    return t;
}

TypePtr parseType(const std::string &text) {
    Parser p(text);
    TypePtr t = p.type();
    if (!p.atEnd()) p.fail("unexpected " + Parser::describe(p.peek()) + " after type");
    return t;
}

std::vector<Definition> parseProgram(const std::string &text) {
    Parser p(text);
    auto defs = p.program();
    std::vector<std::pair<std::string, TermPtr>> earlier;
    for (auto &d : defs) {
        d.body = substMany(d.body, earlier);
        earlier.emplace_back(d.name, d.body);
    }
    return defs;
}

// ------------------------------
// printer
// ------------------------------

namespace {

// 0: binders and sequencing, 1: additive, 2: application, 3: atom
std::string printAt(const TermPtr &t, int level) {
    std::string s;
    int own = 3;
    std::visit(
        overloaded{
            [&](const tm::Var &x) { s = x.name; },
            [&](const tm::Lam &x) {
                s = x.annot ? "fun (" + x.param + " : " + printType(x.annot) + ") -> " : "fun " + x.param + " -> ";
                s += printAt(x.body, 0);
                own = 0;
            },
            [&](const tm::App &x) {
                s = printAt(x.fn, 2) + " " + printAt(x.arg, 3);
                own = 2;
            },
            [&](const tm::Pair &x) { s = "(" + printAt(x.fst, 0) + ", " + printAt(x.snd, 0) + ")"; },
            [&](const tm::Fst &x) {
                s = "fst " + printAt(x.arg, 3);
                own = 2;
            },
            [&](const tm::Snd &x) {
                s = "snd " + printAt(x.arg, 3);
                own = 2;
            },
            [&](const tm::Record &x) {
                s = "{";
                for (std::size_t i = 0; i < x.fields.size(); ++i) {
                    if (i) s += ", ";
                    s += x.fields[i].first + " -> " + printAt(x.fields[i].second, 0);
                }
                s += "}";
            },
            [&](const tm::Proj &x) { s = printAt(x.record, 3) + "." + x.label; },
            [&](const tm::IntLit &x) { s = x.value < 0 ? "(" + x.value.str() + ")" : x.value.str(); },
            [&](const tm::Add &x) {
                s = printAt(x.lhs, 1) + " + " + printAt(x.rhs, 2);
                own = 1;
            },
            [&](const tm::Sub &x) {
                s = printAt(x.lhs, 1) + " - " + printAt(x.rhs, 2);
                own = 1;
            },
            [&](const tm::Neg &) { s = "neg"; },
            [&](const tm::UnitLit &) { s = "()"; },
            [&](const tm::Ret &x) {
                s = "ret " + printAt(x.arg, 3);
                own = 2;
            },
            [&](const tm::Bind &x) {
                s = (x.var == kAnonymous ? "" : x.var + " <- ") + printAt(x.first, 1) + "; " + printAt(x.rest, 0);
                own = 0;
            },
            [&](const tm::Alloc &x) {
                s = "alloc " + printAt(x.init, 3);
                own = 2;
            },
            [&](const tm::Get &x) {
                s = "get " + printAt(x.ref, 3);
                own = 2;
            },
            [&](const tm::Set &x) {
                s = "set " + printAt(x.ref, 3) + " " + printAt(x.value, 3);
                own = 2;
            },
            [&](const tm::Step &) { s = "step"; },
            [&](const tm::Map &x) {
                s = "map " + printAt(x.fn, 3) + " " + printAt(x.comp, 3);
                own = 2;
            },
            [&](const tm::Rec &x) {
                s = "rec " + x.self + " ";
                s += x.paramAnnot ? "(" + x.param + " : " + printType(x.paramAnnot) + ")" : x.param;
                if (x.resultAnnot) s += " : " + printType(x.resultAnnot);
                s += ". " + printAt(x.body, 0);
                own = 0;
            },
            [&](const tm::Meta &x) { s = "?" + x.name; },
        },
        t->node);
    return own < level ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const TermPtr &t) { return printAt(t, 0); }

}  // namespace refstore
