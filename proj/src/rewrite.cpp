#include "refstore/rewrite.hpp"

#include <algorithm>

#include "refstore/interp.hpp"
#include "refstore/normalize.hpp"

namespace refstore {

std::string to_string(RuleErrorKind k) {
    switch (k) {
        case RuleErrorKind::NoMatch: return "NoMatch";
        case RuleErrorKind::TypeRegression: return "TypeRegression";
        case RuleErrorKind::UndischargedObligation: return "UndischargedObligation";
        case RuleErrorKind::UnknownRule: return "UnknownRule";
        case RuleErrorKind::BadBinding: return "BadBinding";
    }
    return "?";
}

RuleError::RuleError(RuleErrorKind kind, const std::string &detail)
    : std::runtime_error(to_string(kind) + ": " + detail), kind_(kind) {}

ObligationFailed::ObligationFailed(const std::string &detail, ValuePtr counterexample)
    : std::runtime_error(detail), counterexample_(std::move(counterexample)) {}

namespace {

bool isPatternName(const std::string &n) { return !n.empty() && n[0] == '%'; }

// ------------------------------
// pattern preparation
// ------------------------------

// Gives every binder of a rule side a '%' name so instances can never collide with it.
// Anonymous binders get distinct names, so a metavariable under one cannot use the bound value.
TermPtr markBinders(const TermPtr &t, int &counter) {
    auto mark = [&](const std::string &b) {
        return b == kAnonymous ? "%_" + std::to_string(counter++) : "%" + b;
    };
    const auto &n = t->node;
    if (auto l = std::get_if<tm::Lam>(&n)) {
        std::string p = mark(l->param);
        return mkLam(p, markBinders(subst(l->body, l->param, mkVar(p)), counter), l->annot);
    }
    if (auto b = std::get_if<tm::Bind>(&n)) {
        std::string v = mark(b->var);
        TermPtr rest = b->var == kAnonymous ? b->rest : subst(b->rest, b->var, mkVar(v));
        return mkBind(v, markBinders(b->first, counter), markBinders(rest, counter));
    }
    if (auto r = std::get_if<tm::Rec>(&n)) {
        std::string f = mark(r->self), x = mark(r->param);
        TermPtr body = substMany(r->body, {{r->self, mkVar(f)}, {r->param, mkVar(x)}});
        return mkRec(f, x, markBinders(body, counter), r->paramAnnot, r->resultAnnot);
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) out = withChild(out, i, markBinders(cs[i], counter));
    return out;
}

// ------------------------------
// matching
// ------------------------------

using Scope = std::vector<std::pair<std::string, std::string>>;  // pattern name, term name

struct MatchState {
    Bindings metas;
    std::map<std::string, std::string> binderNames;  // pattern binder -> term binder
};

bool sameLeafData(const TermPtr &p, const TermPtr &t) {
    if (p->node.index() != t->node.index()) return false;
    if (auto a = std::get_if<tm::IntLit>(&p->node)) return a->value == std::get<tm::IntLit>(t->node).value;
    if (auto a = std::get_if<tm::Proj>(&p->node)) return a->label == std::get<tm::Proj>(t->node).label;
    if (auto a = std::get_if<tm::Record>(&p->node)) {
        auto &b = std::get<tm::Record>(t->node);
        if (a->fields.size() != b.fields.size()) return false;
        for (std::size_t i = 0; i < a->fields.size(); ++i)
            if (a->fields[i].first != b.fields[i].first) return false;
    }
    return true;
}

// Rewrites term-side bound names into the pattern's names; innermost binding wins.
TermPtr toPatternNames(const TermPtr &t, const Scope &scope) {
    std::vector<std::pair<std::string, TermPtr>> sigma;
    std::set<std::string> seen;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
        if (it->second == kAnonymous || !seen.insert(it->second).second) continue;
        sigma.emplace_back(it->second, mkVar(it->first));
    }
    return sigma.empty() ? t : substMany(t, sigma);
}

bool match(const TermPtr &p, const TermPtr &t, Scope &scope, MatchState &st) {
    if (auto m = std::get_if<tm::Meta>(&p->node)) {
        TermPtr inst = toPatternNames(t, scope);
        auto [it, fresh] = st.metas.emplace(m->name, inst);
        return fresh || alphaEq(it->second, inst);
    }
    if (auto pv = std::get_if<tm::Var>(&p->node)) {
        auto tv = std::get_if<tm::Var>(&t->node);
        if (!tv) return false;
        auto byTerm = std::find_if(scope.rbegin(), scope.rend(), [&](auto &e) { return e.second == tv->name; });
        if (!isPatternName(pv->name)) return byTerm == scope.rend() && pv->name == tv->name;
        auto byPattern = std::find_if(scope.rbegin(), scope.rend(), [&](auto &e) { return e.first == pv->name; });
        return byTerm != scope.rend() && byTerm == byPattern;
    }
    if (!sameLeafData(p, t)) return false;
    auto pcs = children(p), tcs = children(t);
    for (std::size_t i = 0; i < pcs.size(); ++i) {
        auto pb = bindersFor(p, i), tb = bindersFor(t, i);
        for (std::size_t k = 0; k < pb.size(); ++k) {
            scope.emplace_back(pb[k], tb[k]);
            st.binderNames.emplace(pb[k], tb[k]);
        }
        bool ok = match(pcs[i], tcs[i], scope, st);
        scope.resize(scope.size() - pb.size());
        if (!ok) return false;
    }
    return true;
}

std::optional<MatchState> matchMarked(const TermPtr &pattern, const TermPtr &t) {
    MatchState st;
    Scope scope;
    if (!match(pattern, t, scope, st)) return std::nullopt;
    return st;
}

// ------------------------------
// instantiation
// ------------------------------

// Chooses concrete names for the '%' binders, preferring the names seen in the matched term.
TermPtr concretize(const TermPtr &t, const std::map<std::string, std::string> &preferred) {
    auto pick = [&](const std::string &b, const TermPtr &scopeBody, const std::set<std::string> &siblings) {
        if (!isPatternName(b)) return b;
        bool used = occursFree(scopeBody, b);
        auto it = preferred.find(b);
        bool matched = it != preferred.end();
        std::string pref = matched ? it->second : b.substr(1);
        if (!used && (!matched || pref == kAnonymous)) return std::string(kAnonymous);
        std::set<std::string> avoid = freeVars(scopeBody);
        avoid.insert(siblings.begin(), siblings.end());
        return freshName(pref, avoid);
    };
    const auto &n = t->node;
    if (auto l = std::get_if<tm::Lam>(&n)) {
        std::string x = pick(l->param, l->body, {});
        if (x == kAnonymous) x = freshName(l->param.substr(isPatternName(l->param) ? 1 : 0), freeVars(l->body));
        TermPtr body = x == l->param ? l->body : subst(l->body, l->param, mkVar(x));
        return mkLam(x, concretize(body, preferred), l->annot);
    }
    if (auto b = std::get_if<tm::Bind>(&n)) {
        std::string x = pick(b->var, b->rest, {});
        TermPtr rest = (x == b->var || x == kAnonymous) ? b->rest : subst(b->rest, b->var, mkVar(x));
        return mkBind(x, concretize(b->first, preferred), concretize(rest, preferred));
    }
    if (auto r = std::get_if<tm::Rec>(&n)) {
        auto fix = [&](const std::string &b, const std::set<std::string> &sib) {
            std::string x = pick(b, r->body, sib);
            if (x == kAnonymous) x = freshName(b.substr(isPatternName(b) ? 1 : 0), freeVars(r->body));
            return x;
        };
        std::string f = fix(r->self, {});
        std::string x = fix(r->param, {f});
        TermPtr body = substMany(r->body, {{r->self, mkVar(f)}, {r->param, mkVar(x)}});
        return mkRec(f, x, concretize(body, preferred), r->paramAnnot, r->resultAnnot);
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto c = concretize(cs[i], preferred);
        if (c != cs[i]) out = withChild(out, i, c);
    }
    return out;
}

// ------------------------------
// built-in rules
// ------------------------------

TermPtr noMatch(const std::string &rule, const TermPtr &t, const std::string &expected) {
    throw RuleError(RuleErrorKind::NoMatch, rule + " expects " + expected + ", found " + print(t));
}

TermPtr builtinBeta(const TermPtr &t, const IsoWitness *) {
    auto a = std::get_if<tm::App>(&t->node);
    auto l = a ? std::get_if<tm::Lam>(&a->fn->node) : nullptr;
    if (!l) return noMatch("beta", t, "(fun x -> e) v");
    return subst(l->body, l->param, a->arg);
}

TermPtr builtinRecUnfold(const TermPtr &t, const IsoWitness *) {
    auto a = std::get_if<tm::App>(&t->node);
    auto r = a ? std::get_if<tm::Rec>(&a->fn->node) : nullptr;
    if (!r) return noMatch("rec-unfold", t, "(rec f x. e) v");
    return mkSeq(mkStep(), substMany(r->body, {{r->self, a->fn}, {r->param, a->arg}}));
}

TermPtr builtinLeftUnit(const TermPtr &t, const IsoWitness *) {
    auto b = std::get_if<tm::Bind>(&t->node);
    auto r = b ? std::get_if<tm::Ret>(&b->first->node) : nullptr;
    if (!r) return noMatch("bind-left-unit", t, "x <- ret v; e");
    return b->var == kAnonymous ? b->rest : subst(b->rest, b->var, r->arg);
}

TermPtr builtinRecordBeta(const TermPtr &t, const IsoWitness *) {
    auto p = std::get_if<tm::Proj>(&t->node);
    auto r = p ? std::get_if<tm::Record>(&p->record->node) : nullptr;
    if (r)
        for (auto &[label, e] : r->fields)
            if (label == p->label) return e;
    return noMatch("record-beta", t, "{..., l -> e, ...}.l");
}

TermPtr builtinArithFold(const TermPtr &t, const IsoWitness *) {
    auto lit = [](const TermPtr &x) -> const Integer * {
        auto i = std::get_if<tm::IntLit>(&x->node);
        return i ? &i->value : nullptr;
    };
    if (auto a = std::get_if<tm::Add>(&t->node); a && lit(a->lhs) && lit(a->rhs))
        return mkInt(*lit(a->lhs) + *lit(a->rhs));
    if (auto s = std::get_if<tm::Sub>(&t->node); s && lit(s->lhs) && lit(s->rhs))
        return mkInt(*lit(s->lhs) - *lit(s->rhs));
    if (auto a = std::get_if<tm::App>(&t->node); a && std::holds_alternative<tm::Neg>(a->fn->node) && lit(a->arg))
        return mkInt(-*lit(a->arg));
    return noMatch("arith-fold", t, "an operation on integer literals");
}

// Re-expresses every use of the cell `l` in `t` through the witness.
TermPtr changeRepresentation(const TermPtr &t, const std::string &l, const IsoWitness &w,
                             const std::set<std::string> &witnessVars) {
    const auto &n = t->node;
    if (auto v = std::get_if<tm::Var>(&n); v && v->name == l)
        throw RuleError(RuleErrorKind::NoMatch, "rep-indep: the cell " + l + " is used other than by get and set");
    if (auto g = std::get_if<tm::Get>(&n)) {
        auto v = std::get_if<tm::Var>(&g->ref->node);
        if (v && v->name == l) return mkMap(w.backward, t);
    }
    if (auto s = std::get_if<tm::Set>(&n)) {
        auto v = std::get_if<tm::Var>(&s->ref->node);
        if (v && v->name == l)
            return mkSet(s->ref, mkApp(w.forward, changeRepresentation(s->value, l, w, witnessVars)));
    }
    auto cs = children(t);
    TermPtr out = t;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto bs = bindersFor(t, i);
        if (std::find(bs.begin(), bs.end(), l) != bs.end()) continue;
        if (occursFree(cs[i], l))
            for (auto &b : bs)
                if (witnessVars.count(b))
                    throw RuleError(RuleErrorKind::NoMatch,
                                    "rep-indep: binder " + b + " would capture a variable of the witness");
        auto c = changeRepresentation(cs[i], l, w, witnessVars);
        if (c != cs[i]) out = withChild(out, i, c);
    }
    return out;
}

TermPtr builtinRepIndep(const TermPtr &t, const IsoWitness *w) {
    auto b = std::get_if<tm::Bind>(&t->node);
    auto a = b ? std::get_if<tm::Alloc>(&b->first->node) : nullptr;
    if (!a || b->var == kAnonymous) return noMatch("rep-indep", t, "l <- alloc e; body");
    if (!w) throw RuleError(RuleErrorKind::UndischargedObligation, "rep-indep needs an iso witness");
    auto witnessVars = freeVars(w->forward);
    for (auto &v : freeVars(w->backward)) witnessVars.insert(v);
    if (witnessVars.count(b->var))
        throw RuleError(RuleErrorKind::NoMatch, "rep-indep: the witness mentions the cell name " + b->var);
    return mkBind(b->var, mkAlloc(mkApp(w->forward, a->init)),
                  changeRepresentation(b->rest, b->var, *w, witnessVars));
}

// ------------------------------
// the catalogue
// ------------------------------

Rule schema(std::string name, std::string origin, const std::string &lhs, const std::string &rhs) {
    Rule r;
    r.name = std::move(name);
    r.origin = std::move(origin);
    int counter = 0;
    r.lhs = markBinders(parseTerm(lhs), counter);
    r.rhs = markBinders(parseTerm(rhs), counter);
    r.summary = lhs + "  ==  " + rhs;
    return r;
}

Rule builtin(std::string name, std::string origin, std::string summary,
             TermPtr (*fn)(const TermPtr &, const IsoWitness *), bool needsIso = false) {
    Rule r;
    r.name = std::move(name);
    r.origin = std::move(origin);
    r.summary = std::move(summary);
    r.builtin = fn;
    r.needsIso = needsIso;
    return r;
}

std::vector<Rule> buildRules() {
    std::vector<Rule> rs;
    // store laws
    rs.push_back(schema("set-get", "store", "set ?r ?v; get ?r", "step; set ?r ?v; ret ?v"));
    rs.push_back(schema("alloc-set", "store", "x <- alloc ?e; set x ?e; ret x", "alloc ?e"));
    rs.push_back(schema("set-set", "store", "set ?r ?a; set ?r ?b", "set ?r ?b"));
    rs.push_back(schema("get-get-commute", "store", "x <- get ?r; y <- get ?s; ret (x, y)",
                        "y <- get ?s; x <- get ?r; ret (x, y)"));
    rs.push_back(schema("get-set", "store", "x <- get ?r; set ?r x; ret x", "get ?r"));
    rs.push_back(schema("get-discard", "store", "get ?r; ?k", "step; ?k"));
    rs.push_back(builtin("rec-unfold", "store", "(rec f x. e) v  ==  step; e[rec f x. e / f, v / x]",
                         builtinRecUnfold));
    // monad laws and the functor action
    rs.push_back(builtin("bind-left-unit", "monad", "x <- ret v; e  ==  e[v / x]", builtinLeftUnit));
    rs.push_back(schema("bind-right-unit", "monad", "x <- ?m; ret x", "?m"));
    rs.push_back(schema("bind-assoc", "monad", "y <- (x <- ?m; ?n); ?k", "x <- ?m; y <- ?n; ?k"));
    rs.push_back(schema("map-def", "monad", "map ?f ?m", "x <- ?m; ret (?f x)"));
    rs.push_back(schema("step-central", "monad", "step; ?m", "x <- ?m; step; ret x"));
    // pure structure
    rs.push_back(builtin("beta", "structure", "(fun x -> e) v  ==  e[v / x]", builtinBeta));
    rs.push_back(schema("eta", "structure", "fun x -> ?f x", "?f"));
    rs.push_back(schema("fst-beta", "structure", "fst (?a, ?b)", "?a"));
    rs.push_back(schema("snd-beta", "structure", "snd (?a, ?b)", "?b"));
    rs.push_back(schema("pair-eta", "structure", "(fst ?p, snd ?p)", "?p"));
    rs.push_back(builtin("record-beta", "structure", "{..., l -> e, ...}.l  ==  e", builtinRecordBeta));
    // univalence
    rs.push_back(schema("alloc-permute", "univalence", "l <- alloc ?e; k <- alloc ?f; ret (l, k)",
                        "k <- alloc ?f; l <- alloc ?e; ret (l, k)"));
    rs.push_back(builtin("rep-indep", "univalence",
                         "l <- alloc e; body  ==  l <- alloc (f e); body[map g (get l) / get l, set l (f v) / set l v]",
                         builtinRepIndep, true));
    // integer arithmetic
    rs.push_back(schema("neg-zero", "arith", "neg 0", "0"));
    rs.push_back(schema("neg-neg", "arith", "neg (neg ?a)", "?a"));
    rs.push_back(schema("neg-add", "arith", "neg (?a + ?b)", "neg ?a + neg ?b"));
    rs.push_back(schema("add-neg", "arith", "?a + neg ?b", "?a - ?b"));
    rs.push_back(schema("add-comm", "arith", "?a + ?b", "?b + ?a"));
    rs.push_back(schema("add-assoc", "arith", "(?a + ?b) + ?c", "?a + (?b + ?c)"));
    rs.push_back(schema("add-zero", "arith", "?a + 0", "?a"));
    rs.push_back(builtin("arith-fold", "arith", "n + m, n - m, neg n on literals  ==  their value",
                         builtinArithFold));
    return rs;
}

}  // namespace

const std::vector<Rule> &ruleSet() {
    static const std::vector<Rule> rules = buildRules();
    return rules;
}

const Rule &findRule(const std::string &name) {
    for (auto &r : ruleSet())
        if (r.name == name) return r;
    throw RuleError(RuleErrorKind::UnknownRule, "no rule named '" + name + "'");
}

std::optional<Bindings> matchPattern(const TermPtr &pattern, const TermPtr &t) {
    int counter = 0;
    auto st = matchMarked(markBinders(pattern, counter), t);
    if (!st) return std::nullopt;
    Bindings out;
    std::vector<std::pair<std::string, TermPtr>> back;
    for (auto &[p, name] : st->binderNames)
        if (name != kAnonymous) back.emplace_back(p, mkVar(name));
    for (auto &[m, inst] : st->metas) out[m] = substMany(inst, back);
    return out;
}

namespace {

TermPtr rewriteSchema(const Rule &rule, const TermPtr &sub, const Bindings &given, Direction dir) {
    const TermPtr &from = dir == Direction::LeftToRight ? rule.lhs : rule.rhs;
    const TermPtr &to = dir == Direction::LeftToRight ? rule.rhs : rule.lhs;
    auto st = matchMarked(from, sub);
    if (!st)
        throw RuleError(RuleErrorKind::NoMatch,
                        rule.name + " expects " + print(concretize(from, {})) + ", found " + print(sub));
    Scope scope;
    for (auto &[p, name] : st->binderNames) scope.emplace_back(p, name);
    for (auto &[m, term] : given) {
        if (m == "result") continue;
        TermPtr inst = toPatternNames(term, scope);
        auto it = st->metas.find(m);
        if (it == st->metas.end())
            st->metas.emplace(m, inst);
        else if (!alphaEq(it->second, inst))
            throw RuleError(RuleErrorKind::BadBinding, "?" + m + " is determined by the match as " +
                                                           print(it->second) + ", not " + print(term));
    }
    for (auto &m : metaVars(to))
        if (!st->metas.count(m))
            throw RuleError(RuleErrorKind::BadBinding,
                            rule.name + ": ?" + m + " is not determined by the match; bind it explicitly");
    TermPtr out = concretize(instantiateMetas(to, {st->metas.begin(), st->metas.end()}), st->binderNames);
    for (auto &v : freeVars(out))
        if (isPatternName(v))
            throw RuleError(RuleErrorKind::NoMatch,
                            rule.name + ": a variable bound in " + print(sub) + " would escape its scope");
    return out;
}

TypePtr witnessDomain(const TermPtr &f, const char *which) {
    TypePtr t;
    try {
        t = infer({}, f);
    } catch (const TypeError &e) {
        throw RuleError(RuleErrorKind::UndischargedObligation, std::string(which) + " is ill-typed: " + e.what());
    }
    if (!std::holds_alternative<ty::Fn>(t->node))
        throw RuleError(RuleErrorKind::UndischargedObligation, std::string(which) + " is not a function");
    return t;
}

}  // namespace

TermPtr applyRule(const TermPtr &t, const std::string &ruleName, const Path &path, const Bindings &bindings,
                  Direction dir, const IsoWitness *iso, const Context &ctx) {
    const Rule &rule = findRule(ruleName);
    TermPtr sub = subtermAt(t, path);
    if (!sub)
        throw RuleError(RuleErrorKind::NoMatch, "path " + printPath(path) + " does not address a subterm");
    TypePtr before = infer(ctx, t);

    if (rule.needsIso) {
        if (!iso) throw RuleError(RuleErrorKind::UndischargedObligation, rule.name + " needs an iso witness");
        TypePtr ft = witnessDomain(iso->forward, "forward map");
        auto &f = std::get<ty::Fn>(ft->node);
        try {
            checkIso(*iso, f.dom, f.cod);
        } catch (const ObligationFailed &e) {
            throw RuleError(RuleErrorKind::UndischargedObligation, e.what());
        } catch (const TypeError &e) {
            throw RuleError(RuleErrorKind::UndischargedObligation, e.what());
        }
    }

    TermPtr replacement;
    if (!rule.isBuiltin()) {
        replacement = rewriteSchema(rule, sub, bindings, dir);
    } else if (dir == Direction::LeftToRight) {
        replacement = rule.builtin(sub, iso);
    } else {
        auto it = bindings.find("result");
        if (it == bindings.end())
            throw RuleError(RuleErrorKind::BadBinding,
                            rule.name + " right to left needs the new subterm as bind result=(...)");
        TermPtr forward;
        try {
            forward = rule.builtin(it->second, iso);
        } catch (const RuleError &e) {
            throw RuleError(RuleErrorKind::NoMatch, std::string("the given result does not rewrite: ") + e.what());
        }
        if (!alphaEq(forward, sub))
            throw RuleError(RuleErrorKind::NoMatch, rule.name + " applied to the given result yields " +
                                                        print(forward) + ", not " + print(sub));
        replacement = it->second;
    }

    TermPtr out = replaceAt(t, path, replacement);
    TypePtr after;
    try {
        after = infer(ctx, out);
    } catch (const TypeError &e) {
        throw RuleError(RuleErrorKind::TypeRegression, rule.name + " produced an ill-typed term: " + e.what());
    }
    if (!typeEq(before, after))
        throw RuleError(RuleErrorKind::TypeRegression,
                        rule.name + " changed the type from " + printType(before) + " to " + printType(after));
    return out;
}

// ------------------------------
// iso obligations
// ------------------------------

std::vector<TermPtr> isoPool(const TypePtr &t) {
    if (std::holds_alternative<ty::Int>(t->node)) {
        std::vector<TermPtr> out{mkInt(0)};
        for (int i = 1; i <= 10; ++i) {
            out.push_back(mkInt(i));
            out.push_back(mkInt(-i));
        }
        return out;
    }
    if (std::holds_alternative<ty::Unit>(t->node)) return {mkUnit()};
    if (auto p = std::get_if<ty::Prod>(&t->node)) {
        auto as = isoPool(p->fst), bs = isoPool(p->snd);
        as.resize(std::min<std::size_t>(as.size(), 5));
        bs.resize(std::min<std::size_t>(bs.size(), 5));
        std::vector<TermPtr> out;
        for (auto &a : as)
            for (auto &b : bs) out.push_back(mkPair(a, b));
        return out;
    }
    throw ObligationFailed("cannot test an isomorphism on type " + printType(t), nullptr);
}

namespace {

std::string roundTrip(const TermPtr &first, const TermPtr &second, const TypePtr &dom, const std::string &what) {
    auto avoid = freeVars(first);
    for (auto &v : freeVars(second)) avoid.insert(v);
    std::string x = freshName("x", avoid);
    TermPtr rt = mkApp(second, mkApp(first, mkVar(x)));
    try {
        if (alphaEq(normalizeStraightline(rt), mkVar(x))) return "normalization";
    } catch (const OutOfFragment &) {
    }
    auto pool = isoPool(dom);
    ValuePtr f = evalPure({}, first), g = evalPure({}, second);
    for (auto &v : pool) {
        ValuePtr input = evalPure({}, v);
        ValuePtr output = refstore::apply(g, refstore::apply(f, input));
        if (!valueEq(input, output))
            throw ObligationFailed(what + " is not the identity: it maps " + printValue(input) + " to " +
                                       printValue(output),
                                   input);
    }
    return "testing (" + std::to_string(pool.size()) + " values)";
}

}  // namespace

IsoReport checkIso(const IsoWitness &w, const TypePtr &sigma, const TypePtr &tau) {
    check({}, w.forward, tFn(sigma, tau));
    check({}, w.backward, tFn(tau, sigma));
    IsoReport r;
    r.forwardThenBack = roundTrip(w.forward, w.backward, sigma, "backward after forward");
    r.backThenForward = roundTrip(w.backward, w.forward, tau, "forward after backward");
    return r;
}

}  // namespace refstore
