#include "refstore/normalize.hpp"

#include <algorithm>
#include <map>

namespace refstore {

namespace {

// Beta contractions allowed before giving up on an input that does not normalize.
constexpr std::size_t kBetaBudget = 2000;

bool isArith(const TermPtr &t) {
    const auto &n = t->node;
    if (std::holds_alternative<tm::IntLit>(n) || std::holds_alternative<tm::Add>(n) ||
        std::holds_alternative<tm::Sub>(n))
        return true;
    auto a = std::get_if<tm::App>(&n);
    return a && std::holds_alternative<tm::Neg>(a->fn->node);
}

bool isLambdaLiteral(const TermPtr &t) {
    return std::holds_alternative<tm::Lam>(t->node) || std::holds_alternative<tm::Rec>(t->node);
}

// sum of coeff * atom, plus a constant; atoms are keyed by their alpha-normalized text
struct Linear {
    std::map<std::string, std::pair<TermPtr, Integer>> atoms;
    Integer constant = 0;

    void add(const Linear &o, int sign) {
        constant += sign * o.constant;
        for (auto &[key, entry] : o.atoms) {
            auto [it, fresh] = atoms.try_emplace(key, entry.first, Integer(0));
            it->second.second += sign * entry.second;
            if (it->second.second == 0) atoms.erase(it);
            (void)fresh;
        }
    }
};

class Normalizer {
public:
    TermPtr norm(const TermPtr &t) {
        const auto &n = t->node;
        if (std::holds_alternative<tm::Rec>(n)) throw OutOfFragment("recursion is outside the straight-line fragment");
        if (std::holds_alternative<tm::Meta>(n)) throw OutOfFragment("metavariables cannot be normalized");
        if (isArith(t)) return arith(t);
        if (auto a = std::get_if<tm::App>(&n)) {
            TermPtr f = norm(a->fn);
            TermPtr x = norm(a->arg);
            if (auto l = std::get_if<tm::Lam>(&f->node)) return norm(beta(l->body, l->param, x));
            if (std::holds_alternative<tm::Neg>(f->node)) return arith(mkNeg(x));
            return mkApp(f, x);
        }
        if (auto l = std::get_if<tm::Lam>(&n)) return mkLam(l->param, norm(l->body), l->annot);
        if (auto p = std::get_if<tm::Pair>(&n)) {
            TermPtr a = norm(p->fst), b = norm(p->snd);
            auto f = std::get_if<tm::Fst>(&a->node);
            auto s = std::get_if<tm::Snd>(&b->node);
            if (f && s && alphaEq(f->arg, s->arg)) return f->arg;
            return mkPair(a, b);
        }
        if (auto p = std::get_if<tm::Fst>(&n)) {
            TermPtr x = norm(p->arg);
            if (auto pr = std::get_if<tm::Pair>(&x->node)) return pr->fst;
            return mkFst(x);
        }
        if (auto p = std::get_if<tm::Snd>(&n)) {
            TermPtr x = norm(p->arg);
            if (auto pr = std::get_if<tm::Pair>(&x->node)) return pr->snd;
            return mkSnd(x);
        }
        if (auto r = std::get_if<tm::Record>(&n)) {
            std::vector<std::pair<std::string, TermPtr>> fields;
            for (auto &[label, e] : r->fields) fields.emplace_back(label, norm(e));
            return mkRecord(std::move(fields));
        }
        if (auto p = std::get_if<tm::Proj>(&n)) {
            TermPtr x = norm(p->record);
            if (auto r = std::get_if<tm::Record>(&x->node))
                for (auto &[label, e] : r->fields)
                    if (label == p->label) return e;
            return mkProj(x, p->label);
        }
        if (auto r = std::get_if<tm::Ret>(&n)) return mkRet(norm(r->arg));
        if (auto a = std::get_if<tm::Alloc>(&n)) {
            if (isLambdaLiteral(a->init)) throw OutOfFragment("functions stored on the heap");
            return mkAlloc(norm(a->init), a->tag);
        }
        if (auto g = std::get_if<tm::Get>(&n)) return mkGet(norm(g->ref));
        if (auto s = std::get_if<tm::Set>(&n)) {
            if (isLambdaLiteral(s->value)) throw OutOfFragment("functions stored on the heap");
            return mkSet(norm(s->ref), norm(s->value));
        }
        if (auto m = std::get_if<tm::Map>(&n)) {
            std::string x = freshName("x", freeVars(m->fn));
            return norm(mkBind(x, m->comp, mkRet(mkApp(m->fn, mkVar(x)))));
        }
        if (auto b = std::get_if<tm::Bind>(&n)) return bind(b->var, norm(b->first), b->rest);
        return t;  // Var, UnitLit, Step, Neg
    }

private:
    std::size_t betaSteps_ = 0;

    TermPtr beta(const TermPtr &body, const std::string &x, const TermPtr &v) {
        if (++betaSteps_ > kBetaBudget) throw OutOfFragment("beta reduction does not terminate within budget");
        return subst(body, x, v);
    }

    // `m` is already normal; `k` is not.
    TermPtr bind(const std::string &x, const TermPtr &m, const TermPtr &k) {
        if (auto r = std::get_if<tm::Ret>(&m->node)) {
            if (x == kAnonymous) return norm(k);
            return norm(beta(k, x, r->arg));
        }
        if (auto inner = std::get_if<tm::Bind>(&m->node)) {
            std::string y = inner->var;
            TermPtr rest = inner->rest;
            if (y != kAnonymous && (occursFree(k, y) || y == x)) {
                auto avoid = freeVars(k);
                for (auto &v : freeVars(rest)) avoid.insert(v);
                avoid.insert(x);
                std::string fresh = freshName(y, avoid);
                rest = subst(rest, y, mkVar(fresh));
                y = fresh;
            }
            return rightUnit(y, inner->first, bind(x, rest, k));
        }
        return rightUnit(x, m, norm(k));
    }

    // `x <- m; k` with both parts normal, dropping a trailing `ret x`.
    static TermPtr rightUnit(const std::string &x, const TermPtr &m, const TermPtr &k) {
        if (x != kAnonymous) {
            if (auto r = std::get_if<tm::Ret>(&k->node)) {
                auto v = std::get_if<tm::Var>(&r->arg->node);
                if (v && v->name == x) return m;
            }
        }
        return mkBind(x, m, k);
    }

    Linear linear(const TermPtr &t) {
        Linear out;
        const auto &n = t->node;
        if (auto i = std::get_if<tm::IntLit>(&n)) {
            out.constant = i->value;
            return out;
        }
        if (auto a = std::get_if<tm::Add>(&n)) {
            out = linear(a->lhs);
            out.add(linear(a->rhs), 1);
            return out;
        }
        if (auto s = std::get_if<tm::Sub>(&n)) {
            out = linear(s->lhs);
            out.add(linear(s->rhs), -1);
            return out;
        }
        if (auto a = std::get_if<tm::App>(&n); a && std::holds_alternative<tm::Neg>(a->fn->node)) {
            out.add(linear(a->arg), -1);
            return out;
        }
        TermPtr atom = norm(t);
        if (isArith(atom)) return linear(atom);
        out.atoms.emplace(print(alphaNormalize(atom)), std::make_pair(atom, Integer(1)));
        return out;
    }

    TermPtr arith(const TermPtr &t) {
        Linear l = linear(t);
        TermPtr acc;
        for (auto &[key, entry] : l.atoms) {
            auto &[atom, coeff] = entry;
            Integer c = coeff;
            if (!acc) {
                acc = c > 0 ? atom : mkNeg(atom);
                c += c > 0 ? -1 : 1;
            }
            for (; c > 0; --c) acc = mkAdd(acc, atom);
            for (; c < 0; ++c) acc = mkSub(acc, atom);
        }
        if (!acc) return mkInt(l.constant);
        if (l.constant > 0) return mkAdd(acc, mkInt(l.constant));
        if (l.constant < 0) return mkSub(acc, mkInt(-l.constant));
        return acc;
    }
};

}  // namespace

TermPtr normalizeStraightline(const TermPtr &t) {
    Normalizer n;
    return n.norm(t);
}

}  // namespace refstore
