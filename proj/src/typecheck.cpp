#include "refstore/typecheck.hpp"

#include <algorithm>
#include <unordered_map>

namespace refstore {

Context::Context(std::initializer_list<std::pair<std::string, TypePtr>> entries) {
    for (auto &[n, t] : entries) *this = extended(n, t);
}

Context Context::extended(const std::string &name, TypePtr type) const {
    Context out = *this;
    auto &e = out.entries_;
    e.erase(std::remove_if(e.begin(), e.end(), [&](const auto &p) { return p.first == name; }), e.end());
    e.emplace_back(name, std::move(type));
    return out;
}

const TypePtr *Context::lookup(const std::string &name) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->first == name) return &it->second;
    return nullptr;
}

TypeError::TypeError(std::string rule, Path path, const std::string &detail)
    : std::runtime_error(rule + " at " + printPath(path) + ": " + detail), rule_(std::move(rule)),
      path_(std::move(path)) {}

namespace {

class Solver {
public:
    TypePtr fresh() { return tHole(next_++); }

    TypePtr resolve(const TypePtr &t) const {
        TypePtr cur = t;
        while (auto h = std::get_if<ty::Hole>(&cur->node)) {
            auto it = solution_.find(h->id);
            if (it == solution_.end()) break;
            cur = it->second;
        }
        return cur;
    }

    TypePtr zonk(const TypePtr &t) const {
        TypePtr r = resolve(t);
        if (auto f = std::get_if<ty::Fn>(&r->node)) return tFn(zonk(f->dom), zonk(f->cod));
        if (auto p = std::get_if<ty::Prod>(&r->node)) return tProd(zonk(p->fst), zonk(p->snd));
        if (auto c = std::get_if<ty::Comp>(&r->node)) return tComp(zonk(c->body));
        if (auto c = std::get_if<ty::Ref>(&r->node)) return tRef(zonk(c->body));
        if (auto rec = std::get_if<ty::Record>(&r->node)) {
            auto fields = rec->fields;
            for (auto &f : fields) f.second = zonk(f.second);
            return tRecord(std::move(fields));
        }
        return r;
    }

    static bool hasHole(const TypePtr &t) {
        if (std::holds_alternative<ty::Hole>(t->node)) return true;
        if (auto f = std::get_if<ty::Fn>(&t->node)) return hasHole(f->dom) || hasHole(f->cod);
        if (auto p = std::get_if<ty::Prod>(&t->node)) return hasHole(p->fst) || hasHole(p->snd);
        if (auto c = std::get_if<ty::Comp>(&t->node)) return hasHole(c->body);
        if (auto c = std::get_if<ty::Ref>(&t->node)) return hasHole(c->body);
        if (auto r = std::get_if<ty::Record>(&t->node))
            return std::any_of(r->fields.begin(), r->fields.end(), [](auto &f) { return hasHole(f.second); });
        return false;
    }

    bool occurs(int id, const TypePtr &t) const {
        TypePtr r = resolve(t);
        if (auto h = std::get_if<ty::Hole>(&r->node)) return h->id == id;
        if (auto f = std::get_if<ty::Fn>(&r->node)) return occurs(id, f->dom) || occurs(id, f->cod);
        if (auto p = std::get_if<ty::Prod>(&r->node)) return occurs(id, p->fst) || occurs(id, p->snd);
        if (auto c = std::get_if<ty::Comp>(&r->node)) return occurs(id, c->body);
        if (auto c = std::get_if<ty::Ref>(&r->node)) return occurs(id, c->body);
        if (auto rec = std::get_if<ty::Record>(&r->node))
            return std::any_of(rec->fields.begin(), rec->fields.end(),
                               [&](auto &f) { return occurs(id, f.second); });
        return false;
    }

    bool unify(const TypePtr &a, const TypePtr &b) {
        TypePtr x = resolve(a), y = resolve(b);
        if (auto h = std::get_if<ty::Hole>(&x->node)) return bindHole(h->id, y);
        if (auto h = std::get_if<ty::Hole>(&y->node)) return bindHole(h->id, x);
        if (x->node.index() != y->node.index()) return false;
        if (auto f = std::get_if<ty::Fn>(&x->node)) {
            auto &g = std::get<ty::Fn>(y->node);
            return unify(f->dom, g.dom) && unify(f->cod, g.cod);
        }
        if (auto p = std::get_if<ty::Prod>(&x->node)) {
            auto &q = std::get<ty::Prod>(y->node);
            return unify(p->fst, q.fst) && unify(p->snd, q.snd);
        }
        if (auto c = std::get_if<ty::Comp>(&x->node)) return unify(c->body, std::get<ty::Comp>(y->node).body);
        if (auto c = std::get_if<ty::Ref>(&x->node)) return unify(c->body, std::get<ty::Ref>(y->node).body);
        if (auto r = std::get_if<ty::Record>(&x->node)) {
            auto &s = std::get<ty::Record>(y->node);
            if (r->fields.size() != s.fields.size()) return false;
            for (std::size_t i = 0; i < r->fields.size(); ++i) {
                if (r->fields[i].first != s.fields[i].first) return false;
                if (!unify(r->fields[i].second, s.fields[i].second)) return false;
            }
        }
        return true;
    }

private:
    bool bindHole(int id, const TypePtr &t) {
        if (auto h = std::get_if<ty::Hole>(&t->node); h && h->id == id) return true;
        if (occurs(id, t)) return false;
        solution_[id] = t;
        return true;
    }

    int next_ = 0;
    std::unordered_map<int, TypePtr> solution_;
};

class Checker {
public:
    Solver solver;
    std::unordered_map<const Term *, TypePtr> allocTags;

    void expect(const TypePtr &actual, const TypePtr &wanted, const char *rule, const Path &path) {
        if (!solver.unify(actual, wanted))
            throw TypeError(rule, path,
                            "expected " + printType(solver.zonk(wanted)) + " but found " +
                                printType(solver.zonk(actual)));
    }

    TypePtr infer(const Context &ctx, const TermPtr &t, Path &path) {
        auto child = [&](std::size_t i, const Context &c, const TermPtr &sub) {
            path.push_back(i);
            TypePtr r = infer(c, sub, path);
            path.pop_back();
            return r;
        };
        const auto &n = t->node;
        if (auto v = std::get_if<tm::Var>(&n)) {
            if (auto ty = ctx.lookup(v->name)) return *ty;
            throw TypeError("var", path, "unbound variable '" + v->name + "'");
        }
        if (auto m = std::get_if<tm::Meta>(&n)) {
            auto it = ctx.metas.find(m->name);
            if (it == ctx.metas.end()) throw TypeError("meta", path, "untyped metavariable ?" + m->name);
            return it->second;
        }
        if (auto l = std::get_if<tm::Lam>(&n)) {
            TypePtr dom = l->annot ? l->annot : solver.fresh();
            TypePtr cod = child(0, ctx.extended(l->param, dom), l->body);
            return tFn(dom, cod);
        }
        if (auto a = std::get_if<tm::App>(&n)) {
            TypePtr f = child(0, ctx, a->fn);
            TypePtr x = child(1, ctx, a->arg);
            TypePtr r = solver.fresh();
            TypePtr fr = solver.resolve(f);
            if (auto fn = std::get_if<ty::Fn>(&fr->node)) {
                path.push_back(1);
                expect(x, fn->dom, "app", path);
                path.pop_back();
                return fn->cod;
            }
            expect(f, tFn(x, r), "app", path);
            return r;
        }
        if (auto p = std::get_if<tm::Pair>(&n)) return tProd(child(0, ctx, p->fst), child(1, ctx, p->snd));
        if (auto p = std::get_if<tm::Fst>(&n)) {
            TypePtr a = solver.fresh(), b = solver.fresh();
            expect(child(0, ctx, p->arg), tProd(a, b), "fst", path);
            return a;
        }
        if (auto p = std::get_if<tm::Snd>(&n)) {
            TypePtr a = solver.fresh(), b = solver.fresh();
            expect(child(0, ctx, p->arg), tProd(a, b), "snd", path);
            return b;
        }
        if (auto r = std::get_if<tm::Record>(&n)) {
            std::vector<std::pair<std::string, TypePtr>> fields;
            for (std::size_t i = 0; i < r->fields.size(); ++i) {
                for (std::size_t j = 0; j < i; ++j)
                    if (r->fields[j].first == r->fields[i].first)
                        throw TypeError("record", path, "duplicate label '" + r->fields[i].first + "'");
                fields.emplace_back(r->fields[i].first, child(i, ctx, r->fields[i].second));
            }
            return tRecord(std::move(fields));
        }
        if (auto p = std::get_if<tm::Proj>(&n)) {
            TypePtr rt = solver.resolve(child(0, ctx, p->record));
            auto rec = std::get_if<ty::Record>(&rt->node);
            if (!rec)
                throw TypeError("proj", path,
                                "projection ." + p->label + " from non-record type " + printType(solver.zonk(rt)));
            for (auto &f : rec->fields)
                if (f.first == p->label) return f.second;
            throw TypeError("proj", path, "record type " + printType(solver.zonk(rt)) + " has no label " + p->label);
        }
        if (std::holds_alternative<tm::IntLit>(n)) return tInt();
        if (std::holds_alternative<tm::UnitLit>(n)) return tUnit();
        if (std::holds_alternative<tm::Neg>(n)) return tFn(tInt(), tInt());
        if (auto a = std::get_if<tm::Add>(&n)) {
            arith(ctx, a->lhs, a->rhs, "add", path);
            return tInt();
        }
        if (auto a = std::get_if<tm::Sub>(&n)) {
            arith(ctx, a->lhs, a->rhs, "sub", path);
            return tInt();
        }
        if (auto r = std::get_if<tm::Ret>(&n)) return tComp(child(0, ctx, r->arg));
        if (auto b = std::get_if<tm::Bind>(&n)) {
            TypePtr a = solver.fresh();
            path.push_back(0);
            expect(infer(ctx, b->first, path), tComp(a), "bind", path);
            path.pop_back();
            TypePtr rest = child(1, ctx.extended(b->var, a), b->rest);
            TypePtr r = solver.fresh();
            path.push_back(1);
            expect(rest, tComp(r), "bind", path);
            path.pop_back();
            return tComp(r);
        }
        if (auto a = std::get_if<tm::Alloc>(&n)) {
            TypePtr s = child(0, ctx, a->init);
            if (a->tag) expect(s, a->tag, "alloc", path);
            allocTags[t.get()] = s;
            return tComp(tRef(s));
        }
        if (auto g = std::get_if<tm::Get>(&n)) {
            TypePtr s = solver.fresh();
            path.push_back(0);
            expect(infer(ctx, g->ref, path), tRef(s), "get", path);
            path.pop_back();
            return tComp(s);
        }
        if (auto st = std::get_if<tm::Set>(&n)) {
            TypePtr s = solver.fresh();
            path.push_back(0);
            expect(infer(ctx, st->ref, path), tRef(s), "set", path);
            path.back() = 1;
            expect(infer(ctx, st->value, path), s, "set", path);
            path.pop_back();
            return tComp(tUnit());
        }
        if (std::holds_alternative<tm::Step>(n)) return tComp(tUnit());
        if (auto m = std::get_if<tm::Map>(&n)) {
            TypePtr a = solver.fresh(), b = solver.fresh();
            path.push_back(0);
            expect(infer(ctx, m->fn, path), tFn(a, b), "map", path);
            path.back() = 1;
            expect(infer(ctx, m->comp, path), tComp(a), "map", path);
            path.pop_back();
            return tComp(b);
        }
        if (auto r = std::get_if<tm::Rec>(&n)) {
            TypePtr s = r->paramAnnot ? r->paramAnnot : solver.fresh();
            TypePtr tau = r->resultAnnot ? r->resultAnnot : solver.fresh();
            TypePtr self = tFn(s, tComp(tau));
            Context inner = ctx.extended(r->self, self).extended(r->param, s);
            path.push_back(0);
            expect(infer(inner, r->body, path), tComp(tau), "rec", path);
            path.pop_back();
            return self;
        }
        throw TypeError("internal", path, "unhandled term");
    }

    void arith(const Context &ctx, const TermPtr &lhs, const TermPtr &rhs, const char *rule, Path &path) {
        path.push_back(0);
        expect(infer(ctx, lhs, path), tInt(), rule, path);
        path.back() = 1;
        expect(infer(ctx, rhs, path), tInt(), rule, path);
        path.pop_back();
    }

    TermPtr rebuild(const TermPtr &t) {
        TermPtr out = t;
        auto cs = children(t);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            TermPtr c = rebuild(cs[i]);
            if (c != cs[i]) out = withChild(out, i, c);
        }
        if (auto it = allocTags.find(t.get()); it != allocTags.end()) {
            TypePtr tag = solver.zonk(it->second);
            if (Solver::hasHole(tag))
                throw TypeError("alloc", {}, "cell type of '" + print(t) + "' is ambiguous; add an annotation");
            out = mkAlloc(std::get<tm::Alloc>(out->node).init, tag);
        }
        return out;
    }
};

}  // namespace

TypePtr infer(const Context &ctx, const TermPtr &t) {
    Checker c;
    Path path;
    TypePtr r = c.solver.zonk(c.infer(ctx, t, path));
    if (Solver::hasHole(r)) throw TypeError("ambiguity", {}, "type " + printType(r) + " is not determined");
    return r;
}

void check(const Context &ctx, const TermPtr &t, const TypePtr &expected) {
    Checker c;
    Path path;
    TypePtr actual = c.infer(ctx, t, path);
    if (!c.solver.unify(actual, expected))
        throw TypeError("check", {},
                        "expected " + printType(expected) + " but found " + printType(c.solver.zonk(actual)));
    TypePtr r = c.solver.zonk(actual);
    if (Solver::hasHole(r)) throw TypeError("ambiguity", {}, "type " + printType(r) + " is not determined");
}

std::optional<TypePtr> tryInfer(const Context &ctx, const TermPtr &t) {
    try {
        return infer(ctx, t);
    } catch (const TypeError &) {
        return std::nullopt;
    }
}

Elaborated elaborate(const Context &ctx, const TermPtr &t) {
    Checker c;
    Path path;
    TypePtr r = c.solver.zonk(c.infer(ctx, t, path));
    if (Solver::hasHole(r)) throw TypeError("ambiguity", {}, "type " + printType(r) + " is not determined");
    return {c.rebuild(t), r};
}

}  // namespace refstore
