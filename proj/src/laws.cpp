#include "refstore/laws.hpp"

#include <functional>
#include <map>

namespace refstore {

int TermGen::pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

TermPtr TermGen::intExpr(int depth, const std::vector<std::string> &vars) {
    int leafChoice = pick(0, vars.empty() ? 0 : 1);
    if (depth <= 0 || pick(0, 2) == 0) {
        if (leafChoice == 1) return mkVar(vars[pick(0, static_cast<int>(vars.size()) - 1)]);
        return mkInt(pick(-3, 3));
    }
    switch (pick(0, 2)) {
        case 0: return mkAdd(intExpr(depth - 1, vars), intExpr(depth - 1, vars));
        case 1: return mkSub(intExpr(depth - 1, vars), intExpr(depth - 1, vars));
        default: return mkNeg(intExpr(depth - 1, vars));
    }
}

TypePtr TermGen::groundType(int depth) {
    int c = pick(0, depth > 0 ? 3 : 1);
    if (c == 0) return tInt();
    if (c == 1) return tUnit();
    return tProd(groundType(depth - 1), groundType(depth - 1));
}

TermPtr TermGen::valueOf(const TypePtr &t) {
    if (std::holds_alternative<ty::Int>(t->node)) return intExpr(1, {});
    if (auto p = std::get_if<ty::Prod>(&t->node)) return mkPair(valueOf(p->fst), valueOf(p->snd));
    return mkUnit();
}

TermPtr TermGen::intFunction() {
    std::string z = fresh("z");
    switch (pick(0, 2)) {
        case 0: return mkNegFn();
        case 1: return mkLam(z, mkAdd(mkVar(z), mkInt(pick(-3, 3))), tInt());
        default: return mkLam(z, intExpr(2, {z}), tInt());
    }
}

TermPtr TermGen::comp(int depth, const std::vector<std::string> &vars, const std::vector<std::string> &cells) {
    auto cell = [&] { return mkVar(cells[pick(0, static_cast<int>(cells.size()) - 1)]); };
    int hi = depth <= 0 ? 1 : 7;
    switch (pick(0, hi)) {
        case 0: return mkRet(intExpr(2, vars));
        case 1: return cells.empty() ? mkRet(intExpr(1, vars)) : mkGet(cell());
        case 2:
            if (cells.empty()) break;
            return mkSeq(mkSet(cell(), intExpr(2, vars)), comp(depth - 1, vars, cells));
        case 3: {
            std::string x = fresh("x");
            TermPtr first = comp(depth - 1, vars, cells);
            auto inner = vars;
            inner.push_back(x);
            return mkBind(x, first, comp(depth - 1, inner, cells));
        }
        case 4: return mkSeq(mkStep(), comp(depth - 1, vars, cells));
        case 5: return mkMap(intFunction(), comp(depth - 1, vars, cells));
        case 6: {
            std::string r = fresh("r");
            auto inner = cells;
            inner.push_back(r);
            return mkBind(r, mkAlloc(intExpr(1, vars)), comp(depth - 1, vars, inner));
        }
        default: break;
    }
    return mkRet(intExpr(1, vars));
}

Wrapped withCells(const std::vector<std::pair<std::string, TermPtr>> &cells, const TermPtr &body) {
    TermPtr t = body;
    for (auto it = cells.rbegin(); it != cells.rend(); ++it) t = mkBind(it->first, mkAlloc(it->second), t);
    return {t, Path(cells.size(), 1)};
}

namespace {

struct Setting {
    std::vector<std::pair<std::string, TermPtr>> cells;
    std::vector<std::string> names;
};

Setting makeCells(TermGen &g) {
    Setting s;
    int k = g.pick(1, 3);
    for (int i = 0; i < k; ++i) {
        std::string c = "c" + std::to_string(i);
        s.cells.emplace_back(c, g.intExpr(1, {}));
        s.names.push_back(c);
    }
    return s;
}

LawInstance place(const std::string &rule, const Setting &s, const TermPtr &body, const Path &suffix) {
    auto w = withCells(s.cells, body);
    Path site = w.site;
    site.insert(site.end(), suffix.begin(), suffix.end());
    return {rule, w.term, site, std::nullopt};
}

// `v <- get c0; ret E`, with E built from `v` by `make`, rewritten at E.
LawInstance pureSite(const std::string &rule, TermGen &g, const std::function<TermPtr(TermGen &, std::string)> &make) {
    Setting s = makeCells(g);
    std::string v = g.fresh("v");
    TermPtr body = mkBind(v, mkGet(mkVar(s.names[0])), mkRet(make(g, v)));
    return place(rule, s, body, {1, 0});
}

TermPtr cellVar(TermGen &g, const Setting &s) { return mkVar(s.names[g.pick(0, static_cast<int>(s.names.size()) - 1)]); }

using Maker = std::function<LawInstance(TermGen &)>;

const std::map<std::string, Maker> &makers() {
    static const std::map<std::string, Maker> m = [] {
        std::map<std::string, Maker> m;
        m["set-get"] = [](TermGen &g) {
            Setting s = makeCells(g);
            TermPtr r = cellVar(g, s);
            return place("set-get", s, mkSeq(mkSet(r, g.intExpr(2, {})), mkGet(r)), {});
        };
        m["alloc-set"] = [](TermGen &g) {
            Setting s = makeCells(g);
            TermPtr e = g.intExpr(2, {});
            std::string x = g.fresh("x");
            TermPtr body = mkBind(x, mkAlloc(e), mkSeq(mkSet(mkVar(x), e), mkRet(mkVar(x))));
            return place("alloc-set", s, body, {});
        };
        m["set-set"] = [](TermGen &g) {
            Setting s = makeCells(g);
            TermPtr r = cellVar(g, s);
            return place("set-set", s, mkSeq(mkSet(r, g.intExpr(2, {})), mkSet(r, g.intExpr(2, {}))), {});
        };
        m["get-get-commute"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string x = g.fresh("x"), y = g.fresh("y");
            TermPtr body = mkBind(x, mkGet(cellVar(g, s)),
                                  mkBind(y, mkGet(cellVar(g, s)), mkRet(mkPair(mkVar(x), mkVar(y)))));
            return place("get-get-commute", s, body, {});
        };
        m["get-set"] = [](TermGen &g) {
            Setting s = makeCells(g);
            TermPtr r = cellVar(g, s);
            std::string x = g.fresh("x");
            TermPtr body = mkBind(x, mkGet(r), mkSeq(mkSet(r, mkVar(x)), mkRet(mkVar(x))));
            return place("get-set", s, body, {});
        };
        m["get-discard"] = [](TermGen &g) {
            Setting s = makeCells(g);
            TermPtr body = mkSeq(mkGet(cellVar(g, s)), g.comp(3, {}, s.names));
            return place("get-discard", s, body, {});
        };
        m["rec-unfold"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string f = g.fresh("f"), n = g.fresh("n");
            TermPtr fn = mkRec(f, n, g.comp(3, {n}, s.names), tInt(), tInt());
            return place("rec-unfold", s, mkApp(fn, g.intExpr(2, {})), {});
        };
        m["bind-left-unit"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string x = g.fresh("x");
            TermPtr body = mkBind(x, mkRet(g.intExpr(2, {})), g.comp(3, {x}, s.names));
            return place("bind-left-unit", s, body, {});
        };
        m["bind-right-unit"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string x = g.fresh("x");
            return place("bind-right-unit", s, mkBind(x, g.comp(3, {}, s.names), mkRet(mkVar(x))), {});
        };
        m["bind-assoc"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string x = g.fresh("x"), y = g.fresh("y");
            TermPtr inner = mkBind(x, g.comp(2, {}, s.names), g.comp(2, {x}, s.names));
            return place("bind-assoc", s, mkBind(y, inner, g.comp(2, {y}, s.names)), {});
        };
        m["map-def"] = [](TermGen &g) {
            Setting s = makeCells(g);
            return place("map-def", s, mkMap(g.intFunction(), g.comp(3, {}, s.names)), {});
        };
        m["step-central"] = [](TermGen &g) {
            Setting s = makeCells(g);
            return place("step-central", s, mkSeq(mkStep(), g.comp(3, {}, s.names)), {});
        };
        m["beta"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string x = g.fresh("x");
            return place("beta", s, mkApp(mkLam(x, g.comp(3, {x}, s.names), tInt()), g.intExpr(2, {})), {});
        };
        m["eta"] = [](TermGen &g) {
            return pureSite("eta", g, [](TermGen &g, std::string v) {
                std::string x = g.fresh("x");
                return mkApp(mkLam(x, mkApp(g.intFunction(), mkVar(x)), tInt()), g.intExpr(1, {v}));
            });
        };
        m["fst-beta"] = [](TermGen &g) {
            return pureSite("fst-beta", g, [](TermGen &g, std::string v) {
                return mkFst(mkPair(g.intExpr(2, {v}), g.intExpr(2, {v})));
            });
        };
        m["snd-beta"] = [](TermGen &g) {
            return pureSite("snd-beta", g, [](TermGen &g, std::string v) {
                return mkSnd(mkPair(g.intExpr(2, {v}), g.intExpr(2, {v})));
            });
        };
        m["pair-eta"] = [](TermGen &g) {
            return pureSite("pair-eta", g, [](TermGen &g, std::string v) {
                TermPtr p = mkPair(g.intExpr(2, {v}), g.intExpr(2, {v}));
                return mkPair(mkFst(p), mkSnd(p));
            });
        };
        m["record-beta"] = [](TermGen &g) {
            return pureSite("record-beta", g, [](TermGen &g, std::string v) {
                TermPtr r = mkRecord({{"a", g.intExpr(2, {v})}, {"b", g.intExpr(2, {v})}});
                return mkProj(r, g.coin() ? "a" : "b");
            });
        };
        m["alloc-permute"] = [](TermGen &g) {
            Setting s = makeCells(g);
            std::string l = g.fresh("l"), k = g.fresh("k");
            TermPtr e = g.valueOf(g.groundType(2)), f = g.valueOf(g.groundType(2));
            TermPtr body = mkBind(l, mkAlloc(e), mkBind(k, mkAlloc(f), mkRet(mkPair(mkVar(l), mkVar(k)))));
            return place("alloc-permute", s, body, {});
        };
        m["neg-zero"] = [](TermGen &g) {
            return pureSite("neg-zero", g, [](TermGen &, std::string) { return mkNeg(mkInt(0)); });
        };
        m["neg-neg"] = [](TermGen &g) {
            return pureSite("neg-neg", g, [](TermGen &g, std::string v) { return mkNeg(mkNeg(g.intExpr(2, {v}))); });
        };
        m["neg-add"] = [](TermGen &g) {
            return pureSite("neg-add", g, [](TermGen &g, std::string v) {
                return mkNeg(mkAdd(g.intExpr(2, {v}), g.intExpr(2, {v})));
            });
        };
        m["add-neg"] = [](TermGen &g) {
            return pureSite("add-neg", g, [](TermGen &g, std::string v) {
                return mkAdd(g.intExpr(2, {v}), mkNeg(g.intExpr(2, {v})));
            });
        };
        m["add-comm"] = [](TermGen &g) {
            return pureSite("add-comm", g,
                            [](TermGen &g, std::string v) { return mkAdd(g.intExpr(2, {v}), g.intExpr(2, {v})); });
        };
        m["add-assoc"] = [](TermGen &g) {
            return pureSite("add-assoc", g, [](TermGen &g, std::string v) {
                return mkAdd(mkAdd(g.intExpr(1, {v}), g.intExpr(1, {v})), g.intExpr(1, {v}));
            });
        };
        m["add-zero"] = [](TermGen &g) {
            return pureSite("add-zero", g, [](TermGen &g, std::string v) { return mkAdd(g.intExpr(2, {v}), mkInt(0)); });
        };
        m["arith-fold"] = [](TermGen &g) {
            return pureSite("arith-fold", g, [](TermGen &g, std::string) {
                TermPtr a = mkInt(g.pick(-9, 9)), b = mkInt(g.pick(-9, 9));
                switch (g.pick(0, 2)) {
                    case 0: return mkAdd(a, b);
                    case 1: return mkSub(a, b);
                    default: return mkNeg(a);
                }
            });
        };
        m["rep-indep"] = [](TermGen &g) {
            TermPtr init = mkInt(g.pick(-25, 25));
            TermPtr obj = cellObject(static_cast<std::size_t>(g.pick(0, static_cast<int>(cellObjectVariants()) - 1)), init);
            IsoWitness w = g.coin() ? IsoWitness{mkNegFn(), mkNegFn()}
                                    : IsoWitness{parseTerm("fun (x : Int) -> x + 1"), parseTerm("fun (x : Int) -> x - 1")};
            return LawInstance{"rep-indep", obj, {}, w};
        };
        return m;
    }();
    return m;
}

}  // namespace

LawInstance genLawInstance(const std::string &rule, Rng &rng) {
    auto it = makers().find(rule);
    if (it == makers().end()) throw std::invalid_argument("no instance generator for rule '" + rule + "'");
    TermGen g(rng);
    LawInstance inst = it->second(g);
    // eta's redex sits inside the application that pureSite builds
    if (rule == "eta") inst.site.push_back(0);
    return inst;
}

TermPtr randomStraightline(Rng &rng) {
    TermGen g(rng);
    Setting s = makeCells(g);
    return withCells(s.cells, g.comp(4, {}, s.names)).term;
}

std::size_t cellObjectVariants() { return 5; }

TermPtr cellObject(std::size_t variant, const TermPtr &init) {
    static const char *bodies[] = {
        "ret (get l, fun (x : Int) -> set l x)",
        "ret (get l, fun (x : Int) -> set l (x + 1))",
        "ret (map (fun (y : Int) -> y + 2) (get l), fun (x : Int) -> set l x)",
        "ret (y <- get l; ret (neg y), fun (x : Int) -> y <- get l; set l (y + x))",
        "ret (step; get l, fun (x : Int) -> set l x; step)",
    };
    return mkBind("l", mkAlloc(init), parseTerm(bodies[variant % cellObjectVariants()]));
}

LawResult checkLaw(const std::string &rule, const LawSuiteOptions &opts) {
    const Rule &r = findRule(rule);
    LawResult res;
    res.rule = rule;
    res.origin = r.origin;
    res.method = rule == "rep-indep" ? "probe" : "strict";
    // one stream per rule, so adding rules does not perturb the others
    Rng rng(opts.seed ^ std::hash<std::string>{}(rule));
    for (std::size_t i = 0; i < opts.cases; ++i) {
        LawInstance inst = genLawInstance(rule, rng);
        ++res.cases;
        std::string failure;
        try {
            TermPtr rhs = applyRule(inst.program, rule, inst.site, {}, Direction::LeftToRight,
                                    inst.iso ? &*inst.iso : nullptr);
            Verdict v = res.method == "probe"
                            ? probeEquiv(inst.program, rhs, opts.probeScriptLen, opts.probeLadder)
                            : strictEquiv(inst.program, rhs, opts.ladder);
            res.checks += v.checks;
            if (v.kind == VerdictKind::Equivalent)
                ++res.passed;
            else
                failure = to_string(v.kind) + " on " + print(inst.program) + " vs " + print(rhs) +
                          (v.witness.empty() ? "" : " (" + v.witness + ")");
        } catch (const std::exception &e) {
            failure = std::string(e.what()) + " on " + print(inst.program);
        }
        if (!failure.empty() && res.firstFailure.empty()) res.firstFailure = failure;
    }
    return res;
}

std::vector<LawResult> runLawSuite(const LawSuiteOptions &opts) {
    std::vector<LawResult> out;
    for (auto &r : ruleSet()) out.push_back(checkLaw(r.name, opts));
    return out;
}

}  // namespace refstore
