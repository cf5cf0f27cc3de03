#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace refstore {

using Integer = boost::multiprecision::cpp_int;

// ------------------------------
// types
// ------------------------------

struct Type;
using TypePtr = std::shared_ptr<const Type>;

namespace ty {
struct Unit {};
struct Int {};
struct Fn {
    TypePtr dom, cod;
};
struct Prod {
    TypePtr fst, snd;
};
struct Record {
    std::vector<std::pair<std::string, TypePtr>> fields;
};
// T A, the computation type
struct Comp {
    TypePtr body;
};
struct Ref {
    TypePtr body;
};
// unification variable; only produced by the typechecker while solving
struct Hole {
    int id;
};
}  // namespace ty

struct Type {
    std::variant<ty::Unit, ty::Int, ty::Fn, ty::Prod, ty::Record, ty::Comp, ty::Ref, ty::Hole> node;
};

TypePtr tUnit();
TypePtr tInt();
TypePtr tFn(TypePtr dom, TypePtr cod);
TypePtr tProd(TypePtr fst, TypePtr snd);
TypePtr tRecord(std::vector<std::pair<std::string, TypePtr>> fields);
TypePtr tComp(TypePtr body);
TypePtr tRef(TypePtr body);
TypePtr tHole(int id);
// Cell s := T s * (s -> T Unit)
TypePtr tCell(TypePtr s);

bool typeEq(const TypePtr &a, const TypePtr &b);
std::string printType(const TypePtr &t);

// ------------------------------
// terms
// ------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

namespace tm {
struct Var {
    std::string name;
};
struct Lam {
    std::string param;
    TypePtr annot;  // may be null
    TermPtr body;
};
struct App {
    TermPtr fn, arg;
};
struct Pair {
    TermPtr fst, snd;
};
struct Fst {
    TermPtr arg;
};
struct Snd {
    TermPtr arg;
};
struct Record {
    std::vector<std::pair<std::string, TermPtr>> fields;
};
struct Proj {
    TermPtr record;
    std::string label;
};
struct IntLit {
    Integer value;
};
struct Add {
    TermPtr lhs, rhs;
};
struct Sub {
    TermPtr lhs, rhs;
};
// the negation function Int -> Int; `neg e` is App(Neg, e)
struct Neg {};
struct UnitLit {};
struct Ret {
    TermPtr arg;
};
// x <- first; rest. The name "_" is the anonymous binder of `first; rest`.
struct Bind {
    std::string var;
    TermPtr first, rest;
};
struct Alloc {
    TermPtr init;
    TypePtr tag;  // cell type, filled in by elaboration; ignored by alphaEq and print
};
struct Get {
    TermPtr ref;
};
struct Set {
    TermPtr ref, value;
};
struct Step {};
// functorial action of T: map f m
struct Map {
    TermPtr fn, comp;
};
struct Rec {
    std::string self, param;
    TypePtr paramAnnot, resultAnnot;  // may be null; resultAnnot is the tau of sigma -> T tau
    TermPtr body;
};
// pattern metavariable, only meaningful inside rewrite rules
struct Meta {
    std::string name;
};
}  // namespace tm

struct Term {
    std::variant<tm::Var, tm::Lam, tm::App, tm::Pair, tm::Fst, tm::Snd, tm::Record, tm::Proj, tm::IntLit,
                 tm::Add, tm::Sub, tm::Neg, tm::UnitLit, tm::Ret, tm::Bind, tm::Alloc, tm::Get, tm::Set,
                 tm::Step, tm::Map, tm::Rec, tm::Meta>
        node;
};

inline constexpr const char *kAnonymous = "_";

TermPtr mkVar(std::string name);
TermPtr mkLam(std::string param, TermPtr body, TypePtr annot = nullptr);
TermPtr mkApp(TermPtr fn, TermPtr arg);
TermPtr mkPair(TermPtr a, TermPtr b);
TermPtr mkFst(TermPtr a);
TermPtr mkSnd(TermPtr a);
TermPtr mkRecord(std::vector<std::pair<std::string, TermPtr>> fields);
TermPtr mkProj(TermPtr record, std::string label);
TermPtr mkInt(Integer n);
TermPtr mkAdd(TermPtr a, TermPtr b);
TermPtr mkSub(TermPtr a, TermPtr b);
TermPtr mkNegFn();
TermPtr mkNeg(TermPtr a);
TermPtr mkUnit();
TermPtr mkRet(TermPtr a);
TermPtr mkBind(std::string var, TermPtr first, TermPtr rest);
TermPtr mkSeq(TermPtr first, TermPtr rest);
TermPtr mkAlloc(TermPtr init, TypePtr tag = nullptr);
TermPtr mkGet(TermPtr ref);
TermPtr mkSet(TermPtr ref, TermPtr value);
TermPtr mkStep();
TermPtr mkMap(TermPtr fn, TermPtr comp);
TermPtr mkRec(std::string self, std::string param, TermPtr body, TypePtr paramAnnot = nullptr,
              TypePtr resultAnnot = nullptr);
TermPtr mkMeta(std::string name);

// ------------------------------
// paths
// ------------------------------

// Child indices addressing a subterm. Child order per node:
//   Lam: body | App: fn, arg | Pair: fst, snd | Fst/Snd: arg | Record: fields in order
//   Proj: record | Add/Sub: lhs, rhs | Ret: arg | Bind: first, rest | Alloc: init
//   Get: ref | Set: ref, value | Map: fn, comp | Rec: body
using Path = std::vector<std::size_t>;

std::vector<TermPtr> children(const TermPtr &t);
TermPtr withChild(const TermPtr &t, std::size_t index, TermPtr child);
// nullptr if the path does not address a subterm
TermPtr subtermAt(const TermPtr &t, const Path &p);
TermPtr replaceAt(const TermPtr &t, const Path &p, TermPtr replacement);
// names bound by the node for the child at `index`
std::vector<std::string> bindersFor(const TermPtr &t, std::size_t index);

std::string printPath(const Path &p);
std::optional<Path> parsePath(const std::string &text);

// ------------------------------
// names, substitution, alpha-equivalence
// ------------------------------

std::set<std::string> freeVars(const TermPtr &t);
std::set<std::string> metaVars(const TermPtr &t);
bool occursFree(const TermPtr &t, const std::string &name);

// A name derived from `base` that is not in `avoid`.
std::string freshName(const std::string &base, const std::set<std::string> &avoid);

// Capture-avoiding t[s/x].
TermPtr subst(const TermPtr &t, const std::string &x, const TermPtr &s);
// Simultaneous capture-avoiding substitution.
TermPtr substMany(const TermPtr &t, const std::vector<std::pair<std::string, TermPtr>> &sigma);
// Replace metavariables by terms (no binder interaction; instances are closed over pattern scope).
TermPtr instantiateMetas(const TermPtr &t, const std::vector<std::pair<std::string, TermPtr>> &sigma);

bool alphaEq(const TermPtr &a, const TermPtr &b);
// Renames every bound name to a positional one; alphaEq(a, b) iff print(alphaNormalize(a)) == print(alphaNormalize(b)).
TermPtr alphaNormalize(const TermPtr &t);
std::size_t termSize(const TermPtr &t);

// ------------------------------
// concrete syntax
// ------------------------------

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

struct Definition {
    std::string name;
    TermPtr body;
    int line = 0;
};

TermPtr parseTerm(const std::string &text);
TypePtr parseType(const std::string &text);
// A source file: either a bare term (yields one definition named "main") or `def name = term` entries.
// Later definitions may mention earlier ones by name; those references are inlined.
std::vector<Definition> parseProgram(const std::string &text);

std::string print(const TermPtr &t);

}  // namespace refstore
