#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "refstore/syntax.hpp"

namespace refstore {

// Ordered typing context. Extending with a name already present shadows it.
class Context {
public:
    Context() = default;
    Context(std::initializer_list<std::pair<std::string, TypePtr>> entries);

    Context extended(const std::string &name, TypePtr type) const;
    const TypePtr *lookup(const std::string &name) const;
    const std::vector<std::pair<std::string, TypePtr>> &entries() const { return entries_; }

    // Types for pattern metavariables, used when checking rule schemas.
    std::map<std::string, TypePtr> metas;

private:
    std::vector<std::pair<std::string, TypePtr>> entries_;
};

class TypeError : public std::runtime_error {
public:
    TypeError(std::string rule, Path path, const std::string &detail);
    const std::string &rule() const { return rule_; }
    const Path &path() const { return path_; }

private:
    std::string rule_;
    Path path_;
};

// Infers the unique type of `t`; throws TypeError when there is none or it is ambiguous.
TypePtr infer(const Context &ctx, const TermPtr &t);
// Succeeds iff `t` has type `expected`.
void check(const Context &ctx, const TermPtr &t, const TypePtr &expected);
std::optional<TypePtr> tryInfer(const Context &ctx, const TermPtr &t);

struct Elaborated {
    TermPtr term;  // every alloc carries its cell type
    TypePtr type;
};
Elaborated elaborate(const Context &ctx, const TermPtr &t);

}  // namespace refstore
