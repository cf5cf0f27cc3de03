#pragma once

#include <stdexcept>

#include "refstore/syntax.hpp"

namespace refstore {

class OutOfFragment : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Normal form for the recursion-free fragment in which no function is stored on the heap.
// Binds are right-nested with no `ret` on the left and no trailing `x <- m; ret x`,
// `map` is expanded into a bind, beta and projection redexes are contracted, and
// integer arithmetic is collected into a canonical linear form such as `i - 1`.
// Effects keep their order, so distinct normal forms may still be equivalent.
TermPtr normalizeStraightline(const TermPtr &t);

}  // namespace refstore
