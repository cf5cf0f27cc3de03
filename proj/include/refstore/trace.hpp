#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refstore/rewrite.hpp"

namespace refstore {

struct TraceStep {
    std::string rule;
    Path path;
    Direction dir = Direction::LeftToRight;
    Bindings bindings;
    std::optional<IsoWitness> iso;
    std::string note;  // free text after `--` on the rule line
    int line = 0;
};

struct DerivationTrace {
    TermPtr start, end;
    std::vector<TraceStep> steps;
};

// Line-oriented format:
//   start <term>
//   rule <name> at <path> [dir ltr|rtl] [bind k=<atom>]* [iso <atom> <atom>] [-- note]
//   end <term>
// `--` begins a comment, blank lines are ignored and indented lines continue the previous directive.
// An <atom> is a name, an integer or a parenthesized term.
DerivationTrace parseTrace(const std::string &text);
std::string printTrace(const DerivationTrace &t);

struct StepReport {
    std::size_t index = 0;
    bool ok = false;
    std::string message;
    TermPtr result;  // term after the step when ok
};

struct TraceReport {
    bool valid = false;
    std::vector<StepReport> steps;
    std::string message;  // first failure, or a summary
};

// Replays every step from `start`; valid iff all steps apply and the result is alpha-equivalent to `end`.
TraceReport checkTrace(const DerivationTrace &t, const Context &ctx = {});

}  // namespace refstore
