#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "refstore/guarded.hpp"
#include "refstore/store.hpp"
#include "refstore/typecheck.hpp"
#include "refstore/value.hpp"

namespace refstore {

using guarded::Fuel;

// Raised when evaluation gets stuck; unreachable for elaborated, well-typed programs.
class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Call-by-value, left to right. Computation-typed terms evaluate to suspended computations.
ValuePtr evalPure(const Env &env, const TermPtr &t);
ValuePtr apply(const ValuePtr &fn, const ValuePtr &arg);

struct State {
    Heap heap;
    ValuePtr value;
};

// The heap-passing denotation of a suspended computation.
guarded::Delayed<State> execComp(const ValuePtr &comp, const Heap &heap);

using RunResult = std::variant<Config, guarded::Timeout>;

RunResult runComp(const ValuePtr &comp, const Heap &heap, Fuel fuel);

inline bool timedOut(const RunResult &r) { return std::holds_alternative<guarded::Timeout>(r); }

bool isGroundType(const TypePtr &t);

// A closed, elaborated program of type T A.
struct Program {
    TermPtr term;
    TypePtr type;      // T A
    TypePtr resultType;  // A
};

// Typechecks and elaborates a closed computation. Throws TypeError.
Program prepare(const TermPtr &t);

// Canonicalized outcome of running a closed T-ground program from the empty heap.
using Observation = RunResult;

Observation observe(const Program &p, Fuel fuel);
Observation observe(const TermPtr &t, Fuel fuel);
bool observationEq(const Observation &a, const Observation &b, bool ignoreSteps = false);
std::string describeObservation(const Observation &o);

// ------------------------------
// probing objects through their methods
// ------------------------------

struct MethodCall {
    std::string label;           // a record label, or fst/snd for a pair object
    std::optional<TermPtr> arg;  // closed argument for function-typed methods
};

using MethodScript = std::vector<MethodCall>;

std::string printScript(const MethodScript &s);
// "incr,incr,read" or "snd(1),fst"
MethodScript parseScript(const std::string &text);

class UnknownLabel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CallResult {
    ValuePtr value;
    StepCount steps;
};

struct ProbeTrace {
    StepCount constructionSteps = 0;
    std::vector<CallResult> calls;
    // Set when fuel ran out: calls.size() is the index of the call that did not finish,
    // or construction did not finish if calls is empty and constructed is false.
    bool timedOut = false;
    bool constructed = false;
};

// Builds the object, then threads the heap through the script's method calls.
// One fuel budget covers the whole interaction. The final heap is not recorded.
ProbeTrace probe(const Program &object, const MethodScript &script, Fuel fuel);
bool probeTraceEq(const ProbeTrace &a, const ProbeTrace &b, bool ignoreSteps = false);
std::string describeTrace(const ProbeTrace &t);

}  // namespace refstore
