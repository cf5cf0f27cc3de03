// refstore: command-line front end for the checker, interpreter, equivalence tester and rewriter.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "refstore/equiv.hpp"
#include "refstore/laws.hpp"
#include "refstore/normalize.hpp"
#include "refstore/trace.hpp"

using namespace refstore;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string readFile(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TermPtr loadTerm(const std::string &path, const std::string &def) {
    auto defs = parseProgram(readFile(path));
    if (defs.empty()) throw UsageError(path + " defines nothing");
    if (!def.empty()) {
        for (auto &d : defs)
            if (d.name == def) return d.body;
        throw UsageError(path + " has no definition named " + def);
    }
    for (auto &d : defs)
        if (d.name == "main") return d.body;
    return defs.back().body;
}

void summary(const json &j) { std::cout << "summary: " << j.dump() << "\n"; }

class Timer {
public:
    explicit Timer(bool enabled) : enabled_(enabled), t0_(std::chrono::steady_clock::now()) {}
    void report(std::ostream &os) const {
        if (!enabled_) return;
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
        os << "elapsed: " << std::fixed << std::setprecision(1) << ms << " ms\n";
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point t0_;
};

int cmdCheck(const std::string &file) {
    for (auto &d : parseProgram(readFile(file))) std::cout << d.name << " : " << printType(elaborate({}, d.body).type) << "\n";
    return 0;
}

int cmdRun(const std::string &file, const std::string &def, Fuel fuel, bool dump) {
    auto r = observe(loadTerm(file, def), fuel);
    if (timedOut(r)) {
        std::cout << "timeout: no result within fuel " << fuel << "\n";
        return 2;
    }
    const auto &c = std::get<Config>(r);
    std::cout << "steps=" << c.steps << " value=" << printValue(c.result) << "\n";
    if (dump) std::cout << dumpConfig(c);
    return 0;
}

int cmdProbe(const std::string &file, const std::string &def, const std::string &script, Fuel fuel) {
    auto trace = probe(prepare(loadTerm(file, def)), parseScript(script), fuel);
    std::cout << describeTrace(trace) << "\n";
    return trace.timedOut ? 2 : 0;
}

int cmdEquiv(const std::string &f1, const std::string &f2, const std::string &def1, const std::string &def2,
             const std::string &mode, std::size_t maxScript, const std::string &ladderText, bool ignoreSteps,
             bool deterministic) {
    FuelLadder ladder;
    try {
        ladder = parseFuelLadder(ladderText);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    if (mode != "strict" && mode != "probe") throw UsageError("--mode must be strict or probe");
    Timer timer(!deterministic);
    TermPtr a = loadTerm(f1, def1), b = loadTerm(f2, def2);
    Verdict v = mode == "strict" ? strictEquiv(a, b, ladder, ignoreSteps)
                                 : probeEquiv(a, b, maxScript, ladder, ignoreSteps);
    std::cout << "verdict: " << to_string(v.kind) << "\n";
    std::cout << "bounds: " << v.bounds << "\n";
    std::cout << "comparisons: " << v.checks << "\n";
    if (v.kind == VerdictKind::Distinguished) {
        std::cout << "witness: " << v.witness << "\n";
        std::cout << "left:\n" << v.left << "\n";
        std::cout << "right:\n" << v.right << "\n";
    }
    timer.report(std::cout);
    json j{{"command", "equiv"}, {"mode", mode}, {"verdict", to_string(v.kind)}, {"comparisons", v.checks},
           {"bounds", v.bounds}};
    if (v.kind == VerdictKind::Distinguished) j["witness"] = v.witness;
    summary(j);
    switch (v.kind) {
        case VerdictKind::Equivalent: return 0;
        case VerdictKind::Distinguished: return 1;
        case VerdictKind::Inconclusive: return 2;
    }
    return kExitInternal;
}

int cmdDerive(const std::string &file, bool verbose, bool deterministic) {
    Timer timer(!deterministic);
    DerivationTrace tr = parseTrace(readFile(file));
    TraceReport rep = checkTrace(tr);
    for (auto &s : rep.steps) {
        const auto &st = tr.steps[s.index - 1];
        std::cout << "step " << s.index << ": " << st.rule << " at " << printPath(st.path) << " ... "
                  << (s.ok ? "ok" : "FAILED") << "\n";
        if (s.ok && verbose) std::cout << "  " << print(s.result) << "\n";
        if (!s.ok) std::cout << "  " << s.message << "\n";
    }
    std::cout << (rep.valid ? "Valid" : "Invalid") << ": " << rep.message << "\n";
    timer.report(std::cout);
    summary({{"command", "derive"}, {"valid", rep.valid}, {"steps", tr.steps.size()}});
    return rep.valid ? 0 : 1;
}

int cmdNormalize(const std::string &file) {
    for (auto &d : parseProgram(readFile(file))) std::cout << d.name << " = " << print(normalizeStraightline(d.body)) << "\n";
    return 0;
}

int cmdLaws(std::size_t cases, std::uint64_t seed, const std::string &only, bool deterministic) {
    Timer timer(!deterministic);
    LawSuiteOptions opts;
    opts.cases = cases;
    opts.seed = seed;
    std::vector<LawResult> results;
    if (only.empty())
        results = runLawSuite(opts);
    else
        results.push_back(checkLaw(findRule(only).name, opts));
    std::cout << std::left << std::setw(18) << "rule" << std::setw(12) << "origin" << std::setw(8) << "method"
              << std::setw(10) << "passed" << "comparisons\n";
    bool all = true;
    for (auto &r : results) {
        std::string frac = std::to_string(r.passed) + "/" + std::to_string(r.cases);
        std::cout << std::left << std::setw(18) << r.rule << std::setw(12) << r.origin << std::setw(8) << r.method
                  << std::setw(10) << frac << r.checks << "\n";
        if (r.passed != r.cases) {
            all = false;
            std::cout << "  first failure: " << r.firstFailure << "\n";
        }
    }
    timer.report(std::cout);
    json j{{"command", "laws"}, {"cases", cases}, {"seed", seed}, {"all_passed", all}};
    for (auto &r : results) j["rules"][r.rule] = {{"passed", r.passed}, {"cases", r.cases}};
    summary(j);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Checker, interpreter, equivalence tester and equational rewriter for a language with local state"};
    app.require_subcommand(1);
    app.fallthrough();
    bool deterministic = false;
    app.add_flag("--deterministic", deterministic, "Omit timings so output is byte-identical across runs");

    std::string file, file2, def, def2, script, mode = "probe", ladder = "4,16,64,256", rule;
    Fuel fuel = 1000;
    bool dump = false, ignoreSteps = false, verbose = false;
    std::size_t maxScript = 6, cases = 100;
    std::uint64_t seed = LawSuiteOptions{}.seed;

    auto *check = app.add_subcommand("check", "Typecheck every definition in a file");
    check->add_option("file", file, "Source file")->required();

    auto *run = app.add_subcommand("run", "Run a closed computation from the empty heap");
    run->add_option("file", file, "Source file")->required();
    run->add_option("--def", def, "Definition to run (default: main, else the last one)");
    run->add_option("--fuel", fuel, "Step budget")->capture_default_str();
    run->add_flag("--dump-config", dump, "Print the canonical heap as well");

    auto *prb = app.add_subcommand("probe", "Construct an object and call its methods");
    prb->add_option("file", file, "Source file")->required();
    prb->add_option("--def", def, "Definition to probe");
    prb->add_option("--script", script, "Comma-separated calls, e.g. incr,incr,read or snd(1),fst")->required();
    prb->add_option("--fuel", fuel, "Step budget for the whole interaction")->capture_default_str();

    auto *eq = app.add_subcommand("equiv", "Test two programs for observational equivalence");
    eq->add_option("file1", file, "First source file")->required();
    eq->add_option("file2", file2, "Second source file")->required();
    eq->add_option("--def1", def, "Definition in the first file");
    eq->add_option("--def2", def2, "Definition in the second file");
    eq->add_option("--mode", mode, "strict or probe")->capture_default_str();
    eq->add_option("--max-script", maxScript, "Longest method script (probe mode)")->capture_default_str();
    eq->add_option("--fuel-ladder", ladder, "Comma-separated fuels")->capture_default_str();
    eq->add_flag("--ignore-steps", ignoreSteps, "Compare results only, not step counts");

    auto *der = app.add_subcommand("derive", "Check a derivation trace");
    der->add_option("trace", file, "Trace file")->required();
    der->add_flag("-v,--verbose", verbose, "Print the term after every step");

    auto *nrm = app.add_subcommand("normalize", "Print the straight-line normal form of every definition");
    nrm->add_option("file", file, "Source file")->required();

    auto *laws = app.add_subcommand("laws", "Check every rule against the model on generated instances");
    laws->add_option("--cases", cases, "Instances per rule")->capture_default_str();
    laws->add_option("--seed", seed, "Generator seed")->capture_default_str();
    laws->add_option("--rule", rule, "Check only this rule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*check) return cmdCheck(file);
        if (*run) return cmdRun(file, def, fuel, dump);
        if (*prb) return cmdProbe(file, def, script, fuel);
        if (*eq) return cmdEquiv(file, file2, def, def2, mode, maxScript, ladder, ignoreSteps, deterministic);
        if (*der) return cmdDerive(file, verbose, deterministic);
        if (*nrm) return cmdNormalize(file);
        if (*laws) return cmdLaws(cases, seed, rule, deterministic);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RuleError &e) {
        bool usage = e.kind() == RuleErrorKind::UnknownRule;
        std::cerr << (usage ? "usage error: " : "internal error: ") << e.what() << "\n";
        return usage ? kExitUsage : kExitInternal;
    } catch (const ParseError &e) {
        std::cerr << "parse error at " << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return kExitData;
    } catch (const TypeError &e) {
        std::cerr << "type error: " << e.what() << "\n";
        return kExitData;
    } catch (const UnknownLabel &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const UnsupportedType &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const OutOfFragment &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
