#include "refstore/trace.hpp"

#include <cctype>
#include <sstream>

namespace refstore {

namespace {

struct Directive {
    std::string text;
    int line;
};

std::string stripComment(const std::string &line, std::string *note) {
    auto pos = line.find("--");
    if (pos == std::string::npos) return line;
    if (note) {
        std::string rest = line.substr(pos + 2);
        auto b = rest.find_first_not_of(" \t");
        *note = b == std::string::npos ? "" : rest.substr(b);
    }
    return line.substr(0, pos);
}

bool blank(const std::string &s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

// Splits on whitespace, keeping parenthesized groups (and `k=(...)`) as one token.
std::vector<std::string> tokens(const std::string &s, int line) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')' && --depth < 0) throw ParseError("unbalanced ')' in trace directive", line, 0);
        if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (depth) throw ParseError("unbalanced '(' in trace directive", line, 0);
    if (!cur.empty()) out.push_back(cur);
    return out;
}

TermPtr parseAt(const std::string &text, int line) {
    try {
        return parseTerm(text);
    } catch (const ParseError &e) {
        throw ParseError(e.what(), line + e.line() - 1, e.column());
    }
}

TraceStep parseRule(const std::string &body, const std::string &note, int line) {
    auto ts = tokens(body, line);
    TraceStep st;
    st.line = line;
    st.note = note;
    if (ts.size() < 3 || ts[1] != "at") throw ParseError("expected: rule <name> at <path> ...", line, 0);
    st.rule = ts[0];
    // a path may have been split at spaces inside the brackets
    std::size_t i = 2;
    std::string path = ts[i++];
    while (path.find(']') == std::string::npos && i < ts.size()) path += ts[i++];
    auto p = parsePath(path);
    if (!p) throw ParseError("bad path '" + path + "'", line, 0);
    st.path = *p;
    while (i < ts.size()) {
        const std::string &key = ts[i++];
        if (key == "dir") {
            if (i >= ts.size()) throw ParseError("dir needs ltr or rtl", line, 0);
            const std::string &d = ts[i++];
            if (d == "ltr") st.dir = Direction::LeftToRight;
            else if (d == "rtl") st.dir = Direction::RightToLeft;
            else throw ParseError("dir must be ltr or rtl, not '" + d + "'", line, 0);
        } else if (key == "bind") {
            if (i >= ts.size()) throw ParseError("bind needs name=term", line, 0);
            const std::string &b = ts[i++];
            auto eq = b.find('=');
            if (eq == std::string::npos || eq == 0) throw ParseError("bind needs name=term", line, 0);
            std::string name = b.substr(0, eq);
            if (name[0] == '?') name = name.substr(1);
            st.bindings[name] = parseAt(b.substr(eq + 1), line);
        } else if (key == "iso") {
            if (i + 1 >= ts.size()) throw ParseError("iso needs two functions", line, 0);
            TermPtr f = parseAt(ts[i], line), g = parseAt(ts[i + 1], line);
            st.iso = IsoWitness{f, g};
            i += 2;
        } else {
            throw ParseError("unexpected '" + key + "' in rule directive", line, 0);
        }
    }
    return st;
}

}  // namespace

DerivationTrace parseTrace(const std::string &text) {
    std::vector<Directive> ds;
    std::vector<std::string> notes;
    std::istringstream in(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string note;
        std::string line = stripComment(raw, &note);
        if (blank(line)) continue;
        if (std::isspace(static_cast<unsigned char>(line[0]))) {
            if (ds.empty()) throw ParseError("continuation line before any directive", lineNo, 0);
            ds.back().text += "\n" + line;
            if (!note.empty()) notes.back() += (notes.back().empty() ? "" : " ") + note;
            continue;
        }
        ds.push_back({line, lineNo});
        notes.push_back(note);
    }
    DerivationTrace t;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const auto &d = ds[k];
        auto sp = d.text.find_first_of(" \t\n");
        std::string head = d.text.substr(0, sp);
        std::string body = sp == std::string::npos ? "" : d.text.substr(sp + 1);
        if (head == "start" || head == "end") {
            if ((head == "start" ? t.start : t.end)) throw ParseError("duplicate '" + head + "'", d.line, 0);
            if (head == "end" && !t.start) throw ParseError("'end' before 'start'", d.line, 0);
            (head == "start" ? t.start : t.end) = parseAt(body, d.line);
        } else if (head == "rule") {
            if (!t.start || t.end) throw ParseError("rule directives go between start and end", d.line, 0);
            t.steps.push_back(parseRule(body, notes[k], d.line));
        } else {
            throw ParseError("unknown directive '" + head + "'", d.line, 0);
        }
    }
    if (!t.start) throw ParseError("missing 'start'", lineNo, 0);
    if (!t.end) throw ParseError("missing 'end'", lineNo, 0);
    return t;
}

std::string printTrace(const DerivationTrace &t) {
    std::string s = "start " + print(t.start) + "\n";
    for (auto &st : t.steps) {
        s += "rule " + st.rule + " at " + printPath(st.path);
        if (st.dir == Direction::RightToLeft) s += " dir rtl";
        for (auto &[k, v] : st.bindings) s += " bind " + k + "=(" + print(v) + ")";
        if (st.iso) s += " iso (" + print(st.iso->forward) + ") (" + print(st.iso->backward) + ")";
        if (!st.note.empty()) s += "  -- " + st.note;
        s += "\n";
    }
    return s + "end " + print(t.end) + "\n";
}

TraceReport checkTrace(const DerivationTrace &t, const Context &ctx) {
    TraceReport r;
    TermPtr cur = t.start;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto &st = t.steps[i];
        StepReport sr;
        sr.index = i + 1;
        try {
            cur = applyRule(cur, st.rule, st.path, st.bindings, st.dir, st.iso ? &*st.iso : nullptr, ctx);
            sr.ok = true;
            sr.result = cur;
            sr.message = "ok";
            r.steps.push_back(sr);
        } catch (const std::exception &e) {
            TermPtr sub = subtermAt(cur, st.path);
            sr.message = e.what();
            if (sub) sr.message += "\n  subterm at " + printPath(st.path) + ": " + print(sub);
            r.steps.push_back(sr);
            r.message = "step " + std::to_string(i + 1) + " (line " + std::to_string(st.line) + ", rule " +
                        st.rule + " at " + printPath(st.path) + ") failed: " + sr.message;
            return r;
        }
    }
    if (!alphaEq(cur, t.end)) {
        r.message = "derivation ends at\n  " + print(cur) + "\nbut the trace claims\n  " + print(t.end);
        return r;
    }
    r.valid = true;
    r.message = std::to_string(t.steps.size()) + " steps, ending at the stated term";
    return r;
}

}  // namespace refstore
