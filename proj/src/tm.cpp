#include "hodl/tm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hodl {

std::string symbol_text(Symbol s) {
    switch (s) {
        case Symbol::A: return "a";
        case Symbol::B: return "b";
        case Symbol::Blank: return "_";
    }
    return "?";
}

std::string symbol_suffix(Symbol s) { return s == Symbol::Blank ? "blank" : symbol_text(s); }

const Action* TuringMachine::action(const std::string& state, Symbol s) const {
    auto it = transitions.find({state, s});
    return it == transitions.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void tm_error(int line, const std::string& msg) { throw Error(Diagnostic{"E001", {line, 1}, msg}); }

std::optional<Symbol> parse_symbol(const std::string& s) {
    if (s == "a") return Symbol::A;
    if (s == "b") return Symbol::B;
    if (s == "_") return Symbol::Blank;
    return std::nullopt;
}

}  // namespace

TuringMachine parse_tm(std::string_view text, std::string name) {
    TuringMachine m;
    m.name = std::move(name);
    std::set<std::string> states;
    bool have_states = false;
    struct Pending {
        int line;
        std::string from, read, to;
        std::vector<std::string> action;
    };
    std::vector<Pending> pending;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream words(raw);
        std::string key;
        if (!(words >> key)) continue;
        std::vector<std::string> rest;
        for (std::string w; words >> w;) rest.push_back(w);
        if (key == "states:") {
            if (have_states) tm_error(line, "duplicate states line");
            have_states = true;
            for (const std::string& s : rest) {
                if (!states.insert(s).second) tm_error(line, "duplicate state " + s);
                m.states.push_back(s);
            }
        } else if (key == "start:") {
            if (!m.start.empty()) tm_error(line, "duplicate start line");
            if (rest.size() != 1) tm_error(line, "start: expects one state");
            m.start = rest[0];
        } else if (key == "trans:") {
            // s0 a -> s1 write a | s0 a -> s1 right | s0 a -> s1 left
            if (rest.size() < 4 || rest[2] != "->") tm_error(line, "expected 'trans: STATE SYMBOL -> STATE ACTION'");
            pending.push_back({line, rest[0], rest[1], rest[3], {rest.begin() + 4, rest.end()}});
        } else {
            tm_error(line, "unknown key '" + key + "'");
        }
    }
    if (!have_states) tm_error(line, "missing states line");
    if (m.start.empty()) tm_error(line, "missing start line");
    if (!states.contains(m.start)) tm_error(line, "start state " + m.start + " is not declared");
    if (!states.contains(kAcceptState)) tm_error(line, "the accepting state yes is not declared");

    for (const Pending& p : pending) {
        if (!states.contains(p.from)) tm_error(p.line, "unknown state " + p.from);
        if (!states.contains(p.to)) tm_error(p.line, "unknown state " + p.to);
        auto read = parse_symbol(p.read);
        if (!read) tm_error(p.line, "unknown symbol " + p.read);
        Action act{Action::Kind::Write, p.to, Symbol::Blank};
        if (p.action.size() == 2 && p.action[0] == "write") {
            auto w = parse_symbol(p.action[1]);
            if (!w) tm_error(p.line, "unknown symbol " + p.action[1]);
            act.write = *w;
        } else if (p.action.size() == 1 && p.action[0] == "right") {
            act.kind = Action::Kind::Right;
        } else if (p.action.size() == 1 && p.action[0] == "left") {
            act.kind = Action::Kind::Left;
        } else {
            tm_error(p.line, "action must be 'write SYMBOL', 'right' or 'left'");
        }
        if (p.from == kAcceptState && !(act == Action{Action::Kind::Write, kAcceptState, *read})) {
            tm_error(p.line, "yes must stay in yes and keep the symbol");
        }
        if (!m.transitions.emplace(std::pair{p.from, *read}, act).second) {
            tm_error(p.line, "duplicate transition for (" + p.from + ", " + p.read + ")");
        }
    }
    for (Symbol s : kTapeSymbols) m.transitions.try_emplace({kAcceptState, s}, Action{Action::Kind::Write, kAcceptState, s});
    return m;
}

std::string print_tm(const TuringMachine& m) {
    std::string out = "states:";
    for (const std::string& s : m.states) out += " " + s;
    out += "\nstart: " + m.start + "\n";
    for (const auto& [key, act] : m.transitions) {
        if (key.first == kAcceptState) continue;
        out += "trans: " + key.first + " " + symbol_text(key.second) + " -> " + act.next + " ";
        switch (act.kind) {
            case Action::Kind::Write: out += "write " + symbol_text(act.write); break;
            case Action::Kind::Right: out += "right"; break;
            case Action::Kind::Left: out += "left"; break;
        }
        out += "\n";
    }
    return out;
}

std::string verdict_text(Verdict v) {
    switch (v) {
        case Verdict::Accepted: return "accepted";
        case Verdict::Rejected: return "rejected";
        case Verdict::OutOfSteps: return "out_of_steps";
        case Verdict::LeftEdgeViolation: return "left_edge_violation";
    }
    return "?";
}

RunResult tm_run(const TuringMachine& m, const InputString& w, std::uint64_t max_steps) {
    std::vector<Symbol> tape;
    for (std::size_t i = 0; i < w.size(); ++i) tape.push_back(w[i] == 'a' ? Symbol::A : Symbol::B);
    std::string state = m.start;
    std::size_t head = 0;
    std::uint64_t steps = 0;
    for (;;) {
        if (state == kAcceptState) return {Verdict::Accepted, steps, state};
        if (steps == max_steps) return {Verdict::OutOfSteps, steps, state};
        if (head >= tape.size()) tape.resize(head + 1, Symbol::Blank);
        const Action* act = m.action(state, tape[head]);
        if (!act) return {Verdict::Rejected, steps, state};
        switch (act->kind) {
            case Action::Kind::Write: tape[head] = act->write; break;
            case Action::Kind::Right: ++head; break;
            case Action::Kind::Left:
                if (head == 0) return {Verdict::LeftEdgeViolation, steps, state};
                --head;
                break;
        }
        state = act->next;
        ++steps;
    }
}

std::optional<std::uint64_t> step_count(const TuringMachine& m, const InputString& w, std::uint64_t horizon) {
    RunResult r = tm_run(m, w, horizon);
    if (r.verdict == Verdict::Accepted) return r.steps_used;
    return std::nullopt;
}

}  // namespace hodl
