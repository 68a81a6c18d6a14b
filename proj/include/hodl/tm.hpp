#pragma once

// Deterministic single-tape machines restricted to three actions: write a
// symbol, move right, move left; each also changes state.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hodl/encode.hpp"

namespace hodl {

enum class Symbol : std::uint8_t { A, B, Blank };

inline constexpr Symbol kTapeSymbols[] = {Symbol::A, Symbol::B, Symbol::Blank};

/// "a", "b", "_".
std::string symbol_text(Symbol s);
/// "a", "b", "blank": the suffix of the generated symbol_ predicates.
std::string symbol_suffix(Symbol s);

struct Action {
    enum class Kind : std::uint8_t { Write, Right, Left };
    Kind kind;
    std::string next;
    Symbol write = Symbol::Blank;  // Write only

    friend bool operator==(const Action&, const Action&) = default;
};

struct TuringMachine {
    std::string name;
    std::vector<std::string> states;
    std::string start;
    std::map<std::pair<std::string, Symbol>, Action> transitions;

    const Action* action(const std::string& state, Symbol s) const;
};

inline constexpr const char* kAcceptState = "yes";

/// Parses the line-oriented `.tm` format:
///
///     states: s0 s1 yes
///     start: s0
///     trans: s0 a -> s1 write a
///     trans: s0 b -> s0 right
///
/// `#` starts a comment; `_` is the blank. Transitions out of yes are
/// completed with write-same self loops. Throws Error (E001) with the line.
TuringMachine parse_tm(std::string_view text, std::string name = "machine");

/// Canonical text; parse_tm(print_tm(m)) == m up to the completed yes loops.
std::string print_tm(const TuringMachine& m);

enum class Verdict : std::uint8_t { Accepted, Rejected, OutOfSteps, LeftEdgeViolation };

std::string verdict_text(Verdict v);

struct RunResult {
    Verdict verdict;
    std::uint64_t steps_used = 0;
    std::string final_state;
};

/// Simulates from the start state with the head on cell 0. Accepted as soon
/// as the machine is in yes; rejected when no transition applies.
RunResult tm_run(const TuringMachine& m, const InputString& w, std::uint64_t max_steps);

inline constexpr std::uint64_t kStepHorizon = 1'000'000;

/// Steps until the machine first enters yes, if within the horizon.
std::optional<std::uint64_t> step_count(const TuringMachine& m, const InputString& w,
                                        std::uint64_t horizon = kStepHorizon);

}  // namespace hodl
