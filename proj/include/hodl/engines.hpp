#pragma once

// Evaluation engines: the naive T_P iteration (semantics.hpp), a semi-naive
// engine for first-order programs and a demand-driven tabled engine for
// higher-order programs; decide runs one of them on P united with D_w.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hodl/core.hpp"
#include "hodl/encode.hpp"
#include "hodl/semantics.hpp"

namespace hodl {

enum class EngineKind { Naive, Seminaive, Demand };

std::string engine_name(EngineKind kind);
/// "naive", "seminaive", "demand"; throws std::invalid_argument otherwise.
EngineKind parse_engine(const std::string& name);

struct EngineConfig {
    EngineKind engine = EngineKind::Demand;
    std::uint64_t step_budget = 10'000'000;
    std::size_t domain_cap = kDefaultDomainCap;
    /// One line per table update, `goal -> value @pass`.
    bool trace = false;
    /// Trace destination; std::cerr when null.
    std::ostream* trace_out = nullptr;
    /// Replace closures of order-1 types over individuals by their relations.
    bool extensionalize = false;
};

// ---------------------------------------------------------------------------
// Semi-naive

struct SeminaiveResult {
    Interpretation model;
    /// Rounds that derived new facts; equals the naive iteration count.
    std::size_t iterations = 0;
};

/// Least model of a first-order program. Throws std::invalid_argument when
/// the program has order above 1.
SeminaiveResult least_model_seminaive(const Program& prog);

// ---------------------------------------------------------------------------
// Demand-driven tabling

/// A typed atom of type o. Variables are either bound in `bindings` (to
/// individuals or order-1 relations over individuals) or free individual
/// variables, for which `DemandEngine::answers` returns the solutions.
struct Goal {
    Expr atom;
    std::map<std::string, Value> bindings;
};

/// Parses `text` as a term and resolves its names against `prog`.
Goal make_goal(const Program& prog, const std::string& text, std::map<std::string, Value> bindings = {});

class DemandEngine {
public:
    DemandEngine(const Program& prog, EngineConfig cfg = {});
    ~DemandEngine();
    DemandEngine(const DemandEngine&) = delete;
    DemandEngine& operator=(const DemandEngine&) = delete;

    /// True iff the ground goal holds in the least model. Throws
    /// BudgetExhausted when the step budget runs out.
    bool holds(const Goal& goal);

    /// Bindings of the free variables (in order of first occurrence) that
    /// make the goal true, sorted.
    std::vector<std::vector<std::string>> answers(const Goal& goal);

    /// Names of the free variables of `goal`, in order of first occurrence.
    static std::vector<std::string> free_variables(const Goal& goal);

    const Universe& universe() const;
    std::uint64_t steps() const;
    std::size_t table_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot demand query.
bool solve_demand(const Program& prog, const Goal& goal, const EngineConfig& cfg = {});

// ---------------------------------------------------------------------------
// Decision

struct Decision {
    bool accept = false;
    /// Demand steps, or fixpoint iterations for the bottom-up engines.
    std::uint64_t work = 0;
};

/// Merges encode_input(w) and evaluates `accept`. A program without accept
/// rejects. Propagates BudgetExhausted and ResourceError.
Decision decide(const Program& prog, const InputString& w, const EngineConfig& cfg = {});

inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitError = 3;

}  // namespace hodl
