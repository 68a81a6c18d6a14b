#pragma once

// Command bodies behind the hodl executable. Each takes parsed options,
// writes to the given streams and returns the process exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hodl/codegen.hpp"
#include "hodl/engines.hpp"
#include "hodl/tm.hpp"

namespace hodl {

struct CliOptions {
    std::optional<std::string> input;
    /// Unset: seminaive for first-order programs, demand otherwise.
    std::optional<EngineKind> engine;
    unsigned order = 1;
    unsigned d = 2;
    std::size_t max_len = 3;
    /// Demand steps for run/crosscheck; machine steps for tm-run.
    std::optional<std::uint64_t> budget;
    std::size_t cap = kDefaultDomainCap;
    std::optional<std::string> out;
    bool trace = false;
    bool extensionalize = false;
};

// ---------------------------------------------------------------------------
// Crosscheck

struct CrosscheckRow {
    InputString input;
    Verdict oracle = Verdict::Rejected;
    /// "accepted", "rejected", "budget", "error", or "-" when not run.
    std::string engine;
    bool agree = false;
    std::uint64_t steps = 0;
};

struct CrosscheckReport {
    std::string machine;
    unsigned k = 1;
    unsigned d = 1;
    EngineKind engine = EngineKind::Seminaive;
    std::vector<CrosscheckRow> rows;
    std::size_t agreed = 0;
    std::size_t disagreed = 0;
    /// Set when a row stopped the run; that row is the last one.
    std::optional<Diagnostic> abort;

    bool ok() const { return !abort && disagreed == 0; }
};

/// Compiles `m` at order k, width d and compares decide with tm_run on every
/// string of length <= max_len. Stops at the first string where the machine
/// leaves the tape on the left, runs past the step horizon, or accepts after
/// more steps than the simulation follows. Rows run in parallel.
CrosscheckReport crosscheck(const TuringMachine& m, const CliOptions& opts);

std::string render_table(const CrosscheckReport& report);
/// Columns input,oracle,engine,agree,steps.
std::string render_csv(const CrosscheckReport& report);
/// 0 all agree, 1 some disagree, 2 budget exhausted on a row, 3 aborted or errors.
int crosscheck_exit_code(const CrosscheckReport& report);

// ---------------------------------------------------------------------------
// Commands

int cmd_check(const std::string& file, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& file, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_model(const std::string& file, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compile_tm(const std::string& tmfile, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_tm_run(const std::string& tmfile, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_crosscheck(const std::string& tmfile, const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace hodl
