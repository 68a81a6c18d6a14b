#include "hodl/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hodl/typing.hpp"

namespace hodl {

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

TuringMachine read_machine(const std::string& path) {
    return parse_tm(read_text(path), std::filesystem::path(path).stem().string());
}

EngineConfig engine_config(const CliOptions& opts, EngineKind engine, std::ostream& trace) {
    EngineConfig cfg;
    cfg.engine = engine;
    if (opts.budget) cfg.step_budget = *opts.budget;
    cfg.domain_cap = opts.cap;
    cfg.trace = opts.trace;
    cfg.trace_out = &trace;
    cfg.extensionalize = opts.extensionalize;
    return cfg;
}

// Runs `body`, mapping exceptions to diagnostics and exit codes.
template <typename F>
int guarded(const std::string& file, std::ostream& err, F body) {
    try {
        return body();
    } catch (const BudgetExhausted& e) {
        err << file << ": budget exhausted after " << e.steps() << " steps\n";
        return kExitBudget;
    } catch (const Error& e) {
        err << e.diagnostic().render(file) << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << file << ": " << e.what() << '\n';
        return kExitError;
    }
}

std::string shown(const InputString& w) { return w.empty() ? "\"\"" : w.str(); }

Diagnostic abort_diagnostic(const std::string& message) { return Diagnostic{"E401", {}, message}; }

}  // namespace

// ---------------------------------------------------------------------------
// Crosscheck

CrosscheckReport crosscheck(const TuringMachine& m, const CliOptions& opts) {
    CrosscheckReport report;
    report.machine = m.name;
    report.k = opts.order;
    report.d = opts.d;
    report.engine = opts.engine.value_or(opts.order == 1 ? EngineKind::Seminaive : EngineKind::Demand);

    // Oracle pass, in order, up to the first string that stops the run.
    for (const InputString& w : all_strings(opts.max_len)) {
        CrosscheckRow row;
        row.input = w;
        const RunResult full = tm_run(m, w, kStepHorizon);
        const std::uint64_t limit = oracle_steps(opts.order, opts.d, w.size());
        row.oracle = tm_run(m, w, limit).verdict;
        std::optional<std::string> stop;
        if (full.verdict == Verdict::LeftEdgeViolation) {
            stop = "machine moves left of cell 0 on " + shown(w);
        } else if (full.verdict == Verdict::OutOfSteps) {
            stop = "machine runs past " + std::to_string(kStepHorizon) + " steps on " + shown(w);
        } else if (full.verdict == Verdict::Accepted && full.steps_used > limit) {
            stop = "machine accepts " + shown(w) + " after " + std::to_string(full.steps_used) +
                   " steps; the simulation follows " + std::to_string(limit) + " (raise --d or --order)";
        }
        if (stop) {
            row.oracle = full.verdict;
            row.engine = "-";
            report.rows.push_back(row);
            report.abort = abort_diagnostic(*stop);
            break;
        }
        report.rows.push_back(row);
    }

    std::size_t runnable = report.rows.size() - (report.abort ? 1 : 0);
    Program prog;
    if (runnable > 0) {
        try {
            prog = compile_tm(m, report.k, report.d);
        } catch (const Error&) {
            // The short-string rules hit the stopping string as well.
            if (!report.abort) throw;
            for (CrosscheckRow& row : report.rows) row.engine = "-";
            runnable = 0;
        }
    }
    if (runnable > 0) {
        std::ostringstream discard;
        const EngineConfig cfg = engine_config(opts, report.engine, discard);
        const auto count = static_cast<std::ptrdiff_t>(runnable);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            CrosscheckRow& row = report.rows[static_cast<std::size_t>(i)];
            EngineConfig local = cfg;
            local.trace = false;
            try {
                const Decision dec = decide(prog, row.input, local);
                row.engine = dec.accept ? "accepted" : "rejected";
                row.steps = dec.work;
                row.agree = dec.accept == (row.oracle == Verdict::Accepted);
            } catch (const BudgetExhausted& e) {
                row.engine = "budget";
                row.steps = e.steps();
            } catch (const std::exception&) {
                row.engine = "error";
            }
        }
    }
    for (std::size_t i = 0; i < runnable; ++i) {
        (report.rows[i].agree ? report.agreed : report.disagreed)++;
    }
    return report;
}

std::string render_table(const CrosscheckReport& report) {
    std::vector<std::vector<std::string>> cells = {{"input", "oracle", "engine", "agree", "steps"}};
    for (const CrosscheckRow& row : report.rows) {
        const bool ran = row.engine != "-";
        cells.push_back({shown(row.input), verdict_text(row.oracle), row.engine, ran ? (row.agree ? "yes" : "no") : "-",
                         ran ? std::to_string(row.steps) : "-"});
    }
    std::vector<std::size_t> width(5, 0);
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    }
    std::ostringstream out;
    out << "machine " << report.machine << "  k=" << report.k << "  d=" << report.d << "  engine "
        << engine_name(report.engine) << '\n';
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            out << line[c];
            if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
        }
        out << '\n';
    }
    out << report.rows.size() << " rows, " << report.agreed << " agree, " << report.disagreed << " disagree";
    if (report.abort) out << ", aborted";
    out << '\n';
    return out.str();
}

std::string render_csv(const CrosscheckReport& report) {
    std::ostringstream out;
    out << "input,oracle,engine,agree,steps\n";
    for (const CrosscheckRow& row : report.rows) {
        const bool ran = row.engine != "-";
        out << row.input.str() << ',' << verdict_text(row.oracle) << ',' << row.engine << ','
            << (ran ? (row.agree ? "true" : "false") : "") << ',' << (ran ? std::to_string(row.steps) : "") << '\n';
    }
    return out.str();
}

int crosscheck_exit_code(const CrosscheckReport& report) {
    const auto has = [&](const char* engine) {
        return std::any_of(report.rows.begin(), report.rows.end(), [&](const CrosscheckRow& r) { return r.engine == engine; });
    };
    if (report.abort || has("error")) return kExitError;
    if (has("budget")) return kExitBudget;
    return report.disagreed == 0 ? kExitAccept : kExitReject;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_check(const std::string& file, std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        const TypeReport report = load_program(read_text(file));
        out << "order: " << report.program_order << '\n';
        return kExitAccept;
    });
}

int cmd_run(const std::string& file, const CliOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        const TypeReport report = load_program(read_text(file));
        const InputString w(opts.input.value_or(""));
        const EngineKind engine =
            opts.engine.value_or(report.program_order <= 1 ? EngineKind::Seminaive : EngineKind::Demand);
        const Decision dec = decide(report.program, w, engine_config(opts, engine, err));
        out << (dec.accept ? "accept" : "reject") << '\n';
        return dec.accept ? kExitAccept : kExitReject;
    });
}

int cmd_model(const std::string& file, const CliOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        Program prog = load_program(read_text(file)).program;
        if (opts.input) prog = merge(prog, encode_input(InputString(*opts.input)));
        const EngineKind engine = opts.engine.value_or(EngineKind::Naive);
        if (engine == EngineKind::Demand) throw std::invalid_argument("model needs a bottom-up engine");
        const Interpretation model =
            engine == EngineKind::Seminaive ? least_model_seminaive(prog).model : least_model_naive(prog, opts.cap).model;
        out << dump_model(model);
        return kExitAccept;
    });
}

int cmd_compile_tm(const std::string& tmfile, const CliOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(tmfile, err, [&] {
        const std::string text = compile_tm_text(read_machine(tmfile), opts.order, opts.d);
        if (opts.out) {
            write_text(*opts.out, text);
        } else {
            out << text;
        }
        return kExitAccept;
    });
}

int cmd_tm_run(const std::string& tmfile, const CliOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(tmfile, err, [&] {
        const RunResult r = tm_run(read_machine(tmfile), InputString(opts.input.value_or("")),
                                   opts.budget.value_or(kStepHorizon));
        out << "verdict: " << verdict_text(r.verdict) << "\nsteps: " << r.steps_used << "\nstate: " << r.final_state
            << '\n';
        switch (r.verdict) {
            case Verdict::Accepted: return kExitAccept;
            case Verdict::Rejected: return kExitReject;
            case Verdict::OutOfSteps: return kExitBudget;
            case Verdict::LeftEdgeViolation: return kExitError;
        }
        return kExitError;
    });
}

int cmd_crosscheck(const std::string& tmfile, const CliOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(tmfile, err, [&] {
        const CrosscheckReport report = crosscheck(read_machine(tmfile), opts);
        out << render_table(report);
        if (opts.out) write_text(*opts.out, render_csv(report));
        if (report.abort) err << report.abort->render(tmfile) << '\n';
        return crosscheck_exit_code(report);
    });
}

}  // namespace hodl
