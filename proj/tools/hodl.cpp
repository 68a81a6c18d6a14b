#include <CLI11.hpp>

#include <iostream>

#include "hodl/cli.hpp"

using namespace hodl;

int main(int argc, char** argv) {
    CLI::App app{"Higher-order Datalog toolkit"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string file;
    std::string engine;
    std::string budget;

    auto add_engine = [&](CLI::App* cmd) {
        cmd->add_option("--engine", engine, "naive, seminaive or demand")
            ->check(CLI::IsMember({"naive", "seminaive", "demand"}));
    };
    auto add_budget = [&](CLI::App* cmd, const char* what) {
        cmd->add_option("--budget", budget, what)->check(CLI::NonNegativeNumber);
    };
    auto add_machine = [&](CLI::App* cmd) {
        cmd->add_option("--order", opts.order, "target order k")->check(CLI::PositiveNumber);
        cmd->add_option("--d", opts.d, "tuple width")->check(CLI::PositiveNumber);
    };
    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option_function<std::string>("--input", [&](const std::string& w) { opts.input = w; },
                                              "input string over {a, b}");
    };
    auto add_out = [&](CLI::App* cmd, const char* what) {
        cmd->add_option_function<std::string>("--out", [&](const std::string& p) { opts.out = p; }, what);
    };

    CLI::App* check = app.add_subcommand("check", "parse, type and validate a program");
    check->add_option("file", file)->required();

    CLI::App* run = app.add_subcommand("run", "decide an input string");
    run->add_option("file", file)->required();
    add_input(run);
    add_engine(run);
    add_budget(run, "demand step budget");
    run->add_option("--cap", opts.cap, "domain size cap");
    run->add_flag("--trace", opts.trace, "print demand table updates to stderr");
    run->add_flag("--extensionalize", opts.extensionalize, "store order-1 closures as relations");

    CLI::App* model = app.add_subcommand("model", "print the least model");
    model->add_option("file", file)->required();
    add_input(model);
    add_engine(model);
    model->add_option("--cap", opts.cap, "domain size cap");

    CLI::App* compile = app.add_subcommand("compile-tm", "emit the simulation program of a machine");
    compile->add_option("tmfile", file)->required();
    add_machine(compile);
    add_out(compile, "output file");

    CLI::App* tmrun = app.add_subcommand("tm-run", "run a machine directly");
    tmrun->add_option("tmfile", file)->required();
    add_input(tmrun);
    add_budget(tmrun, "machine step limit");

    CLI::App* cross = app.add_subcommand("crosscheck", "compare a compiled machine with direct runs");
    cross->add_option("tmfile", file)->required();
    add_machine(cross);
    cross->add_option("--max-len", opts.max_len, "longest input");
    add_engine(cross);
    add_budget(cross, "demand step budget per row");
    cross->add_option("--cap", opts.cap, "domain size cap");
    add_out(cross, "CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }
    if (!engine.empty()) opts.engine = parse_engine(engine);
    if (!budget.empty()) opts.budget = std::stoull(budget);

    if (*check) return cmd_check(file, std::cout, std::cerr);
    if (*run) return cmd_run(file, opts, std::cout, std::cerr);
    if (*model) return cmd_model(file, opts, std::cout, std::cerr);
    if (*compile) return cmd_compile_tm(file, opts, std::cout, std::cerr);
    if (*tmrun) return cmd_tm_run(file, opts, std::cout, std::cerr);
    return cmd_crosscheck(file, opts, std::cout, std::cerr);
}
