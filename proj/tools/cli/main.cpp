#include <cstdlib>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("cdare");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    const char* level = std::getenv("CDARE_LOG");
    const std::string name = level != nullptr ? level : "error";
    if (name == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (name == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
    }
}

std::string echo(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        out += (i > 0 ? " " : "") + std::string(argv[i]);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();
    using namespace cdare::cli;

    CLI::App app{"Maximal Hermitian solutions of conjugate discrete-time algebraic Riccati equations"};
    app.require_subcommand(1);

    SolveOptions solve;
    solve.command = echo(argc, argv);
    auto* s = app.add_subcommand("solve", "Solve a CDARE problem file");
    s->add_option("problem", solve.problem, "Problem file (cdare-1)")->required();
    s->add_option("--method", solve.method, "fpi | fpi-hat | afpi")
        ->check(CLI::IsMember({"fpi", "fpi-hat", "afpi"}))
        ->capture_default_str();
    s->add_option("--r", solve.r, "AFPI order")->capture_default_str();
    s->add_option("--tol", solve.tol, "Stop when NRes <= tol")->capture_default_str();
    s->add_option("--max-iters", solve.max_iters, "Iteration limit")->capture_default_str();
    s->add_option("--x0", solve.x0, "auto or a solution file")->capture_default_str();
    s->add_option("--out", solve.out, "Output directory")->capture_default_str();

    TransformOptions tr;
    auto* t = app.add_subcommand("transform", "Write the equivalent standard DARE (dare-1)");
    t->add_option("problem", tr.problem, "Problem file (cdare-1)")->required();
    t->add_option("--out", tr.out, "Output file")->required();

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Generate a test problem");
    g->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
    g->add_option("--family", gen.family, "example1 | example2 | random")
        ->check(CLI::IsMember({"example1", "example2", "random"}))
        ->capture_default_str();
    g->add_option("--n", gen.n, "Order n")->capture_default_str();
    g->add_option("--m", gen.m, "Input count m (random)")->capture_default_str();
    g->add_option("--seed", gen.seed, "Seed")->capture_default_str();
    g->add_option("--a", gen.a, "Scalar a")->capture_default_str();
    g->add_option("--b", gen.b, "Scalar b")->capture_default_str();
    g->add_option("--r0", gen.r0, "Scalar r0")->capture_default_str();
    g->add_option("--h", gen.h, "Scalar h (example1)")->capture_default_str();
    g->add_option("--regime", gen.regime, "pd | indefinite (random)")->capture_default_str();
    g->add_option("--out", gen.out, "Problem file to write")->required();

    BenchOptions bench;
    bench.command = solve.command;
    auto* b = app.add_subcommand("bench", "Run a method x r grid over a problem suite");
    b->add_option("--suite", bench.suite, "Suite manifest (JSON with a \"problems\" array)")->required();
    b->add_option("--methods", bench.methods, "Methods")->delimiter(',')->capture_default_str();
    b->add_option("--rs", bench.rs, "AFPI orders")->delimiter(',')->capture_default_str();
    b->add_option("--out", bench.out, "Output directory")->capture_default_str();
    b->add_option("--workers", bench.workers, "Worker threads (0 = available parallelism)")->capture_default_str();
    b->add_option("--tol", bench.tol, "Stop when NRes <= tol")->capture_default_str();
    b->add_option("--max-iters", bench.max_iters, "Iteration limit")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (*s) {
        return run_solve(solve);
    }
    if (*t) {
        return run_transform(tr);
    }
    if (*g) {
        return run_generate(gen);
    }
    return run_bench(bench);
}
