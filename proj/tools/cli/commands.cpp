#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "cdare/cdare.hpp"
#include "io.hpp"

namespace cdare::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

int input_error(const std::string& what) {
    std::cerr << "cdare: error: " << what << "\n";
    return kInputError;
}

int exit_code_for(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return kConverged;
    case SolveStatus::max_iters:
    case SolveStatus::stagnated: return kNotConverged;
    default: return kNumericalFailure;
    }
}

ordered_json json_number(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

struct MethodRun {
    std::string method;
    int r = 0;  // 0 when the method has no order
};

// Solves with an already loaded problem; input-type failures propagate as exceptions.
SolveReport solve_problem(const CdareProblem& p, const MethodRun& run, const HermitianMatrix& x0,
                          const SolverConfig& cfg) {
    if (run.method == "fpi") {
        return fpi_solve(p, x0, cfg);
    }
    if (run.method == "fpi-hat") {
        return fpi_hat_solve(p, x0, cfg);
    }
    SolverConfig c = cfg;
    c.r = run.r;
    const DareProblem d = transform(p);
    return afpi_solve(d, x0, c, &p);
}

void write_manifest(const fs::path& dir, const ordered_json& manifest) {
    io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string transform_failure(const AssumptionError& e) {
    return std::string("transform precondition det(R_H) ≠ 0 violated: ") + e.what();
}

} // namespace

int run_solve(const SolveOptions& opt) {
    ordered_json manifest;
    manifest["command"] = opt.command;
    manifest["config"] = {{"method", opt.method},
                          {"r", opt.method == "afpi" ? ordered_json(opt.r) : ordered_json(nullptr)},
                          {"tol", opt.tol},
                          {"max_iters", opt.max_iters},
                          {"x0", opt.x0},
                          {"seed", nullptr}};
    const auto finish = [&](const std::string& status, int code) {
        manifest["status"] = status;
        manifest["exit_code"] = code;
        try {
            write_manifest(opt.out, manifest);
        } catch (const std::exception& e) {
            std::cerr << "cdare: error: " << e.what() << "\n";
        }
        return code;
    };
    const auto fail_input = [&](const std::string& what) {
        manifest["message"] = what;
        return finish("input-error", input_error(what));
    };

    if (opt.method != "fpi" && opt.method != "fpi-hat" && opt.method != "afpi") {
        return fail_input("unknown method \"" + opt.method + "\" (use fpi, fpi-hat or afpi)");
    }
    SolverConfig cfg;
    cfg.nres_tol = opt.tol;
    cfg.max_iters = opt.max_iters;
    cfg.r = opt.method == "afpi" ? opt.r : 2;

    SolveReport report;
    try {
        cfg.validate();
        const CdareProblem p = io::load_problem(opt.problem);
        spdlog::info("loaded {} (n = {}, m = {})", opt.problem.string(), p.n(), p.m());
        HermitianMatrix x0;
        if (opt.x0 == "auto") {
            x0 = make_initial_auto(p);
        } else {
            x0 = io::load_solution(opt.x0);
            if (x0.order() != p.n()) {
                return fail_input("initial iterate has order " + std::to_string(x0.order()) +
                                  ", problem has n = " + std::to_string(p.n()));
            }
        }
        report = solve_problem(p, {opt.method, opt.r}, x0, cfg);
    } catch (const AssumptionError& e) {
        return fail_input(transform_failure(e));
    } catch (const StabilityError& e) {
        return fail_input(std::string(e.what()) + " (or pass --x0 <file>)");
    } catch (const io::FormatError& e) {
        return fail_input(e.what());
    } catch (const ParameterError& e) {
        return fail_input(e.what());
    } catch (const DimensionError& e) {
        return fail_input(e.what());
    } catch (const TransformError& e) {
        return fail_input(e.what());
    } catch (const DomainError& e) {
        return fail_input(e.what());
    } catch (const Error& e) {
        manifest["message"] = e.what();
        std::cerr << "cdare: numerical failure: " << e.what() << "\n";
        return finish("numerical-failure", kNumericalFailure);
    }

    for (const IterateRecord& r : report.iterates) {
        spdlog::debug("k = {:3d}  nres = {:.3e}  rho = {:.6f}", r.k, r.nres, r.rho_that);
    }
    const fs::path solution_path = opt.out / "solution.json";
    io::write_file(solution_path, io::solution_to_json(report.solution));
    io::write_file(opt.out / "iterations.csv", io::iterations_csv(report));

    const int code = exit_code_for(report.status);
    manifest["iterations"] = report.iterations();
    manifest["final_nres"] = json_number(report.final_nres());
    manifest["wall_time_s"] = report.wall_time.count();
    manifest["monotone"] = report.monotone;
    manifest["solution"] = solution_path.string();
    if (!report.message.empty()) {
        manifest["message"] = report.message;
    }
    if (report.failure_k >= 0) {
        manifest["failure_k"] = report.failure_k;
    }
    if (report.failure_l >= 0) {
        manifest["failure_l"] = report.failure_l;
    }
    if (code != kConverged) {
        std::cerr << "cdare: " << to_string(report.status) << " after " << report.iterations()
                  << " iterations: " << report.message << "\n";
    }
    spdlog::info("{}: {} iterations, NRes {:.3e}", to_string(report.status), report.iterations(),
                 report.final_nres());
    return finish(std::string(to_string(report.status)), code);
}

int run_transform(const TransformOptions& opt) {
    try {
        const CdareProblem p = io::load_problem(opt.problem);
        io::write_file(opt.out, io::dare_to_json(transform(p)));
    } catch (const AssumptionError& e) {
        return input_error(transform_failure(e));
    } catch (const std::exception& e) {
        return input_error(e.what());
    }
    return kConverged;
}

int run_generate(const GenerateOptions& opt) {
    try {
        if (opt.n < 1) {
            throw ParameterError("--n must be at least 1");
        }
        if (opt.family == "random") {
            if (opt.m < 1) {
                throw ParameterError("--m must be at least 1");
            }
            Regime regime = Regime::pd;
            if (opt.regime == "indefinite") {
                regime = Regime::indefinite;
            } else if (opt.regime != "pd") {
                throw ParameterError("unknown regime \"" + opt.regime + "\" (use pd or indefinite)");
            }
            io::write_file(opt.out, io::problem_to_json(random_problem(opt.n, opt.m, opt.seed, regime)));
            return kConverged;
        }
        std::optional<GeneratedProblem> gp;
        if (opt.family == "example1") {
            gp = make_example1(opt.n, ScalarFamilyParams{opt.a, opt.b, opt.r0, opt.h}, opt.seed);
        } else if (opt.family == "example2") {
            gp = make_example2(opt.n, opt.a, opt.b, opt.r0, opt.seed);
        } else {
            throw ParameterError("unknown family \"" + opt.family + "\" (use example1, example2 or random)");
        }
        io::write_file(opt.out, io::problem_to_json(gp->problem));
        io::write_file(io::reference_path_for(opt.out), io::solution_to_json(gp->reference));
    } catch (const std::exception& e) {
        return input_error(e.what());
    }
    return kConverged;
}

namespace {

struct BenchRow {
    std::string problem;
    std::string method;
    int r = 0;
    IterateRecord rec;
    bool has_rec = false;
    std::string status;
};

std::vector<BenchRow> bench_one(const fs::path& path, const std::vector<MethodRun>& runs, const SolverConfig& cfg) {
    std::vector<BenchRow> rows;
    const std::string name = path.string();
    const auto failed = [&](const MethodRun& run, const std::string& status) {
        rows.push_back({name, run.method, run.r, {}, false, status});
    };
    std::optional<CdareProblem> p;
    std::optional<HermitianMatrix> x0;
    try {
        p = io::load_problem(path);
        x0 = make_initial_auto(*p);
    } catch (const std::exception& e) {
        spdlog::error("{}: {}", name, e.what());
        for (const MethodRun& run : runs) {
            failed(run, "input-error");
        }
        return rows;
    }
    for (const MethodRun& run : runs) {
        try {
            const SolveReport rep = solve_problem(*p, run, *x0, cfg);
            const std::string status(to_string(rep.status));
            for (const IterateRecord& rec : rep.iterates) {
                rows.push_back({name, run.method, run.r, rec, true, status});
            }
            if (rep.iterates.empty()) {
                failed(run, status);
            }
            spdlog::info("{} {} r={}: {} in {} iterations", name, run.method, run.r, status, rep.iterations());
        } catch (const std::exception& e) {
            spdlog::error("{} {} r={}: {}", name, run.method, run.r, e.what());
            failed(run, "input-error");
        }
    }
    return rows;
}

} // namespace

int run_bench(const BenchOptions& opt) {
    std::vector<fs::path> problems;
    std::vector<MethodRun> runs;
    SolverConfig cfg;
    try {
        problems = io::load_suite(opt.suite);
        if (problems.empty()) {
            throw ParameterError("suite " + opt.suite.string() + " lists no problems");
        }
        for (const std::string& m : opt.methods) {
            if (m == "afpi") {
                if (opt.rs.empty()) {
                    throw ParameterError("afpi needs at least one --rs value");
                }
                for (int r : opt.rs) {
                    if (r < 2) {
                        throw ParameterError("AFPI order r must be at least 2");
                    }
                    runs.push_back({m, r});
                }
            } else if (m == "fpi" || m == "fpi-hat") {
                runs.push_back({m, 0});
            } else {
                throw ParameterError("unknown method \"" + m + "\"");
            }
        }
        if (runs.empty()) {
            throw ParameterError("no methods selected");
        }
        cfg.nres_tol = opt.tol;
        cfg.max_iters = opt.max_iters;
        cfg.validate();
    } catch (const std::exception& e) {
        return input_error(e.what());
    }

    unsigned workers = opt.workers != 0 ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(problems.size()));
    std::vector<std::vector<BenchRow>> results(problems.size());
    std::atomic<std::size_t> next{0};
    const auto start = std::chrono::steady_clock::now();
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < problems.size(); i = next++) {
                    results[i] = bench_one(problems[i], runs, cfg);
                }
            });
        }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string csv = std::string(io::kBenchHeader) + "\n";
    std::size_t failures = 0;
    for (const auto& group : results) {
        for (const BenchRow& row : group) {
            csv += row.problem + "," + row.method + "," + (row.r > 0 ? std::to_string(row.r) : "") + ",";
            if (row.has_rec) {
                csv += std::to_string(row.rec.k) + "," + io::format_double(row.rec.nres) + "," +
                       io::format_double(row.rec.rho_that) + "," + io::format_double(row.rec.elapsed_s);
            } else {
                csv += ",,,";
            }
            csv += "," + row.status + "\n";
            failures += row.status == "input-error" ? 1 : 0;
        }
    }
    try {
        io::write_file(opt.out / "bench.csv", csv);
        ordered_json manifest;
        manifest["command"] = opt.command;
        manifest["config"] = {{"suite", opt.suite.string()},
                              {"methods", opt.methods},
                              {"rs", opt.rs},
                              {"tol", opt.tol},
                              {"max_iters", opt.max_iters},
                              {"workers", workers},
                              {"seed", nullptr}};
        manifest["status"] = failures == 0 ? "completed" : "completed-with-failures";
        manifest["problems"] = problems.size();
        manifest["runs"] = problems.size() * runs.size();
        manifest["wall_time_s"] = wall;
        manifest["csv"] = (opt.out / "bench.csv").string();
        write_manifest(opt.out, manifest);
    } catch (const std::exception& e) {
        return input_error(e.what());
    }
    return kConverged;
}

} // namespace cdare::cli
