#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cdare::cli {

enum ExitCode : int {
    kConverged = 0,
    kNotConverged = 2,   // max-iters or stagnated
    kNumericalFailure = 3,
    kInputError = 4,
};

struct SolveOptions {
    std::filesystem::path problem;
    std::string method = "afpi";  // fpi | fpi-hat | afpi
    int r = 2;
    double tol = 1e-15;
    int max_iters = 100;
    std::string x0 = "auto";      // "auto" or a solution file
    std::filesystem::path out = "out";
    std::string command;          // echoed into the manifest
};

struct TransformOptions {
    std::filesystem::path problem;
    std::filesystem::path out;
};

struct GenerateOptions {
    std::string family = "example1";  // example1 | example2 | random
    long n = 4;
    long m = 1;
    std::uint64_t seed = 0;
    double a = 0.6;
    double b = 1.0;
    double r0 = 1.0;
    double h = 1.0;
    std::string regime = "pd";
    std::filesystem::path out;
};

struct BenchOptions {
    std::filesystem::path suite;
    std::vector<std::string> methods{"fpi", "afpi"};
    std::vector<int> rs{2};
    std::filesystem::path out = "bench";
    unsigned workers = 0;  // 0 = available parallelism
    double tol = 1e-15;
    int max_iters = 100;
    std::string command;
};

// Each writes its outputs and returns the process exit code; diagnostics go to stderr.
int run_solve(const SolveOptions& opt);
int run_transform(const TransformOptions& opt);
int run_generate(const GenerateOptions& opt);
int run_bench(const BenchOptions& opt);

} // namespace cdare::cli
