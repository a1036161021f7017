#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdare/cdare.hpp"

namespace cdare::io {

inline constexpr const char* kProblemSchema = "cdare-1";
inline constexpr const char* kDareSchema = "dare-1";
inline constexpr const char* kSolutionSchema = "cdare-solution-1";
inline constexpr const char* kIterationsHeader = "k,nres,rho_that,min_eig_step_diff,elapsed_s";
inline constexpr const char* kBenchHeader = "problem,method,r,k,nres,rho,elapsed,status";

// Malformed or inconsistent input file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal that round-trips a double (17 significant digits,
// -0 written as 0, non-finite values as nan/inf).
[[nodiscard]] std::string format_double(double v);

/// Canonical documents. Each matrix row goes on its own line, complex
/// entries as [re, im]; write -> read -> write reproduces the bytes.
[[nodiscard]] std::string problem_to_json(const CdareProblem& p);
[[nodiscard]] std::string dare_to_json(const DareProblem& d);
[[nodiscard]] std::string solution_to_json(const HermitianMatrix& x);

[[nodiscard]] CdareProblem problem_from_json(const std::string& text);
[[nodiscard]] DareProblem dare_from_json(const std::string& text);
[[nodiscard]] HermitianMatrix solution_from_json(const std::string& text);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

[[nodiscard]] CdareProblem load_problem(const std::filesystem::path& path);
[[nodiscard]] HermitianMatrix load_solution(const std::filesystem::path& path);

// Convergence table, one row per iterate, ordered by k.
[[nodiscard]] std::string iterations_csv(const SolveReport& report);

// Where generate puts the reference solution next to `problem_path`.
[[nodiscard]] std::filesystem::path reference_path_for(const std::filesystem::path& problem_path);

// Problem paths listed in a bench suite manifest, resolved against its directory.
[[nodiscard]] std::vector<std::filesystem::path> load_suite(const std::filesystem::path& manifest);

} // namespace cdare::io
