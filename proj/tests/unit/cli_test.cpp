#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cdare/cdare.hpp"
#include "commands.hpp"
#include "io.hpp"
#include "oracles.hpp"

namespace cdare {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("cdare_cli_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path dir_;
};

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

TEST(FormatDouble, RoundTripsAndCanonicalizes) {
    EXPECT_EQ(io::format_double(0.18), "0.17999999999999999");
    EXPECT_EQ(io::format_double(1.0), "1");
    EXPECT_EQ(io::format_double(-0.0), "0");
    EXPECT_EQ(io::format_double(std::nan("")), "nan");
    Rng rng(60);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0));
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
}

TEST(ProblemFile, ByteIdenticalRoundTrip) {
    for (int seed = 0; seed < 10; ++seed) {
        const CdareProblem p = random_problem(1 + seed % 5, 1 + seed % 3, 6100 + seed, Regime::indefinite);
        const std::string first = io::problem_to_json(p);
        const CdareProblem back = io::problem_from_json(first);
        EXPECT_EQ(io::problem_to_json(back), first);
        EXPECT_EQ(back.a(), p.a());
        EXPECT_EQ(back.h().matrix(), p.h().matrix());
    }
}

TEST(ProblemFile, CompactInputParses) {
    const CdareProblem p = io::problem_from_json(
        R"({"schema_version":"cdare-1","n":1,"m":1,"A":[[[0.6,0]]],"B":[[[1,0]]],"R":[[[1,0]]],"H":[[[1,0]]]})");
    EXPECT_EQ(p.a()(0, 0), Complex(0.6, 0.0));
}

TEST(ProblemFile, RejectsMalformed) {
    const std::string good =
        R"({"schema_version":"cdare-1","n":1,"m":1,"A":[[[0.6,0]]],"B":[[[1,0]]],"R":[[[1,0]]],"H":[[[1,0]]]})";
    EXPECT_NO_THROW((void)io::problem_from_json(good));
    const auto with = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    EXPECT_THROW((void)io::problem_from_json("{"), io::FormatError);
    EXPECT_THROW((void)io::problem_from_json(with("cdare-1", "cdare-2")), io::FormatError);
    EXPECT_THROW((void)io::problem_from_json(with("\"n\":1", "\"n\":2")), io::FormatError);
    EXPECT_THROW((void)io::problem_from_json(with("[[[0.6,0]]]", "[[0.6]]")), io::FormatError);
    EXPECT_THROW((void)io::problem_from_json(with("\"H\":[[[1,0]]]", "\"H\":[[[1,0.5]]]")), io::FormatError);
    EXPECT_THROW((void)io::problem_from_json(with("\"m\":1", "\"m\":-1")), io::FormatError);
}

TEST(DareFile, RoundTrip) {
    const DareProblem d = transform(random_problem(3, 2, 62, Regime::pd));
    const std::string text = io::dare_to_json(d);
    EXPECT_EQ(io::dare_to_json(io::dare_from_json(text)), text);
}

TEST(IterationsCsv, HeaderAndOrder) {
    const CdareProblem p = oracle::scalar_problem();
    const SolveReport rep = fpi_solve(p, make_initial_auto(p));
    const auto rows = lines(io::iterations_csv(rep));
    ASSERT_EQ(rows.size(), rep.iterates.size() + 1);
    EXPECT_EQ(rows[0], "k,nres,rho_that,min_eig_step_diff,elapsed_s");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].substr(0, rows[i].find(',')), std::to_string(i - 1));
    }
    EXPECT_NE(rows[1].find(",nan,"), std::string::npos);
}

TEST(ReferencePath, Sidecar) {
    EXPECT_EQ(io::reference_path_for("a/b/p.json"), fs::path("a/b/p.reference.json"));
}

using CliCommands = TempDir;

TEST_F(CliCommands, GenerateIsDeterministic) {
    cli::GenerateOptions g;
    g.n = 4;
    g.seed = 7;
    g.out = dir_ / "one.json";
    ASSERT_EQ(cli::run_generate(g), 0);
    g.out = dir_ / "two.json";
    ASSERT_EQ(cli::run_generate(g), 0);
    EXPECT_EQ(io::read_file(dir_ / "one.json"), io::read_file(dir_ / "two.json"));
    EXPECT_EQ(io::read_file(dir_ / "one.reference.json"), io::read_file(dir_ / "two.reference.json"));
}

TEST_F(CliCommands, GenerateCriticalSidecar) {
    cli::GenerateOptions g;
    g.family = "example2";
    g.n = 1;
    g.a = 0.6;
    g.out = dir_ / "e2.json";
    ASSERT_EQ(cli::run_generate(g), 0);
    const HermitianMatrix x = io::load_solution(dir_ / "e2.reference.json");
    EXPECT_NEAR(x(0, 0).real(), -0.4, 1e-15);
}

TEST_F(CliCommands, GenerateRejectsWindow) {
    cli::GenerateOptions g;
    g.h = -1.0;
    g.out = dir_ / "bad.json";
    EXPECT_EQ(cli::run_generate(g), cli::kInputError);
    EXPECT_FALSE(fs::exists(g.out));
    g.h = 1.0;
    g.family = "nope";
    EXPECT_EQ(cli::run_generate(g), cli::kInputError);
}

TEST_F(CliCommands, SolveAfpiOnExample1) {
    cli::GenerateOptions g;
    g.n = 8;
    g.seed = 3;
    g.out = dir_ / "p.json";
    ASSERT_EQ(cli::run_generate(g), 0);

    cli::SolveOptions s;
    s.problem = g.out;
    s.method = "afpi";
    s.r = 2;
    s.out = dir_ / "run";
    ASSERT_EQ(cli::run_solve(s), 0);
    const auto rows = lines(io::read_file(s.out / "iterations.csv"));
    EXPECT_LE(rows.size() - 1, 10u);
    const auto manifest = nlohmann::json::parse(io::read_file(s.out / "manifest.json"));
    EXPECT_EQ(manifest["status"], "converged");
    EXPECT_LE(manifest["final_nres"].get<double>(), 1e-15);
    const HermitianMatrix x = io::load_solution(s.out / "solution.json");
    const HermitianMatrix ref = io::load_solution(dir_ / "p.reference.json");
    EXPECT_LE(oracle::rel_diff(x, ref), 1e-12);

    for (const char* method : {"fpi", "fpi-hat"}) {
        s.method = method;
        s.out = dir_ / method;
        EXPECT_EQ(cli::run_solve(s), 0) << method;
    }
}

TEST_F(CliCommands, SolveFromKnownSolutionTakesNoIterations) {
    cli::GenerateOptions g;
    g.n = 5;
    g.out = dir_ / "p.json";
    ASSERT_EQ(cli::run_generate(g), 0);
    cli::SolveOptions s;
    s.problem = g.out;
    s.x0 = (dir_ / "p.reference.json").string();
    s.out = dir_ / "run";
    ASSERT_EQ(cli::run_solve(s), 0);
    const auto manifest = nlohmann::json::parse(io::read_file(s.out / "manifest.json"));
    EXPECT_EQ(manifest["iterations"], 0);
}

TEST_F(CliCommands, SolveExitCodes) {
    cli::GenerateOptions g;
    g.family = "example2";
    g.n = 3;
    g.out = dir_ / "crit.json";
    ASSERT_EQ(cli::run_generate(g), 0);

    cli::SolveOptions s;
    s.problem = g.out;
    s.method = "fpi";
    s.max_iters = 3;
    s.out = dir_ / "capped";
    EXPECT_EQ(cli::run_solve(s), cli::kNotConverged);
    const auto manifest = nlohmann::json::parse(io::read_file(s.out / "manifest.json"));
    EXPECT_EQ(manifest["status"], "max-iters");

    // det(R_H) = 0: r = 1, b = 1, h = -1.
    io::write_file(dir_ / "rh.json", io::problem_to_json(oracle::scalar_problem(0.6, 1.0, 1.0, -1.0)));
    s.problem = dir_ / "rh.json";
    s.method = "afpi";
    s.x0 = (dir_ / "crit.reference.json").string();
    s.out = dir_ / "rh";
    io::write_file(dir_ / "x0.json", io::solution_to_json(oracle::hscalar(2.0)));
    s.x0 = (dir_ / "x0.json").string();
    EXPECT_EQ(cli::run_solve(s), cli::kInputError);
    EXPECT_TRUE(fs::exists(s.out / "manifest.json"));

    // a = 0, h = -1 leaves dom(R) after one step.
    io::write_file(dir_ / "dom.json", io::problem_to_json(oracle::scalar_problem(0.0, 1.0, 1.0, -1.0)));
    io::write_file(dir_ / "zero.json", io::solution_to_json(oracle::hscalar(0.0)));
    s.problem = dir_ / "dom.json";
    s.method = "fpi";
    s.x0 = (dir_ / "zero.json").string();
    s.out = dir_ / "dom";
    EXPECT_EQ(cli::run_solve(s), cli::kNumericalFailure);

    s.problem = dir_ / "absent.json";
    s.out = dir_ / "absent";
    EXPECT_EQ(cli::run_solve(s), cli::kInputError);

    s.problem = g.out;
    s.x0 = "auto";
    s.method = "afpi";
    s.r = 1;
    s.out = dir_ / "badr";
    EXPECT_EQ(cli::run_solve(s), cli::kInputError);
}

TEST_F(CliCommands, TransformWritesDare) {
    io::write_file(dir_ / "s.json", io::problem_to_json(oracle::scalar_problem()));
    cli::TransformOptions t{dir_ / "s.json", dir_ / "s.dare.json"};
    ASSERT_EQ(cli::run_transform(t), 0);
    const std::string text = io::read_file(t.out);
    const DareProblem d = io::dare_from_json(text);
    EXPECT_NEAR(d.ahat(0, 0).real(), 0.18, 1e-15);
    EXPECT_NEAR(d.ghat(0, 0).real(), 1.18, 1e-15);
    EXPECT_NEAR(d.hhat(0, 0).real(), 1.18, 1e-15);
    EXPECT_EQ(io::dare_to_json(d), text);

    const CdareProblem base = random_problem(3, 1, 63, Regime::pd);
    io::write_file(dir_ / "h0.json",
                   io::problem_to_json(CdareProblem(base.a(), base.b(), base.r(), HermitianMatrix::zero(3))));
    t = {dir_ / "h0.json", dir_ / "h0.dare.json"};
    ASSERT_EQ(cli::run_transform(t), 0);
    EXPECT_EQ(io::dare_from_json(io::read_file(t.out)).hhat.matrix().norm(), 0.0);

    io::write_file(dir_ / "rh.json", io::problem_to_json(oracle::scalar_problem(0.6, 1.0, 1.0, -1.0)));
    t = {dir_ / "rh.json", dir_ / "rh.dare.json"};
    EXPECT_EQ(cli::run_transform(t), cli::kInputError);
}

TEST_F(CliCommands, BenchGridAndOrdering) {
    std::vector<std::string> names;
    for (int seed = 0; seed < 3; ++seed) {
        cli::GenerateOptions g;
        g.n = 4;
        g.seed = static_cast<std::uint64_t>(seed);
        g.out = dir_ / ("p" + std::to_string(seed) + ".json");
        ASSERT_EQ(cli::run_generate(g), 0);
        names.push_back(g.out.filename().string());
    }
    io::write_file(dir_ / "suite.json", nlohmann::json({{"problems", names}}).dump());

    cli::BenchOptions b;
    b.suite = dir_ / "suite.json";
    b.methods = {"fpi", "afpi"};
    b.rs = {2, 5};
    b.workers = 3;
    b.out = dir_ / "bench";
    ASSERT_EQ(cli::run_bench(b), 0);
    const auto rows = lines(io::read_file(b.out / "bench.csv"));
    EXPECT_EQ(rows[0], "problem,method,r,k,nres,rho,elapsed,status");

    std::vector<std::string> groups;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::string key = rows[i].substr(0, rows[i].find(',', rows[i].find(',', rows[i].find(',') + 1) + 1));
        if (groups.empty() || groups.back() != key) {
            groups.push_back(key);
        }
        EXPECT_EQ(rows[i].substr(rows[i].rfind(',') + 1), "converged");
    }
    ASSERT_EQ(groups.size(), 9u);
    // Manifest order, then method order.
    EXPECT_NE(groups[0].find("p0.json,fpi,"), std::string::npos);
    EXPECT_NE(groups[1].find("p0.json,afpi,2"), std::string::npos);
    EXPECT_NE(groups[8].find("p2.json,afpi,5"), std::string::npos);

    // Same output with one worker.
    const std::string parallel = io::read_file(b.out / "bench.csv");
    b.workers = 1;
    b.out = dir_ / "serial";
    ASSERT_EQ(cli::run_bench(b), 0);
    const auto strip = [](const std::string& csv) {
        std::string out;
        for (const std::string& row : lines(csv)) {
            std::vector<std::string> f;
            std::stringstream ss(row);
            for (std::string cell; std::getline(ss, cell, ',');) {
                f.push_back(cell);
            }
            f[6].clear();  // elapsed
            for (const auto& cell : f) {
                out += cell + ",";
            }
            out += "\n";
        }
        return out;
    };
    EXPECT_EQ(strip(io::read_file(b.out / "bench.csv")), strip(parallel));
}

TEST_F(CliCommands, BenchRecordsFailuresAndRejectsEmpty) {
    io::write_file(dir_ / "suite.json", R"({"problems": ["missing.json"]})");
    cli::BenchOptions b;
    b.suite = dir_ / "suite.json";
    b.out = dir_ / "bench";
    ASSERT_EQ(cli::run_bench(b), 0);
    const auto rows = lines(io::read_file(b.out / "bench.csv"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NE(rows[1].find("input-error"), std::string::npos);

    io::write_file(dir_ / "empty.json", R"({"problems": []})");
    b.suite = dir_ / "empty.json";
    EXPECT_EQ(cli::run_bench(b), cli::kInputError);
    b.suite = dir_ / "suite.json";
    b.methods = {"newton"};
    EXPECT_EQ(cli::run_bench(b), cli::kInputError);
}

} // namespace
} // namespace cdare
