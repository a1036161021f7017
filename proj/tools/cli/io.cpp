#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cdare::io {

namespace {

using nlohmann::json;

std::string complex_entry(Complex z) {
    return "[" + format_double(z.real()) + ", " + format_double(z.imag()) + "]";
}

void emit_matrix(std::ostringstream& os, const char* key, const ComplexMatrix& m, bool last) {
    os << "  \"" << key << "\": [";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << (i == 0 ? "\n    [" : ",\n    [");
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                os << ", ";
            }
            os << complex_entry(m(i, j));
        }
        os << "]";
    }
    os << (m.rows() > 0 ? "\n  ]" : "]") << (last ? "\n" : ",\n");
}

void emit_header(std::ostringstream& os, const char* schema) {
    os << "{\n  \"schema_version\": \"" << schema << "\",\n";
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

void expect_schema(const json& doc, const char* schema) {
    if (!doc.is_object() || !doc.contains("schema_version") || !doc["schema_version"].is_string()) {
        throw FormatError("missing schema_version");
    }
    const std::string got = doc["schema_version"].get<std::string>();
    if (got != schema) {
        throw FormatError("schema_version is \"" + got + "\", expected \"" + schema + "\"");
    }
}

Eigen::Index count(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 0) {
        throw FormatError(std::string("field \"") + key + "\" must be a nonnegative integer");
    }
    return static_cast<Eigen::Index>(doc[key].get<long long>());
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw FormatError(where + ": expected a number");
    }
    return v.get<double>();
}

ComplexMatrix matrix(const json& doc, const char* key, Eigen::Index rows, Eigen::Index cols) {
    const std::string name(key);
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw FormatError("field \"" + name + "\" must be an array of rows");
    }
    const json& rows_json = doc[key];
    if (static_cast<Eigen::Index>(rows_json.size()) != rows) {
        throw FormatError("\"" + name + "\" has " + std::to_string(rows_json.size()) + " rows, expected " +
                          std::to_string(rows));
    }
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = rows_json[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw FormatError("\"" + name + "\" row " + std::to_string(i) + " must have " + std::to_string(cols) +
                              " entries");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& z = row[static_cast<std::size_t>(j)];
            const std::string where = name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            if (!z.is_array() || z.size() != 2) {
                throw FormatError(where + ": complex entries are [re, im] pairs");
            }
            m(i, j) = Complex(number(z[0], where), number(z[1], where));
        }
    }
    if (!all_finite(m)) {
        throw FormatError("\"" + name + "\" has non-finite entries");
    }
    return m;
}

HermitianMatrix hermitian(const json& doc, const char* key, Eigen::Index n) {
    try {
        return HermitianMatrix(matrix(doc, key, n, n));
    } catch (const NumericalError& e) {
        throw FormatError(std::string("\"") + key + "\": " + e.what());
    }
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string problem_to_json(const CdareProblem& p) {
    std::ostringstream os;
    emit_header(os, kProblemSchema);
    os << "  \"n\": " << p.n() << ",\n  \"m\": " << p.m() << ",\n";
    emit_matrix(os, "A", p.a(), false);
    emit_matrix(os, "B", p.b(), false);
    emit_matrix(os, "R", p.r().matrix(), false);
    emit_matrix(os, "H", p.h().matrix(), true);
    os << "}\n";
    return os.str();
}

std::string dare_to_json(const DareProblem& d) {
    std::ostringstream os;
    emit_header(os, kDareSchema);
    os << "  \"n\": " << d.n() << ",\n  \"m\": " << d.bhat.cols() << ",\n";
    emit_matrix(os, "Ahat", d.ahat, false);
    emit_matrix(os, "Bhat", d.bhat, false);
    emit_matrix(os, "Rhat", d.rhat.matrix(), false);
    emit_matrix(os, "Ghat", d.ghat.matrix(), false);
    emit_matrix(os, "Hhat", d.hhat.matrix(), true);
    os << "}\n";
    return os.str();
}

std::string solution_to_json(const HermitianMatrix& x) {
    std::ostringstream os;
    emit_header(os, kSolutionSchema);
    os << "  \"n\": " << x.order() << ",\n";
    emit_matrix(os, "X", x.matrix(), true);
    os << "}\n";
    return os.str();
}

CdareProblem problem_from_json(const std::string& text) {
    const json doc = parse(text);
    expect_schema(doc, kProblemSchema);
    const Eigen::Index n = count(doc, "n");
    const Eigen::Index m = count(doc, "m");
    if (n < 1) {
        throw FormatError("n must be at least 1");
    }
    ComplexMatrix a = matrix(doc, "A", n, n);
    ComplexMatrix b = matrix(doc, "B", n, m);
    HermitianMatrix r = hermitian(doc, "R", m);
    HermitianMatrix h = hermitian(doc, "H", n);
    return CdareProblem(std::move(a), std::move(b), std::move(r), std::move(h));
}

DareProblem dare_from_json(const std::string& text) {
    const json doc = parse(text);
    expect_schema(doc, kDareSchema);
    const Eigen::Index n = count(doc, "n");
    const Eigen::Index m = count(doc, "m");
    DareProblem d;
    d.ahat = matrix(doc, "Ahat", n, n);
    d.bhat = matrix(doc, "Bhat", n, m);
    d.rhat = hermitian(doc, "Rhat", m);
    d.ghat = hermitian(doc, "Ghat", n);
    d.hhat = hermitian(doc, "Hhat", n);
    return d;
}

HermitianMatrix solution_from_json(const std::string& text) {
    const json doc = parse(text);
    expect_schema(doc, kSolutionSchema);
    return hermitian(doc, "X", count(doc, "n"));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
}

CdareProblem load_problem(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return problem_from_json(text);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

HermitianMatrix load_solution(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return solution_from_json(text);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string iterations_csv(const SolveReport& report) {
    std::string out = std::string(kIterationsHeader) + "\n";
    for (const IterateRecord& r : report.iterates) {
        out += std::to_string(r.k) + "," + format_double(r.nres) + "," + format_double(r.rho_that) + "," +
               format_double(r.min_eig_step_diff) + "," + format_double(r.elapsed_s) + "\n";
    }
    return out;
}

std::filesystem::path reference_path_for(const std::filesystem::path& problem_path) {
    std::filesystem::path out = problem_path;
    out.replace_extension();
    out += ".reference.json";
    return out;
}

std::vector<std::filesystem::path> load_suite(const std::filesystem::path& manifest) {
    const json doc = parse(read_file(manifest));
    if (!doc.is_object() || !doc.contains("problems") || !doc["problems"].is_array()) {
        throw FormatError(manifest.string() + ": suite manifest needs a \"problems\" array");
    }
    std::vector<std::filesystem::path> out;
    for (const json& item : doc["problems"]) {
        if (!item.is_string()) {
            throw FormatError(manifest.string() + ": problem entries must be path strings");
        }
        std::filesystem::path p = item.get<std::string>();
        out.push_back(p.is_absolute() ? p : manifest.parent_path() / p);
    }
    return out;
}

} // namespace cdare::io
