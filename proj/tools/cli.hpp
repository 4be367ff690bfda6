#pragma once

// The `linx` command line tool: solve, bench and gradcheck. Each command
// writes one JSON document to `out` and returns the process exit code.

#include "linx/autodiff.hpp"
#include "linx/autoselect.hpp"
#include "linx/json_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace linx::cli {

enum Exit { ok = 0, usage = 1, numerical = 2 };

struct ProblemSpec {
    std::string operator_path;
    std::string rhs_path;
    std::string tags;          // comma separated
    std::string solver = "auto";
    std::string mode = "true"; // true | false | none
    IterativeOptions options;
};

struct GradcheckSpec {
    ProblemSpec problem;
    std::uint64_t seed = 0;
    std::size_t trials = 10;
    std::optional<JvpCase> force_case;
};

struct BenchSpec {
    std::string suite_path;
    std::size_t repeats = 5;
    std::size_t jobs = 1;
};

/// Operator from a Matrix Market file (.mtx) or a JSON operator file:
///   {"matrix": [[1, 2], [3, 4]], "tags": ["symmetric"]}
///   {"diagonal": [1, 2, 3]}
///   {"tridiagonal": {"lower": [...], "main": [...], "upper": [...]}}
/// The output structure is taken from `rhs` and must match the row count; a
/// square operator also uses it as the input structure. Plain vectors when
/// rhs is null.
OperatorPtr load_operator(const std::string& path, const TagSet& extra, const TreeStructure* rhs = nullptr);
OperatorPtr operator_from_json(const Json& j, const TagSet& extra, const TreeStructure* rhs = nullptr);

int cmd_solve(const ProblemSpec& spec, std::ostream& out);
int cmd_bench(const BenchSpec& spec, std::ostream& out);
int cmd_gradcheck(const GradcheckSpec& spec, std::ostream& out);

/// Full command line entry point; usage errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace linx::cli
