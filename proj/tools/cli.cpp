#include "cli.hpp"

#include "linx/direct.hpp"
#include "linx/error.hpp"
#include "linx/matrix_market.hpp"
#include "linx/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <thread>

namespace linx::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point since)
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count();
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

int fail(std::ostream& out, const char* kind, const std::string& message, std::size_t line = 0)
{
    Json j;
    j["error"] = kind;
    j["message"] = message;
    if (line > 0) j["line"] = line;
    emit(out, j);
    return Exit::usage;
}

// Runs a command body, turning library errors into a JSON error report.
template <class F>
int guarded(std::ostream& out, F&& body)
{
    try {
        return body();
    } catch (const ParseError& e) {
        return fail(out, "parse", e.what(), e.line());
    } catch (const ContractError& e) {
        return fail(out, "contract", e.what());
    } catch (const StructureError& e) {
        return fail(out, "structure", e.what());
    } catch (const Error& e) {
        return fail(out, "io", e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(out, "parse", e.what());
    }
}

void merge_tags(TagSet& into, const TagSet& from)
{
    for (const auto& name : from.names()) set_tag(into, name);
}

TagSet tags_from_json(const Json& j)
{
    if (j.is_string()) return parse_tags(j.get<std::string>());
    TagSet tags;
    for (const Json& name : j) set_tag(tags, name.get<std::string>());
    return tags;
}

std::vector<double> numbers(const Json& j, const char* what)
{
    if (!j.is_array()) throw ParseError(0, std::string(what) + " must be an array of numbers");
    std::vector<double> v;
    for (const Json& e : j) {
        if (!e.is_number()) throw ParseError(0, std::string(what) + " must be an array of numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

Matrix dense_from_json(const Json& j)
{
    if (!j.is_array() || j.empty()) throw ParseError(0, "matrix must be a non-empty array of rows");
    std::vector<double> flat;
    std::size_t cols = 0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto row = numbers(j[i], "matrix row");
        if (i == 0) cols = row.size();
        if (row.size() != cols || cols == 0) throw ParseError(0, "matrix rows must have equal, non-zero length");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return Matrix(j.size(), cols, std::move(flat));
}

TreeStructure output_structure(std::size_t rows, const TreeStructure* rhs)
{
    if (!rhs) return TreeStructure(rows);
    if (rhs->total_dim() != rows)
        throw StructureError("right-hand side has " + std::to_string(rhs->total_dim())
                             + " entries but the operator has " + std::to_string(rows) + " rows");
    return *rhs;
}

TreeStructure input_structure(std::size_t rows, std::size_t cols, const TreeStructure* rhs)
{
    return rows == cols ? output_structure(rows, rhs) : TreeStructure(cols);
}

OperatorPtr dense_operator(Matrix m, const TagSet& tags, const TreeStructure* rhs)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    return std::make_shared<MatrixOperator>(std::move(m), tags, input_structure(rows, cols, rhs),
                                            output_structure(rows, rhs));
}

std::string resolve(const std::string& path, const fs::path& base)
{
    const fs::path p(path);
    return p.is_absolute() || base.empty() ? path : (base / p).string();
}

Matrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols)
{
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    return m;
}

std::vector<double> random_vector(SplitMix64& rng, std::size_t n)
{
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

double residual_norm(const LinearOperator& a, const TreeVector& x, const TreeVector& b)
{
    return vec::norm(vec::sub(b.values(), a.apply(x.values())));
}

struct Problem {
    OperatorPtr op;
    TreeVector b;
    SolverPtr solver;
};

Problem load_problem(const ProblemSpec& spec)
{
    // Everything that can be validated without touching files comes first.
    const WellPosed mode = parse_well_posed(spec.mode);
    spec.options.validate();
    SolverPtr solver = make_solver(spec.solver, mode, spec.options);
    const TagSet tags = parse_tags(spec.tags);

    TreeVector b = read_tree_file(spec.rhs_path);
    OperatorPtr op = load_operator(spec.operator_path, tags, &b.structure());
    check_compatibility(*solver, *op);
    return {std::move(op), std::move(b), std::move(solver)};
}

} // namespace

OperatorPtr operator_from_json(const Json& j, const TagSet& extra, const TreeStructure* rhs)
{
    if (!j.is_object()) throw ParseError(0, "operator must be a JSON object");
    TagSet tags = extra;
    if (j.contains("tags")) merge_tags(tags, tags_from_json(j.at("tags")));

    if (j.contains("matrix")) return dense_operator(dense_from_json(j.at("matrix")), tags, rhs);
    if (j.contains("diagonal")) {
        auto d = numbers(j.at("diagonal"), "diagonal");
        TreeStructure structure = output_structure(d.size(), rhs);
        return std::make_shared<DiagonalOperator>(std::move(d), tags, std::move(structure));
    }
    if (j.contains("tridiagonal")) {
        const Json& t = j.at("tridiagonal");
        auto main = numbers(t.at("main"), "main");
        const std::size_t n = main.size();
        return std::make_shared<TridiagonalOperator>(numbers(t.at("lower"), "lower"), std::move(main),
                                                     numbers(t.at("upper"), "upper"), tags, output_structure(n, rhs));
    }
    throw ParseError(0, "operator needs one of \"matrix\", \"diagonal\" or \"tridiagonal\"");
}

OperatorPtr load_operator(const std::string& path, const TagSet& extra, const TreeStructure* rhs)
{
    if (fs::path(path).extension() == ".mtx") {
        MatrixMarket mm = read_matrix_market_file(path);
        TagSet tags = extra;
        if (mm.symmetric) tags.symmetric = true;
        return dense_operator(std::move(mm.matrix), tags, rhs);
    }
    return operator_from_json(read_json_file(path), extra, rhs);
}

int cmd_solve(const ProblemSpec& spec, std::ostream& out)
{
    return guarded(out, [&] {
        const Problem p = load_problem(spec);

        const auto start = Clock::now();
        const Solution sol = linear_solve(p.op, p.b, *p.solver);
        const std::int64_t wall = elapsed_ns(start);

        Json report;
        report["solution"] = sol.ok() ? tree_to_json(sol.value) : Json(nullptr);
        report["result"] = to_string(sol.result);
        report["residual_norm"] = sol.ok() ? Json(residual_norm(*p.op, sol.value, p.b)) : Json(nullptr);
        report["iterations"] = sol.diagnostics.iterations;
        report["solver"] = p.solver->name();
        if (const auto* a = dynamic_cast<const AutoLinearSolver*>(p.solver.get()))
            report["solver_selected"] = a->select(p.op->shape())->name();
        report["wall_time_ns"] = wall;
        emit(out, report);
        return sol.ok() ? Exit::ok : Exit::numerical;
    });
}

int cmd_gradcheck(const GradcheckSpec& spec, std::ostream& out)
{
    return guarded(out, [&]() -> int {
        if (spec.trials == 0) throw ContractError("trials must be positive");
        const Problem p = load_problem(spec.problem);
        const Matrix a = p.op->as_matrix();
        const std::size_t m = a.rows(), n = a.cols();
        const JvpCase formula = spec.force_case.value_or(jvp_case(*p.solver, *p.op));

        // A rank-deficient A only has a derivative along tangents that keep the
        // rank fixed; V = MA and V = AN do, since A + hV = (I + hM)A.
        const Svd s = svd(a);
        const double cutoff = default_svd_rtol(m, n) * (s.sigma.empty() ? 0.0 : s.sigma.front());
        const auto rank = static_cast<std::size_t>(
            std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x > cutoff; }));
        const bool deficient = rank < std::min(m, n);

        SplitMix64 rng(spec.seed);
        const TreeVector b_flat(flatten(p.b));
        double max_fd = 0.0, max_pairing = 0.0;
        for (std::size_t t = 0; t < spec.trials; ++t) {
            Matrix V = !deficient   ? random_matrix(rng, m, n)
                       : t % 2 == 0 ? random_matrix(rng, m, m) * a
                                    : a * random_matrix(rng, n, n);
            const TreeVector v(p.b.structure(), random_vector(rng, m));
            const TreeVector x_bar(p.op->in_structure(), random_vector(rng, n));
            const auto v_op = std::make_shared<MatrixOperator>(V, TagSet{}, p.op->in_structure(),
                                                               p.op->out_structure());

            const JvpResult jvp = jvp_solve_as(formula, *p.solver, p.op, p.b, {v_op, v});
            const VjpResult vjp = vjp_solve_as(formula, *p.solver, p.op, p.b, x_bar);
            if (!jvp.tangent || !vjp.cotangent) {
                Json report;
                report["result"] = to_string(jvp.tangent ? vjp.cotangent_result : jvp.tangent_result);
                report["trial"] = t;
                emit(out, report);
                return Exit::numerical;
            }
            const auto x_dot = jvp.tangent->values();

            const TreeVector fd = finite_difference_jvp(a, b_flat, V, TreeVector(flatten(v)), 1e-6);
            const double fd_scale = std::max({norm(fd), vec::norm(x_dot), 1e-300});
            max_fd = std::max(max_fd, vec::norm(vec::sub(x_dot, fd.values())) / fd_scale);

            const double lhs = vec::dot(x_bar.values(), x_dot);
            const double rhs = frobenius_dot(vjp.cotangent->V_bar, V) + dot(vjp.cotangent->b_bar, v);
            const double pair_scale
                = std::max({norm(x_bar) * vec::norm(x_dot),
                            frobenius_norm(vjp.cotangent->V_bar) * frobenius_norm(V)
                                + norm(vjp.cotangent->b_bar) * norm(v),
                            1e-300});
            max_pairing = std::max(max_pairing, std::abs(lhs - rhs) / pair_scale);
        }

        Json report;
        report["solver"] = p.solver->name();
        report["formula"] = to_string(formula);
        report["seed"] = spec.seed;
        report["trials"] = spec.trials;
        report["max_jvp_fd_error"] = max_fd;
        report["max_pairing_error"] = max_pairing;
        report["pass"] = max_fd <= 1e-5 && max_pairing <= 1e-9;
        emit(out, report);
        return Exit::ok;
    });
}

namespace {

struct BenchProblem {
    std::string name;
    OperatorPtr op;
    TreeVector b;
    WellPosed mode = WellPosed::yes;
    std::vector<std::string> solvers;
};

OperatorPtr generate(const std::string& kind, std::size_t n, SplitMix64& rng, const TagSet& extra)
{
    if (n == 0) throw ContractError("generated problems need n > 0");
    TagSet tags = extra;
    if (kind == "diagonal") {
        auto d = random_vector(rng, n);
        for (double& x : d) x += std::copysign(1.0, x);
        return std::make_shared<DiagonalOperator>(std::move(d), tags);
    }
    if (kind == "tridiagonal") {
        auto lower = random_vector(rng, n - 1), upper = random_vector(rng, n - 1);
        auto main = random_vector(rng, n);
        for (double& x : main) x += 4.0;
        return std::make_shared<TridiagonalOperator>(std::move(lower), std::move(main), std::move(upper), tags);
    }
    if (kind == "dense" || kind == "spd") {
        Matrix m = random_matrix(rng, n, n);
        if (kind == "spd") {
            m = m.transposed() * m;
            tags.symmetric = tags.positive_semidefinite = true;
        }
        for (std::size_t i = 0; i < n; ++i) m(i, i) += static_cast<double>(n);
        return std::make_shared<MatrixOperator>(std::move(m), tags);
    }
    throw ContractError("unknown generator '" + kind + "'");
}

BenchProblem bench_problem(const Json& j, std::size_t index, const fs::path& base)
{
    BenchProblem p;
    p.name = j.value("name", "problem" + std::to_string(index));
    p.mode = parse_well_posed(j.value("mode", std::string("true")));
    const TagSet tags = j.contains("tags") ? tags_from_json(j.at("tags")) : TagSet{};
    SplitMix64 rng(j.value("seed", std::uint64_t{0}));

    std::optional<TreeVector> rhs;
    if (j.contains("rhs")) {
        const Json& r = j.at("rhs");
        rhs = r.is_string() ? read_tree_file(resolve(r.get<std::string>(), base)) : tree_from_json(r);
    }

    if (j.contains("generate")) {
        p.op = generate(j.at("generate").get<std::string>(), j.at("n").get<std::size_t>(), rng, tags);
    } else if (j.contains("operator")) {
        const Json& o = j.at("operator");
        const TreeStructure* structure = rhs ? &rhs->structure() : nullptr;
        p.op = o.is_string() ? load_operator(resolve(o.get<std::string>(), base), tags, structure)
                             : operator_from_json(o, tags, structure);
    } else {
        throw ParseError(0, "problem '" + p.name + "' needs \"operator\" or \"generate\"");
    }

    p.b = rhs ? std::move(*rhs) : TreeVector(p.op->out_structure(), random_vector(rng, p.op->rows()));
    require_same_structure(p.b.structure(), p.op->out_structure(), "right-hand side");

    if (j.contains("solvers"))
        for (const Json& s : j.at("solvers")) p.solvers.push_back(s.get<std::string>());
    else
        p.solvers = solver_names();
    for (const auto& s : p.solvers) make_solver(s, p.mode);
    return p;
}

std::int64_t median(std::vector<std::int64_t> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : v[k - 1] + (v[k] - v[k - 1]) / 2;
}

Json bench_cell(const BenchProblem& p, const std::string& solver_name, std::size_t repeats)
{
    Json cell;
    cell["problem"] = p.name;
    cell["solver"] = solver_name;
    const SolverPtr solver = make_solver(solver_name, p.mode);
    try {
        check_compatibility(*solver, *p.op);
    } catch (const ContractError& e) {
        cell["status"] = "incompatible";
        cell["message"] = e.what();
        return cell;
    }

    std::vector<std::int64_t> samples;
    Solution sol;
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        const StatePtr state = solver->init(p.op);
        sol = solver->compute(state, p.b);
        samples.push_back(elapsed_ns(start));
    }
    cell["status"] = "ok";
    cell["result"] = to_string(sol.result);
    cell["median_wall_time_ns"] = median(samples);
    cell["samples"] = samples;
    cell["residual"] = sol.ok() ? Json(residual_norm(*p.op, sol.value, p.b)) : Json(nullptr);
    return cell;
}

} // namespace

int cmd_bench(const BenchSpec& spec, std::ostream& out)
{
    return guarded(out, [&] {
        if (spec.repeats == 0) throw ContractError("repeats must be positive");
        const Json suite = read_json_file(spec.suite_path);
        const Json& list = suite.is_object() && suite.contains("problems") ? suite.at("problems") : suite;
        if (!list.is_array()) throw ParseError(0, "suite must be an array of problems");

        const fs::path base = fs::path(spec.suite_path).parent_path();
        std::vector<BenchProblem> problems;
        for (std::size_t i = 0; i < list.size(); ++i) problems.push_back(bench_problem(list[i], i, base));

        std::vector<std::pair<const BenchProblem*, std::string>> cells;
        for (const auto& p : problems)
            for (const auto& s : p.solvers) cells.emplace_back(&p, s);

        std::vector<Json> results(cells.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next++) < cells.size();)
                results[i] = bench_cell(*cells[i].first, cells[i].second, spec.repeats);
        };
        const std::size_t jobs = std::clamp<std::size_t>(spec.jobs, 1, std::max<std::size_t>(cells.size(), 1));
        std::vector<std::jthread> pool;
        for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
        worker();
        pool.clear();

        emit(out, Json(results));
        return Exit::ok;
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Linear solves, benchmarks and gradient checks", "linx"};
    app.require_subcommand(1);

    const auto& names = solver_names();
    const std::vector<std::string> modes{"true", "false", "none"};
    std::optional<std::size_t> max_steps;

    auto problem_flags = [&](CLI::App* cmd, ProblemSpec& spec) {
        cmd->add_option("--operator", spec.operator_path, "Matrix Market (.mtx) or JSON operator file")
            ->required();
        cmd->add_option("--rhs", spec.rhs_path, "JSON tree right-hand side")->required();
        cmd->add_option("--tags", spec.tags, "Comma separated tags");
        cmd->add_option("--solver", spec.solver, "Solver name")->check(CLI::IsMember(names));
        cmd->add_option("--mode", spec.mode, "well_posed: true, false or none")->check(CLI::IsMember(modes));
        cmd->add_option("--rtol", spec.options.rtol, "Iterative relative tolerance");
        cmd->add_option("--atol", spec.options.atol, "Iterative absolute tolerance");
        cmd->add_option("--max-steps", max_steps, "Iterative step limit");
    };

    ProblemSpec solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one linear system");
    problem_flags(solve_cmd, solve);

    BenchSpec bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time every solver on a suite of problems");
    bench_cmd->add_option("--suite", bench.suite_path, "JSON suite file")->required();
    bench_cmd->add_option("--repeats", bench.repeats, "Samples per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);

    GradcheckSpec grad;
    std::string force_case;
    CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Check derivatives against finite differences");
    problem_flags(grad_cmd, grad.problem);
    grad_cmd->add_option("--seed", grad.seed, "PRNG seed");
    grad_cmd->add_option("--trials", grad.trials, "Random tangent/cotangent pairs")->check(CLI::PositiveNumber);
    grad_cmd->add_option("--force-case", force_case, "Derivative formula to use regardless of the solver")
        ->check(CLI::IsMember({"well_posed", "independent_rows", "independent_columns", "general"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    if (*solve_cmd) {
        solve.options.max_steps = max_steps;
        return cmd_solve(solve, out);
    }
    if (*bench_cmd) return cmd_bench(bench, out);
    grad.problem.options.max_steps = max_steps;
    if (!force_case.empty()) grad.force_case = parse_jvp_case(force_case);
    return cmd_gradcheck(grad, out);
}

} // namespace linx::cli
