#include "app.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace mdg;

namespace {

std::string slurp(const fs::path& p, bool skip_first_line = false) {
    std::ifstream in(p);
    std::string line, out;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && skip_first_line) {
            first = false;
            continue;
        }
        first = false;
        out += line + '\n';
    }
    return out;
}

fs::path scratch(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / ("mdgice_cli_test_" + leaf);
    fs::remove_all(p);
    return p;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mdgice");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(Cli, RunDirectoryContents) {
    const fs::path dir = scratch("lemma");
    const ProblemSpec spec = builtin("lemma2_burgers");
    const auto rep = cli::run_to_directory(spec, dir);
    for (const char* f : {"config.txt", "mesh_initial.txt", "mesh_final.txt", "profiles.csv", "history.csv",
                          "summary.json", "run.log"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;

    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j["problem"], "lemma2_burgers");
    EXPECT_EQ(j["converged"], true);
    EXPECT_EQ(j["dofs"].get<long>(), rep.dofs);
    EXPECT_EQ(j["iterations"].get<int>(), rep.outcome.iterations);
    EXPECT_LT(j["residual"]["total"].get<double>(), 1e-10);

    std::ifstream mesh(dir / "mesh_final.txt");
    const SlabMesh m = SlabMesh::read(mesh);
    EXPECT_NEAR(m.node(m.top_ids()[2]).x, 0.2, 1e-10);

    const std::string profiles = slurp(dir / "profiles.csv");
    EXPECT_EQ(profiles.rfind("element,point,x,t,", 0), 0u);
    std::istringstream hist(slurp(dir / "history.csv"));
    std::string header;
    std::getline(hist, header);
    EXPECT_EQ(header.rfind("iter,norm_dg,norm_ice,lambda", 0), 0u);
}

TEST(Cli, DofCountMatchesLayout) {
    ProblemSpec spec = builtin("sod");
    spec.lm.max_iter = 0;
    for (int p = 1; p <= 3; ++p) {
        spec.degree = p;
        const RunOutcome run = run_problem(spec);
        EXPECT_EQ(cli::count_dofs(run), (p + 1) * (p + 1) * 3 * 8 + 7);
    }
    spec.basis = BasisFamily::P;
    spec.degree = 2;
    EXPECT_EQ(cli::count_dofs(run_problem(spec)), 6 * 3 * 8 + 7);
}

TEST(Cli, ErrorsForEulerAndScalar) {
    ProblemSpec euler = builtin("sod");
    euler.lm.max_iter = 0;
    const auto e = cli::compute_errors(euler, run_problem(euler));
    ASSERT_EQ(e.size(), 4u);
    EXPECT_EQ(e[0].field, "density");
    EXPECT_GT(e[0].l2, 0.0);
    const ProblemSpec scalar = builtin("lemma1_advection");
    const auto s = cli::compute_errors(scalar, run_problem(scalar));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_LT(s[0].l2, 1e-10);
}

TEST(Cli, SlopesFromRows) {
    std::vector<cli::StudyRow> rows(3);
    rows[0].log_inv_sqrt_dofs = -1.0;
    rows[0].log_error = -2.0;
    rows[1].log_inv_sqrt_dofs = -1.2;
    rows[1].log_error = -4.0;
    rows[2].log_inv_sqrt_dofs = -1.3;
    rows[2].log_error = -5.0;
    cli::fill_slopes(rows);
    EXPECT_FALSE(rows[0].slope.has_value());
    EXPECT_NEAR(*rows[1].slope, 10.0, 1e-12);
    EXPECT_NEAR(*rows[2].slope, 10.0, 1e-12);
}

TEST(Cli, RepeatedRunsWriteIdenticalFiles) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    ProblemSpec spec = builtin("sod");
    spec.lm.max_iter = 20;
    cli::run_to_directory(spec, a);
    cli::run_to_directory(spec, b);
    for (const char* f : {"config.txt", "mesh_initial.txt", "mesh_final.txt", "profiles.csv", "history.csv",
                          "summary.json"})
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_EQ(slurp(a / "run.log", true), slurp(b / "run.log", true));
}

TEST(Cli, ResolveSpecAppliesOverrides) {
    cli::Overrides o;
    o.degree = 3;
    o.basis = BasisFamily::P;
    o.init = InitMode::exact;
    o.max_iter = 7;
    o.no_mesh_management = true;
    const ProblemSpec s = cli::resolve_spec("lax", "", o);
    EXPECT_EQ(s.degree, 3);
    EXPECT_EQ(s.basis, BasisFamily::P);
    EXPECT_EQ(s.init, InitMode::exact);
    EXPECT_EQ(s.lm.max_iter, 7);
    EXPECT_FALSE(s.mesh_management);
}

TEST(Cli, ConfigFileReplacesProblem) {
    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    ProblemSpec spec = builtin("lemma1_advection");
    spec.name = "custom";
    {
        std::ofstream f(dir / "p.cfg");
        write_config(f, spec);
    }
    const ProblemSpec s = cli::resolve_spec("sod", (dir / "p.cfg").string(), {});
    EXPECT_EQ(s.name, "custom");
    EXPECT_EQ(s.system.kind(), SystemKind::advection);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("exit");
    EXPECT_EQ(run_cli({"run", "--problem", "lemma2_burgers", "--p", "1", "--out", (dir / "ok").string()}),
              cli::exit_converged);
    EXPECT_EQ(run_cli({"run", "--problem", "no_such_problem", "--out", (dir / "bad").string()}), cli::exit_usage);
    EXPECT_EQ(run_cli({"run", "--problem", "sod", "--p", "7"}), cli::exit_usage);
    EXPECT_EQ(run_cli({"run", "--problem", "sod", "--max-iter", "1", "--out", (dir / "short").string()}),
              cli::exit_nonconverged);
    EXPECT_EQ(run_cli({"list"}), cli::exit_converged);
    EXPECT_EQ(run_cli({}), cli::exit_usage);
}

TEST(Cli, StudyWritesTable) {
    const fs::path dir = scratch("study");
    ProblemSpec spec = builtin("lemma2_burgers");
    const auto rows = cli::run_study(spec, {1, 2}, dir);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(fs::exists(dir / "study.csv"));
    EXPECT_TRUE(fs::exists(dir / "p1" / "summary.json"));
    EXPECT_TRUE(fs::exists(dir / "p2" / "summary.json"));
    EXPECT_NEAR(rows[0].log_inv_sqrt_dofs, std::log10(1.0 / std::sqrt(static_cast<double>(rows[0].dofs))), 1e-12);
    EXPECT_TRUE(rows[1].slope.has_value());
}

TEST(Cli, DefaultDirectoryHonoursEnvironment) {
    ::setenv(cli::output_root_env, "/tmp/mdgice_root", 1);
    EXPECT_EQ(cli::default_directory("sod_p1"), fs::path("/tmp/mdgice_root/sod_p1"));
    ::unsetenv(cli::output_root_env);
    EXPECT_EQ(cli::default_directory("x"), fs::path("runs/x"));
}
