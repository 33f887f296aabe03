#include "mdgice/problems.hpp"
#include "mdgice/riemann_oracle.hpp"
#include "mdgice/slab_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace mdg;

TEST(Problems, AllBuiltinsValidate) {
    const auto names = builtin_names();
    EXPECT_EQ(names.size(), 6u);
    for (const auto& n : names) {
        const ProblemSpec s = builtin(n);
        EXPECT_NO_THROW(s.validate()) << n;
        EXPECT_EQ(s.name, n);
    }
}

TEST(Problems, UnknownBuiltinListsAlternatives) {
    try {
        builtin("shu_osher");
        FAIL() << "expected an exception";
    } catch (const UnknownProblemError& e) {
        EXPECT_NE(std::string(e.what()).find("sod"), std::string::npos);
    }
    EXPECT_THROW(load_problem("/nonexistent/problem.cfg"), UnknownProblemError);
}

TEST(Problems, MeshShapes) {
    EXPECT_EQ(build_mesh(builtin("sod")).num_elements(), 8);
    EXPECT_EQ(build_mesh(builtin("lax")).num_elements(), 8);
    EXPECT_EQ(build_mesh(builtin("receding123")).num_elements(), 16);
    EXPECT_EQ(build_mesh(builtin("noh")).num_elements(), 4);
    EXPECT_EQ(build_mesh(builtin("lemma1_advection")).num_elements(), 4);
}

TEST(Problems, ConfigRoundTrip) {
    ProblemSpec s = builtin("lax");
    s.degree = 3;
    s.basis = BasisFamily::P;
    s.init = InitMode::exact;
    s.lm.geometry_floor = 0.25;
    s.lm.tol_step = 3e-11;
    s.mesh_management = false;
    std::stringstream ss;
    write_config(ss, s);
    const ProblemSpec r = read_config(ss);
    EXPECT_EQ(r.name, s.name);
    EXPECT_EQ(r.system.kind(), SystemKind::euler);
    EXPECT_DOUBLE_EQ(r.system.gamma(), 1.4);
    EXPECT_EQ(r.left, s.left);
    EXPECT_EQ(r.right, s.right);
    EXPECT_EQ(r.degree, 3);
    EXPECT_EQ(r.basis, BasisFamily::P);
    EXPECT_EQ(r.init, InitMode::exact);
    EXPECT_EQ(r.elements, s.elements);
    EXPECT_EQ(r.fan, s.fan);
    EXPECT_EQ(r.left_elements, s.left_elements);
    EXPECT_EQ(r.mesh_management, false);
    EXPECT_DOUBLE_EQ(r.lm.geometry_floor, 0.25);
    EXPECT_DOUBLE_EQ(r.lm.tol_step, 3e-11);
    EXPECT_EQ(r.lm.max_iter, s.lm.max_iter);
    EXPECT_DOUBLE_EQ(r.t_hi, s.t_hi);
}

TEST(Problems, ConfigErrors) {
    std::istringstream unknown("name = x\nsystem = burgers\nbogus = 1\n");
    EXPECT_THROW(read_config(unknown), std::invalid_argument);
    std::istringstream bad_number("name = x\nsystem = burgers\ndegree = two\n");
    EXPECT_THROW(read_config(bad_number), std::invalid_argument);
    EXPECT_THROW(parse_init_mode("random"), std::invalid_argument);
    EXPECT_EQ(parse_init_mode("exact"), InitMode::exact);
    EXPECT_EQ(to_string(InitMode::piecewise), "piecewise");
}

TEST(Problems, ValidationRejectsBadSpecs) {
    ProblemSpec s = builtin("sod");
    s.degree = 4;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = builtin("sod");
    s.left = {1.0};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = builtin("sod");
    s.t_hi = s.t_lo;
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Problems, InitialConditionIntegral) {
    const ProblemSpec s = builtin("sod");
    const int n = 2000;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.x_lo + (i + 0.5) * (s.x_hi - s.x_lo) / n;
        mass += initial_state(s, x)[0] * (s.x_hi - s.x_lo) / n;
    }
    EXPECT_NEAR(mass, 0.5 * 1.0 + 0.5 * 0.125, 1e-12);
    EXPECT_NEAR(initial_state(s, -0.1)[2], 1.0 / 0.4, 1e-14);
}

TEST(Problems, PiecewiseInitialization) {
    const ProblemSpec s = builtin("sod");
    const SpaceTimeResidual a = make_assembly(s, build_mesh(s));
    const Eigen::VectorXd u = initialize_unknowns(s, a);
    const DgSolution sol = a.unpack_solution(u);
    const Basis& b = a.basis();
    EXPECT_NEAR(eval_solution(b, sol, 0, 0.0, 0.0)[0], 1.0, 1e-14);
    EXPECT_NEAR(eval_solution(b, sol, 6, 0.3, 0.3)[0], 1.0, 1e-14);
    EXPECT_NEAR(eval_solution(b, sol, 7, 0.0, 0.0)[0], 0.125, 1e-14);
}

TEST(Problems, FittedTopNodesForSod) {
    const ProblemSpec s = builtin("sod");
    const auto oracle = make_oracle(s);
    ASSERT_TRUE(oracle);
    const auto x = fitted_top_nodes(s.x_lo, s.x_hi, 9, oracle->waves(s.t_hi));
    ASSERT_EQ(x.size(), 9u);
    EXPECT_DOUBLE_EQ(x.front(), -0.5);
    EXPECT_DOUBLE_EQ(x.back(), 0.5);
    EXPECT_NEAR(x[1], -0.236643, 1e-6);
    EXPECT_NEAR(x[5], -0.014055, 1e-6);
    EXPECT_NEAR(x[6], 0.185491, 1e-6);
    EXPECT_NEAR(x[7], 0.350431, 1e-6);
    EXPECT_NEAR(x[3], 0.5 * (x[1] + x[5]), 1e-14);
    EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
}

TEST(Problems, FittedTopNodesWithoutFan) {
    const std::vector<WaveFeature> shock{{0.2, 0.2}};
    const auto x = fitted_top_nodes(-0.5, 0.5, 5, shock);
    const std::vector<double> expected{-0.5, -0.325, -0.15, 0.2, 0.5};
    ASSERT_EQ(x.size(), expected.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], expected[i], 1e-15);
    EXPECT_TRUE(fitted_top_nodes(-0.5, 0.5, 3, {{-0.1, 0.1}}).empty());
}

TEST(Problems, ExactInitializationNearlySolvesSod) {
    ProblemSpec s = builtin("sod");
    s.degree = 2;
    const SpaceTimeResidual a = make_assembly(s, build_mesh(s));
    const Eigen::VectorXd piecewise = initialize_unknowns(s, a);
    const auto oracle = make_oracle(s);
    const Eigen::VectorXd exact = initialize_from_oracle(s, a, *oracle);
    EXPECT_LT(a.residual(exact).norm(), 0.1 * a.residual(piecewise).norm());
    s.init = InitMode::exact;
    EXPECT_EQ(initial_guess(s, a), exact);
}

TEST(Problems, OraclesForBuiltins) {
    for (const auto& n : builtin_names()) EXPECT_TRUE(make_oracle(builtin(n))) << n;
    const auto noh = make_oracle(builtin("noh"));
    EXPECT_NEAR(noh->conservative(0.0, 1.0)[0], 4.0, 1e-14);
}

TEST(Problems, ScalingIsPositive) {
    const ProblemSpec s = builtin("sod");
    const SpaceTimeResidual a = make_assembly(s, build_mesh(s));
    const Eigen::VectorXd d = dof_scaling(s, a.layout());
    EXPECT_EQ(d.size(), a.layout().size());
    EXPECT_GT(d.minCoeff(), 0.0);
    EXPECT_DOUBLE_EQ(d[a.layout().geometry(0)], s.lm.geometry_scale * 1.0);
    const auto f = field_scales(s);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_NEAR(f[0], 1.0, 1e-14);
}
