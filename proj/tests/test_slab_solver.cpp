#include "mdgice/riemann_oracle.hpp"
#include "mdgice/slab_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mdg;

namespace {

/// Abscissa of the final top node nearest to x.
double nearest_top(const SlabMesh& m, double x) {
    double best = m.node(m.top_ids().front()).x;
    for (int id : m.top_ids())
        if (std::abs(m.node(id).x - x) < std::abs(best - x)) best = m.node(id).x;
    return best;
}

}  // namespace

class LemmaRuns : public ::testing::TestWithParam<std::tuple<std::string, int>> {};

TEST_P(LemmaRuns, InterfaceNodeLandsOnTheExactShock) {
    ProblemSpec spec = builtin(std::get<0>(GetParam()));
    spec.degree = std::get<1>(GetParam());
    const RunOutcome run = run_problem(spec);
    ASSERT_TRUE(run.converged);
    const SlabMesh m = run.last().final_mesh();
    EXPECT_NEAR(nearest_top(m, 0.2), 0.2, 1e-10);
    EXPECT_LT(run.last().report.residual_norm, 1e-10);
    EXPECT_EQ(run.removed_cells(), 0);
    EXPECT_LT(run.wall_seconds, 1.0);
}

INSTANTIATE_TEST_SUITE_P(Degrees, LemmaRuns,
                         ::testing::Combine(::testing::Values("lemma1_advection", "lemma2_burgers"),
                                            ::testing::Values(0, 1, 2)));

TEST(SlabSolver, MultiSlabBurgersTracksTheShock) {
    ProblemSpec spec = builtin("lemma2_burgers");
    spec.slabs = 3;
    spec.t_hi = 0.3;
    const RunOutcome run = run_problem(spec);
    ASSERT_TRUE(run.converged);
    ASSERT_EQ(run.slabs.size(), 3u);
    for (std::size_t k = 0; k < run.slabs.size(); ++k) {
        const SlabMesh m = run.slabs[k].final_mesh();
        EXPECT_NEAR(m.t_top(), 0.1 * static_cast<double>(k + 1), 1e-14);
        EXPECT_NEAR(nearest_top(m, m.t_top()), m.t_top(), 1e-9);
    }
    EXPECT_GT(run.log.size(), 3u);
    EXPECT_EQ(run.log.back().slab, 2);
}

TEST(SlabSolver, SodP1RunConvergesWithExactStart) {
    ProblemSpec spec = builtin("sod");
    spec.init = InitMode::exact;
    const RunOutcome run = run_problem(spec);
    ASSERT_TRUE(run.converged);
    const SlabOutcome& s = run.last();
    const SlabMesh m = s.final_mesh();
    EXPECT_GT(m.signed_area(), 0.0);
    EXPECT_NEAR(m.signed_area(), 0.2, 1e-12);
    const auto oracle = make_oracle(spec);
    const double err = l2_spacetime_error(spec.system, s.assembly->basis(), m, s.solution(), *oracle, Field::density);
    EXPECT_LT(std::log10(err), -2.0);
    EXPECT_EQ(run.negative_density_events(), 0);
}

TEST(SlabSolver, ZeroIterationBudgetReportsNonConvergence) {
    ProblemSpec spec = builtin("sod");
    spec.lm.max_iter = 0;
    const RunOutcome run = run_problem(spec);
    EXPECT_FALSE(run.converged);
    EXPECT_EQ(run.iterations, 0);
    EXPECT_EQ(run.log.size(), 1u);
}

TEST(SlabSolver, MdgProblemFlagsGeometryColumns) {
    const ProblemSpec spec = builtin("sod");
    const SpaceTimeResidual a = make_assembly(spec, build_mesh(spec));
    const MdgProblem p(a);
    const Eigen::VectorXd d = p.damped_columns();
    ASSERT_EQ(d.size(), a.layout().size());
    EXPECT_EQ(d.head(a.layout().flow_size()).sum(), 0.0);
    EXPECT_EQ(d.tail(a.layout().nmovable).sum(), a.layout().nmovable);
}
