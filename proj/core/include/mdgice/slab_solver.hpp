/**
 * @file slab_solver.hpp
 * @brief Runs a problem: builds the slab, minimizes the residual, removes
 *        collapsed cells at convergence and marches over optional slabs.
 */
#pragma once

#include "mdgice/lm_solver.hpp"
#include "mdgice/mesh_management.hpp"
#include "mdgice/problems.hpp"
#include "mdgice/residual.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>
#include <vector>

namespace mdg {

/// Least-squares view of a space-time residual that records a sign census
/// of density and pressure at every accepted iterate.
class MdgProblem : public LeastSquaresProblem {
public:
    explicit MdgProblem(const SpaceTimeResidual& assembly) : assembly_(assembly) {}

    Eigen::VectorXd residual(const Eigen::VectorXd& u) override { return assembly_.residual(u); }
    Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u) override { return assembly_.jacobian(u); }
    int primary_rows() const override { return assembly_.layout().dg_rows(); }
    void on_iterate(int iter, const Eigen::VectorXd& u) override;
    /// Flags the geometry columns.
    Eigen::VectorXd damped_columns() const override;

    /// Census per accepted iterate, in order.
    const std::vector<StateCensus>& census() const { return census_; }

private:
    const SpaceTimeResidual& assembly_;
    std::vector<StateCensus> census_;
};

struct IterationLog {
    int slab = 0;
    int round = 0;
    IterationRecord record;
    int negative_density = 0;
    int negative_pressure = 0;
};

struct RemovalEvent {
    int slab = 0;
    int round = 0;
    /// Cumulative LM iteration count of the slab when removal fired.
    int iteration = 0;
    std::vector<int> elements;
    std::vector<std::pair<int, int>> merged_nodes;
    std::string note;
};

struct SlabOutcome {
    SlabMesh initial_mesh;
    /// Assembly on the final (possibly reduced) mesh.
    std::shared_ptr<const SpaceTimeResidual> assembly;
    Eigen::VectorXd unknowns;
    SolveReport report;
    int iterations = 0;

    SlabMesh final_mesh() const { return assembly->unpack_mesh(unknowns); }
    DgSolution solution() const { return assembly->unpack_solution(unknowns); }
};

struct RunOutcome {
    std::vector<SlabOutcome> slabs;
    std::vector<IterationLog> log;
    std::vector<RemovalEvent> removals;
    bool converged = false;
    int iterations = 0;
    double wall_seconds = 0.0;

    const SlabOutcome& last() const { return slabs.back(); }
    int negative_density_events() const;
    int negative_pressure_events() const;
    int removed_cells() const;
};

struct RunOptions {
    /// Rounds of solve-then-remove per slab.
    int max_removal_rounds = 4;
    bool scale_columns = true;
};

/// Solves `spec` (its degree, basis, slab count, mesh-management switch and
/// LM settings are honoured).
RunOutcome run_problem(const ProblemSpec& spec, const RunOptions& options = {});

/// Assembly for a spec's first slab, built on the given mesh.
SpaceTimeResidual make_assembly(const ProblemSpec& spec, const SlabMesh& mesh);

}  // namespace mdg
