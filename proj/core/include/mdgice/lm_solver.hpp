/**
 * @file lm_solver.hpp
 * @brief Levenberg-Marquardt minimization of 1/2 ||R(u)||^2.
 *
 * Each iteration solves
 *   (J^T J + lambda diag(J^T J) + lambda eps_d I) delta = -J^T R
 * where eps_d is raised on the flagged columns (see geometry_floor)
 * on the column-scaled Jacobian. A step is accepted only if it reduces
 * ||R||; lambda shrinks on acceptance and grows on rejection.
 */
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <string>
#include <vector>

namespace mdg {

struct LmConfig {
    double lambda0 = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 1.0 / 3.0;
    double tol_residual = 1e-10;
    double tol_step = 1e-12;
    int max_iter = 200;
    double geometry_scale = 1.0;
    double diag_floor = 1e-12;
    double lambda_min = 1e-14;
    double lambda_max = 1e14;
    /// Extra damping floor on the columns flagged by
    /// LeastSquaresProblem::damped_columns(), relative to mean(diag J^T J).
    /// Keeps unknowns with vanishing sensitivity (nodes between equal
    /// states) from taking arbitrarily long steps.
    double geometry_floor = 0.1;

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

struct IterationRecord {
    int iter = 0;
    double norm_primary = 0.0;
    double norm_secondary = 0.0;
    double lambda = 0.0;
    double step_norm = 0.0;
};

enum class Termination { residual_tolerance, step_tolerance, max_iterations, lambda_cap, evaluation_failure };

std::string to_string(Termination t);

struct SolveReport {
    int iterations = 0;
    double residual_norm = 0.0;
    /// Norms of the leading `primary_rows` and trailing residual blocks.
    double norm_primary = 0.0;
    double norm_secondary = 0.0;
    bool converged = false;
    Termination reason = Termination::max_iterations;
    std::vector<IterationRecord> history;
    double wall_seconds = 0.0;
    int rejected_steps = 0;
};

/// Residual/Jacobian pair for the minimizer.
class LeastSquaresProblem {
public:
    virtual ~LeastSquaresProblem() = default;
    virtual Eigen::VectorXd residual(const Eigen::VectorXd& u) = 0;
    virtual Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u) = 0;
    /// Rows reported as the first block of the residual history.
    virtual int primary_rows() const = 0;
    /// Called once per accepted iterate (iteration 0 is the start point).
    virtual void on_iterate(int /*iter*/, const Eigen::VectorXd& /*u*/) {}
    /// Per-column 0/1 flags for geometry_floor (empty means none).
    virtual Eigen::VectorXd damped_columns() const { return {}; }
};

/// Adapter for plain callables.
class FunctionProblem : public LeastSquaresProblem {
public:
    using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    using JacobianFn = std::function<Eigen::SparseMatrix<double>(const Eigen::VectorXd&)>;

    FunctionProblem(ResidualFn r, JacobianFn j, int primary_rows = -1)
        : r_(std::move(r)), j_(std::move(j)), primary_(primary_rows) {}

    Eigen::VectorXd residual(const Eigen::VectorXd& u) override { return r_(u); }
    Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u) override { return j_(u); }
    int primary_rows() const override { return primary_; }

private:
    ResidualFn r_;
    JacobianFn j_;
    int primary_;
};

struct LmResult {
    Eigen::VectorXd u;
    SolveReport report;
};

/// `column_scale` right-preconditions the Jacobian (empty means identity).
LmResult minimize(LeastSquaresProblem& problem, const Eigen::VectorXd& u0, const LmConfig& cfg,
                  const Eigen::VectorXd& column_scale = {});

}  // namespace mdg
