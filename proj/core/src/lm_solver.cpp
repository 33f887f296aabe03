#include "mdgice/lm_solver.hpp"

#include "mdgice/physics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mdg {

void LmConfig::validate() const {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be positive");
    if (!(lambda_up > 1.0)) throw std::invalid_argument("lambda_up must exceed 1");
    if (!(lambda_down > 0.0 && lambda_down < 1.0))
        throw std::invalid_argument("lambda_down must lie in (0, 1)");
    if (!(tol_residual > 0.0) || !(tol_step > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
    if (!(geometry_scale > 0.0)) throw std::invalid_argument("geometry_scale must be positive");
    if (!(diag_floor >= 0.0)) throw std::invalid_argument("diag_floor must be nonnegative");
    if (!(lambda_min > 0.0 && lambda_max > lambda_min)) throw std::invalid_argument("bad lambda bounds");
    if (!(geometry_floor >= 0.0)) throw std::invalid_argument("geometry_floor must be nonnegative");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::residual_tolerance: return "residual_tolerance";
        case Termination::step_tolerance: return "step_tolerance";
        case Termination::max_iterations: return "max_iterations";
        case Termination::lambda_cap: return "lambda_cap";
        case Termination::evaluation_failure: return "evaluation_failure";
    }
    return "unknown";
}

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Residual evaluation that turns domain failures (zero density) into an
// empty result instead of unwinding through the solver.
bool try_residual(LeastSquaresProblem& p, const Eigen::VectorXd& u, Eigen::VectorXd& out) {
    try {
        out = p.residual(u);
    } catch (const ZeroDensityError&) {
        return false;
    }
    return all_finite(out);
}

IterationRecord record(int iter, const Eigen::VectorXd& r, int primary, double lambda, double step) {
    const int np = primary < 0 ? static_cast<int>(r.size()) : std::min<int>(primary, static_cast<int>(r.size()));
    return {iter, r.head(np).norm(), r.tail(r.size() - np).norm(), lambda, step};
}

}  // namespace

LmResult minimize(LeastSquaresProblem& problem, const Eigen::VectorXd& u0, const LmConfig& cfg,
                  const Eigen::VectorXd& column_scale) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const int n = static_cast<int>(u0.size());
    const Eigen::VectorXd D = column_scale.size() == n ? column_scale : Eigen::VectorXd::Ones(n);

    LmResult out;
    out.u = u0;
    SolveReport& rep = out.report;
    const int primary = problem.primary_rows();
    const Eigen::VectorXd damped = problem.damped_columns();

    Eigen::VectorXd r;
    if (!try_residual(problem, out.u, r)) {
        rep.reason = Termination::evaluation_failure;
        return out;
    }
    double lambda = std::clamp(cfg.lambda0, cfg.lambda_min, cfg.lambda_max);
    double rnorm = r.norm();
    rep.history.push_back(record(0, r, primary, lambda, 0.0));
    problem.on_iterate(0, out.u);

    auto finish = [&](Termination why, bool ok) {
        rep.reason = why;
        rep.converged = ok;
    };

    if (rnorm <= cfg.tol_residual) {
        finish(Termination::residual_tolerance, true);
    } else {
        finish(Termination::max_iterations, false);
        Eigen::VectorXd trial_r;
        for (int it = 1; it <= cfg.max_iter; ++it) {
            const Eigen::SparseMatrix<double> J = problem.jacobian(out.u) * D.asDiagonal();
            const Eigen::MatrixXd A = Eigen::MatrixXd(J.transpose() * J);
            const Eigen::VectorXd g = J.transpose() * r;
            const Eigen::VectorXd diagA = A.diagonal();
            Eigen::VectorXd floor = Eigen::VectorXd::Constant(n, cfg.diag_floor);
            if (damped.size() == n && cfg.geometry_floor > 0.0) floor += cfg.geometry_floor * diagA.mean() * damped;
            const double unorm = (out.u.array() / D.array()).matrix().norm();

            bool accepted = false;
            bool stop = false;
            while (true) {
                Eigen::MatrixXd M = A;
                M.diagonal() += lambda * (diagA + floor);
                Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
                Eigen::VectorXd step_scaled;
                bool solved = ldlt.info() == Eigen::Success;
                if (solved) {
                    step_scaled = -ldlt.solve(g);
                    solved = all_finite(step_scaled);
                }
                if (!solved) {
                    if (lambda >= cfg.lambda_max) {
                        finish(Termination::lambda_cap, false);
                        stop = true;
                        break;
                    }
                    lambda = std::min(lambda * cfg.lambda_up, cfg.lambda_max);
                    continue;
                }
                const double step_norm = step_scaled.norm();
                const Eigen::VectorXd u_trial = out.u + D.cwiseProduct(step_scaled);
                const bool ok = try_residual(problem, u_trial, trial_r);
                const double trial_norm = ok ? trial_r.norm() : INFINITY;
                const bool tiny = step_norm <= cfg.tol_step * (unorm + cfg.tol_step);
                if (trial_norm < rnorm) {
                    out.u = u_trial;
                    r = trial_r;
                    rnorm = trial_norm;
                    lambda = std::max(lambda * cfg.lambda_down, cfg.lambda_min);
                    accepted = true;
                    rep.iterations = it;
                    rep.history.push_back(record(it, r, primary, lambda, step_norm));
                    problem.on_iterate(it, out.u);
                    if (rnorm <= cfg.tol_residual) {
                        finish(Termination::residual_tolerance, true);
                        stop = true;
                    } else if (tiny) {
                        finish(Termination::step_tolerance, true);
                        stop = true;
                    }
                    break;
                }
                ++rep.rejected_steps;
                if (tiny) {
                    // No decrease is possible along ever shorter steps.
                    finish(Termination::step_tolerance, true);
                    stop = true;
                    break;
                }
                if (lambda >= cfg.lambda_max) {
                    finish(Termination::lambda_cap, false);
                    stop = true;
                    break;
                }
                lambda = std::min(lambda * cfg.lambda_up, cfg.lambda_max);
            }
            if (stop || !accepted) break;
        }
    }

    rep.residual_norm = rnorm;
    const auto last = record(rep.iterations, r, primary, lambda, 0.0);
    rep.norm_primary = last.norm_primary;
    rep.norm_secondary = last.norm_secondary;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace mdg
