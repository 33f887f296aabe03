#include "mdgice/slab_solver.hpp"

#include <chrono>

namespace mdg {

void MdgProblem::on_iterate(int, const Eigen::VectorXd& u) { census_.push_back(assembly_.census(u)); }

Eigen::VectorXd MdgProblem::damped_columns() const {
    const UnknownLayout& lay = assembly_.layout();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(lay.size());
    w.tail(lay.nmovable).setOnes();
    return w;
}

int RunOutcome::negative_density_events() const {
    int n = 0;
    for (const auto& l : log) n += l.negative_density > 0;
    return n;
}

int RunOutcome::negative_pressure_events() const {
    int n = 0;
    for (const auto& l : log) n += l.negative_pressure > 0;
    return n;
}

int RunOutcome::removed_cells() const {
    int n = 0;
    for (const auto& r : removals) n += static_cast<int>(r.elements.size());
    return n;
}

SpaceTimeResidual make_assembly(const ProblemSpec& spec, const SlabMesh& mesh) {
    return SpaceTimeResidual(spec.system, Basis(spec.basis, spec.degree), mesh, initial_trace(spec),
                             spec.left_state(), spec.right_state(), spec.bottom_chain_ice && spec.slabs == 1);
}

namespace {

SlabOutcome solve_slab(const ProblemSpec& spec, const RunOptions& opt, int slab, SpaceTimeResidual assembly,
                       Eigen::VectorXd u, RunOutcome& run) {
    SlabOutcome out;
    out.initial_mesh = assembly.unpack_mesh(u);
    auto current = std::make_shared<SpaceTimeResidual>(std::move(assembly));
    for (int round = 0;; ++round) {
        MdgProblem problem(*current);
        const Eigen::VectorXd scale =
            opt.scale_columns ? dof_scaling(spec, current->layout()) : Eigen::VectorXd();
        LmResult res = minimize(problem, u, spec.lm, scale);
        u = res.u;
        out.iterations += res.report.iterations;
        for (std::size_t i = 0; i < res.report.history.size(); ++i) {
            IterationLog entry{slab, round, res.report.history[i], 0, 0};
            if (i < problem.census().size()) {
                entry.negative_density = problem.census()[i].negative_density;
                entry.negative_pressure = problem.census()[i].negative_pressure;
            }
            run.log.push_back(entry);
        }
        out.report = res.report;
        if (!res.report.converged || !spec.mesh_management || round >= opt.max_removal_rounds) break;

        const DegeneracyReport rep = detect_degenerate(current->unpack_mesh(u));
        RemovalResult rem = remove_collapsed(*current, u, rep);
        if (!rem.changed()) {
            if (rem.refused)
                run.removals.push_back({slab, round, out.iterations, {}, {}, "refused: " + rem.message});
            break;
        }
        run.removals.push_back({slab, round, out.iterations, rem.removed, rem.merged, rem.message});

        std::vector<int> keep;
        for (std::size_t e = 0; e < rem.element_map.size(); ++e)
            if (rem.element_map[e] >= 0) keep.push_back(static_cast<int>(e));
        PastTrace old = current->past_trace();
        PastTrace past = [old, keep](int e, double xi, double x) { return old(keep[e], xi, x); };
        current = std::make_shared<SpaceTimeResidual>(current->system(), current->basis(), rem.mesh, past,
                                                      current->left_exterior(), current->right_exterior(),
                                                      current->bottom_chain_ice());
        u = rem.unknowns;
    }
    out.assembly = current;
    out.unknowns = u;
    return out;
}

}  // namespace

RunOutcome run_problem(const ProblemSpec& spec, const RunOptions& opt) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    RunOutcome run;
    const double dt = (spec.t_hi - spec.t_lo) / spec.slabs;

    ProblemSpec first = spec;
    first.t_hi = spec.slabs == 1 ? spec.t_hi : spec.t_lo + dt;
    SpaceTimeResidual assembly = make_assembly(first, build_mesh(first));
    Eigen::VectorXd u = initial_guess(first, assembly);
    run.converged = true;

    for (int k = 0; k < spec.slabs; ++k) {
        SlabOutcome outcome = solve_slab(spec, opt, k, assembly, u, run);
        run.iterations += outcome.iterations;
        run.converged = run.converged && outcome.report.converged;
        run.slabs.push_back(outcome);
        if (!outcome.report.converged || k + 1 == spec.slabs) break;

        const double t_next = k + 2 == spec.slabs ? spec.t_hi : spec.t_lo + (k + 2) * dt;
        const SlabMesh prev = outcome.final_mesh();
        SlabMesh next = prev.next_slab(t_next);
        const auto prev_assembly = outcome.assembly;
        const DgSolution prev_sol = outcome.solution();
        PastTrace past = [prev_assembly, prev_sol](int e, double xi, double) {
            return eval_solution(prev_assembly->basis(), prev_sol, e, xi, 1.0);
        };
        assembly = SpaceTimeResidual(spec.system, prev_assembly->basis(), next, past,
                                     prev_assembly->left_exterior(), prev_assembly->right_exterior());
        u = assembly.pack(prev_sol, next);
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace mdg
