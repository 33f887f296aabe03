/**
 * @file problems.hpp
 * @brief Riemann-type test configurations and initialization of unknowns.
 *
 * Config file format: one `key = value` pair per line, `#` starts a comment.
 * Keys:
 *   name, system (advection | burgers | euler), gamma, speed,
 *   x_lo, x_hi, t_lo, t_hi, x_interface,
 *   left, right           primitive states, space separated (rho v p for euler)
 *   elements, fan, left_elements,
 *   degree, basis (P | Q), slabs, mesh_management (true | false),
 *   bottom_chain_ice (true | false), init (piecewise | exact),
 *   lambda0, lambda_up, lambda_down, tol_residual, tol_step, max_iter,
 *   geometry_scale, diag_floor, geometry_floor
 * Unlisted keys keep their defaults.
 */
#pragma once

#include "mdgice/dg_space.hpp"
#include "mdgice/lm_solver.hpp"
#include "mdgice/physics.hpp"
#include "mdgice/residual.hpp"
#include "mdgice/slab_mesh.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdg {

class Oracle;
struct WaveFeature;

class UnknownProblemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Starting guess for the first slab.
enum class InitMode {
    /// Left/right constant states on the undeformed mesh.
    piecewise,
    /// Reference solution projected onto a mesh whose top nodes sit on its
    /// waves (needs an oracle with wave positions).
    exact,
};

std::string to_string(InitMode m);
InitMode parse_init_mode(const std::string& s);

struct ProblemSpec {
    std::string name;
    SystemDef system = SystemDef::euler(1.4);
    double x_lo = -0.5;
    double x_hi = 0.5;
    double t_lo = 0.0;
    double t_hi = 0.2;
    double x_interface = 0.0;
    /// Primitive states (rho, v, p) for Euler, the scalar value otherwise.
    std::vector<double> left;
    std::vector<double> right;
    int elements = 8;
    int fan = 0;
    /// Number of leading elements initialized with the left state.
    int left_elements = 4;
    int degree = 1;
    BasisFamily basis = BasisFamily::Q;
    int slabs = 1;
    bool mesh_management = true;
    /// Also test interface conservation on the bottom-chain nodes (single
    /// slab only).
    bool bottom_chain_ice = false;
    InitMode init = InitMode::piecewise;
    LmConfig lm;

    /// Throws std::invalid_argument when the fields are inconsistent.
    void validate() const;

    State left_state() const;
    State right_state() const;
};

/// Names accepted by builtin().
std::vector<std::string> builtin_names();

/// One of: sod, lax, receding123, noh, lemma1_advection, lemma2_burgers.
ProblemSpec builtin(const std::string& name);

/// Builtin name or path to a config file.
ProblemSpec load_problem(const std::string& name_or_path);

ProblemSpec read_config(std::istream& is);
void write_config(std::ostream& os, const ProblemSpec& spec);

/// Bottom abscissae and fan for the spec's row of elements.
SlabMesh build_mesh(const ProblemSpec& spec);

/// Initial condition as a function of x (state at the left for x < x_i).
State initial_state(const ProblemSpec& spec, double x);

/// Past trace from the initial condition.
PastTrace initial_trace(const ProblemSpec& spec);

/// Piecewise-constant element states (left for the first left_elements
/// elements) and the mesh's top-node abscissae.
Eigen::VectorXd initialize_unknowns(const ProblemSpec& spec, const SpaceTimeResidual& assembly);

/// Top-node abscissae (ends included) placing one node on each
/// discontinuity and on both edges of each fan; remaining nodes are spread
/// through the fans, or bisect the widest gaps when there is none. Returns
/// an empty vector when the mesh has too few nodes for the waves.
std::vector<double> fitted_top_nodes(double x_lo, double x_hi, int ntop, const std::vector<WaveFeature>& waves);

/// Unknowns for InitMode::exact: the oracle's solution projected onto the
/// wave-fitted mesh.
Eigen::VectorXd initialize_from_oracle(const ProblemSpec& spec, const SpaceTimeResidual& assembly,
                                       const Oracle& oracle);

/// Dispatches on spec.init.
Eigen::VectorXd initial_guess(const ProblemSpec& spec, const SpaceTimeResidual& assembly);

/// Column scaling: geometry columns get geometry_scale * width, flow columns
/// the largest |initial value| of their component, floored at 1e-2 of the
/// largest component scale.
Eigen::VectorXd dof_scaling(const ProblemSpec& spec, const UnknownLayout& layout);

/// Per-component reference magnitudes behind dof_scaling.
std::vector<double> field_scales(const ProblemSpec& spec);

/// Exact solution of the spec's Riemann problem, when one is available.
std::unique_ptr<Oracle> make_oracle(const ProblemSpec& spec);

}  // namespace mdg
