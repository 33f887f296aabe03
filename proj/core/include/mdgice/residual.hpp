/**
 * @file residual.hpp
 * @brief Over-determined residual of the moving space-time DG discretization.
 *
 * Unknowns are the DG coefficients of every element followed by the
 * abscissae of the movable top nodes. The residual stacks, per element, the
 * space-time DG weak form tested against every basis function and, per
 * movable top node, the flux jump across the incident space-time face tested
 * against the continuous piecewise-linear hat of that node.
 *
 * Face fluxes: bottom faces take the past trace (initial data or previous
 * slab), top faces the element's own trace, interior space-time faces the
 * average of the two one-sided fluxes, and the domain sides the average of
 * the interior trace and the prescribed exterior state. No Riemann flux,
 * limiter or artificial viscosity is involved.
 */
#pragma once

#include "mdgice/dg_space.hpp"
#include "mdgice/physics.hpp"
#include "mdgice/slab_mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace mdg {

/// State on the bottom of the slab at reference abscissa xi of element e's
/// bottom edge, physical position x.
using PastTrace = std::function<State(int elem, double xi, double x)>;

struct UnknownLayout {
    int nelem = 0;
    int nbasis = 0;
    int ncomp = 0;
    int nmovable = 0;
    /// Interface tests on the bottom-chain nodes, one per interior face.
    int nbottom_tests = 0;

    int block() const { return nbasis * ncomp; }
    int flow_size() const { return nelem * block(); }
    int size() const { return flow_size() + nmovable; }
    int flow(int e, int i, int c) const { return e * block() + i * ncomp + c; }
    int geometry(int k) const { return flow_size() + k; }

    int dg_rows() const { return flow_size(); }
    int ice_tests() const { return nmovable + nbottom_tests; }
    int ice_rows() const { return ice_tests() * ncomp; }
    int rows() const { return dg_rows() + ice_rows(); }
    int dg_row(int e, int i, int c) const { return flow(e, i, c); }
    int ice_row(int k, int c) const { return dg_rows() + k * ncomp + c; }
};

/// Sign census of the conservative states at all volume quadrature points.
struct StateCensus {
    int negative_density = 0;
    int negative_pressure = 0;
    int points = 0;
};

class SpaceTimeResidual {
public:
    /// With `bottom_chain_ice`, every interior face is additionally tested
    /// against the hat of its bottom node.
    SpaceTimeResidual(SystemDef sys, Basis basis, SlabMesh mesh, PastTrace past,
                      State left_exterior, State right_exterior, bool bottom_chain_ice = false);

    const SystemDef& system() const { return sys_; }
    const Basis& basis() const { return basis_; }
    /// Mesh at the reference geometry; movable abscissae are read from unknowns.
    const SlabMesh& mesh() const { return mesh_; }
    const UnknownLayout& layout() const { return layout_; }
    const PastTrace& past_trace() const { return past_; }
    const State& left_exterior() const { return left_ext_; }
    const State& right_exterior() const { return right_ext_; }
    bool bottom_chain_ice() const { return bottom_ice_; }

    Eigen::VectorXd pack(const DgSolution& sol, const SlabMesh& geometry) const;
    Eigen::VectorXd pack(const DgSolution& sol) const { return pack(sol, mesh_); }
    DgSolution unpack_solution(const Eigen::VectorXd& u) const;
    SlabMesh unpack_mesh(const Eigen::VectorXd& u) const;

    Eigen::VectorXd residual(const Eigen::VectorXd& u) const;

    /// DG block of element e (length N*m).
    Eigen::VectorXd element_residual(int e, const Eigen::VectorXd& u) const;
    /// Interface block of test k (length m): movable top node k for
    /// k < nmovable, otherwise the bottom node of face k - nmovable.
    State ice_residual(int k, const Eigen::VectorXd& u) const;

    /// Forward-difference Jacobian, recomputing only the residual blocks each
    /// unknown touches.
    Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u) const;
    /// Forward-difference Jacobian from full residual re-evaluations.
    Eigen::MatrixXd jacobian_dense(const Eigen::VectorXd& u) const;

    /// Rows whose values depend on unknown j.
    std::vector<int> dependent_elements(int j) const;
    std::vector<int> dependent_ice_nodes(int j) const;

    /// Net outflow through the slab boundary (top - bottom + sides),
    /// evaluated with the same fluxes as the assembly.
    State boundary_flux_balance(const Eigen::VectorXd& u) const;

    StateCensus census(const Eigen::VectorXd& u) const;

    QuadGeometry geometry(int e, const Eigen::VectorXd& u) const;
    FaceGeometry face_geometry(int f, const Eigen::VectorXd& u) const;
    double node_x(int node, const Eigen::VectorXd& u) const;

    /// FD step size factor for the Jacobian columns.
    static constexpr double fd_epsilon = 1e-7;

private:
    struct SideTable {
        std::vector<double> s;
        std::vector<double> w;
        std::vector<std::vector<double>> values;  // [point][basis]
    };

    State trace(int e, const Eigen::VectorXd& u, const std::vector<double>& values) const;
    State face_average(int f, int q, const Eigen::VectorXd& u, const FaceGeometry& g) const;

    SystemDef sys_;
    Basis basis_;
    SlabMesh mesh_;
    PastTrace past_;
    State left_ext_;
    State right_ext_;
    UnknownLayout layout_;
    bool bottom_ice_ = false;

    QuadratureRule2D vol_rule_;
    std::vector<std::vector<double>> vol_values_;
    std::vector<std::vector<double>> vol_dxi_;
    std::vector<std::vector<double>> vol_deta_;
    SideTable bottom_, top_, left_, right_;
};

}  // namespace mdg
