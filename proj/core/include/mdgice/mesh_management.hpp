/**
 * @file mesh_management.hpp
 * @brief Detection and removal of collapsed space-time cells.
 *
 * A cell whose bottom and top edges have both shrunk to a point carries no
 * area and no residual weight. Removing it merges its two top nodes and its
 * two bottom nodes; every surviving element keeps its coefficients, since
 * the space-time solution needs no transfer between topologies.
 */
#pragma once

#include "mdgice/residual.hpp"
#include "mdgice/slab_mesh.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace mdg {

enum class CellFlag { healthy, collapsed, tangled };

std::string to_string(CellFlag f);

struct CellHealth {
    double min_det = 0.0;
    double top_length = 0.0;
    double bottom_length = 0.0;
    CellFlag flag = CellFlag::healthy;
};

struct DegeneracyReport {
    std::vector<CellHealth> cells;
    /// Edge-length threshold, 1e-8 times the domain width.
    double eps_c = 0.0;
    /// Determinant threshold, 1e-10 times the mean element area.
    double eps_j = 0.0;

    int count(CellFlag f) const;
    std::vector<int> flagged(CellFlag f) const;
};

/// Classifies every element of `mesh` (coordinates as stored in the mesh).
/// `quad_points` Gauss points per direction sample det J.
DegeneracyReport detect_degenerate(const SlabMesh& mesh, int quad_points = 4);

struct RemovalResult {
    SlabMesh mesh;
    Eigen::VectorXd unknowns;
    /// Old element id -> new id, -1 for removed elements.
    std::vector<int> element_map;
    /// Old node id -> new node id.
    std::vector<int> node_map;
    std::vector<int> removed;
    /// Pairs of old top-node ids merged into one.
    std::vector<std::pair<int, int>> merged;
    bool refused = false;
    std::string message;

    bool changed() const { return !removed.empty(); }
};

/**
 * Deletes the collapsed cells of `report` whose bottom and top edges are
 * both shorter than eps_c, merging the top nodes at their mean abscissa (or
 * at the pinned end abscissa when an end node is involved). Collapsed cells
 * with an open bottom edge cannot be removed without leaving a hole; they
 * are reported and the whole removal is refused, as is any removal that
 * would leave no element.
 *
 * `u` uses the layout of `assembly`; the returned unknowns use the layout of
 * a residual built on the reduced mesh with the same basis and system.
 */
RemovalResult remove_collapsed(const SpaceTimeResidual& assembly, const Eigen::VectorXd& u,
                               const DegeneracyReport& report);

}  // namespace mdg
