/**
 * @file slab_mesh.hpp
 * @brief One space-time slab [t_n, t_{n+1}] of quadrilaterals in a single row.
 *
 * Bottom nodes sit on t = t_n and are fixed. Top nodes sit on t = t_{n+1} and
 * only their x-coordinate may move; the two domain-end top nodes are pinned.
 * Distinct node ids may share coordinates (fans of collapsed cells opening
 * from a singular point). Element validity is diagnosed, never enforced.
 */
#pragma once

#include "mdgice/physics.hpp"

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mdg {

struct Point {
    double x = 0.0;
    double t = 0.0;
};

/// Bilinear isoparametric quadrilateral. Vertex order: bottom-left,
/// bottom-right, top-right, top-left (counterclockwise).
struct QuadGeometry {
    std::array<Point, 4> v;

    Point map(double xi, double eta) const;
    /// [[x_xi, x_eta], [t_xi, t_eta]]
    Eigen::Matrix2d jacobian(double xi, double eta) const;
    double jacobian_det(double xi, double eta) const;
};

/// Element node ids in counterclockwise order.
struct Element {
    int bl = -1;
    int br = -1;
    int tr = -1;
    int tl = -1;
};

/// Space-time face shared by two neighbouring elements of the row.
struct InteriorFace {
    int left_elem = -1;
    int right_elem = -1;
    int bottom_node = -1;
    int top_node = -1;
};

enum class BoundarySide { bottom, top, left, right };

struct FaceGeometry {
    Point bottom;
    Point top;
    /// Unit normal pointing from the left element into the right one.
    /// Zero when the face is degenerate.
    SpaceTimeNormal normal;
    double length = 0.0;
    bool degenerate = false;

    /// Point at parameter s in [-1, 1], bottom to top.
    Point at(double s) const;
    /// Normal scaled by dGamma/ds; well defined (zero) on degenerate faces.
    SpaceTimeNormal scaled_normal() const;
};

struct FanSpec {
    double x = 0.0;
    int count = 0;
};

class SlabMesh {
public:
    SlabMesh() = default;

    /// Row of elements over [x_nodes.front(), x_nodes.back()] x [t0, t1].
    /// With a fan, `count` extra bottom nodes are inserted at fan.x (which must
    /// be an interior entry of x_nodes), each opening a zero-bottom-width cell.
    /// Top nodes start evenly spaced across the domain.
    static SlabMesh build(const std::vector<double>& x_nodes, double t0, double t1,
                          std::optional<FanSpec> fan = std::nullopt);

    /// Direct construction from node coordinates and connectivity.
    static SlabMesh from_parts(std::vector<Point> nodes, std::vector<int> bottom_ids,
                               std::vector<int> top_ids, std::vector<Element> elements);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_elements() const { return static_cast<int>(elements_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }

    const Point& node(int id) const { return nodes_[id]; }
    const std::vector<Point>& nodes() const { return nodes_; }
    const Element& element(int e) const { return elements_[e]; }
    const std::vector<Element>& elements() const { return elements_; }
    const InteriorFace& face(int f) const { return faces_[f]; }
    const std::vector<InteriorFace>& faces() const { return faces_; }
    const std::vector<int>& bottom_ids() const { return bottom_ids_; }
    const std::vector<int>& top_ids() const { return top_ids_; }

    /// Top nodes whose abscissa is a solution unknown (all but the two ends).
    const std::vector<int>& movable() const { return movable_; }
    /// Position of a node in movable(), or -1.
    int movable_index(int node_id) const;

    double t_bottom() const { return t0_; }
    double t_top() const { return t1_; }
    double x_lo() const { return nodes_[bottom_ids_.front()].x; }
    double x_hi() const { return nodes_[bottom_ids_.back()].x; }
    double width() const { return x_hi() - x_lo(); }
    double coincidence_tol() const { return 1e-12 * width(); }

    QuadGeometry geometry(int e) const;
    FaceGeometry face_geometry(int f) const;
    /// Geometry of an element side traversed counterclockwise.
    FaceGeometry side_geometry(int e, BoundarySide side) const;

    /// Index of the interior face on the left (right) of element e, or -1.
    int left_face(int e) const { return e > 0 ? e - 1 : -1; }
    int right_face(int e) const { return e + 1 < num_elements() ? e : -1; }

    void set_x(int node_id, double x);

    /// Sum over elements of the signed area (integral of det J).
    double signed_area() const;

    /// Next slab in time: bottom nodes copy this slab's top nodes, top nodes
    /// are extrapolated along the current face slopes.
    SlabMesh next_slab(double t_next) const;

    void write(std::ostream& os) const;
    static SlabMesh read(std::istream& is);

private:
    void finalize();

    std::vector<Point> nodes_;
    std::vector<int> bottom_ids_;
    std::vector<int> top_ids_;
    std::vector<Element> elements_;
    std::vector<InteriorFace> faces_;
    std::vector<int> movable_;
    std::vector<int> movable_lookup_;
    double t0_ = 0.0;
    double t1_ = 0.0;
};

}  // namespace mdg
