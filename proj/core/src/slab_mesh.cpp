#include "mdgice/slab_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mdg {

Point QuadGeometry::map(double xi, double eta) const {
    const double n0 = 0.25 * (1 - xi) * (1 - eta);
    const double n1 = 0.25 * (1 + xi) * (1 - eta);
    const double n2 = 0.25 * (1 + xi) * (1 + eta);
    const double n3 = 0.25 * (1 - xi) * (1 + eta);
    return {n0 * v[0].x + n1 * v[1].x + n2 * v[2].x + n3 * v[3].x,
            n0 * v[0].t + n1 * v[1].t + n2 * v[2].t + n3 * v[3].t};
}

Eigen::Matrix2d QuadGeometry::jacobian(double xi, double eta) const {
    const double dxi[4] = {-0.25 * (1 - eta), 0.25 * (1 - eta), 0.25 * (1 + eta),
                           -0.25 * (1 + eta)};
    const double deta[4] = {-0.25 * (1 - xi), -0.25 * (1 + xi), 0.25 * (1 + xi),
                            0.25 * (1 - xi)};
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 4; ++a) {
        J(0, 0) += dxi[a] * v[a].x;
        J(0, 1) += deta[a] * v[a].x;
        J(1, 0) += dxi[a] * v[a].t;
        J(1, 1) += deta[a] * v[a].t;
    }
    return J;
}

double QuadGeometry::jacobian_det(double xi, double eta) const {
    const Eigen::Matrix2d J = jacobian(xi, eta);
    return J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
}

Point FaceGeometry::at(double s) const {
    const double a = 0.5 * (1 - s);
    const double b = 0.5 * (1 + s);
    return {a * bottom.x + b * top.x, a * bottom.t + b * top.t};
}

SpaceTimeNormal FaceGeometry::scaled_normal() const {
    // (dt/ds, -dx/ds) for a bottom-to-top traversal; left-to-right orientation.
    return {0.5 * (top.t - bottom.t), -0.5 * (top.x - bottom.x)};
}

namespace {

FaceGeometry make_face(const Point& a, const Point& b, double tol) {
    FaceGeometry g;
    g.bottom = a;
    g.top = b;
    const double dx = b.x - a.x;
    const double dt = b.t - a.t;
    g.length = std::hypot(dx, dt);
    if (g.length <= tol) {
        g.degenerate = true;
        g.normal = {0.0, 0.0};
    } else {
        g.normal = {dt / g.length, -dx / g.length};
    }
    return g;
}

}  // namespace

SlabMesh SlabMesh::build(const std::vector<double>& x_nodes, double t0, double t1,
                         std::optional<FanSpec> fan) {
    if (x_nodes.size() < 2) throw std::invalid_argument("need at least two bottom nodes");
    if (!(t1 > t0)) throw std::invalid_argument("slab requires t_top > t_bottom");
    for (std::size_t i = 1; i < x_nodes.size(); ++i)
        if (!(x_nodes[i] > x_nodes[i - 1]))
            throw std::invalid_argument("bottom abscissae must be strictly increasing");

    std::vector<double> bottom_x;
    if (fan && fan->count > 0) {
        const auto it = std::find(x_nodes.begin() + 1, x_nodes.end() - 1, fan->x);
        if (fan->x <= x_nodes.front() || fan->x >= x_nodes.back() || it == x_nodes.end() - 1)
            throw std::invalid_argument("fan point must be an interior bottom abscissa");
        for (double x : x_nodes) {
            bottom_x.push_back(x);
            if (x == fan->x) bottom_x.insert(bottom_x.end(), fan->count, x);
        }
    } else {
        if (fan && fan->count < 0) throw std::invalid_argument("negative fan count");
        bottom_x = x_nodes;
    }

    const int nb = static_cast<int>(bottom_x.size());
    std::vector<Point> nodes;
    std::vector<int> bottom_ids, top_ids;
    for (int i = 0; i < nb; ++i) {
        bottom_ids.push_back(static_cast<int>(nodes.size()));
        nodes.push_back({bottom_x[i], t0});
    }
    const double lo = bottom_x.front();
    const double hi = bottom_x.back();
    for (int i = 0; i < nb; ++i) {
        top_ids.push_back(static_cast<int>(nodes.size()));
        const double x = (i == nb - 1) ? hi : lo + (hi - lo) * i / (nb - 1);
        nodes.push_back({x, t1});
    }
    std::vector<Element> elements;
    for (int e = 0; e + 1 < nb; ++e)
        elements.push_back({bottom_ids[e], bottom_ids[e + 1], top_ids[e + 1], top_ids[e]});
    return from_parts(std::move(nodes), std::move(bottom_ids), std::move(top_ids),
                      std::move(elements));
}

SlabMesh SlabMesh::from_parts(std::vector<Point> nodes, std::vector<int> bottom_ids,
                              std::vector<int> top_ids, std::vector<Element> elements) {
    if (bottom_ids.size() != top_ids.size() || bottom_ids.size() < 2 ||
        elements.size() + 1 != bottom_ids.size())
        throw std::invalid_argument("inconsistent slab connectivity");
    SlabMesh m;
    m.nodes_ = std::move(nodes);
    m.bottom_ids_ = std::move(bottom_ids);
    m.top_ids_ = std::move(top_ids);
    m.elements_ = std::move(elements);
    m.t0_ = m.nodes_[m.bottom_ids_.front()].t;
    m.t1_ = m.nodes_[m.top_ids_.front()].t;
    for (int id : m.bottom_ids_)
        if (m.nodes_[id].t != m.t0_) throw std::invalid_argument("bottom nodes must share t");
    for (int id : m.top_ids_)
        if (m.nodes_[id].t != m.t1_) throw std::invalid_argument("top nodes must share t");
    if (!(m.t1_ > m.t0_)) throw std::invalid_argument("slab requires t_top > t_bottom");
    m.finalize();
    return m;
}

void SlabMesh::finalize() {
    faces_.clear();
    for (int e = 0; e + 1 < num_elements(); ++e) {
        const Element& l = elements_[e];
        const Element& r = elements_[e + 1];
        if (l.br != r.bl || l.tr != r.tl)
            throw std::invalid_argument("neighbouring elements do not share a side");
        faces_.push_back({e, e + 1, l.br, l.tr});
    }
    movable_.assign(top_ids_.begin() + 1, top_ids_.end() - 1);
    movable_lookup_.assign(nodes_.size(), -1);
    for (std::size_t k = 0; k < movable_.size(); ++k) movable_lookup_[movable_[k]] = static_cast<int>(k);
}

int SlabMesh::movable_index(int node_id) const {
    if (node_id < 0 || node_id >= num_nodes()) return -1;
    return movable_lookup_[node_id];
}

QuadGeometry SlabMesh::geometry(int e) const {
    const Element& el = elements_[e];
    return {{nodes_[el.bl], nodes_[el.br], nodes_[el.tr], nodes_[el.tl]}};
}

FaceGeometry SlabMesh::face_geometry(int f) const {
    const InteriorFace& face = faces_[f];
    return make_face(nodes_[face.bottom_node], nodes_[face.top_node], coincidence_tol());
}

FaceGeometry SlabMesh::side_geometry(int e, BoundarySide side) const {
    const Element& el = elements_[e];
    const double tol = coincidence_tol();
    switch (side) {
        case BoundarySide::bottom: return make_face(nodes_[el.bl], nodes_[el.br], tol);
        case BoundarySide::right: return make_face(nodes_[el.br], nodes_[el.tr], tol);
        case BoundarySide::top: return make_face(nodes_[el.tr], nodes_[el.tl], tol);
        case BoundarySide::left: return make_face(nodes_[el.tl], nodes_[el.bl], tol);
    }
    return {};
}

void SlabMesh::set_x(int node_id, double x) { nodes_[node_id].x = x; }

double SlabMesh::signed_area() const {
    double area = 0.0;
    for (int e = 0; e < num_elements(); ++e) {
        const auto g = geometry(e);
        double a = 0.0;
        for (int i = 0; i < 4; ++i) {
            const Point& p = g.v[i];
            const Point& q = g.v[(i + 1) % 4];
            a += p.x * q.t - q.x * p.t;
        }
        area += 0.5 * a;
    }
    return area;
}

SlabMesh SlabMesh::next_slab(double t_next) const {
    if (!(t_next > t1_)) throw std::invalid_argument("next slab must advance in time");
    const double ratio = (t_next - t1_) / (t1_ - t0_);
    const int n = static_cast<int>(top_ids_.size());
    std::vector<Point> nodes;
    std::vector<int> bottom_ids, top_ids;
    for (int i = 0; i < n; ++i) {
        bottom_ids.push_back(static_cast<int>(nodes.size()));
        nodes.push_back({nodes_[top_ids_[i]].x, t1_});
    }
    for (int i = 0; i < n; ++i) {
        top_ids.push_back(static_cast<int>(nodes.size()));
        const double xt = nodes_[top_ids_[i]].x;
        const double xb = nodes_[bottom_ids_[i]].x;
        const bool pinned = (i == 0 || i == n - 1);
        nodes.push_back({pinned ? xt : xt + ratio * (xt - xb), t_next});
    }
    std::vector<Element> elements;
    for (int e = 0; e + 1 < n; ++e)
        elements.push_back({bottom_ids[e], bottom_ids[e + 1], top_ids[e + 1], top_ids[e]});
    return from_parts(std::move(nodes), std::move(bottom_ids), std::move(top_ids),
                      std::move(elements));
}

void SlabMesh::write(std::ostream& os) const {
    const auto old_prec = os.precision(std::numeric_limits<double>::max_digits10);
    os << "# mdgice slab mesh\n";
    os << "nodes " << num_nodes() << "\n";
    for (int i = 0; i < num_nodes(); ++i) os << i << ' ' << nodes_[i].x << ' ' << nodes_[i].t << '\n';
    os << "bottom";
    for (int id : bottom_ids_) os << ' ' << id;
    os << "\ntop";
    for (int id : top_ids_) os << ' ' << id;
    os << "\nelements " << num_elements() << "\n";
    for (int e = 0; e < num_elements(); ++e) {
        const Element& el = elements_[e];
        os << e << ' ' << el.bl << ' ' << el.br << ' ' << el.tr << ' ' << el.tl << '\n';
    }
    os.precision(old_prec);
}

SlabMesh SlabMesh::read(std::istream& is) {
    std::string word;
    auto expect = [&](const char* kw) {
        while (is >> word && word.rfind('#', 0) == 0) std::getline(is, word);
        if (word != kw) throw std::runtime_error(std::string("mesh file: expected ") + kw);
    };
    expect("nodes");
    int nn = 0;
    is >> nn;
    std::vector<Point> nodes(nn);
    for (int i = 0; i < nn; ++i) {
        int id = 0;
        is >> id >> nodes[i].x >> nodes[i].t;
        if (id != i) throw std::runtime_error("mesh file: node ids must be contiguous");
    }
    expect("bottom");
    std::vector<int> bottom, top;
    std::string line;
    std::getline(is, line);
    {
        std::istringstream ls(line);
        for (int id; ls >> id;) bottom.push_back(id);
    }
    expect("top");
    std::getline(is, line);
    {
        std::istringstream ls(line);
        for (int id; ls >> id;) top.push_back(id);
    }
    expect("elements");
    int ne = 0;
    is >> ne;
    std::vector<Element> elements(ne);
    for (int e = 0; e < ne; ++e) {
        int id = 0;
        is >> id >> elements[e].bl >> elements[e].br >> elements[e].tr >> elements[e].tl;
    }
    if (!is) throw std::runtime_error("mesh file: truncated");
    return from_parts(std::move(nodes), std::move(bottom), std::move(top), std::move(elements));
}

}  // namespace mdg
