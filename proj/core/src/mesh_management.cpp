#include "mdgice/mesh_management.hpp"

#include "mdgice/dg_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mdg {

std::string to_string(CellFlag f) {
    switch (f) {
        case CellFlag::healthy: return "healthy";
        case CellFlag::collapsed: return "collapsed";
        case CellFlag::tangled: return "tangled";
    }
    return "unknown";
}

int DegeneracyReport::count(CellFlag f) const {
    return static_cast<int>(std::count_if(cells.begin(), cells.end(), [f](const CellHealth& c) { return c.flag == f; }));
}

std::vector<int> DegeneracyReport::flagged(CellFlag f) const {
    std::vector<int> out;
    for (std::size_t e = 0; e < cells.size(); ++e)
        if (cells[e].flag == f) out.push_back(static_cast<int>(e));
    return out;
}

DegeneracyReport detect_degenerate(const SlabMesh& mesh, int quad_points) {
    DegeneracyReport rep;
    const int ne = mesh.num_elements();
    rep.eps_c = 1e-8 * mesh.width();
    rep.eps_j = 1e-10 * std::abs(mesh.signed_area()) / ne;
    const auto rule = gauss_rule_quad(quad_points);
    for (int e = 0; e < ne; ++e) {
        const QuadGeometry g = mesh.geometry(e);
        CellHealth h;
        h.min_det = INFINITY;
        for (const auto& q : rule) h.min_det = std::min(h.min_det, g.jacobian_det(q.xi, q.eta));
        h.top_length = std::abs(g.v[2].x - g.v[3].x);
        h.bottom_length = std::abs(g.v[1].x - g.v[0].x);
        if (h.top_length < rep.eps_c || std::abs(h.min_det) < rep.eps_j)
            h.flag = CellFlag::collapsed;
        else if (h.min_det < 0.0)
            h.flag = CellFlag::tangled;
        rep.cells.push_back(h);
    }
    return rep;
}

RemovalResult remove_collapsed(const SpaceTimeResidual& assembly, const Eigen::VectorXd& u,
                               const DegeneracyReport& report) {
    const SlabMesh mesh = assembly.unpack_mesh(u);
    const UnknownLayout& lay = assembly.layout();
    const int ne = mesh.num_elements();

    RemovalResult out;
    out.mesh = mesh;
    out.unknowns = u;
    out.element_map.resize(ne);
    for (int e = 0; e < ne; ++e) out.element_map[e] = e;
    out.node_map.resize(mesh.num_nodes());
    for (int n = 0; n < mesh.num_nodes(); ++n) out.node_map[n] = n;

    std::vector<int> candidates;
    std::vector<int> blocked;
    for (int e : report.flagged(CellFlag::collapsed)) {
        const CellHealth& h = report.cells[e];
        if (h.bottom_length < report.eps_c && h.top_length < report.eps_c)
            candidates.push_back(e);
        else
            blocked.push_back(e);
    }
    std::ostringstream msg;
    if (!blocked.empty()) {
        msg << "collapsed cells with an open edge kept:";
        for (int e : blocked) msg << ' ' << e;
    }
    if (candidates.empty()) {
        out.refused = !blocked.empty();
        out.message = msg.str();
        return out;
    }
    if (static_cast<int>(candidates.size()) >= ne) {
        out.refused = true;
        out.message = "removal would leave no element";
        return out;
    }

    // Walk the row, dropping candidate cells and merging their side nodes.
    std::vector<int> bottom = mesh.bottom_ids();
    std::vector<int> top = mesh.top_ids();
    std::vector<double> top_x;
    for (int id : top) top_x.push_back(mesh.node(id).x);
    std::vector<int> keep_elems;
    std::vector<int> alias(mesh.num_nodes());
    for (int n = 0; n < mesh.num_nodes(); ++n) alias[n] = n;

    std::vector<bool> drop(ne, false);
    for (int e : candidates) drop[e] = true;

    std::vector<int> new_bottom{bottom[0]};
    std::vector<int> new_top{top[0]};
    std::vector<double> new_top_x{top_x[0]};
    for (int e = 0; e < ne; ++e) {
        if (!drop[e]) {
            keep_elems.push_back(e);
            new_bottom.push_back(bottom[e + 1]);
            new_top.push_back(top[e + 1]);
            new_top_x.push_back(top_x[e + 1]);
            continue;
        }
        // The cell's right nodes fold onto its left nodes.
        alias[bottom[e + 1]] = new_bottom.back();
        const bool right_end = (e + 1 == ne);
        const bool left_pinned = (new_top.back() == top.front());
        const int keep = right_end ? top[e + 1] : new_top.back();
        const int gone = right_end ? new_top.back() : top[e + 1];
        double x = 0.5 * (new_top_x.back() + top_x[e + 1]);
        if (right_end) x = top_x[e + 1];
        else if (left_pinned) x = new_top_x.back();
        out.merged.emplace_back(std::min(keep, gone), std::max(keep, gone));
        alias[gone] = keep;
        new_top.back() = keep;
        new_top_x.back() = x;
        out.removed.push_back(e);
    }
    // Follow chains of aliases created by consecutive removals.
    for (int n = 0; n < mesh.num_nodes(); ++n) {
        int a = n;
        while (alias[a] != a) a = alias[a];
        alias[n] = a;
    }

    std::vector<int> compact(mesh.num_nodes(), -1);
    std::vector<Point> nodes;
    auto add = [&](int old, double x, double t) {
        if (compact[old] < 0) {
            compact[old] = static_cast<int>(nodes.size());
            nodes.push_back({x, t});
        }
        return compact[old];
    };
    std::vector<int> bottom_ids, top_ids;
    for (int id : new_bottom) bottom_ids.push_back(add(id, mesh.node(id).x, mesh.t_bottom()));
    for (std::size_t i = 0; i < new_top.size(); ++i)
        top_ids.push_back(add(new_top[i], new_top_x[i], mesh.t_top()));
    std::vector<Element> elements;
    for (std::size_t i = 0; i + 1 < bottom_ids.size(); ++i)
        elements.push_back({bottom_ids[i], bottom_ids[i + 1], top_ids[i + 1], top_ids[i]});

    out.mesh = SlabMesh::from_parts(std::move(nodes), std::move(bottom_ids), std::move(top_ids),
                                    std::move(elements));
    for (int n = 0; n < mesh.num_nodes(); ++n) out.node_map[n] = compact[alias[n]];
    std::fill(out.element_map.begin(), out.element_map.end(), -1);
    for (std::size_t i = 0; i < keep_elems.size(); ++i) out.element_map[keep_elems[i]] = static_cast<int>(i);

    const int nkeep = static_cast<int>(keep_elems.size());
    const int nmov = static_cast<int>(out.mesh.movable().size());
    out.unknowns.resize(nkeep * lay.block() + nmov);
    for (int i = 0; i < nkeep; ++i)
        out.unknowns.segment(i * lay.block(), lay.block()) = u.segment(keep_elems[i] * lay.block(), lay.block());
    for (int k = 0; k < nmov; ++k) out.unknowns[nkeep * lay.block() + k] = out.mesh.node(out.mesh.movable()[k]).x;
    out.message = msg.str();
    return out;
}

}  // namespace mdg
