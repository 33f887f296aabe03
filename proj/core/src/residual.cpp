#include "mdgice/residual.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mdg {

SpaceTimeResidual::SpaceTimeResidual(SystemDef sys, Basis basis, SlabMesh mesh, PastTrace past,
                                     State left_exterior, State right_exterior, bool bottom_chain_ice)
    : sys_(sys), basis_(std::move(basis)), mesh_(std::move(mesh)), past_(std::move(past)),
      left_ext_(std::move(left_exterior)), right_ext_(std::move(right_exterior)),
      bottom_ice_(bottom_chain_ice) {
    layout_.nelem = mesh_.num_elements();
    layout_.nbasis = basis_.size();
    layout_.ncomp = sys_.ncomp();
    layout_.nmovable = static_cast<int>(mesh_.movable().size());
    layout_.nbottom_tests = bottom_ice_ ? mesh_.num_faces() : 0;

    vol_rule_ = gauss_rule_quad(basis_.volume_points());
    const int n = basis_.size();
    for (const auto& q : vol_rule_) {
        std::vector<double> v(n), dx(n), de(n);
        basis_.eval(q.xi, q.eta, v);
        basis_.eval_grad(q.xi, q.eta, dx, de);
        vol_values_.push_back(std::move(v));
        vol_dxi_.push_back(std::move(dx));
        vol_deta_.push_back(std::move(de));
    }
    const auto face_rule = gauss_rule_1d(basis_.face_points());
    auto fill = [&](SideTable& t, auto&& ref_point) {
        for (const auto& q : face_rule) {
            t.s.push_back(q.x);
            t.w.push_back(q.w);
            const auto [xi, eta] = ref_point(q.x);
            t.values.push_back(basis_.eval(xi, eta));
        }
    };
    fill(bottom_, [](double s) { return std::pair{s, -1.0}; });
    fill(top_, [](double s) { return std::pair{s, 1.0}; });
    fill(left_, [](double s) { return std::pair{-1.0, s}; });
    fill(right_, [](double s) { return std::pair{1.0, s}; });
}

double SpaceTimeResidual::node_x(int node, const Eigen::VectorXd& u) const {
    const int k = mesh_.movable_index(node);
    return k >= 0 ? u[layout_.geometry(k)] : mesh_.node(node).x;
}

QuadGeometry SpaceTimeResidual::geometry(int e, const Eigen::VectorXd& u) const {
    const Element& el = mesh_.element(e);
    const double t0 = mesh_.t_bottom();
    const double t1 = mesh_.t_top();
    return {{Point{node_x(el.bl, u), t0}, Point{node_x(el.br, u), t0}, Point{node_x(el.tr, u), t1},
             Point{node_x(el.tl, u), t1}}};
}

FaceGeometry SpaceTimeResidual::face_geometry(int f, const Eigen::VectorXd& u) const {
    const InteriorFace& face = mesh_.face(f);
    FaceGeometry g;
    g.bottom = {node_x(face.bottom_node, u), mesh_.t_bottom()};
    g.top = {node_x(face.top_node, u), mesh_.t_top()};
    const double dx = g.top.x - g.bottom.x;
    const double dt = g.top.t - g.bottom.t;
    g.length = std::hypot(dx, dt);
    g.degenerate = g.length <= mesh_.coincidence_tol();
    g.normal = g.degenerate ? SpaceTimeNormal{0.0, 0.0}
                            : SpaceTimeNormal{dt / g.length, -dx / g.length};
    return g;
}

Eigen::VectorXd SpaceTimeResidual::pack(const DgSolution& sol, const SlabMesh& geometry) const {
    Eigen::VectorXd u(layout_.size());
    for (int j = 0; j < layout_.flow_size(); ++j) u[j] = sol.coeffs()[j];
    for (int k = 0; k < layout_.nmovable; ++k) u[layout_.geometry(k)] = geometry.node(mesh_.movable()[k]).x;
    return u;
}

DgSolution SpaceTimeResidual::unpack_solution(const Eigen::VectorXd& u) const {
    std::vector<double> c(u.data(), u.data() + layout_.flow_size());
    return DgSolution(layout_.nelem, layout_.nbasis, layout_.ncomp, std::move(c));
}

SlabMesh SpaceTimeResidual::unpack_mesh(const Eigen::VectorXd& u) const {
    SlabMesh m = mesh_;
    for (int k = 0; k < layout_.nmovable; ++k) m.set_x(mesh_.movable()[k], u[layout_.geometry(k)]);
    return m;
}

State SpaceTimeResidual::trace(int e, const Eigen::VectorXd& u, const std::vector<double>& values) const {
    const int m = layout_.ncomp;
    State s = State::Zero(m);
    const double* c = u.data() + e * layout_.block();
    for (int i = 0; i < layout_.nbasis; ++i)
        for (int k = 0; k < m; ++k) s[k] += c[i * m + k] * values[i];
    return s;
}

State SpaceTimeResidual::face_average(int f, int q, const Eigen::VectorXd& u,
                                      const FaceGeometry& g) const {
    const InteriorFace& face = mesh_.face(f);
    const State ul = trace(face.left_elem, u, right_.values[q]);
    const State ur = trace(face.right_elem, u, left_.values[q]);
    return average_flux(sys_, ul, ur, g.scaled_normal());
}

Eigen::VectorXd SpaceTimeResidual::element_residual(int e, const Eigen::VectorXd& u) const {
    const int n = layout_.nbasis;
    const int m = layout_.ncomp;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n * m);
    const QuadGeometry geo = geometry(e, u);

    // Volume term: -int F(U) . grad B dOmega, written with the cofactor
    // matrix so that det J never appears in a denominator.
    for (std::size_t q = 0; q < vol_rule_.size(); ++q) {
        const auto& qp = vol_rule_[q];
        const Eigen::Matrix2d J = geo.jacobian(qp.xi, qp.eta);
        const State U = trace(e, u, vol_values_[q]);
        const State f = physical_flux(sys_, U);
        for (int i = 0; i < n; ++i) {
            const double bx = J(1, 1) * vol_dxi_[q][i] - J(1, 0) * vol_deta_[q][i];
            const double bt = -J(0, 1) * vol_dxi_[q][i] + J(0, 0) * vol_deta_[q][i];
            for (int c = 0; c < m; ++c) r[i * m + c] -= qp.w * (f[c] * bx + U[c] * bt);
        }
    }

    const Element& el = mesh_.element(e);
    // Bottom: upwind in time, flux from the past trace.
    {
        const double xl = geo.v[0].x;
        const double xr = geo.v[1].x;
        const double half = 0.5 * (xr - xl);
        if (half != 0.0) {
            for (std::size_t q = 0; q < bottom_.s.size(); ++q) {
                const double s = bottom_.s[q];
                const double x = 0.5 * (1 - s) * xl + 0.5 * (1 + s) * xr;
                const State Up = past_(e, s, x);
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < m; ++c)
                        r[i * m + c] -= bottom_.w[q] * Up[c] * bottom_.values[q][i] * half;
            }
        }
    }
    // Top: the element's own trace.
    {
        const double half = 0.5 * (geo.v[2].x - geo.v[3].x);
        if (half != 0.0) {
            for (std::size_t q = 0; q < top_.s.size(); ++q) {
                const State U = trace(e, u, top_.values[q]);
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < m; ++c) r[i * m + c] += top_.w[q] * U[c] * top_.values[q][i] * half;
            }
        }
    }
    // Left side.
    const int fl = mesh_.left_face(e);
    if (fl >= 0) {
        const FaceGeometry g = face_geometry(fl, u);
        if (!g.degenerate) {
            for (std::size_t q = 0; q < left_.s.size(); ++q) {
                const State flux = face_average(fl, static_cast<int>(q), u, g);
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < m; ++c) r[i * m + c] -= left_.w[q] * flux[c] * left_.values[q][i];
            }
        }
    } else {
        const double half_dt = 0.5 * (geo.v[3].t - geo.v[0].t);
        const double half_dx = 0.5 * (geo.v[3].x - geo.v[0].x);
        const SpaceTimeNormal nout{-half_dt, half_dx};
        for (std::size_t q = 0; q < left_.s.size(); ++q) {
            const State U = trace(e, u, left_.values[q]);
            const State flux = average_flux(sys_, U, left_ext_, nout);
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < m; ++c) r[i * m + c] += left_.w[q] * flux[c] * left_.values[q][i];
        }
    }
    // Right side.
    const int fr = mesh_.right_face(e);
    if (fr >= 0) {
        const FaceGeometry g = face_geometry(fr, u);
        if (!g.degenerate) {
            for (std::size_t q = 0; q < right_.s.size(); ++q) {
                const State flux = face_average(fr, static_cast<int>(q), u, g);
                for (int i = 0; i < n; ++i)
                    for (int c = 0; c < m; ++c) r[i * m + c] += right_.w[q] * flux[c] * right_.values[q][i];
            }
        }
    } else {
        const double half_dt = 0.5 * (geo.v[2].t - geo.v[1].t);
        const double half_dx = 0.5 * (geo.v[2].x - geo.v[1].x);
        const SpaceTimeNormal nout{half_dt, -half_dx};
        for (std::size_t q = 0; q < right_.s.size(); ++q) {
            const State U = trace(e, u, right_.values[q]);
            const State flux = average_flux(sys_, U, right_ext_, nout);
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < m; ++c) r[i * m + c] += right_.w[q] * flux[c] * right_.values[q][i];
        }
    }
    (void)el;
    return r;
}

State SpaceTimeResidual::ice_residual(int k, const Eigen::VectorXd& u) const {
    const int m = layout_.ncomp;
    State r = State::Zero(m);
    const bool top = k < layout_.nmovable;
    const int node = top ? mesh_.movable()[k] : -1;
    for (int f = 0; f < mesh_.num_faces(); ++f) {
        const InteriorFace& face = mesh_.face(f);
        if (top ? face.top_node != node : f != k - layout_.nmovable) continue;
        const FaceGeometry g = face_geometry(f, u);
        if (g.degenerate) continue;
        const SpaceTimeNormal N = g.scaled_normal();
        for (std::size_t q = 0; q < left_.s.size(); ++q) {
            const double hat = top ? 0.5 * (1.0 + left_.s[q]) : 0.5 * (1.0 - left_.s[q]);
            const State ul = trace(face.left_elem, u, right_.values[q]);
            const State ur = trace(face.right_elem, u, left_.values[q]);
            r += left_.w[q] * hat * jump_flux(sys_, ul, ur, N);
        }
    }
    return r;
}

Eigen::VectorXd SpaceTimeResidual::residual(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r(layout_.rows());
    const int b = layout_.block();
    for (int e = 0; e < layout_.nelem; ++e) r.segment(e * b, b) = element_residual(e, u);
    for (int k = 0; k < layout_.ice_tests(); ++k) {
        const State s = ice_residual(k, u);
        for (int c = 0; c < layout_.ncomp; ++c) r[layout_.ice_row(k, c)] = s[c];
    }
    return r;
}

std::vector<int> SpaceTimeResidual::dependent_elements(int j) const {
    std::set<int> out;
    if (j < layout_.flow_size()) {
        const int e = j / layout_.block();
        out.insert(e);
        if (e > 0) out.insert(e - 1);
        if (e + 1 < layout_.nelem) out.insert(e + 1);
    } else {
        const int node = mesh_.movable()[j - layout_.flow_size()];
        for (int e = 0; e < layout_.nelem; ++e) {
            const Element& el = mesh_.element(e);
            if (el.tl == node || el.tr == node || el.bl == node || el.br == node) out.insert(e);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<int> SpaceTimeResidual::dependent_ice_nodes(int j) const {
    std::set<int> out;
    auto add_faces_of = [&](auto&& pred) {
        for (int f = 0; f < mesh_.num_faces(); ++f) {
            const InteriorFace& face = mesh_.face(f);
            if (!pred(face)) continue;
            const int k = mesh_.movable_index(face.top_node);
            if (k >= 0) out.insert(k);
            if (bottom_ice_) out.insert(layout_.nmovable + f);
        }
    };
    if (j < layout_.flow_size()) {
        const int e = j / layout_.block();
        add_faces_of([e](const InteriorFace& f) { return f.left_elem == e || f.right_elem == e; });
    } else {
        const int node = mesh_.movable()[j - layout_.flow_size()];
        add_faces_of([node](const InteriorFace& f) { return f.top_node == node || f.bottom_node == node; });
    }
    return {out.begin(), out.end()};
}

Eigen::SparseMatrix<double> SpaceTimeResidual::jacobian(const Eigen::VectorXd& u) const {
    const int b = layout_.block();
    const int m = layout_.ncomp;
    std::vector<Eigen::VectorXd> base_dg(layout_.nelem);
    std::vector<State> base_ice(layout_.ice_tests());
    for (int e = 0; e < layout_.nelem; ++e) base_dg[e] = element_residual(e, u);
    for (int k = 0; k < layout_.ice_tests(); ++k) base_ice[k] = ice_residual(k, u);

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd up = u;
    for (int j = 0; j < layout_.size(); ++j) {
        const double h = fd_epsilon * std::max(1.0, std::abs(u[j]));
        up[j] = u[j] + h;
        const double dh = up[j] - u[j];
        for (int e : dependent_elements(j)) {
            const Eigen::VectorXd r = element_residual(e, up);
            for (int i = 0; i < b; ++i) {
                const double d = (r[i] - base_dg[e][i]) / dh;
                if (d != 0.0) trip.emplace_back(e * b + i, j, d);
            }
        }
        for (int k : dependent_ice_nodes(j)) {
            const State r = ice_residual(k, up);
            for (int c = 0; c < m; ++c) {
                const double d = (r[c] - base_ice[k][c]) / dh;
                if (d != 0.0) trip.emplace_back(layout_.ice_row(k, c), j, d);
            }
        }
        up[j] = u[j];
    }
    Eigen::SparseMatrix<double> J(layout_.rows(), layout_.size());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

Eigen::MatrixXd SpaceTimeResidual::jacobian_dense(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd r0 = residual(u);
    Eigen::MatrixXd J(layout_.rows(), layout_.size());
    Eigen::VectorXd up = u;
    for (int j = 0; j < layout_.size(); ++j) {
        const double h = fd_epsilon * std::max(1.0, std::abs(u[j]));
        up[j] = u[j] + h;
        J.col(j) = (residual(up) - r0) / (up[j] - u[j]);
        up[j] = u[j];
    }
    return J;
}

State SpaceTimeResidual::boundary_flux_balance(const Eigen::VectorXd& u) const {
    const int m = layout_.ncomp;
    State total = State::Zero(m);
    for (int e = 0; e < layout_.nelem; ++e) {
        const QuadGeometry geo = geometry(e, u);
        const double hb = 0.5 * (geo.v[1].x - geo.v[0].x);
        const double ht = 0.5 * (geo.v[2].x - geo.v[3].x);
        for (std::size_t q = 0; q < bottom_.s.size(); ++q) {
            const double s = bottom_.s[q];
            const double x = 0.5 * (1 - s) * geo.v[0].x + 0.5 * (1 + s) * geo.v[1].x;
            if (hb != 0.0) total -= bottom_.w[q] * hb * past_(e, s, x);
            if (ht != 0.0) total += top_.w[q] * ht * trace(e, u, top_.values[q]);
        }
    }
    {
        const QuadGeometry geo = geometry(0, u);
        const SpaceTimeNormal nout{-0.5 * (geo.v[3].t - geo.v[0].t), 0.5 * (geo.v[3].x - geo.v[0].x)};
        for (std::size_t q = 0; q < left_.s.size(); ++q)
            total += left_.w[q] * average_flux(sys_, trace(0, u, left_.values[q]), left_ext_, nout);
    }
    {
        const int e = layout_.nelem - 1;
        const QuadGeometry geo = geometry(e, u);
        const SpaceTimeNormal nout{0.5 * (geo.v[2].t - geo.v[1].t), -0.5 * (geo.v[2].x - geo.v[1].x)};
        for (std::size_t q = 0; q < right_.s.size(); ++q)
            total += right_.w[q] * average_flux(sys_, trace(e, u, right_.values[q]), right_ext_, nout);
    }
    return total;
}

StateCensus SpaceTimeResidual::census(const Eigen::VectorXd& u) const {
    StateCensus out;
    for (int e = 0; e < layout_.nelem; ++e) {
        for (std::size_t q = 0; q < vol_rule_.size(); ++q) {
            const State U = trace(e, u, vol_values_[q]);
            ++out.points;
            if (sys_.kind() != SystemKind::euler) continue;
            if (U[0] <= 0.0) ++out.negative_density;
            if (U[0] != 0.0 && pressure(sys_, U) <= 0.0) ++out.negative_pressure;
        }
    }
    return out;
}

}  // namespace mdg
