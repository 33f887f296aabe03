#include "mdgice/riemann_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace mdg {

namespace {

double sound(double gamma, const Primitive& w) { return std::sqrt(gamma * w.p / w.rho); }

// Toro's f_K(p) and its derivative for one side.
void pressure_function(double p, const Primitive& w, double gamma, double& f, double& df) {
    const double c = sound(gamma, w);
    if (p > w.p) {
        const double A = 2.0 / ((gamma + 1.0) * w.rho);
        const double B = (gamma - 1.0) / (gamma + 1.0) * w.p;
        const double q = std::sqrt(A / (p + B));
        f = (p - w.p) * q;
        df = q * (1.0 - 0.5 * (p - w.p) / (p + B));
    } else {
        const double z = (gamma - 1.0) / (2.0 * gamma);
        f = 2.0 * c / (gamma - 1.0) * (std::pow(p / w.p, z) - 1.0);
        df = std::pow(p / w.p, -(gamma + 1.0) / (2.0 * gamma)) / (w.rho * c);
    }
}

double star_density(double p, const Primitive& w, double gamma) {
    if (p > w.p) {
        const double r = p / w.p;
        const double g = (gamma - 1.0) / (gamma + 1.0);
        return w.rho * (r + g) / (g * r + 1.0);
    }
    return w.rho * std::pow(p / w.p, 1.0 / gamma);
}

}  // namespace

double RiemannSolution::sound_speed_left() const { return sound(gamma, left); }
double RiemannSolution::sound_speed_right() const { return sound(gamma, right); }

double RiemannSolution::left_head_speed() const {
    const double cl = sound_speed_left();
    if (left_wave == WaveKind::rarefaction) return left.v - cl;
    return left.v - cl * std::sqrt((gamma + 1.0) / (2.0 * gamma) * p_star / left.p + (gamma - 1.0) / (2.0 * gamma));
}

double RiemannSolution::left_tail_speed() const {
    if (left_wave == WaveKind::shock) return left_head_speed();
    const double cs = sound_speed_left() * std::pow(p_star / left.p, (gamma - 1.0) / (2.0 * gamma));
    return u_star - cs;
}

double RiemannSolution::right_head_speed() const {
    const double cr = sound_speed_right();
    if (right_wave == WaveKind::rarefaction) return right.v + cr;
    return right.v + cr * std::sqrt((gamma + 1.0) / (2.0 * gamma) * p_star / right.p + (gamma - 1.0) / (2.0 * gamma));
}

double RiemannSolution::right_tail_speed() const {
    if (right_wave == WaveKind::shock) return right_head_speed();
    const double cs = sound_speed_right() * std::pow(p_star / right.p, (gamma - 1.0) / (2.0 * gamma));
    return u_star + cs;
}

double two_rarefaction_pressure(const Primitive& left, const Primitive& right, double gamma) {
    const double z = (gamma - 1.0) / (2.0 * gamma);
    const double cl = sound(gamma, left);
    const double cr = sound(gamma, right);
    const double num = cl + cr - 0.5 * (gamma - 1.0) * (right.v - left.v);
    const double den = cl / std::pow(left.p, z) + cr / std::pow(right.p, z);
    return std::pow(num / den, 1.0 / z);
}

RiemannSolution solve_euler_riemann(const Primitive& left, const Primitive& right, double gamma) {
    if (!(left.rho > 0 && right.rho > 0 && left.p > 0 && right.p > 0))
        throw std::invalid_argument("Riemann data must have positive density and pressure");
    const double cl = sound(gamma, left);
    const double cr = sound(gamma, right);
    if (2.0 / (gamma - 1.0) * (cl + cr) <= right.v - left.v) throw VacuumError();

    RiemannSolution sol;
    sol.left = left;
    sol.right = right;
    sol.gamma = gamma;

    // Start from the two-rarefaction guess; robust for every test problem here.
    double p = std::max(two_rarefaction_pressure(left, right, gamma), 1e-14);
    double f = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        double fl, dfl, fr, dfr;
        pressure_function(p, left, gamma, fl, dfl);
        pressure_function(p, right, gamma, fr, dfr);
        f = fl + fr + (right.v - left.v);
        sol.newton_iterations = it;
        if (std::abs(f) < 1e-13) {
            converged = true;
            break;
        }
        double pn = p - f / (dfl + dfr);
        if (pn <= 0.0) pn = 0.5 * p;
        p = pn;
    }
    if (!converged) throw RiemannNonconvergence();

    double fl, dfl, fr, dfr;
    pressure_function(p, left, gamma, fl, dfl);
    pressure_function(p, right, gamma, fr, dfr);
    sol.p_star = p;
    sol.u_star = 0.5 * (left.v + right.v) + 0.5 * (fr - fl);
    sol.left_wave = p > left.p ? WaveKind::shock : WaveKind::rarefaction;
    sol.right_wave = p > right.p ? WaveKind::shock : WaveKind::rarefaction;
    sol.rho_star_left = star_density(p, left, gamma);
    sol.rho_star_right = star_density(p, right, gamma);
    return sol;
}

Primitive sample(const RiemannSolution& s, double xi) {
    const double g = s.gamma;
    if (xi <= s.u_star) {
        const Primitive& w = s.left;
        const double c = s.sound_speed_left();
        if (s.left_wave == WaveKind::shock) {
            if (xi <= s.left_head_speed()) return w;
            return {s.rho_star_left, s.u_star, s.p_star};
        }
        if (xi <= s.left_head_speed()) return w;
        if (xi >= s.left_tail_speed()) return {s.rho_star_left, s.u_star, s.p_star};
        const double a = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * c) * (w.v - xi);
        return {w.rho * std::pow(a, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * w.v + xi),
                w.p * std::pow(a, 2.0 * g / (g - 1.0))};
    }
    const Primitive& w = s.right;
    const double c = s.sound_speed_right();
    if (s.right_wave == WaveKind::shock) {
        if (xi >= s.right_head_speed()) return w;
        return {s.rho_star_right, s.u_star, s.p_star};
    }
    if (xi >= s.right_head_speed()) return w;
    if (xi <= s.right_tail_speed()) return {s.rho_star_right, s.u_star, s.p_star};
    const double a = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * c) * (w.v - xi);
    return {w.rho * std::pow(a, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * w.v + xi),
            w.p * std::pow(a, 2.0 * g / (g - 1.0))};
}

double wave_relation_residual(const RiemannSolution& s) {
    const double g = s.gamma;
    double worst = 0.0;
    auto side = [&](const Primitive& w, double rho_star, WaveKind kind, double speed, double sign) {
        const Primitive star{rho_star, s.u_star, s.p_star};
        if (kind == WaveKind::shock) {
            auto cons = [&](const Primitive& q) {
                return Eigen::Vector3d(q.rho, q.rho * q.v, q.p / (g - 1.0) + 0.5 * q.rho * q.v * q.v);
            };
            auto flux = [&](const Primitive& q) {
                const double E = q.p / (g - 1.0) + 0.5 * q.rho * q.v * q.v;
                return Eigen::Vector3d(q.rho * q.v, q.rho * q.v * q.v + q.p, q.v * (E + q.p));
            };
            const Eigen::Vector3d jump_f = flux(star) - flux(w);
            const Eigen::Vector3d jump_u = cons(star) - cons(w);
            const Eigen::Vector3d rh = jump_f - speed * jump_u;
            const Eigen::Vector3d scale = flux(star).cwiseAbs() + flux(w).cwiseAbs() +
                                          std::abs(speed) * (cons(star).cwiseAbs() + cons(w).cwiseAbs());
            for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(rh[i]) / std::max(scale[i], 1e-300));
        } else {
            const double c = std::sqrt(g * w.p / w.rho);
            const double cs = std::sqrt(g * star.p / star.rho);
            const double inv = w.v + sign * 2.0 * c / (g - 1.0);
            const double inv_star = star.v + sign * 2.0 * cs / (g - 1.0);
            worst = std::max(worst, std::abs(inv - inv_star) / (std::abs(inv) + std::abs(inv_star) + 1e-300));
            const double ent = w.p / std::pow(w.rho, g);
            const double ent_star = star.p / std::pow(star.rho, g);
            worst = std::max(worst, std::abs(ent - ent_star) / ent);
        }
    };
    side(s.left, s.rho_star_left, s.left_wave, s.left_head_speed(), 1.0);
    side(s.right, s.rho_star_right, s.right_wave, s.right_head_speed(), -1.0);
    return worst;
}

double NohSolution::jump_condition_residual() const {
    // Right shock, pre-shock state (rho0, -u0, 0), post-shock (rho2, 0, p2).
    const double D = shock_speed();
    const double r2 = post_density();
    const double p2 = post_pressure();
    const double g = gamma;
    const double ul = 0.0, ur = -u0;
    const double mass = (r2 * ul - rho0 * ur) - D * (r2 - rho0);
    const double mom = (r2 * ul * ul + p2 - rho0 * ur * ur) - D * (r2 * ul - rho0 * ur);
    const double El = p2 / (g - 1.0) + 0.5 * r2 * ul * ul;
    const double Er = 0.5 * rho0 * ur * ur;
    const double energy = (ul * (El + p2) - ur * Er) - D * (El - Er);
    const double scale = rho0 * u0 * u0 * u0 + p2;
    return std::max({std::abs(mass) / (rho0 * u0), std::abs(mom) / (rho0 * u0 * u0 + p2),
                     std::abs(energy) / scale});
}

Primitive noh_exact(const NohSolution& noh, double x, double t) {
    if (t <= 0.0) return {noh.rho0, x < 0 ? noh.u0 : (x > 0 ? -noh.u0 : 0.0), noh.p0};
    if (std::abs(x) < noh.shock_speed() * t) return {noh.post_density(), 0.0, noh.post_pressure()};
    return {noh.rho0, x < 0 ? noh.u0 : -noh.u0, noh.p0};
}

double scalar_exact(ScalarKind kind, double ul, double ur, double a, double x_i, double x, double t) {
    if (kind == ScalarKind::advection) return (x - a * t < x_i) ? ul : ur;
    if (t <= 0.0) return x < x_i ? ul : ur;
    const double xi = (x - x_i) / t;
    if (ul > ur) return xi < 0.5 * (ul + ur) ? ul : ur;
    if (xi <= ul) return ul;
    if (xi >= ur) return ur;
    return xi;
}

State EulerRiemannOracle::conservative(double x, double t) const {
    return primitive_to_conservative(sys_, primitive(x, t));
}

Primitive EulerRiemannOracle::primitive(double x, double t) const {
    const double dt = t - t0_;
    if (dt <= 0.0) return x < x0_ ? sol_.left : sol_.right;
    return sample(sol_, (x - x0_) / dt);
}

std::vector<WaveFeature> EulerRiemannOracle::waves(double t) const {
    const double dt = t - t0_;
    if (dt <= 0.0) return {{x0_, x0_}};
    auto at = [&](double speed) { return x0_ + speed * dt; };
    std::vector<WaveFeature> out;
    if (sol_.left_wave == WaveKind::shock) out.push_back({at(sol_.left_head_speed()), at(sol_.left_head_speed())});
    else out.push_back({at(sol_.left_head_speed()), at(sol_.left_tail_speed())});
    out.push_back({at(sol_.u_star), at(sol_.u_star)});
    if (sol_.right_wave == WaveKind::shock)
        out.push_back({at(sol_.right_head_speed()), at(sol_.right_head_speed())});
    else out.push_back({at(sol_.right_tail_speed()), at(sol_.right_head_speed())});
    return out;
}

State NohOracle::conservative(double x, double t) const {
    return primitive_to_conservative(sys_, noh_exact(noh_, x, t));
}

State ScalarRiemannOracle::conservative(double x, double t) const {
    State s(1);
    s[0] = scalar_exact(kind_, ul_, ur_, a_, xi_, x, t);
    return s;
}

std::vector<WaveFeature> NohOracle::waves(double t) const {
    const double x = noh_.shock_speed() * std::max(t, 0.0);
    return {{-x, -x}, {x, x}};
}

std::vector<WaveFeature> ScalarRiemannOracle::waves(double t) const {
    t = std::max(t, 0.0);
    if (kind_ == ScalarKind::advection) return {{xi_ + a_ * t, xi_ + a_ * t}};
    if (ul_ >= ur_) {
        const double x = xi_ + 0.5 * (ul_ + ur_) * t;
        return {{x, x}};
    }
    return {{xi_ + ul_ * t, xi_ + ur_ * t}};
}

double field_value(const SystemDef& sys, const State& s, Field f) {
    if (sys.kind() != SystemKind::euler || f == Field::component0) return s[0];
    switch (f) {
        case Field::density: return s[0];
        case Field::velocity: return s[1] / s[0];
        case Field::pressure: return pressure(sys, s);
        case Field::internal_energy: return internal_energy(sys, s);
        case Field::component0: break;
    }
    return s[0];
}

double l2_spacetime_error(const SystemDef& sys, const Basis& basis, const SlabMesh& mesh,
                          const DgSolution& sol, const Oracle& oracle, Field field, int npoints) {
    if (npoints < 0) npoints = basis.degree() + 6;
    const auto rule = gauss_rule_quad(npoints);
    std::vector<double> vals(basis.size());
    double sum = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const QuadGeometry geo = mesh.geometry(e);
        for (const auto& q : rule) {
            const double det = std::abs(geo.jacobian_det(q.xi, q.eta));
            if (det == 0.0) continue;
            basis.eval(q.xi, q.eta, vals);
            const State uh = combine(sol.element(e), vals, sol.ncomp());
            const Point p = geo.map(q.xi, q.eta);
            const double d = field_value(sys, uh, field) - field_value(sys, oracle.conservative(p.x, p.t), field);
            sum += q.w * det * d * d;
        }
    }
    return std::sqrt(sum);
}

}  // namespace mdg
