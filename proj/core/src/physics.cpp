#include "mdgice/physics.hpp"

#include <cmath>
#include <sstream>

namespace mdg {

SystemDef SystemDef::advection(double speed) {
    SystemDef s;
    s.kind_ = SystemKind::advection;
    s.speed_ = speed;
    return s;
}

SystemDef SystemDef::burgers() {
    SystemDef s;
    s.kind_ = SystemKind::burgers;
    return s;
}

SystemDef SystemDef::euler(double gamma) {
    if (!(gamma > 1.0)) throw std::invalid_argument("euler system requires gamma > 1");
    SystemDef s;
    s.kind_ = SystemKind::euler;
    s.gamma_ = gamma;
    return s;
}

std::string SystemDef::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case SystemKind::advection: os << "advection(a=" << speed_ << ")"; break;
        case SystemKind::burgers: os << "burgers"; break;
        case SystemKind::euler: os << "euler(gamma=" << gamma_ << ")"; break;
    }
    return os.str();
}

namespace {

void require_euler(const SystemDef& sys) {
    if (sys.kind() != SystemKind::euler)
        throw std::invalid_argument("operation defined for the Euler system only");
}

}  // namespace

double pressure(const SystemDef& sys, const State& s) {
    require_euler(sys);
    const double rho = s[0];
    if (rho == 0.0) throw ZeroDensityError();
    return (sys.gamma() - 1.0) * (s[2] - 0.5 * s[1] * s[1] / rho);
}

State physical_flux(const SystemDef& sys, const State& s) {
    State f(s.size());
    switch (sys.kind()) {
        case SystemKind::advection:
            f[0] = sys.advection_speed() * s[0];
            break;
        case SystemKind::burgers:
            f[0] = 0.5 * s[0] * s[0];
            break;
        case SystemKind::euler: {
            const double p = pressure(sys, s);
            const double u = s[1] / s[0];
            f[0] = s[1];
            f[1] = s[1] * u + p;
            f[2] = u * (s[2] + p);
            break;
        }
    }
    return f;
}

State spacetime_flux_dot_n(const SystemDef& sys, const State& s, const SpaceTimeNormal& n) {
    return physical_flux(sys, s) * n.nx + s * n.nt;
}

State jump_flux(const SystemDef& sys, const State& left, const State& right,
                const SpaceTimeNormal& n) {
    return spacetime_flux_dot_n(sys, right, n) - spacetime_flux_dot_n(sys, left, n);
}

State average_flux(const SystemDef& sys, const State& left, const State& right,
                   const SpaceTimeNormal& n) {
    return 0.5 * (spacetime_flux_dot_n(sys, left, n) + spacetime_flux_dot_n(sys, right, n));
}

State primitive_to_conservative(const SystemDef& sys, const Primitive& w) {
    if (sys.kind() != SystemKind::euler) {
        State s(1);
        s[0] = w.rho;
        return s;
    }
    State s(3);
    s[0] = w.rho;
    s[1] = w.rho * w.v;
    s[2] = w.p / (sys.gamma() - 1.0) + 0.5 * w.rho * w.v * w.v;
    return s;
}

Primitive conservative_to_primitive(const SystemDef& sys, const State& s) {
    if (sys.kind() != SystemKind::euler) return {s[0], 0.0, 0.0};
    if (s[0] == 0.0) throw ZeroDensityError();
    return {s[0], s[1] / s[0], pressure(sys, s)};
}

double internal_energy(const SystemDef& sys, const State& s) {
    return pressure(sys, s) / ((sys.gamma() - 1.0) * s[0]);
}

std::optional<double> entropy_production(const SystemDef& sys, const State& s,
                                         const State& s_ref) {
    require_euler(sys);
    if (!(s[0] > 0.0) || !(s_ref[0] > 0.0)) return std::nullopt;
    const double p = pressure(sys, s);
    const double p_ref = pressure(sys, s_ref);
    if (!(p > 0.0) || !(p_ref > 0.0)) return std::nullopt;
    const double g = sys.gamma();
    return (std::log(p) - g * std::log(s[0])) - (std::log(p_ref) - g * std::log(s_ref[0]));
}

}  // namespace mdg
