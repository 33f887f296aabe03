/**
 * @file physics.hpp
 * @brief Conservation-law definitions: conservative states, physical and
 *        space-time fluxes, perfect-gas equation of state, diagnostics.
 *
 * A 1D unsteady law dU/dt + df/dx = 0 is treated as a 2D steady law in the
 * (x, t) plane with space-time flux F = (f(U), U).
 */
#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>

namespace mdg {

/// Conservative state. Length 1 for scalar laws, 3 for Euler (rho, rho*u, rho*e).
/// Fixed maximum size so that states never touch the heap.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Primitive variables of the 1D Euler system.
struct Primitive {
    double rho = 0.0;
    double v = 0.0;
    double p = 0.0;
};

/// Thrown when a state with exactly zero density has to be inverted.
class ZeroDensityError : public std::domain_error {
public:
    ZeroDensityError() : std::domain_error("zero density") {}
};

/// A direction in the (x, t) plane. Unit length for face normals.
struct SpaceTimeNormal {
    double nx = 0.0;
    double nt = 0.0;
};

enum class SystemKind { advection, burgers, euler };

class SystemDef {
public:
    static SystemDef advection(double speed);
    static SystemDef burgers();
    static SystemDef euler(double gamma);

    SystemKind kind() const { return kind_; }
    int ncomp() const { return kind_ == SystemKind::euler ? 3 : 1; }
    double gamma() const { return gamma_; }
    double advection_speed() const { return speed_; }

    std::string describe() const;

private:
    SystemKind kind_ = SystemKind::burgers;
    double gamma_ = 1.4;
    double speed_ = 0.0;
};

/// Perfect-gas pressure (gamma - 1) * (rho*e - (rho*u)^2 / (2 rho)).
/// Negative values are returned as-is.
double pressure(const SystemDef& sys, const State& s);

/// Flux f(U) of the 1D law.
State physical_flux(const SystemDef& sys, const State& s);

/// F(U) . n = f(U) n_x + U n_t.
State spacetime_flux_dot_n(const SystemDef& sys, const State& s, const SpaceTimeNormal& n);

/// [F . n] = F(U_R) . n - F(U_L) . n
State jump_flux(const SystemDef& sys, const State& left, const State& right,
                const SpaceTimeNormal& n);

/// Arithmetic mean of the two one-sided space-time fluxes.
State average_flux(const SystemDef& sys, const State& left, const State& right,
                   const SpaceTimeNormal& n);

/// Euler: (rho, v, p) -> (rho, rho v, p/(gamma-1) + rho v^2/2).
/// Scalar systems take the first argument as the state value.
State primitive_to_conservative(const SystemDef& sys, const Primitive& w);
Primitive conservative_to_primitive(const SystemDef& sys, const State& s);

/// Specific internal energy p / ((gamma-1) rho).
double internal_energy(const SystemDef& sys, const State& s);

/// ln(p/rho^gamma) - ln(p_ref/rho_ref^gamma). Empty when either state has
/// nonpositive density or pressure.
std::optional<double> entropy_production(const SystemDef& sys, const State& s,
                                         const State& s_ref);

}  // namespace mdg
