/**
 * @file riemann_oracle.hpp
 * @brief Exact reference solutions: 1D Euler Riemann problem, planar Noh
 *        problem, scalar advection/Burgers Riemann problems, and the
 *        space-time L2 error against any of them.
 *
 * These are verification oracles only; the discretization never calls them.
 */
#pragma once

#include "mdgice/dg_space.hpp"
#include "mdgice/physics.hpp"
#include "mdgice/slab_mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace mdg {

enum class WaveKind { shock, rarefaction };

class VacuumError : public std::runtime_error {
public:
    VacuumError() : std::runtime_error("Riemann data generate vacuum") {}
};

class RiemannNonconvergence : public std::runtime_error {
public:
    RiemannNonconvergence() : std::runtime_error("Newton iteration for p* did not converge") {}
};

struct RiemannSolution {
    Primitive left;
    Primitive right;
    double gamma = 1.4;
    double p_star = 0.0;
    double u_star = 0.0;
    double rho_star_left = 0.0;
    double rho_star_right = 0.0;
    WaveKind left_wave = WaveKind::rarefaction;
    WaveKind right_wave = WaveKind::rarefaction;
    int newton_iterations = 0;

    double sound_speed_left() const;
    double sound_speed_right() const;
    /// Shock speed, or head/tail speeds of a rarefaction fan, per side.
    double left_head_speed() const;
    double left_tail_speed() const;
    double right_head_speed() const;
    double right_tail_speed() const;
};

/// Pressure-function Newton solve to |f(p*)| < 1e-13.
RiemannSolution solve_euler_riemann(const Primitive& left, const Primitive& right, double gamma);

/// Self-similar sample at xi = x / t.
Primitive sample(const RiemannSolution& sol, double xi);

/// Closed-form star pressure of a double rarefaction.
double two_rarefaction_pressure(const Primitive& left, const Primitive& right, double gamma);

/// Largest relative residual of the one-sided wave relations at the star
/// state: Rankine-Hugoniot (mass, momentum, energy) across shocks,
/// Riemann-invariant and isentrope constancy across rarefactions.
double wave_relation_residual(const RiemannSolution& sol);

/// Planar Noh problem: cold gas of density rho0 streaming into the origin
/// with speed u0 from both sides, pressure p0 ahead of the shocks.
struct NohSolution {
    double gamma = 5.0 / 3.0;
    double rho0 = 1.0;
    double u0 = 1.0;
    double p0 = 1e-6;

    double shock_speed() const { return 0.5 * (gamma - 1.0) * u0; }
    double post_density() const { return rho0 * (gamma + 1.0) / (gamma - 1.0); }
    double post_pressure() const { return 0.5 * (gamma + 1.0) * rho0 * u0 * u0; }
    /// Largest residual of the three jump conditions across the right shock
    /// (infinite-strength limit, pre-shock pressure neglected).
    double jump_condition_residual() const;
};

Primitive noh_exact(const NohSolution& noh, double x, double t);

enum class ScalarKind { advection, burgers };

/// Riemann solution of u_t + f(u)_x = 0 with a jump at x_i at t = 0.
double scalar_exact(ScalarKind kind, double ul, double ur, double a, double x_i, double x, double t);

/// A discontinuity (lo == hi) or a rarefaction fan [lo, hi] at a fixed time.
struct WaveFeature {
    double lo = 0.0;
    double hi = 0.0;
    bool is_fan() const { return hi > lo; }
};

/// Reference solution over the space-time slab in conservative variables.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual State conservative(double x, double t) const = 0;
    /// Wave positions at time t, left to right; empty when unknown.
    virtual std::vector<WaveFeature> waves(double /*t*/) const { return {}; }
};

class EulerRiemannOracle final : public Oracle {
public:
    EulerRiemannOracle(SystemDef sys, RiemannSolution sol, double x0 = 0.0, double t0 = 0.0)
        : sys_(sys), sol_(sol), x0_(x0), t0_(t0) {}
    State conservative(double x, double t) const override;
    std::vector<WaveFeature> waves(double t) const override;
    Primitive primitive(double x, double t) const;
    const RiemannSolution& solution() const { return sol_; }

private:
    SystemDef sys_;
    RiemannSolution sol_;
    double x0_;
    double t0_;
};

class NohOracle final : public Oracle {
public:
    explicit NohOracle(NohSolution noh) : noh_(noh), sys_(SystemDef::euler(noh.gamma)) {}
    State conservative(double x, double t) const override;
    std::vector<WaveFeature> waves(double t) const override;
    const NohSolution& solution() const { return noh_; }

private:
    NohSolution noh_;
    SystemDef sys_;
};

class ScalarRiemannOracle final : public Oracle {
public:
    ScalarRiemannOracle(ScalarKind kind, double ul, double ur, double a, double x_i)
        : kind_(kind), ul_(ul), ur_(ur), a_(a), xi_(x_i) {}
    State conservative(double x, double t) const override;
    std::vector<WaveFeature> waves(double t) const override;

private:
    ScalarKind kind_;
    double ul_, ur_, a_, xi_;
};

/// Oracle backed by an arbitrary callable, e.g. tabulated golden data.
class FunctionOracle final : public Oracle {
public:
    explicit FunctionOracle(std::function<State(double, double)> f) : f_(std::move(f)) {}
    State conservative(double x, double t) const override { return f_(x, t); }

private:
    std::function<State(double, double)> f_;
};

enum class Field { density, velocity, pressure, internal_energy, component0 };

/// Scalar field of a conservative state; scalar laws ignore the selector.
double field_value(const SystemDef& sys, const State& s, Field f);

/// sqrt( sum_e int_e (u_h - u_exact)^2 dOmega ) using |det J| weights and
/// `npoints` Gauss points per direction (default p + 6, at least order 2p+4).
double l2_spacetime_error(const SystemDef& sys, const Basis& basis, const SlabMesh& mesh,
                          const DgSolution& sol, const Oracle& oracle, Field field, int npoints = -1);

}  // namespace mdg
