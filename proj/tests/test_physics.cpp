#include "mdgice/physics.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mdg;

namespace {

State euler_state(double a, double b, double c) {
    State s(3);
    s << a, b, c;
    return s;
}

State scalar_state(double v) {
    State s(1);
    s << v;
    return s;
}

}  // namespace

TEST(Physics, PressureOfRestingGas) {
    const auto sys = SystemDef::euler(1.4);
    EXPECT_NEAR(pressure(sys, euler_state(1.0, 0.0, 2.5)), 1.0, 1e-15);
}

TEST(Physics, PressureOfMovingGas) {
    const auto sys = SystemDef::euler(1.4);
    EXPECT_NEAR(pressure(sys, euler_state(1.0, -2.0, 3.0)), 0.4, 1e-15);
}

TEST(Physics, NegativePressureIsReturnedUnclamped) {
    const auto sys = SystemDef::euler(1.4);
    EXPECT_LT(pressure(sys, euler_state(1.0, 3.0, 1.0)), 0.0);
}

TEST(Physics, EulerFluxOfRestingGasIsPressureOnly) {
    const auto sys = SystemDef::euler(1.4);
    const State f = physical_flux(sys, euler_state(1.0, 0.0, 2.5));
    EXPECT_NEAR(f[0], 0.0, 1e-15);
    EXPECT_NEAR(f[1], 1.0, 1e-15);
    EXPECT_NEAR(f[2], 0.0, 1e-15);
}

TEST(Physics, ScalarFluxes) {
    EXPECT_DOUBLE_EQ(physical_flux(SystemDef::burgers(), scalar_state(2.0))[0], 2.0);
    EXPECT_DOUBLE_EQ(physical_flux(SystemDef::advection(1.5), scalar_state(2.0))[0], 3.0);
}

TEST(Physics, SpaceTimeFluxIsLinearInNormal) {
    const auto sys = SystemDef::euler(1.4);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const State s = primitive_to_conservative(sys, {0.5 + 0.4 * (d(rng) + 1.0), d(rng), 0.2 + d(rng) * 0.1 + 0.2});
        const SpaceTimeNormal n1{d(rng), d(rng)}, n2{d(rng), d(rng)};
        const double a = d(rng), b = d(rng);
        const SpaceTimeNormal n{a * n1.nx + b * n2.nx, a * n1.nt + b * n2.nt};
        const State lhs = spacetime_flux_dot_n(sys, s, n);
        const State rhs = a * spacetime_flux_dot_n(sys, s, n1) + b * spacetime_flux_dot_n(sys, s, n2);
        EXPECT_LT((lhs - rhs).norm(), 1e-13);
    }
}

TEST(Physics, SpaceTimeFluxComponents) {
    const auto sys = SystemDef::burgers();
    const State u = scalar_state(3.0);
    EXPECT_DOUBLE_EQ(spacetime_flux_dot_n(sys, u, {1.0, 0.0})[0], 4.5);
    EXPECT_DOUBLE_EQ(spacetime_flux_dot_n(sys, u, {0.0, 1.0})[0], 3.0);
}

TEST(Physics, JumpIsAntisymmetricAndAverageSymmetric) {
    const auto sys = SystemDef::euler(1.4);
    const State l = primitive_to_conservative(sys, {1.0, 0.3, 1.0});
    const State r = primitive_to_conservative(sys, {0.125, -0.1, 0.1});
    const SpaceTimeNormal n{0.6, 0.8};
    EXPECT_LT((jump_flux(sys, l, r, n) + jump_flux(sys, r, l, n)).norm(), 1e-15);
    EXPECT_LT((average_flux(sys, l, r, n) - average_flux(sys, r, l, n)).norm(), 1e-15);
    EXPECT_LT(jump_flux(sys, l, l, n).norm(), 1e-15);
    EXPECT_LT((average_flux(sys, l, l, n) - spacetime_flux_dot_n(sys, l, n)).norm(), 1e-15);
}

TEST(Physics, PrimitiveRoundTrip) {
    const auto sys = SystemDef::euler(1.4);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(0.05, 5.0);
    for (int k = 0; k < 100; ++k) {
        const Primitive w{d(rng), d(rng) - 2.5, d(rng)};
        const Primitive back = conservative_to_primitive(sys, primitive_to_conservative(sys, w));
        EXPECT_NEAR(back.rho, w.rho, 1e-13 * w.rho);
        EXPECT_NEAR(back.v, w.v, 1e-12);
        EXPECT_NEAR(back.p, w.p, 1e-12 * std::max(1.0, w.p));
    }
}

TEST(Physics, ZeroDensityThrows) {
    const auto sys = SystemDef::euler(1.4);
    EXPECT_THROW(conservative_to_primitive(sys, euler_state(0.0, 0.0, 1.0)), ZeroDensityError);
}

TEST(Physics, InternalEnergy) {
    const auto sys = SystemDef::euler(1.4);
    const State s = primitive_to_conservative(sys, {2.0, 1.0, 0.8});
    EXPECT_NEAR(internal_energy(sys, s), 0.8 / (0.4 * 2.0), 1e-14);
}

TEST(Physics, EntropyProduction) {
    const auto sys = SystemDef::euler(1.4);
    const State ref = primitive_to_conservative(sys, {1.0, 0.0, 1.0});
    const State isentropic = primitive_to_conservative(sys, {0.5, 0.3, std::pow(0.5, 1.4)});
    ASSERT_TRUE(entropy_production(sys, isentropic, ref).has_value());
    EXPECT_NEAR(*entropy_production(sys, isentropic, ref), 0.0, 1e-13);
    const State bad = euler_state(1.0, 3.0, 1.0);
    EXPECT_FALSE(entropy_production(sys, bad, ref).has_value());
}

TEST(Physics, EulerFluxJacobianEigenvalues) {
    const auto sys = SystemDef::euler(1.4);
    const Primitive w{0.7, 0.4, 1.3};
    const State s = primitive_to_conservative(sys, w);
    Eigen::Matrix3d a;
    for (int j = 0; j < 3; ++j) {
        const double h = 1e-6;
        State sp = s, sm = s;
        sp[j] += h;
        sm[j] -= h;
        a.col(j) = (physical_flux(sys, sp) - physical_flux(sys, sm)) / (2 * h);
    }
    Eigen::EigenSolver<Eigen::Matrix3d> es(a);
    std::vector<double> ev;
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(es.eigenvalues()[i].imag(), 0.0, 1e-8);
        ev.push_back(es.eigenvalues()[i].real());
    }
    std::sort(ev.begin(), ev.end());
    const double c = std::sqrt(1.4 * w.p / w.rho);
    EXPECT_NEAR(ev[0], w.v - c, 1e-7);
    EXPECT_NEAR(ev[1], w.v, 1e-7);
    EXPECT_NEAR(ev[2], w.v + c, 1e-7);
}

TEST(Physics, StateSizes) {
    EXPECT_EQ(SystemDef::euler(1.4).ncomp(), 3);
    EXPECT_EQ(SystemDef::burgers().ncomp(), 1);
    EXPECT_EQ(SystemDef::advection(1.0).ncomp(), 1);
}
