#pragma once

#include "mdgice/dg_space.hpp"
#include "mdgice/riemann_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mdg::testing {

/// Integral of g over [a, b], split at the given breakpoints, with a
/// 6-point Gauss rule per piece.
template <class G>
double piecewise_integral(double a, double b, std::vector<double> breaks, G&& g) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    const auto rule = gauss_rule_1d(6);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = std::clamp(breaks[i], a, b);
        const double hi = std::clamp(breaks[i + 1], a, b);
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (const auto& q : rule) sum += q.w * half * g(mid + half * q.x);
    }
    return sum;
}

/// Boundary integral of the space-time flux (f(u), u) of the exact Burgers
/// Riemann solution around [x_a, x_b] x [0, T]. The box must contain every
/// wave up to time T.
inline double burgers_weak_balance(double ul, double ur, double x_i, double x_a, double x_b, double T) {
    const ScalarRiemannOracle oracle(ScalarKind::burgers, ul, ur, 0.0, x_i);
    std::vector<double> top_breaks;
    for (const auto& w : oracle.waves(T)) {
        top_breaks.push_back(w.lo);
        top_breaks.push_back(w.hi);
    }
    auto u = [&](double x, double t) { return oracle.conservative(x, t)[0]; };
    const double top = piecewise_integral(x_a, x_b, top_breaks, [&](double x) { return u(x, T); });
    const double bottom = piecewise_integral(x_a, x_b, {x_i}, [&](double x) { return u(x, 0.0); });
    auto f = [](double v) { return 0.5 * v * v; };
    const double right = piecewise_integral(0.0, T, {}, [&](double t) { return f(u(x_b, t)); });
    const double left = piecewise_integral(0.0, T, {}, [&](double t) { return f(u(x_a, t)); });
    return top - bottom + right - left;
}

}  // namespace mdg::testing
