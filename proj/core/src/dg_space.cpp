#include "mdgice/dg_space.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace mdg {

QuadratureRule1D gauss_rule_1d(int npoints) {
    if (npoints < 1) throw std::invalid_argument("gauss rule needs at least one point");
    QuadratureRule1D rule(npoints);
    const int n = npoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Three-term recurrence for P_n and P_{n-1}.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double pn = (n == 1) ? x : p1;
            const double pnm1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        const double pn = (n == 1) ? x : p1;
        const double pnm1 = (n == 1) ? 1.0 : p0;
        dp = n * (x * pn - pnm1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[i] = {-x, w};
        rule[n - 1 - i] = {x, w};
    }
    if (n % 2 == 1) rule[n / 2].x = 0.0;
    return rule;
}

QuadratureRule2D gauss_rule_quad(int npoints) {
    const auto r = gauss_rule_1d(npoints);
    QuadratureRule2D out;
    out.reserve(r.size() * r.size());
    for (const auto& qe : r)
        for (const auto& qx : r) out.push_back({qx.x, qe.x, qx.w * qe.w});
    return out;
}

int gauss_points_for_degree(int degree) { return degree < 1 ? 1 : degree / 2 + 1; }

double legendre_normalized(int n, double x) {
    double p0 = 1.0, p1 = x;
    double pn = (n == 0) ? 1.0 : x;
    for (int k = 2; k <= n; ++k) {
        pn = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pn;
    }
    return std::sqrt(0.5 * (2 * n + 1)) * pn;
}

double legendre_normalized_deriv(int n, double x) {
    // P_n' = sum over k = n-1, n-3, ... of (2k+1) P_k
    double d = 0.0;
    for (int k = n - 1; k >= 0; k -= 2) d += (2 * k + 1) * legendre_normalized(k, x) / std::sqrt(0.5 * (2 * k + 1));
    return std::sqrt(0.5 * (2 * n + 1)) * d;
}

Basis::Basis(BasisFamily family, int degree) : family_(family), degree_(degree) {
    if (degree < 0 || degree > 3) throw UnsupportedDegreeError(degree);
    const int maxtotal = family == BasisFamily::P ? degree : 2 * degree;
    for (int total = 0; total <= maxtotal; ++total)
        for (int b = 0; b <= total; ++b) {
            const int a = total - b;
            if (a > degree || b > degree) continue;
            exponents_.push_back({a, b});
        }
}

void Basis::eval(double xi, double eta, std::span<double> values) const {
    double lx[4], le[4];
    for (int k = 0; k <= degree_; ++k) {
        lx[k] = legendre_normalized(k, xi);
        le[k] = legendre_normalized(k, eta);
    }
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        values[i] = lx[exponents_[i][0]] * le[exponents_[i][1]];
}

void Basis::eval_grad(double xi, double eta, std::span<double> dxi, std::span<double> deta) const {
    double lx[4], le[4], dlx[4], dle[4];
    for (int k = 0; k <= degree_; ++k) {
        lx[k] = legendre_normalized(k, xi);
        le[k] = legendre_normalized(k, eta);
        dlx[k] = legendre_normalized_deriv(k, xi);
        dle[k] = legendre_normalized_deriv(k, eta);
    }
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        const auto [a, b] = exponents_[i];
        dxi[i] = dlx[a] * le[b];
        deta[i] = lx[a] * dle[b];
    }
}

std::vector<double> Basis::eval(double xi, double eta) const {
    std::vector<double> v(size());
    eval(xi, eta, v);
    return v;
}

std::vector<std::array<double, 2>> Basis::eval_grad(double xi, double eta) const {
    std::vector<double> gx(size()), ge(size());
    eval_grad(xi, eta, gx, ge);
    std::vector<std::array<double, 2>> out(size());
    for (int i = 0; i < size(); ++i) out[i] = {gx[i], ge[i]};
    return out;
}

DgSolution::DgSolution(int num_elements, int nbasis, int ncomp)
    : nelem_(num_elements), nbasis_(nbasis), ncomp_(ncomp),
      coeffs_(static_cast<std::size_t>(num_elements * nbasis * ncomp), 0.0) {}

DgSolution::DgSolution(int num_elements, int nbasis, int ncomp, std::vector<double> coeffs)
    : nelem_(num_elements), nbasis_(nbasis), ncomp_(ncomp), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(nelem_ * nbasis_ * ncomp_))
        throw std::invalid_argument("coefficient array has the wrong length");
}

State combine(std::span<const double> coeffs, std::span<const double> values, int ncomp) {
    State s = State::Zero(ncomp);
    for (std::size_t i = 0; i < values.size(); ++i)
        for (int c = 0; c < ncomp; ++c) s[c] += coeffs[i * ncomp + c] * values[i];
    return s;
}

State eval_solution(const Basis& basis, const DgSolution& sol, int e, double xi, double eta) {
    const auto v = basis.eval(xi, eta);
    return combine(sol.element(e), v, sol.ncomp());
}

std::vector<std::array<double, 2>> physical_gradient(const Basis& basis, const QuadGeometry& geo,
                                                     double xi, double eta) {
    const Eigen::Matrix2d J = geo.jacobian(xi, eta);
    const double det = J.determinant();
    if (det == 0.0) throw SingularMapError();
    // grad_ref = J^T grad_phys
    const Eigen::Matrix2d JinvT = J.inverse().transpose();
    auto ref = basis.eval_grad(xi, eta);
    std::vector<std::array<double, 2>> out(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const Eigen::Vector2d g = JinvT * Eigen::Vector2d(ref[i][0], ref[i][1]);
        out[i] = {g[0], g[1]};
    }
    return out;
}

}  // namespace mdg
