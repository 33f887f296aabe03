/**
 * @file dg_space.hpp
 * @brief Modal polynomial bases on the reference square, Gauss-Legendre
 *        rules, and evaluation of element-wise polynomial solutions.
 */
#pragma once

#include "mdgice/physics.hpp"
#include "mdgice/slab_mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace mdg {

struct QuadraturePoint1D {
    double x;
    double w;
};

struct QuadraturePoint2D {
    double xi;
    double eta;
    double w;
};

using QuadratureRule1D = std::vector<QuadraturePoint1D>;
using QuadratureRule2D = std::vector<QuadraturePoint2D>;

/// n-point Gauss-Legendre rule on [-1, 1]; exact through degree 2n-1.
QuadratureRule1D gauss_rule_1d(int npoints);
/// Tensor product of two n-point rules on [-1, 1]^2.
QuadratureRule2D gauss_rule_quad(int npoints);
/// Fewest Gauss points integrating polynomials of the given degree exactly.
int gauss_points_for_degree(int degree);

/// Total-degree (P) or tensor-degree (Q) polynomial space.
enum class BasisFamily { P, Q };

class UnsupportedDegreeError : public std::invalid_argument {
public:
    explicit UnsupportedDegreeError(int p)
        : std::invalid_argument("unsupported basis degree " + std::to_string(p)) {}
};

/**
 * Orthonormal modal basis on [-1,1]^2: normalized Legendre products
 * L_a(xi) L_b(eta), ordered by total degree. This is the Gram-Schmidt
 * orthonormalization of the monomials xi^a eta^b taken in the same order.
 */
class Basis {
public:
    Basis(BasisFamily family, int degree);

    BasisFamily family() const { return family_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exponents_.size()); }
    const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }

    void eval(double xi, double eta, std::span<double> values) const;
    /// Reference-coordinate gradients (d/dxi, d/deta).
    void eval_grad(double xi, double eta, std::span<double> dxi, std::span<double> deta) const;

    std::vector<double> eval(double xi, double eta) const;
    std::vector<std::array<double, 2>> eval_grad(double xi, double eta) const;

    /// Gauss points per direction for element volume integrals
    /// (exact through degree 2p+2).
    int volume_points() const { return gauss_points_for_degree(2 * degree_ + 2); }
    /// Gauss points on faces (exact through degree 2p+1).
    int face_points() const { return gauss_points_for_degree(2 * degree_ + 1); }

private:
    BasisFamily family_;
    int degree_;
    std::vector<std::array<int, 2>> exponents_;
};

/// Normalized Legendre polynomial sqrt((2n+1)/2) L_n and its derivative.
double legendre_normalized(int n, double x);
double legendre_normalized_deriv(int n, double x);

/**
 * Element-wise coefficient arrays U_i of U_h = sum_i U_i B_i. Stored
 * row-major per element: coefficient (i, c) of element e sits at
 * e*N*m + i*m + c.
 */
class DgSolution {
public:
    DgSolution(int num_elements, int nbasis, int ncomp);
    DgSolution(int num_elements, int nbasis, int ncomp, std::vector<double> coeffs);

    int num_elements() const { return nelem_; }
    int nbasis() const { return nbasis_; }
    int ncomp() const { return ncomp_; }
    int block_size() const { return nbasis_ * ncomp_; }

    double& operator()(int e, int i, int c) { return coeffs_[offset(e, i, c)]; }
    double operator()(int e, int i, int c) const { return coeffs_[offset(e, i, c)]; }

    std::span<const double> element(int e) const {
        return {coeffs_.data() + e * block_size(), static_cast<std::size_t>(block_size())};
    }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }

    int offset(int e, int i, int c) const { return (e * nbasis_ + i) * ncomp_ + c; }

private:
    int nelem_;
    int nbasis_;
    int ncomp_;
    std::vector<double> coeffs_;
};

/// sum_i coeffs(i, :) * values[i] for one element's coefficient block.
State combine(std::span<const double> coeffs, std::span<const double> values, int ncomp);

/// U_h at reference point (xi, eta) of element e.
State eval_solution(const Basis& basis, const DgSolution& sol, int e, double xi, double eta);

class SingularMapError : public std::domain_error {
public:
    SingularMapError() : std::domain_error("singular element map") {}
};

/// Physical (d/dx, d/dt) gradients of every basis function through the
/// bilinear map. Throws SingularMapError where det J = 0.
std::vector<std::array<double, 2>> physical_gradient(const Basis& basis, const QuadGeometry& geo,
                                                     double xi, double eta);

/// Coefficients of the L2(reference) projection of f(xi, eta) onto the basis.
template <class F>
std::vector<double> project_reference(const Basis& basis, int ncomp, F&& f) {
    const auto rule = gauss_rule_quad(basis.volume_points() + 2);
    const int n = basis.size();
    std::vector<double> out(static_cast<std::size_t>(n * ncomp), 0.0);
    std::vector<double> vals(n);
    for (const auto& q : rule) {
        basis.eval(q.xi, q.eta, vals);
        const State s = f(q.xi, q.eta);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < ncomp; ++c) out[i * ncomp + c] += q.w * vals[i] * s[c];
    }
    return out;
}

}  // namespace mdg
