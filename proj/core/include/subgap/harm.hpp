#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "subgap/grid.hpp"
#include "subgap/poly.hpp"

namespace subgap::harm {

using Complex = std::complex<double>;

// Discrete Newtonian potential u = b * Gamma, Gamma = (1/2pi) log|.|, by
// direct summation over the active points; the self-cell uses the exact
// integral of log over the h x h cell square. Satisfies the discrete
// Poisson identity Laplacian(u) ~ b in the interior (order h^2).
Eigen::VectorXd newtonian_potential(const gaplab::DiscGrid& grid, const Eigen::VectorXd& b);

struct Completion {
    Eigen::VectorXcd G;      // holomorphic samples, Re G = phi - b*Gamma
    double deviation = 0.0;  // sup |phi - Re G| over active points
    double cr_solver_residual = 0.0; // relative normal-equation residual of the CR solve
    double cr_edge_max = 0.0;        // measured max Cauchy-Riemann edge mismatch
    double curvature_sup = 0.0;      // sup |discrete Laplacian of phi|
    Eigen::VectorXd potential;       // the subtracted Newtonian potential
};

// Subtracts the Newtonian potential of the discrete Laplacian and solves the
// Cauchy-Riemann system for the harmonic conjugate in least squares
// (conjugate gradient, relative residual < 1e-8). The imaginary part is
// normalized to zero mean. Rejects fields violating the curvature bound
// |Laplacian phi| <= C_bound / radius^2 (witness in the message).
Completion holomorphic_completion(const gaplab::DiscGrid& grid, const Eigen::VectorXd& phi,
                                  double C_bound);

// Max |d/dx of G| over the half-radius disc, by centered differences.
double max_gradient_half_disc(const gaplab::DiscGrid& grid, const Eigen::VectorXcd& G);

struct GradientCheck {
    double sup_deriv = 0.0;    // ||F'|| on D(0, r/2)
    double re_l2 = 0.0;        // ||Re F||_{L^2(D(0,r))}
    double ratio = 0.0;        // sup_deriv / (r^{-2} re_l2)
};

// Measures ||F'||_{L^inf(D(0,r/2))} against r^{-2} ||Re F||_{L^2(D(0,r))}
// for a holomorphic polynomial F.
GradientCheck gradient_estimate_check(std::span<const Complex> F_coeffs, double r, int resolution);

// Family of analytic discs attached to a witness disc psi of flatness order m:
// psi_t(zeta) = (psi(0.5 zeta), i G_t(0.5 zeta) + i phi(p)) on D(0,t), with
// G_t the holomorphic completion of phi o psi - phi(p) on D(0,t).
struct DiscFamily {
    std::vector<double> t_values;
    std::vector<double> contact;      // max boundary-contact residual per t
    std::vector<double> center_gap;   // |psi_t(0) - q| per t
    double fitted_exponent = 0.0;     // log-log slope of contact vs t
    bool exponent_saturated = false;  // residuals at roundoff level, no fit
    double sup_deriv = 0.0;           // sup_t ||psi_t'||_inf
    double min_deriv0 = 0.0;          // inf_t |psi_t'(0)|
    int flatness_order = 0;           // verified m
};

// Verifies Delta(phi o psi) = O(|zeta|^m) from the jets, then measures the
// contact order of the constructed family; the decay exponent of the contact
// residual should reach m + 2.
DiscFamily build_disc_family(const poly::PolyMap& map, const Eigen::VectorXcd& p,
                             const poly::JetVec& disc, int m, std::span<const double> t_values,
                             int resolution);

} // namespace subgap::harm
