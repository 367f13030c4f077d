#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subgap/weighted_form.hpp"

namespace subgap::gaplab {

// Value of the energy form on sampled fields:
//   sum |dbar w|^2 e^{-2 phi} h^2 + 2 sum lambda1 |w|^2 e^{-2 phi} h^2
// with lambda1 = (discrete Laplacian of phi)/4, the one-variable Levi form.
// Used by the scaling identity, which requires no sign condition on lambda1.
double energy_form_value(const DiscGrid& grid, const Eigen::VectorXd& phi,
                         const Eigen::VectorXcd& w);

struct ScalingCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_error = 0.0;
};

// Evaluates E^phi(w) against R^2 E^{phi_R}(Dil_R w) on grids related by the
// exact change of variables (the scaled grid reuses the mask); the identity
// is exact up to roundoff.
ScalingCheck scaling_check(const std::function<double(Complex)>& phi,
                           const std::function<Complex(Complex)>& w, double R, int resolution);

struct SharpnessRow {
    int degree = 0;
    double amplitude = 0.0; // A
    int resolution = 0;
    double gap = 0.0;
    double ratio = 0.0; // gap / A^{2/(d+1)}
};

struct SharpnessScan {
    std::vector<SharpnessRow> rows;
    double fitted_slope = 0.0;   // least squares slope of log gap vs log A
    double expected_slope = 0.0; // 2/(d+1)
};

// phi = A^2 |z|^{2d+2}, V = Delta phi = 4 (d+1)^2 A^2 |z|^{2d} on the unit
// disc; the gap scales like A^{2/(d+1)}. Errors out when the gap saturates
// at the grid cutoff (resolution insufficient for the largest A).
SharpnessScan sharpness_scan(int degree, std::span<const double> amplitudes, int resolution);

struct Gap1dResult {
    double gap = 0.0;
    double amplitude = 0.0;   // |leading coefficient| of P
    double ratio = 0.0;       // gap / A^{2/(d+1)}
    int degree = 0;
    bool pass = false;        // ratio >= kappa_min
    double comparability = 0.0; // measured sup of the two-sided ratio on the grid
};

// Gap of the form with V = Delta phi for a weight phi whose curvature is
// comparable to |P|^2: checks B^{-1} |P|^2 <= Delta phi <= B |P|^2 on the
// interior grid points (witness thrown on violation), then reports the gap
// and the ratio against A^{2/(d+1)}. All roots of P must lie in D(0,1/2).
Gap1dResult gap_1d_general(std::span<const Complex> P_coeffs, double B,
                           const std::function<double(Complex)>& phi, int resolution,
                           double kappa_min);

struct AnnulusCheck {
    double ratio = 0.0; // integral over D / integral over D minus half-disc
};

// Quadrature ratio of |h|^2 over the unit disc against the outer annulus for
// a holomorphic polynomial h; bounded by 4/3 for every polynomial.
AnnulusCheck annulus_norm_check(std::span<const Complex> h_coeffs, int resolution);

// Least squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace subgap::gaplab
