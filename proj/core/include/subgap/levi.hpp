#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "subgap/poly.hpp"

namespace subgap::levi {

using Complex = std::complex<double>;

// Caches the symbolic Jacobian and its determinant for repeated evaluation.
struct MapDerivatives {
    poly::PolyMap map;
    std::vector<std::vector<poly::MultiPoly>> jac;
    poly::MultiPoly det;

    explicit MapDerivatives(poly::PolyMap m);
    Eigen::MatrixXcd jacobian_at(const Eigen::VectorXcd& z) const;
};

// Spectrum of the Levi form H = J* J at a point: ascending eigenvalues with a
// unitary eigenvector set, reconstruction error below 1e-10 * ||H||.
struct HermitianSpectrum {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // columns, unitary
};

// H(z) = J(z)* J(z); validates det H = |det J|^2 within 1e-9 relative.
HermitianSpectrum levi_form(const MapDerivatives& md, const Eigen::VectorXcd& z);
HermitianSpectrum levi_form(const poly::PolyMap& map, const Eigen::VectorXcd& z);

// Smallest eigenvalue of a Hermitian matrix; rejects non-Hermitian input
// (relative deviation above 1e-12).
double min_eigenvalue(const Eigen::MatrixXcd& H);

// Spectral projector onto the generalized eigenspaces of the eigenvalues of A
// inside the circle |zeta - center| = radius, by trapezoidal quadrature of the
// resolvent. Nodes are doubled until ||Pi^2 - Pi|| < idempotence_tol; throws
// NumericError when an eigenvalue sits too close to the circle.
Eigen::MatrixXcd resolvent_projector(const Eigen::MatrixXcd& A, Complex center, double radius,
                                     int nodes = 256, double idempotence_tol = 1e-8);

// Unitary M with ker(M J_p) and range(M J_p) intersecting trivially; M maps
// an orthonormal basis of range(J_p) onto one of ker(J_p)^perp. Requires
// dim ker J_p = 1 and certifies that the zero eigenvalue of M J_p is simple.
Eigen::MatrixXcd unitary_separation(const Eigen::MatrixXcd& J_p);

// Kernel dimension by singular values: count of sigma_i < rel_tol * sigma_max.
int kernel_dimension(const Eigen::MatrixXcd& A, double rel_tol = 1e-8);

// Unit vector spanning the (one-dimensional) kernel.
Eigen::VectorXcd kernel_vector(const Eigen::MatrixXcd& A);

} // namespace subgap::levi
