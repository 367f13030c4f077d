#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "subgap/levi.hpp"
#include "subgap/poly.hpp"

namespace subgap::levi {

// Small dense matrix with polynomial entries (jets in the shifted variables
// w = z - p), row-major.
struct PolyMatrix {
    int rows = 0, cols = 0, nvars = 0;
    std::vector<poly::MultiPoly> entries;

    PolyMatrix() = default;
    PolyMatrix(int r, int c, int nv);
    poly::MultiPoly& at(int i, int j) { return entries[static_cast<size_t>(i * cols + j)]; }
    const poly::MultiPoly& at(int i, int j) const {
        return entries[static_cast<size_t>(i * cols + j)];
    }

    static PolyMatrix from_numeric(const Eigen::MatrixXcd& m, int nvars);
    static PolyMatrix mul_trunc(const PolyMatrix& a, const PolyMatrix& b, int trunc_total);

    PolyMatrix& operator+=(const PolyMatrix& rhs);
    PolyMatrix& operator-=(const PolyMatrix& rhs);
    PolyMatrix& operator*=(poly::Complex c);

    poly::MultiPoly trace() const;
    Eigen::MatrixXcd constant_part() const;
    double max_abs_coeff() const;
    PolyMatrix truncate_total(int maxdeg) const;
};

// Shift a polynomial in z to the variables w = z - p (substitute z = p + w).
poly::MultiPoly shift_to_point(const poly::MultiPoly& f, const Eigen::VectorXcd& p);

// Approximate minimal eigenvector field at p: kernel vector v0, unitary M,
// the projector jet Pi(z), the field X(z) = Pi(z) v0 and the small eigenvalue
// jet alpha(z) of M J(z), all expanded in w = z - p through order K.
struct AmeField {
    Eigen::VectorXcd base_point;
    Eigen::VectorXcd kernel_vec;
    Eigen::MatrixXcd separation;     // unitary M
    double epsilon = 0.0;            // contour radius (half the spectral gap)
    int jet_order = 0;
    PolyMatrix projector;            // Pi
    PolyMatrix map_jacobian;         // M J(p + w), exact polynomial entries
    std::vector<poly::MultiPoly> field; // X components
    poly::MultiPoly eigenvalue;      // alpha = tr(M J Pi)
    bool trivial = false;            // dim ker H(p) = 0: constant field returned
};

// Requires dim ker H(p) in {0, 1}; throws HypothesisError for >= 2 and
// InputError for p = 0. Contour quadrature starts at `nodes` nodes and
// doubles until the constant part satisfies ||Pi^2 - Pi|| < 1e-8.
AmeField ame_field(const poly::PolyMap& map, const Eigen::VectorXcd& p, int K, int nodes = 256);

// Max coefficient modulus of (M J) Pi - alpha Pi through the jet order.
double hol_projection_residual(const AmeField& ame);

// Max coefficient modulus of Pi^2 - Pi through the jet order.
double projector_idempotence_residual(const AmeField& ame);

// Taylor coefficients of the flow Y(zeta) of the polynomial field X
// (components in w-coordinates): Y' = X(Y), Y(0) = y0. Exact through K.
poly::JetVec flow_taylor(std::span<const poly::MultiPoly> field, const Eigen::VectorXcd& y0, int K);

// Max coefficient modulus of Y' - X(Y) through order K-1.
double flow_residual(std::span<const poly::MultiPoly> field, const poly::JetVec& flow);

// Foliation of a neighborhood of p by flow discs of the AME field, with the
// vanishing order m of det J along the center leaf and sampled coefficients
// of the degree-m monic polynomial carrying the small roots.
struct FoliationChart {
    Eigen::VectorXcd base_point;
    double transverse_radius = 0.0;
    int jet_order = 0;
    int weierstrass_order = 0;                        // m
    poly::JetSeries center_detjac_jet;                // det J along the center leaf
    std::vector<Eigen::VectorXcd> sample_offsets;     // z' - p on the transverse ball
    std::vector<std::vector<poly::Complex>> coeff_samples; // c_1..c_m per sample
    AmeField ame;
    double flow_residual_max = 0.0;
};

FoliationChart foliation_prepare(const poly::PolyMap& map, const Eigen::VectorXcd& p, int K,
                                 int samples_per_dim = 5, double radius = 0.05);

} // namespace subgap::levi
