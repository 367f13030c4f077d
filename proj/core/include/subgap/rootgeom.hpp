#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subgap/errors.hpp"

namespace subgap::rootgeom {

using Complex = std::complex<double>;

// Finite metric space given by its distance matrix. Construction validates
// symmetry, zero diagonal, nonnegativity and the triangle inequality
// (within 1e-12 relative slack).
struct FiniteMetricSpace {
    Eigen::MatrixXd dist;

    int size() const { return static_cast<int>(dist.rows()); }
    double d(int i, int j) const { return dist(i, j); }

    static FiniteMetricSpace from_matrix(Eigen::MatrixXd m);
    static FiniteMetricSpace from_points(std::span<const Complex> pts);
};

// Output of the greedy clustering: centers S, one radius per center, and the
// base scale L. Guarantees, for N = |X|:
//   (1) L <= r_s <= 4^{N-1} L
//   (2) d(s,s') > 2 r_s + 2 r_{s'} for distinct centers
//   (3) every point has exactly one center with d(x,s) <= r_s
struct ClusterCover {
    std::vector<int> centers;
    std::vector<double> radii;
    double scale = 0.0;
};

// Smallest r in {L, 4L, ..., 4^{N-1}L} whose annulus (r, 4r] contains no
// point of the space; existence is guaranteed by pigeonhole.
double choose_radius(const FiniteMetricSpace& space, int x, double L);

// Greedy cover: repeatedly pick a remaining point of largest radius (ties by
// lowest index), add it to S, remove everything within its radius.
ClusterCover greedy_cluster(const FiniteMetricSpace& space, double L);

// Exhaustive check of the three cover conditions; empty string when they all
// hold, otherwise a description of the first failure.
std::string check_cover(const FiniteMetricSpace& space, const ClusterCover& cover);

// --- roots of univariate polynomials ----------------------------------------

// Roots of sum_k coeffs[k] z^k (constant first) via companion-matrix
// eigenvalues. Degree is determined after dropping trailing coefficients
// smaller than 1e-14 * max|coeff|.
std::vector<Complex> poly_roots(std::span<const Complex> coeffs);

// Groups a root list into distinct locations with multiplicities; roots
// closer than merge_tol are merged (summed multiplicity, mean position).
void group_roots(const std::vector<Complex>& raw, double merge_tol,
                 std::vector<Complex>& locations, std::vector<int>& multiplicities);

// --- sublevel set decomposition ----------------------------------------------

// Recursive root-cluster decomposition of P, leading-coefficient modulus A,
// degree d. The selected roots R and radii satisfy
//   (1) r_z <= K1(d) A^{-1/(d+1)},
//   (2) |P| <= K2 / r_z on D(z, 4 r_z),
//   (3) |P| >= A^{1/(d+1)} / K3 off the union of D(z, 2 r_z),
// with the realized constants measured by verify_sublevel. The discs
// D(z, 2 r_z) are pairwise disjoint by construction.
struct RootClusterCover {
    std::vector<Complex> roots;       // distinct root locations
    std::vector<int> multiplicities;  // parallel to roots
    std::vector<int> selected;        // indices into roots (the subset R)
    std::vector<double> radii;        // parallel to selected
    double leading_modulus = 0.0;     // A
    int degree = 0;                   // d
    double weierstrass_constant = 1.0; // realized K of the recursion
};

// Decomposition from explicit coefficients (constant first). Requires a
// nonzero polynomial with all roots in D(0, 1/2).
RootClusterCover sublevel_decomposition(std::span<const Complex> coeffs);

// Same construction from known root locations and multiplicities.
RootClusterCover sublevel_from_roots(std::vector<Complex> roots, std::vector<int> multiplicities,
                                     double leading_modulus);

struct SublevelReport {
    double K1 = 0.0;
    double K2 = 0.0;
    double K3 = 0.0;
    int grid_resolution = 0;
};

// Measures the smallest constants that make the three properties hold on a
// uniform grid over D(0,1); each selected disc additionally gets a local
// polar sample so small discs are not missed by the coarse grid.
SublevelReport verify_sublevel(const RootClusterCover& cover, int grid_resolution);

// |P(z)| reconstructed from the cover data: A * prod |z - root_i|^{m_i}.
double abs_poly_from_cover(const RootClusterCover& cover, Complex z);

} // namespace subgap::rootgeom
