#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "subgap/grid.hpp"

namespace subgap::gaplab {

// Discrete weighted form on a disc grid:
//   energy(w) = sum |dbar w|^2 e^{-2 phi} h^2 + sum V |w|^2 e^{-2 phi} h^2
//   mass(w)   = sum |w|^2 e^{-2 phi} h^2
// dbar = (D_x + i D_y)/2 with centered differences in the interior and
// first-order one-sided differences at the mask edge; midpoint quadrature; no
// boundary condition (the test class is C^1 up to the boundary).
//
// phi is gauge-shifted by its minimum before exponentiation (the Rayleigh
// quotient is exactly invariant under phi -> phi + const); points whose
// shifted weight e^{-2(phi - min phi)} underflows are dropped from the
// support, their contribution to either side being below 1e-290 relative.
struct WeightedFormAssembly {
    DiscGrid grid;
    Eigen::VectorXd phi;      // on active points
    Eigen::VectorXd potential; // V on active points
    double phi_shift = 0.0;   // min phi subtracted before exponentiation

    std::vector<int> support;          // active indices kept in the matrices
    std::vector<int> support_of_active; // active index -> support index or -1
    Eigen::SparseMatrix<Complex> energy; // Hermitian PSD, support x support
    Eigen::VectorXd mass;                // positive diagonal on support

    double energy_value(const Eigen::VectorXcd& w_support) const;
    double mass_value(const Eigen::VectorXcd& w_support) const;
    // Samples a function on the support points.
    Eigen::VectorXcd sample(const std::function<Complex(Complex)>& f) const;
};

// V must be nonnegative on active points.
WeightedFormAssembly assemble(const DiscGrid& grid, Eigen::VectorXd phi, Eigen::VectorXd V);
WeightedFormAssembly assemble(const DiscGrid& grid, const std::function<double(Complex)>& phi,
                              const std::function<double(Complex)>& V);

struct GapResult {
    double gap = 0.0;
    Eigen::VectorXcd minimizer; // on support points
    int iterations = 0;
    bool converged = false;
};

// Smallest eigenvalue of the (energy, mass) pencil by shift-invert iteration
// from the all-ones start vector; converged when successive Rayleigh
// quotients differ by < rel_tol relatively. Throws NumericError carrying the
// best estimate on non-convergence.
GapResult min_gap(const WeightedFormAssembly& assembly, int max_iterations = 500,
                  double rel_tol = 1e-10);

// Five-point discrete Laplacian of samples on the active points. A direction
// whose neighbor pair is incomplete contributes 0 at that point; the
// convention commutes with grid scaling, which the scaling identity needs.
Eigen::VectorXd discrete_laplacian(const DiscGrid& grid, const Eigen::VectorXd& f);

// True where both neighbor pairs are complete (the Laplacian is the full
// five-point stencil there).
std::vector<bool> interior_mask(const DiscGrid& grid);

} // namespace subgap::gaplab
