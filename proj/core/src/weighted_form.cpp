#include "subgap/weighted_form.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

namespace subgap::gaplab {

namespace {

// largest exponent 2*(phi - shift) for which e^{-x} stays a normal double
constexpr double kMaxExponent = 700.0;

} // namespace

double WeightedFormAssembly::energy_value(const Eigen::VectorXcd& w) const {
    if (w.size() != energy.rows()) throw InputError("energy_value: size mismatch");
    return (w.adjoint() * (energy * w)).real()(0);
}

double WeightedFormAssembly::mass_value(const Eigen::VectorXcd& w) const {
    if (w.size() != mass.size()) throw InputError("mass_value: size mismatch");
    double acc = 0.0;
    for (int i = 0; i < w.size(); ++i) acc += mass(i) * std::norm(w(i));
    return acc;
}

Eigen::VectorXcd WeightedFormAssembly::sample(const std::function<Complex(Complex)>& f) const {
    Eigen::VectorXcd w(static_cast<int>(support.size()));
    for (size_t s = 0; s < support.size(); ++s)
        w(static_cast<int>(s)) = f(grid.points[static_cast<size_t>(support[s])]);
    return w;
}

WeightedFormAssembly assemble(const DiscGrid& grid, Eigen::VectorXd phi, Eigen::VectorXd V) {
    const int n = grid.active_count();
    if (phi.size() != n || V.size() != n) throw InputError("assemble: field size mismatch");
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(phi(i)) || !std::isfinite(V(i)))
            throw InputError("assemble: non-finite field value");
        if (V(i) < 0.0) throw InputError("assemble: negative potential rejected");
    }

    WeightedFormAssembly a;
    a.grid = grid;
    a.phi = std::move(phi);
    a.potential = std::move(V);
    a.phi_shift = a.phi.minCoeff();

    a.support_of_active.assign(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (2.0 * (a.phi(i) - a.phi_shift) <= kMaxExponent) {
            a.support_of_active[static_cast<size_t>(i)] = static_cast<int>(a.support.size());
            a.support.push_back(i);
        }
    }
    const int m = static_cast<int>(a.support.size());
    if (m == 0) throw NumericError("assemble: empty support after weight underflow");

    Eigen::VectorXd weight(m);
    for (int s = 0; s < m; ++s)
        weight(s) = std::exp(-2.0 * (a.phi(a.support[static_cast<size_t>(s)]) - a.phi_shift));

    const double h = grid.spacing;
    const double h2 = h * h;

    // dbar = (D_x + i D_y)/2, one sparse row per support point
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<size_t>(m) * 5);
    auto neighbor = [&](int act, int dx, int dy) -> int {
        const int x = grid.ix[static_cast<size_t>(act)] + dx;
        const int y = grid.iy[static_cast<size_t>(act)] + dy;
        const int other = grid.active_at(x, y);
        if (other < 0) return -1;
        return a.support_of_active[static_cast<size_t>(other)];
    };
    for (int s = 0; s < m; ++s) {
        const int act = a.support[static_cast<size_t>(s)];
        for (int dir = 0; dir < 2; ++dir) { // 0: x, 1: y
            const Complex fac = dir == 0 ? Complex(0.5, 0.0) : Complex(0.0, 0.5);
            const int plus = dir == 0 ? neighbor(act, 1, 0) : neighbor(act, 0, 1);
            const int minus = dir == 0 ? neighbor(act, -1, 0) : neighbor(act, 0, -1);
            if (plus >= 0 && minus >= 0) {
                trips.emplace_back(s, plus, fac / (2.0 * h));
                trips.emplace_back(s, minus, -fac / (2.0 * h));
            } else if (plus >= 0) {
                trips.emplace_back(s, plus, fac / h);
                trips.emplace_back(s, s, -fac / h);
            } else if (minus >= 0) {
                trips.emplace_back(s, s, fac / h);
                trips.emplace_back(s, minus, -fac / h);
            }
        }
    }
    Eigen::SparseMatrix<Complex> G(m, m);
    G.setFromTriplets(trips.begin(), trips.end());

    Eigen::SparseMatrix<Complex> W(m, m);
    {
        std::vector<Eigen::Triplet<Complex>> wt;
        wt.reserve(static_cast<size_t>(m));
        for (int s = 0; s < m; ++s) wt.emplace_back(s, s, Complex(weight(s) * h2, 0.0));
        W.setFromTriplets(wt.begin(), wt.end());
    }

    a.energy = Eigen::SparseMatrix<Complex>(G.adjoint()) * W * G;
    {
        std::vector<Eigen::Triplet<Complex>> vt;
        vt.reserve(static_cast<size_t>(m));
        for (int s = 0; s < m; ++s) {
            const int act = a.support[static_cast<size_t>(s)];
            vt.emplace_back(s, s, Complex(a.potential(act) * weight(s) * h2, 0.0));
        }
        Eigen::SparseMatrix<Complex> Vm(m, m);
        Vm.setFromTriplets(vt.begin(), vt.end());
        a.energy += Vm;
    }
    a.energy.makeCompressed();

    a.mass = weight * h2;
    return a;
}

WeightedFormAssembly assemble(const DiscGrid& grid, const std::function<double(Complex)>& phi,
                              const std::function<double(Complex)>& V) {
    const int n = grid.active_count();
    Eigen::VectorXd p(n), v(n);
    for (int i = 0; i < n; ++i) {
        p(i) = phi(grid.points[static_cast<size_t>(i)]);
        v(i) = V(grid.points[static_cast<size_t>(i)]);
    }
    return assemble(grid, std::move(p), std::move(v));
}

GapResult min_gap(const WeightedFormAssembly& a, int max_iterations, double rel_tol) {
    const int m = static_cast<int>(a.mass.size());
    Eigen::SparseMatrix<Complex> A = a.energy;
    double scale = 0.0;
    for (int s = 0; s < m; ++s)
        scale = std::max(scale, std::abs(A.coeff(s, s)) / a.mass(s));
    scale = std::max(scale, 1e-300);

    // tiny mass-proportional Tikhonov term keeps the factorization of a
    // singular energy matrix well-posed; the reported gap is always the
    // Rayleigh quotient of the unmodified pencil
    const double delta = 1e-12 * scale;
    {
        std::vector<Eigen::Triplet<Complex>> dt;
        dt.reserve(static_cast<size_t>(m));
        for (int s = 0; s < m; ++s) dt.emplace_back(s, s, Complex(delta * a.mass(s), 0.0));
        Eigen::SparseMatrix<Complex> D(m, m);
        D.setFromTriplets(dt.begin(), dt.end());
        A += D;
    }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw NumericError("min_gap: factorization of the energy matrix failed");

    auto rayleigh = [&](const Eigen::VectorXcd& w) {
        return a.energy_value(w) / a.mass_value(w);
    };

    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(m);
    double rho = rayleigh(x);
    GapResult res;
    for (int it = 1; it <= max_iterations; ++it) {
        Eigen::VectorXcd b(m);
        for (int s = 0; s < m; ++s) b(s) = a.mass(s) * x(s);
        Eigen::VectorXcd y = solver.solve(b);
        if (solver.info() != Eigen::Success || !y.allFinite())
            throw NumericError("min_gap: linear solve failed", rho);
        const double norm = std::sqrt(a.mass_value(y));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericError("min_gap: iterate collapsed", rho);
        x = y / norm;
        const double next = rayleigh(x);
        const bool done = std::abs(next - rho) <= rel_tol * std::max(std::abs(next), delta);
        rho = next;
        if (done) {
            res.converged = true;
            res.iterations = it;
            break;
        }
        res.iterations = it;
    }
    if (!res.converged)
        throw NumericError("min_gap: no convergence after " + std::to_string(max_iterations) +
                               " iterations",
                           rho);
    res.gap = rho;
    res.minimizer = x;
    return res;
}

Eigen::VectorXd discrete_laplacian(const DiscGrid& grid, const Eigen::VectorXd& f) {
    const int n = grid.active_count();
    if (f.size() != n) throw InputError("discrete_laplacian: size mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
    for (int i = 0; i < n; ++i) {
        const int x = grid.ix[static_cast<size_t>(i)], y = grid.iy[static_cast<size_t>(i)];
        const int xp = grid.active_at(x + 1, y), xm = grid.active_at(x - 1, y);
        const int yp = grid.active_at(x, y + 1), ym = grid.active_at(x, y - 1);
        double acc = 0.0;
        if (xp >= 0 && xm >= 0) acc += (f(xp) + f(xm) - 2.0 * f(i)) * inv_h2;
        if (yp >= 0 && ym >= 0) acc += (f(yp) + f(ym) - 2.0 * f(i)) * inv_h2;
        out(i) = acc;
    }
    return out;
}

std::vector<bool> interior_mask(const DiscGrid& grid) {
    const int n = grid.active_count();
    std::vector<bool> mask(static_cast<size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const int x = grid.ix[static_cast<size_t>(i)], y = grid.iy[static_cast<size_t>(i)];
        mask[static_cast<size_t>(i)] = grid.active_at(x + 1, y) >= 0 && grid.active_at(x - 1, y) >= 0 &&
                                       grid.active_at(x, y + 1) >= 0 && grid.active_at(x, y - 1) >= 0;
    }
    return mask;
}

} // namespace subgap::gaplab
