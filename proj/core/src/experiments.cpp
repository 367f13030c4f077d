#include "subgap/experiments.hpp"

#include <cmath>

#include "subgap/rootgeom.hpp"

namespace subgap::gaplab {

double energy_form_value(const DiscGrid& grid, const Eigen::VectorXd& phi,
                         const Eigen::VectorXcd& w) {
    const int n = grid.active_count();
    if (phi.size() != n || w.size() != n) throw InputError("energy_form_value: size mismatch");
    const Eigen::VectorXd lam1 = discrete_laplacian(grid, phi) / 4.0;
    const double h = grid.spacing;
    const double h2 = h * h;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const int x = grid.ix[static_cast<size_t>(i)], y = grid.iy[static_cast<size_t>(i)];
        Complex dbar = 0.0;
        for (int dir = 0; dir < 2; ++dir) {
            const Complex fac = dir == 0 ? Complex(0.5, 0.0) : Complex(0.0, 0.5);
            const int plus = dir == 0 ? grid.active_at(x + 1, y) : grid.active_at(x, y + 1);
            const int minus = dir == 0 ? grid.active_at(x - 1, y) : grid.active_at(x, y - 1);
            if (plus >= 0 && minus >= 0)
                dbar += fac * (w(plus) - w(minus)) / (2.0 * h);
            else if (plus >= 0)
                dbar += fac * (w(plus) - w(i)) / h;
            else if (minus >= 0)
                dbar += fac * (w(i) - w(minus)) / h;
        }
        const double weight = std::exp(-2.0 * phi(i));
        acc += (std::norm(dbar) + 2.0 * lam1(i) * std::norm(w(i))) * weight * h2;
    }
    return acc;
}

ScalingCheck scaling_check(const std::function<double(Complex)>& phi,
                           const std::function<Complex(Complex)>& w, double R, int resolution) {
    if (R <= 0.0) throw InputError("scaling_check: R must be positive");
    const DiscGrid base = DiscGrid::make(0.0, 1.0, resolution);
    const int n = base.active_count();

    Eigen::VectorXd phi1(n);
    Eigen::VectorXcd w1(n);
    for (int i = 0; i < n; ++i) {
        phi1(i) = phi(base.points[static_cast<size_t>(i)]);
        w1(i) = w(base.points[static_cast<size_t>(i)]);
    }
    const double lhs = energy_form_value(base, phi1, w1);

    // scaled grid shares the mask; phi_R(R z) = phi(z), Dil_R w(R z) = w(z)/R
    const DiscGrid big = base.scaled(R);
    const Eigen::VectorXcd w2 = w1 / R;
    const double rhs = R * R * energy_form_value(big, phi1, w2);

    ScalingCheck out;
    out.lhs = lhs;
    out.rhs = rhs;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    out.rel_error = std::abs(lhs - rhs) / scale;
    return out;
}

SharpnessScan sharpness_scan(int degree, std::span<const double> amplitudes, int resolution) {
    if (degree < 0) throw InputError("sharpness_scan: negative degree");
    if (amplitudes.size() < 4) throw InputError("sharpness_scan: need at least 4 amplitudes");
    const DiscGrid grid = DiscGrid::make(0.0, 1.0, resolution);
    const double h = grid.spacing;

    SharpnessScan scan;
    scan.expected_slope = 2.0 / (degree + 1);
    std::vector<double> xs, ys;
    for (const double A : amplitudes) {
        if (A <= 0.0) throw InputError("sharpness_scan: amplitudes must be positive");
        const auto phi = [&](Complex z) { return A * A * std::pow(std::abs(z), 2.0 * degree + 2.0); };
        const auto V = [&](Complex z) {
            return 4.0 * (degree + 1.0) * (degree + 1.0) * A * A *
                   std::pow(std::abs(z), 2.0 * degree);
        };
        const WeightedFormAssembly a = assemble(grid, phi, V);
        const GapResult g = min_gap(a);
        if (g.gap > 0.25 / (h * h))
            throw NumericError(
                "sharpness_scan: gap saturates at the grid cutoff; decrease A or increase N",
                g.gap);
        SharpnessRow row;
        row.degree = degree;
        row.amplitude = A;
        row.resolution = resolution;
        row.gap = g.gap;
        row.ratio = g.gap / std::pow(A, 2.0 / (degree + 1));
        scan.rows.push_back(row);
        xs.push_back(A);
        ys.push_back(g.gap);
    }
    scan.fitted_slope = loglog_slope(xs, ys);
    return scan;
}

Gap1dResult gap_1d_general(std::span<const Complex> P_coeffs, double B,
                           const std::function<double(Complex)>& phi, int resolution,
                           double kappa_min) {
    if (B < 1.0) throw InputError("gap_1d_general: comparability constant must be >= 1");
    // degree and leading modulus after trailing-coefficient trim
    double cmax = 0.0;
    for (const auto& c : P_coeffs) cmax = std::max(cmax, std::abs(c));
    if (P_coeffs.empty() || cmax == 0.0) throw InputError("gap_1d_general: zero polynomial");
    int d = static_cast<int>(P_coeffs.size()) - 1;
    while (d > 0 && std::abs(P_coeffs[static_cast<size_t>(d)]) <= 1e-14 * cmax) --d;
    const double A = std::abs(P_coeffs[static_cast<size_t>(d)]);
    if (d > 0) {
        for (const Complex r : rootgeom::poly_roots(P_coeffs))
            if (std::abs(r) >= 0.5)
                throw HypothesisError("gap_1d_general: all roots of P must lie in D(0,1/2)");
    }

    const DiscGrid grid = DiscGrid::make(0.0, 1.0, resolution);
    const int n = grid.active_count();
    Eigen::VectorXd phiv(n);
    for (int i = 0; i < n; ++i) phiv(i) = phi(grid.points[static_cast<size_t>(i)]);
    const Eigen::VectorXd lap = discrete_laplacian(grid, phiv);
    const std::vector<bool> interior = interior_mask(grid);

    auto absP2 = [&](Complex z) {
        Complex acc = 0.0;
        for (int k = d; k >= 0; --k) acc = acc * z + P_coeffs[static_cast<size_t>(k)];
        return std::norm(acc);
    };

    Gap1dResult out;
    out.degree = d;
    out.amplitude = A;
    Eigen::VectorXd V(n);
    // absolute slack at the five-point truncation scale; near the roots of P
    // both sides are below it and the two-sided bound carries no information
    double lap_max = 0.0;
    for (int i = 0; i < n; ++i)
        if (interior[static_cast<size_t>(i)]) lap_max = std::max(lap_max, std::abs(lap(i)));
    const double tau = 10.0 * grid.spacing * grid.spacing * lap_max;
    for (int i = 0; i < n; ++i) {
        const Complex z = grid.points[static_cast<size_t>(i)];
        const double p2 = absP2(z);
        if (interior[static_cast<size_t>(i)]) {
            if (lap(i) > B * p2 + tau || lap(i) * B < p2 - tau) {
                throw HypothesisError("gap_1d_general: comparability violated at z = (" +
                                      std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                      ")");
            }
            if (p2 > tau && lap(i) > tau)
                out.comparability = std::max({out.comparability, lap(i) / p2, p2 / lap(i)});
            V(i) = std::max(lap(i), 0.0);
        } else {
            // mask-edge points have no reliable discrete Laplacian; the
            // comparable value keeps V within the hypothesis class
            V(i) = p2;
        }
    }
    const WeightedFormAssembly a = assemble(grid, phiv, V);
    const GapResult g = min_gap(a);
    out.gap = g.gap;
    out.ratio = g.gap / std::pow(A, 2.0 / (d + 1));
    out.pass = out.ratio >= kappa_min;
    return out;
}

AnnulusCheck annulus_norm_check(std::span<const Complex> h_coeffs, int resolution) {
    const DiscGrid grid = DiscGrid::make(0.0, 1.0, resolution);
    auto val = [&](Complex z) {
        Complex acc = 0.0;
        for (size_t k = h_coeffs.size(); k-- > 0;) acc = acc * z + h_coeffs[k];
        return std::norm(acc);
    };
    double disc = 0.0, annulus = 0.0;
    for (int i = 0; i < grid.active_count(); ++i) {
        const Complex z = grid.points[static_cast<size_t>(i)];
        const double v = val(z);
        disc += v;
        if (std::abs(z) >= 0.5) annulus += v;
    }
    if (annulus == 0.0) throw NumericError("annulus_norm_check: vanishing annulus integral");
    AnnulusCheck out;
    out.ratio = disc / annulus;
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("loglog_slope: need >= 2 points");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        if (x[static_cast<size_t>(i)] <= 0.0 || y[static_cast<size_t>(i)] <= 0.0)
            throw InputError("loglog_slope: nonpositive data");
        const double lx = std::log(x[static_cast<size_t>(i)]);
        const double ly = std::log(y[static_cast<size_t>(i)]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InputError("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

} // namespace subgap::gaplab
