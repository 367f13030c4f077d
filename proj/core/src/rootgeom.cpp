#include "subgap/rootgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace subgap::rootgeom {

FiniteMetricSpace FiniteMetricSpace::from_matrix(Eigen::MatrixXd m) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n || n == 0) throw InputError("metric space: square nonempty matrix required");
    double scale = m.cwiseAbs().maxCoeff();
    const double slack = 1e-12 * std::max(1.0, scale);
    for (int i = 0; i < n; ++i) {
        if (std::abs(m(i, i)) > slack) throw InputError("metric space: nonzero diagonal");
        m(i, i) = 0.0;
        for (int j = 0; j < n; ++j) {
            if (m(i, j) < 0.0) throw InputError("metric space: negative distance");
            if (std::abs(m(i, j) - m(j, i)) > slack) throw InputError("metric space: not symmetric");
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (m(i, j) > m(i, k) + m(k, j) + slack)
                    throw InputError("metric space: triangle inequality violated");
    FiniteMetricSpace s;
    s.dist = std::move(m);
    return s;
}

FiniteMetricSpace FiniteMetricSpace::from_points(std::span<const Complex> pts) {
    const int n = static_cast<int>(pts.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::abs(pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(j)]);
    FiniteMetricSpace s;
    s.dist = std::move(m);
    return s;
}

double choose_radius(const FiniteMetricSpace& space, int x, double L) {
    if (L <= 0.0) throw InputError("choose_radius: L must be positive");
    const int n = space.size();
    double r = L;
    for (int j = 0; j < n; ++j, r *= 4.0) {
        bool blocked = false;
        for (int s = 0; s < n && !blocked; ++s) {
            const double d = space.d(x, s);
            if (d > r && d <= 4.0 * r) blocked = true;
        }
        if (!blocked) return r;
    }
    // unreachable: pigeonhole over N candidate annuli and N-1 other points
    throw NumericError("choose_radius: no admissible radius found");
}

ClusterCover greedy_cluster(const FiniteMetricSpace& space, double L) {
    if (L <= 0.0) throw InputError("greedy_cluster: L must be positive");
    const int n = space.size();
    std::vector<double> radius(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) radius[static_cast<size_t>(i)] = choose_radius(space, i, L);

    ClusterCover cover;
    cover.scale = L;
    std::vector<bool> alive(static_cast<size_t>(n), true);
    int remaining = n;
    while (remaining > 0) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (!alive[static_cast<size_t>(i)]) continue;
            if (best < 0 || radius[static_cast<size_t>(i)] > radius[static_cast<size_t>(best)]) best = i;
        }
        cover.centers.push_back(best);
        cover.radii.push_back(radius[static_cast<size_t>(best)]);
        for (int i = 0; i < n; ++i) {
            if (alive[static_cast<size_t>(i)] && space.d(best, i) <= radius[static_cast<size_t>(best)]) {
                alive[static_cast<size_t>(i)] = false;
                --remaining;
            }
        }
    }
    return cover;
}

std::string check_cover(const FiniteMetricSpace& space, const ClusterCover& cover) {
    const int n = space.size();
    const double L = cover.scale;
    const double upper = L * std::pow(4.0, n - 1);
    const double slack = 1e-9 * upper;
    for (size_t k = 0; k < cover.centers.size(); ++k) {
        const double r = cover.radii[k];
        if (r < L - slack || r > upper + slack)
            return "radius out of [L, 4^(N-1) L] at center " + std::to_string(cover.centers[k]);
    }
    for (size_t a = 0; a < cover.centers.size(); ++a)
        for (size_t b = a + 1; b < cover.centers.size(); ++b) {
            const double d = space.d(cover.centers[a], cover.centers[b]);
            if (!(d > 2.0 * cover.radii[a] + 2.0 * cover.radii[b]))
                return "separation failed between centers " + std::to_string(cover.centers[a]) +
                       " and " + std::to_string(cover.centers[b]);
        }
    for (int x = 0; x < n; ++x) {
        int count = 0;
        for (size_t k = 0; k < cover.centers.size(); ++k)
            if (space.d(x, cover.centers[k]) <= cover.radii[k]) ++count;
        if (count != 1)
            return "point " + std::to_string(x) + " covered by " + std::to_string(count) +
                   " centers (want exactly 1)";
    }
    return {};
}

// --- roots -------------------------------------------------------------------

std::vector<Complex> poly_roots(std::span<const Complex> coeffs) {
    if (coeffs.empty()) throw InputError("poly_roots: empty coefficient list");
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) throw InputError("poly_roots: zero polynomial");
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && std::abs(coeffs[static_cast<size_t>(d)]) <= 1e-14 * scale) --d;
    if (d == 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    const Complex lead = coeffs[static_cast<size_t>(d)];
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeffs[static_cast<size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("poly_roots: eigensolver failed");
    std::vector<Complex> roots(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) roots[static_cast<size_t>(i)] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

void group_roots(const std::vector<Complex>& raw, double merge_tol,
                 std::vector<Complex>& locations, std::vector<int>& multiplicities) {
    locations.clear();
    multiplicities.clear();
    for (const Complex& r : raw) {
        int hit = -1;
        for (size_t g = 0; g < locations.size(); ++g) {
            if (std::abs(r - locations[g]) <= merge_tol) {
                hit = static_cast<int>(g);
                break;
            }
        }
        if (hit < 0) {
            locations.push_back(r);
            multiplicities.push_back(1);
        } else {
            // running mean keeps the merged location stable
            const int m = multiplicities[static_cast<size_t>(hit)];
            locations[static_cast<size_t>(hit)] =
                (locations[static_cast<size_t>(hit)] * static_cast<double>(m) + r) /
                static_cast<double>(m + 1);
            multiplicities[static_cast<size_t>(hit)] = m + 1;
        }
    }
}

// --- sublevel decomposition ----------------------------------------------------

namespace {

struct Selection {
    std::vector<int> roots;   // indices into the global root list
    std::vector<double> radii;
};

// One level of the recursive construction. `subset` indexes the global root
// list; A_level is the leading-coefficient modulus of the sub-polynomial.
// Returns false (into `ok`) if some child radius exceeded r_s / 4, in which
// case the caller retries with a doubled Weierstrass constant.
bool decompose_level(const std::vector<Complex>& roots, const std::vector<int>& mult,
                     const std::vector<int>& subset, double A_level, double K, Selection& out) {
    int d_level = 0;
    for (int idx : subset) d_level += mult[static_cast<size_t>(idx)];
    const double L = std::pow(A_level, -1.0 / (d_level + 1));

    std::vector<Complex> pts;
    pts.reserve(subset.size());
    for (int idx : subset) pts.push_back(roots[static_cast<size_t>(idx)]);
    const FiniteMetricSpace space = FiniteMetricSpace::from_points(pts);
    const ClusterCover cover = greedy_cluster(space, L);

    if (cover.centers.size() == 1) {
        out.roots.push_back(subset[static_cast<size_t>(cover.centers[0])]);
        out.radii.push_back(cover.radii[0]);
        return true;
    }

    for (size_t s = 0; s < cover.centers.size(); ++s) {
        const int cs = cover.centers[s];
        const double rs = cover.radii[s];
        std::vector<int> members;
        int ds = 0;
        for (size_t x = 0; x < subset.size(); ++x) {
            if (space.d(static_cast<int>(x), cs) <= rs) {
                members.push_back(subset[x]);
                ds += mult[static_cast<size_t>(subset[x])];
            }
        }
        double As = K * A_level;
        for (size_t t = 0; t < cover.centers.size(); ++t) {
            if (t == s) continue;
            const double gap = space.d(cs, cover.centers[t]);
            int dt = 0;
            for (size_t x = 0; x < subset.size(); ++x)
                if (space.d(static_cast<int>(x), cover.centers[t]) <= cover.radii[t])
                    dt += mult[static_cast<size_t>(subset[x])];
            As *= std::pow(gap, dt);
        }
        Selection child;
        if (!decompose_level(roots, mult, members, As, K, child)) return false;
        for (double rc : child.radii)
            if (rc > rs / 4.0) return false;
        out.roots.insert(out.roots.end(), child.roots.begin(), child.roots.end());
        out.radii.insert(out.radii.end(), child.radii.begin(), child.radii.end());
    }
    return true;
}

} // namespace

RootClusterCover sublevel_from_roots(std::vector<Complex> roots, std::vector<int> multiplicities,
                                     double leading_modulus) {
    if (leading_modulus <= 0.0) throw InputError("sublevel: leading modulus must be positive");
    if (roots.size() != multiplicities.size()) throw InputError("sublevel: roots/multiplicities mismatch");
    RootClusterCover cover;
    cover.roots = std::move(roots);
    cover.multiplicities = std::move(multiplicities);
    cover.leading_modulus = leading_modulus;
    cover.degree = 0;
    for (size_t i = 0; i < cover.roots.size(); ++i) {
        if (cover.multiplicities[i] <= 0) throw InputError("sublevel: nonpositive multiplicity");
        if (std::abs(cover.roots[i]) >= 0.5)
            throw HypothesisError("sublevel: all roots must lie in D(0, 1/2)");
        cover.degree += cover.multiplicities[i];
    }
    if (cover.degree == 0) return cover; // constant polynomial: empty cover

    std::vector<int> all(cover.roots.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);

    double K = 1.0;
    for (;;) {
        Selection sel;
        if (decompose_level(cover.roots, cover.multiplicities, all, cover.leading_modulus, K, sel)) {
            cover.selected = std::move(sel.roots);
            cover.radii = std::move(sel.radii);
            cover.weierstrass_constant = K;
            return cover;
        }
        K *= 2.0;
        if (K > 1e12) throw NumericError("sublevel: Weierstrass constant failed to stabilize");
    }
}

RootClusterCover sublevel_decomposition(std::span<const Complex> coeffs) {
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (coeffs.empty() || scale == 0.0) throw InputError("sublevel: zero polynomial");
    int d = static_cast<int>(coeffs.size()) - 1;
    while (d > 0 && std::abs(coeffs[static_cast<size_t>(d)]) <= 1e-14 * scale) --d;
    const double A = std::abs(coeffs[static_cast<size_t>(d)]);
    if (d == 0) {
        RootClusterCover cover;
        cover.leading_modulus = A;
        return cover;
    }
    const std::vector<Complex> raw = poly_roots(coeffs);
    std::vector<Complex> locations;
    std::vector<int> mult;
    group_roots(raw, 1e-7, locations, mult);
    return sublevel_from_roots(std::move(locations), std::move(mult), A);
}

double abs_poly_from_cover(const RootClusterCover& cover, Complex z) {
    double v = cover.leading_modulus;
    for (size_t i = 0; i < cover.roots.size(); ++i)
        v *= std::pow(std::abs(z - cover.roots[i]), cover.multiplicities[i]);
    return v;
}

SublevelReport verify_sublevel(const RootClusterCover& cover, int grid_resolution) {
    if (grid_resolution < 8) throw InputError("verify_sublevel: grid resolution too small");
    SublevelReport rep;
    rep.grid_resolution = grid_resolution;
    if (cover.selected.empty()) return rep;

    const double Apow = std::pow(cover.leading_modulus, 1.0 / (cover.degree + 1));
    for (size_t k = 0; k < cover.selected.size(); ++k)
        rep.K1 = std::max(rep.K1, cover.radii[k] * Apow);

    auto inside_union_2r = [&](Complex z) {
        for (size_t k = 0; k < cover.selected.size(); ++k)
            if (std::abs(z - cover.roots[static_cast<size_t>(cover.selected[k])]) <
                2.0 * cover.radii[k])
                return true;
        return false;
    };

    // property (2): local polar sampling of each selected disc
    for (size_t k = 0; k < cover.selected.size(); ++k) {
        const Complex c = cover.roots[static_cast<size_t>(cover.selected[k])];
        const double r = cover.radii[k];
        const double two_pi = 2.0 * std::acos(-1.0);
        for (int ir = 1; ir <= 8; ++ir) {
            const double rho = 4.0 * r * ir / 8.0;
            for (int ia = 0; ia < 32; ++ia) {
                const double th = two_pi * ia / 32.0;
                const Complex z = c + Complex(rho * std::cos(th), rho * std::sin(th));
                rep.K2 = std::max(rep.K2, abs_poly_from_cover(cover, z) * r);
            }
        }
        rep.K2 = std::max(rep.K2, abs_poly_from_cover(cover, c) * r);
    }

    // properties (2) and (3) on the uniform grid over D(0,1)
    double min_off = std::numeric_limits<double>::infinity();
    const int G = grid_resolution;
    const double h = 2.0 / G;
    for (int iy = 0; iy < G; ++iy) {
        for (int ix = 0; ix < G; ++ix) {
            const Complex z(-1.0 + (ix + 0.5) * h, -1.0 + (iy + 0.5) * h);
            if (std::abs(z) >= 1.0) continue;
            const double v = abs_poly_from_cover(cover, z);
            for (size_t k = 0; k < cover.selected.size(); ++k) {
                const double dist = std::abs(z - cover.roots[static_cast<size_t>(cover.selected[k])]);
                if (dist < 4.0 * cover.radii[k]) rep.K2 = std::max(rep.K2, v * cover.radii[k]);
            }
            if (!inside_union_2r(z)) min_off = std::min(min_off, v);
        }
    }
    if (std::isfinite(min_off) && min_off > 0.0) rep.K3 = Apow / min_off;
    return rep;
}

} // namespace subgap::rootgeom
