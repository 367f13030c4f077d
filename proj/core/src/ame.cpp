#include "subgap/ame.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "subgap/errors.hpp"
#include "subgap/rootgeom.hpp"

namespace subgap::levi {

using poly::Complex;
using poly::JetSeries;
using poly::JetVec;
using poly::MultiPoly;

PolyMatrix::PolyMatrix(int r, int c, int nv) : rows(r), cols(c), nvars(nv) {
    entries.assign(static_cast<size_t>(r) * static_cast<size_t>(c), MultiPoly(nv));
}

PolyMatrix PolyMatrix::from_numeric(const Eigen::MatrixXcd& m, int nvars) {
    PolyMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()), nvars);
    for (int i = 0; i < out.rows; ++i)
        for (int j = 0; j < out.cols; ++j)
            out.at(i, j) = MultiPoly::constant(nvars, m(i, j));
    return out;
}

PolyMatrix PolyMatrix::mul_trunc(const PolyMatrix& a, const PolyMatrix& b, int trunc_total) {
    if (a.cols != b.rows || a.nvars != b.nvars) throw InputError("PolyMatrix: shape mismatch in *");
    PolyMatrix out(a.rows, b.cols, a.nvars);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            MultiPoly acc(a.nvars);
            for (int k = 0; k < a.cols; ++k)
                acc += MultiPoly::mul_trunc_total(a.at(i, k), b.at(k, j), trunc_total);
            out.at(i, j) = std::move(acc);
        }
    return out;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& rhs) {
    if (rows != rhs.rows || cols != rhs.cols) throw InputError("PolyMatrix: shape mismatch in +");
    for (size_t k = 0; k < entries.size(); ++k) entries[k] += rhs.entries[k];
    return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& rhs) {
    if (rows != rhs.rows || cols != rhs.cols) throw InputError("PolyMatrix: shape mismatch in -");
    for (size_t k = 0; k < entries.size(); ++k) entries[k] -= rhs.entries[k];
    return *this;
}

PolyMatrix& PolyMatrix::operator*=(Complex c) {
    for (auto& e : entries) e *= c;
    return *this;
}

MultiPoly PolyMatrix::trace() const {
    MultiPoly t(nvars);
    for (int i = 0; i < std::min(rows, cols); ++i) t += at(i, i);
    return t;
}

Eigen::MatrixXcd PolyMatrix::constant_part() const {
    Eigen::MatrixXcd m(rows, cols);
    const poly::Exponents zero(static_cast<size_t>(nvars), 0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = at(i, j).coeff(zero);
    return m;
}

double PolyMatrix::max_abs_coeff() const {
    double v = 0.0;
    for (const auto& e : entries) v = std::max(v, e.max_abs_coeff());
    return v;
}

PolyMatrix PolyMatrix::truncate_total(int maxdeg) const {
    PolyMatrix out(rows, cols, nvars);
    for (size_t k = 0; k < entries.size(); ++k) out.entries[k] = entries[k].truncate_total(maxdeg);
    return out;
}

MultiPoly shift_to_point(const MultiPoly& f, const Eigen::VectorXcd& p) {
    if (static_cast<int>(p.size()) != f.nvars())
        throw InputError("shift_to_point: dimension mismatch");
    std::vector<MultiPoly> args;
    args.reserve(static_cast<size_t>(f.nvars()));
    for (int i = 0; i < f.nvars(); ++i)
        args.push_back(MultiPoly::variable(f.nvars(), i) + MultiPoly::constant(f.nvars(), p(i)));
    return f.substitute(args);
}

AmeField ame_field(const poly::PolyMap& map, const Eigen::VectorXcd& p, int K, int nodes) {
    if (p.size() != map.n) throw InputError("ame_field: point dimension mismatch");
    if (p.norm() == 0.0) throw InputError("ame_field: base point must be nonzero");
    if (K < 1) throw InputError("ame_field: jet order must be >= 1");

    const MapDerivatives md(map);
    const Eigen::MatrixXcd J_p = md.jacobian_at(p);
    const int n = map.n;
    const int kd = kernel_dimension(J_p);

    AmeField out;
    out.base_point = p;
    out.jet_order = K;

    if (kd == 0) {
        // H(p) nondegenerate: any constant field is an AME; flagged trivial.
        out.trivial = true;
        out.kernel_vec = Eigen::VectorXcd::Zero(n);
        out.kernel_vec(0) = 1.0;
        out.separation = Eigen::MatrixXcd::Identity(n, n);
        out.projector = PolyMatrix::from_numeric(Eigen::MatrixXcd::Identity(n, n), n);
        out.map_jacobian = PolyMatrix(n, n, n);
        out.field.assign(static_cast<size_t>(n), MultiPoly(n));
        for (int i = 0; i < n; ++i) out.field[static_cast<size_t>(i)] = MultiPoly::constant(n, out.kernel_vec(i));
        out.eigenvalue = MultiPoly(n);
        return out;
    }
    if (kd >= 2)
        throw HypothesisError("ame_field: dim ker H(p) >= 2, hypothesis violated");

    out.separation = unitary_separation(J_p);
    out.kernel_vec = kernel_vector(J_p);

    // epsilon = half the second-smallest |eigenvalue| of M J(p)
    const Eigen::MatrixXcd MJp = out.separation * J_p;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(MJp, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("ame_field: eigensolver failed");
    std::vector<double> mags(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) mags[static_cast<size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(mags.begin(), mags.end());
    out.epsilon = 0.5 * mags[1];
    if (out.epsilon <= 0.0) throw NumericError("ame_field: spectral separation collapsed");

    // Jt(z) = M J(p + w), exact polynomial entries in w
    out.map_jacobian = PolyMatrix(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MultiPoly acc(n);
            for (int k = 0; k < n; ++k) {
                MultiPoly s = shift_to_point(md.jac[static_cast<size_t>(k)][static_cast<size_t>(j)], p);
                s *= out.separation(i, k);
                acc += s;
            }
            out.map_jacobian.at(i, j) = std::move(acc);
        }

    // DeltaJ = Jt - Jt(p): no constant term, so the Neumann series in the jet
    // algebra terminates at order K.
    PolyMatrix deltaJ = out.map_jacobian;
    deltaJ -= PolyMatrix::from_numeric(MJp, n);

    const double two_pi = 2.0 * std::acos(-1.0);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    for (int N = std::max(nodes, 64);; N *= 2) {
        PolyMatrix Pi(n, n, n);
        for (int q = 0; q < N; ++q) {
            const double th = two_pi * q / N;
            const Complex w = out.epsilon * Complex(std::cos(th), std::sin(th));
            const Eigen::MatrixXcd S_num = (w * I - MJp).partialPivLu().solve(I);
            const PolyMatrix S = PolyMatrix::from_numeric(S_num, n);
            // resolvent jet: sum_m (S deltaJ)^m S
            PolyMatrix term = S;
            PolyMatrix R = S;
            for (int m = 1; m <= K; ++m) {
                term = PolyMatrix::mul_trunc(S, PolyMatrix::mul_trunc(deltaJ, term, K), K);
                R += term;
            }
            R *= w / static_cast<double>(N);
            Pi += R;
        }
        const Eigen::MatrixXcd Pi0 = Pi.constant_part();
        if ((Pi0 * Pi0 - Pi0).norm() < 1e-8) {
            out.projector = std::move(Pi);
            break;
        }
        if (N >= 16 * std::max(nodes, 64))
            throw NumericError("ame_field: contour quadrature failed to converge");
    }

    out.field.assign(static_cast<size_t>(n), MultiPoly(n));
    for (int i = 0; i < n; ++i) {
        MultiPoly acc(n);
        for (int j = 0; j < n; ++j) {
            MultiPoly t = out.projector.at(i, j);
            t *= out.kernel_vec(j);
            acc += t;
        }
        out.field[static_cast<size_t>(i)] = std::move(acc);
    }
    out.eigenvalue = PolyMatrix::mul_trunc(out.map_jacobian, out.projector, K).trace();

    // Pi(p) v0 = v0 within 1e-8
    Eigen::VectorXcd X0(n);
    const poly::Exponents zero(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) X0(i) = out.field[static_cast<size_t>(i)].coeff(zero);
    if ((X0 - out.kernel_vec).norm() > 1e-8)
        throw NumericError("ame_field: projector does not fix the kernel vector");
    return out;
}

double hol_projection_residual(const AmeField& ame) {
    if (ame.trivial) return 0.0;
    PolyMatrix lhs = PolyMatrix::mul_trunc(ame.map_jacobian, ame.projector, ame.jet_order);
    PolyMatrix rhs(ame.projector.rows, ame.projector.cols, ame.projector.nvars);
    for (int i = 0; i < rhs.rows; ++i)
        for (int j = 0; j < rhs.cols; ++j)
            rhs.at(i, j) = MultiPoly::mul_trunc_total(ame.eigenvalue, ame.projector.at(i, j),
                                                      ame.jet_order);
    lhs -= rhs;
    return lhs.max_abs_coeff();
}

double projector_idempotence_residual(const AmeField& ame) {
    if (ame.trivial) return 0.0;
    PolyMatrix sq = PolyMatrix::mul_trunc(ame.projector, ame.projector, ame.jet_order);
    sq -= ame.projector;
    return sq.max_abs_coeff();
}

JetVec flow_taylor(std::span<const MultiPoly> field, const Eigen::VectorXcd& y0, int K) {
    if (field.empty()) throw InputError("flow_taylor: empty field");
    const int n = field[0].nvars();
    if (static_cast<int>(field.size()) != n || static_cast<int>(y0.size()) != n)
        throw InputError("flow_taylor: dimension mismatch");
    JetVec Y(static_cast<size_t>(n), JetSeries(K));
    for (int i = 0; i < n; ++i) Y[static_cast<size_t>(i)][0] = y0(i);
    // Picard iteration; each pass gains one exact order.
    for (int pass = 0; pass < K; ++pass) {
        const JetVec XY = poly::compose_jet(field, Y, K);
        for (int i = 0; i < n; ++i) {
            JetSeries next(K);
            next[0] = y0(i);
            for (int k = 1; k <= K; ++k)
                next[k] = XY[static_cast<size_t>(i)][k - 1] / static_cast<double>(k);
            Y[static_cast<size_t>(i)] = std::move(next);
        }
    }
    return Y;
}

double flow_residual(std::span<const MultiPoly> field, const JetVec& flow) {
    const JetVec XY = poly::compose_jet(field, flow, flow[0].order());
    double r = 0.0;
    for (size_t i = 0; i < flow.size(); ++i) {
        const JetSeries d = flow[i].derivative();
        for (int k = 0; k + 1 <= flow[i].order(); ++k)
            r = std::max(r, std::abs(d[k] - XY[i][k]));
    }
    return r;
}

FoliationChart foliation_prepare(const poly::PolyMap& map, const Eigen::VectorXcd& p, int K,
                                 int samples_per_dim, double radius) {
    FoliationChart chart;
    chart.base_point = p;
    chart.transverse_radius = radius;
    chart.jet_order = K;
    chart.ame = ame_field(map, p, K);
    if (chart.ame.trivial)
        throw HypothesisError("foliation_prepare: dim ker H(p) must be 1");

    const int n = map.n;
    const MultiPoly det_w = shift_to_point(poly::det_jacobian(map), p);

    // center leaf
    const JetVec Yc = flow_taylor(chart.ame.field, Eigen::VectorXcd::Zero(n), K);
    chart.flow_residual_max = flow_residual(chart.ame.field, Yc);
    chart.center_detjac_jet = poly::compose_jet(std::span<const MultiPoly>(&det_w, 1), Yc, K)[0];

    const auto m_opt = poly::vanishing_order({chart.center_detjac_jet});
    if (!m_opt)
        throw NumericError(
            "foliation_prepare: det J vanishes identically along the leaf through order K; "
            "case (a) suspected -- increase K or check hypotheses");
    chart.weierstrass_order = *m_opt;

    // orthonormal basis of the transverse space X(p)^perp = v0^perp
    Eigen::MatrixXcd basis(n, n);
    basis.col(0) = chart.ame.kernel_vec;
    for (int i = 1; i < n; ++i) basis.col(i) = Eigen::VectorXcd::Unit(n, (i - 1));
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    const Eigen::MatrixXcd Q = qr.householderQ();
    // columns 1..n-1 of Q span v0^perp

    const int spd = std::max(samples_per_dim, 1);
    const int real_dims = 2 * (n - 1);
    const int total = static_cast<int>(std::llround(std::pow(static_cast<double>(spd), real_dims)));
    for (int s = 0; s < total; ++s) {
        int rem = s;
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
        for (int dim = 0; dim < real_dims; ++dim) {
            const int pos = rem % spd;
            rem /= spd;
            const double coord = (spd == 1) ? 0.0 : -radius + 2.0 * radius * pos / (spd - 1);
            const int cdim = dim / 2;
            const Complex step = (dim % 2 == 0) ? Complex(coord, 0.0) : Complex(0.0, coord);
            a += step * Q.col(1 + cdim);
        }
        const JetVec Y = flow_taylor(chart.ame.field, a, K);
        const JetSeries jz = poly::compose_jet(std::span<const MultiPoly>(&det_w, 1), Y, K)[0];

        // coefficients of the monic degree-m polynomial carrying the small roots
        std::vector<Complex> sorted;
        if (jz.max_abs_coeff() > 0.0) sorted = rootgeom::poly_roots(jz.coeffs());
        std::sort(sorted.begin(), sorted.end(),
                  [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
        const int m = chart.weierstrass_order;
        std::vector<Complex> ck(static_cast<size_t>(m), 0.0);
        if (static_cast<int>(sorted.size()) >= m) {
            // expand prod (zeta - rho_i) = zeta^m + c_1 zeta^{m-1} + ... + c_m
            std::vector<Complex> mono{1.0};
            for (int i = 0; i < m; ++i) {
                std::vector<Complex> next(mono.size() + 1, 0.0);
                for (size_t k = 0; k < mono.size(); ++k) {
                    next[k + 1] += mono[k];
                    next[k] -= sorted[static_cast<size_t>(i)] * mono[k];
                }
                mono = std::move(next);
            }
            for (int k = 1; k <= m; ++k) ck[static_cast<size_t>(k - 1)] = mono[static_cast<size_t>(m - k)];
        }
        chart.sample_offsets.push_back(a);
        chart.coeff_samples.push_back(std::move(ck));
    }
    return chart;
}

} // namespace subgap::levi
