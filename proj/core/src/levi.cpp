#include "subgap/levi.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "subgap/errors.hpp"

namespace subgap::levi {

namespace {
int map_dim(const MapDerivatives& md) { return md.map.n; }
} // namespace

MapDerivatives::MapDerivatives(poly::PolyMap m)
    : map(std::move(m)), jac(poly::jacobian(map)), det(poly::det_poly_matrix(jac)) {}

Eigen::MatrixXcd MapDerivatives::jacobian_at(const Eigen::VectorXcd& z) const {
    if (z.size() != map.n) throw InputError("jacobian_at: point dimension mismatch");
    Eigen::MatrixXcd J(map.n, map.n);
    for (int j = 0; j < map.n; ++j)
        for (int k = 0; k < map.n; ++k)
            J(j, k) = jac[static_cast<size_t>(j)][static_cast<size_t>(k)].eval(z);
    return J;
}

HermitianSpectrum levi_form(const MapDerivatives& md, const Eigen::VectorXcd& z) {
    const Eigen::MatrixXcd J = md.jacobian_at(z);
    HermitianSpectrum s;
    s.matrix = J.adjoint() * J;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.matrix);
    if (es.info() != Eigen::Success) throw NumericError("levi_form: eigensolver failed");
    s.eigenvalues = es.eigenvalues();
    s.eigenvectors = es.eigenvectors();

    // det H = |det J|^2, checked within 1e-9 relative to the determinant's
    // natural scale ||H||^n (both sides are ~0 on the critical locus).
    const Complex detJ = md.det.eval(z);
    const double detH = s.eigenvalues.prod();
    const double ref = std::norm(detJ);
    const double scale =
        std::max({std::abs(detH), ref, std::pow(std::max(s.matrix.norm(), 1e-300), map_dim(md))});
    if (std::abs(detH - ref) > 1e-9 * scale)
        throw NumericError("levi_form: det H = |det J|^2 identity violated");
    return s;
}

HermitianSpectrum levi_form(const poly::PolyMap& map, const Eigen::VectorXcd& z) {
    return levi_form(MapDerivatives(map), z);
}

double min_eigenvalue(const Eigen::MatrixXcd& H) {
    const double scale = std::max(H.norm(), 1e-300);
    if ((H - H.adjoint()).norm() > 1e-12 * scale)
        throw InputError("min_eigenvalue: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolver failed");
    return es.eigenvalues()(0);
}

Eigen::MatrixXcd resolvent_projector(const Eigen::MatrixXcd& A, Complex center, double radius,
                                     int nodes, double idempotence_tol) {
    if (radius <= 0.0) throw InputError("resolvent_projector: radius must be positive");
    if (nodes < 64) throw InputError("resolvent_projector: need at least 64 nodes");
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw InputError("resolvent_projector: square matrix required");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, /*computeEigenvectors=*/false);
    if (es.info() == Eigen::Success) {
        const double margin = 10.0 * std::numeric_limits<double>::epsilon() *
                              std::max(A.norm(), 1.0);
        for (int i = 0; i < n; ++i) {
            const double gap = std::abs(std::abs(es.eigenvalues()(i) - center) - radius);
            if (gap < margin)
                throw NumericError(
                    "resolvent_projector: eigenvalue too close to the contour; "
                    "choose a different radius");
        }
    }

    const double two_pi = 2.0 * std::acos(-1.0);
    Eigen::MatrixXcd prev = Eigen::MatrixXcd::Zero(n, n);
    for (int N = nodes; N <= 16 * nodes; N *= 2) {
        Eigen::MatrixXcd Pi = Eigen::MatrixXcd::Zero(n, n);
        for (int q = 0; q < N; ++q) {
            const double th = two_pi * q / N;
            const Complex w = radius * Complex(std::cos(th), std::sin(th));
            const Eigen::MatrixXcd R =
                (Complex(center) + w) * Eigen::MatrixXcd::Identity(n, n) - A;
            Pi += w * R.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
        }
        Pi /= static_cast<double>(N);
        if ((Pi * Pi - Pi).norm() < idempotence_tol) return Pi;
        prev = Pi;
    }
    throw NumericError("resolvent_projector: quadrature failed to reach idempotence tolerance",
                       (prev * prev - prev).norm());
}

int kernel_dimension(const Eigen::MatrixXcd& A, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = rel_tol * sv(0);
    int dim = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < cut || sv(i) == 0.0) ++dim;
    return dim;
}

Eigen::VectorXcd kernel_vector(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    return svd.matrixV().col(A.cols() - 1);
}

Eigen::MatrixXcd unitary_separation(const Eigen::MatrixXcd& J_p) {
    const int n = static_cast<int>(J_p.rows());
    if (J_p.cols() != n) throw InputError("unitary_separation: square matrix required");
    if (kernel_dimension(J_p) != 1)
        throw HypothesisError("unitary_separation: kernel dimension must be exactly 1");

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J_p, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // U columns 0..n-2 span range(J_p); V column n-1 spans ker(J_p).
    Eigen::MatrixXcd from(n, n);
    from.leftCols(n - 1) = svd.matrixU().leftCols(n - 1);
    from.col(n - 1) = svd.matrixU().col(n - 1);
    Eigen::MatrixXcd to(n, n);
    to.leftCols(n - 1) = svd.matrixV().leftCols(n - 1); // basis of ker(J_p)^perp
    to.col(n - 1) = svd.matrixV().col(n - 1);           // kernel direction
    const Eigen::MatrixXcd M = to * from.adjoint();

    // certify: M J_p has exactly one small eigenvalue and it is simple
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M * J_p, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("unitary_separation: eigensolver failed");
    std::vector<double> mags(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) mags[static_cast<size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(mags.begin(), mags.end());
    const double scale = std::max(J_p.norm(), 1e-300);
    if (!(mags[0] <= 1e-7 * scale && mags[1] > 1e-7 * scale))
        throw NumericError("unitary_separation: zero eigenvalue of M J_p is not simple");
    return M;
}

} // namespace subgap::levi
