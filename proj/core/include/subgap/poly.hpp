#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "subgap/errors.hpp"

namespace subgap::poly {

using Complex = std::complex<double>;

// Exponent multi-index in N^n.
using Exponents = std::vector<int>;

int total_degree(const Exponents& e);

// Graded lexicographic order: first by total degree, then lexicographic.
struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse multivariate polynomial with complex double coefficients.
//
// Invariants: no two terms share an exponent, no stored coefficient is zero.
// Term order is graded lexicographic, which fixes the summation order of
// every evaluation and keeps results reproducible across runs.
class MultiPoly {
public:
    using TermMap = std::map<Exponents, Complex, GrlexLess>;

    explicit MultiPoly(int nvars = 0);

    static MultiPoly constant(int nvars, Complex c);
    static MultiPoly variable(int nvars, int index);
    static MultiPoly monomial(int nvars, Exponents e, Complex c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    // Max total degree, or -1 for the zero polynomial.
    int degree() const;
    const TermMap& terms() const { return terms_; }

    Complex coeff(const Exponents& e) const;
    void add_term(const Exponents& e, Complex c);

    MultiPoly& operator+=(const MultiPoly& rhs);
    MultiPoly& operator-=(const MultiPoly& rhs);
    MultiPoly& operator*=(Complex c);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, Complex c) { return a *= c; }
    friend MultiPoly operator*(Complex c, MultiPoly a) { return a *= c; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) { return mul(a, b); }
    MultiPoly operator-() const;

    static MultiPoly mul(const MultiPoly& a, const MultiPoly& b);
    // Product with every term of total degree > trunc discarded (trunc < 0: no cut).
    static MultiPoly mul_trunc_total(const MultiPoly& a, const MultiPoly& b, int trunc);
    // Product with every term of degree > trunc in variable `var` discarded.
    static MultiPoly mul_trunc_var(const MultiPoly& a, const MultiPoly& b, int var, int trunc);

    MultiPoly pow(int k) const;
    MultiPoly derivative(int var) const;
    MultiPoly truncate_total(int maxdeg) const;
    MultiPoly truncate_var(int var, int maxdeg) const;

    // Exact evaluation; terms accumulated in grlex order.
    Complex eval(std::span<const Complex> z) const;
    Complex eval(const Eigen::VectorXcd& z) const;

    // Substitution z_i -> args[i]; the result lives in args' variable space.
    // Each args[i] must share the same nvars. Optional truncation caps either
    // the total degree or the degree in one designated variable of the result.
    struct Trunc {
        enum class Kind { none, total, var } kind = Kind::none;
        int var = 0;
        int maxdeg = -1;
        static Trunc none() { return {}; }
        static Trunc total(int k) { return {Kind::total, 0, k}; }
        static Trunc in_var(int v, int k) { return {Kind::var, v, k}; }
    };
    MultiPoly substitute(std::span<const MultiPoly> args, const Trunc& tr = Trunc::none()) const;

    // Substitutes a single variable; the variable count is preserved (the
    // substituted variable simply no longer occurs in the result).
    MultiPoly substitute_var(int var, const MultiPoly& value) const;

    // Drop terms with |coef| < rel_tol * max|coef| (cancellation noise control).
    void prune(double rel_tol = kPruneRel);
    double max_abs_coeff() const;

    bool approx_equal(const MultiPoly& rhs, double tol) const;

    std::string to_string(std::span<const std::string> var_names = {}) const;

    static constexpr double kPruneRel = 1e-14;

private:
    int nvars_;
    TermMap terms_;
};

// Polynomial map F = (F_1, ..., F_n) : C^n -> C^n.
struct PolyMap {
    int n = 0;
    std::vector<MultiPoly> components;
    std::optional<int> homogeneous_degree;

    // Validates dimensions and, when d is given, exact homogeneity of degree d.
    static PolyMap make(std::vector<MultiPoly> components,
                        std::optional<int> homogeneous_degree = std::nullopt);

    static PolyMap identity(int n);
    // The degree-2 self-map of C^3 used throughout the examples:
    // F(z) = (z1^2 + z2 z3, z2^2 + z1 z3, z3^2).
    static PolyMap line_conic_example();

    int max_degree() const;
};

// Truncated power series sum_{k<=order} c_k zeta^k; arithmetic is exact
// through `order` and discards everything above.
class JetSeries {
public:
    JetSeries() = default;
    explicit JetSeries(int order, Complex c0 = 0.0);
    JetSeries(int order, std::vector<Complex> coeffs);

    static JetSeries variable(int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    Complex operator[](int k) const { return c_[static_cast<size_t>(k)]; }
    Complex& operator[](int k) { return c_[static_cast<size_t>(k)]; }
    const std::vector<Complex>& coeffs() const { return c_; }

    JetSeries& operator+=(const JetSeries& rhs);
    JetSeries& operator-=(const JetSeries& rhs);
    JetSeries& operator*=(Complex c);
    friend JetSeries operator+(JetSeries a, const JetSeries& b) { return a += b; }
    friend JetSeries operator-(JetSeries a, const JetSeries& b) { return a -= b; }
    friend JetSeries operator*(JetSeries a, Complex c) { return a *= c; }
    friend JetSeries operator*(const JetSeries& a, const JetSeries& b) { return mul(a, b); }

    static JetSeries mul(const JetSeries& a, const JetSeries& b);
    JetSeries pow(int k) const;
    // Composition this(inner(zeta)); requires inner constant term == 0.
    JetSeries compose(const JetSeries& inner) const;
    JetSeries derivative() const;
    Complex eval(Complex zeta) const;

    double max_abs_coeff() const;

private:
    std::vector<Complex> c_; // c_[k] multiplies zeta^k; size order+1
};

using JetVec = std::vector<JetSeries>;

// --- operations -----------------------------------------------------------

// Exact evaluation of the map; throws InputError on dimension mismatch.
Eigen::VectorXcd evaluate(const PolyMap& map, const Eigen::VectorXcd& z);

// Entry (j,k) is dF_j/dz_k, by exact symbolic differentiation.
std::vector<std::vector<MultiPoly>> jacobian(const PolyMap& map);

// Numeric Jacobian matrix at a point.
Eigen::MatrixXcd jacobian_at(const PolyMap& map, const Eigen::VectorXcd& z);

// Symbolic determinant of the Jacobian (cofactor expansion, terms cancel).
MultiPoly det_jacobian(const PolyMap& map);

MultiPoly det_poly_matrix(const std::vector<std::vector<MultiPoly>>& m);

// Taylor expansion of F(disc(zeta)) through order K, exact in coefficients.
JetVec compose_jet(const PolyMap& map, const JetVec& disc, int K);

// Evaluates a vector of multivariate polynomials on a univariate jet.
JetVec compose_jet(std::span<const MultiPoly> polys, const JetVec& arg, int K);

// Smallest k >= 1 with a nonzero zeta^k coefficient in some component
// (constant terms ignored); nullopt when a_1..a_K all vanish numerically.
// `rel_tol` is measured against the largest coefficient modulus of the jet.
std::optional<int> vanishing_order(const JetVec& f, double rel_tol = 1e-9);

struct IsolatedZeroCertificate {
    double min_abs = 0.0;      // min |F| over the sphere sample
    bool pass = false;         // min_abs > tol
    int samples = 0;
    Eigen::VectorXcd argmin;
};

// Samples |F| on S^{2n-1}; by homogeneity a positive minimum certifies (up to
// sampling resolution) that F vanishes only at the origin. Heuristic.
IsolatedZeroCertificate check_isolated_zero(const PolyMap& map, int samples,
                                            double tol, unsigned long seed = 20240901ULL);

// Default jet truncation 2d+4 for a map of degree d.
int default_jet_order(const PolyMap& map);

} // namespace subgap::poly
