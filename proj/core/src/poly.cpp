#include "subgap/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace subgap::poly {

int total_degree(const Exponents& e) {
    int d = 0;
    for (int k : e) d += k;
    return d;
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

MultiPoly::MultiPoly(int nvars) : nvars_(nvars) {}

MultiPoly MultiPoly::constant(int nvars, Complex c) {
    MultiPoly p(nvars);
    if (c != Complex(0.0)) p.terms_.emplace(Exponents(static_cast<size_t>(nvars), 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw InputError("MultiPoly::variable: index out of range");
    Exponents e(static_cast<size_t>(nvars), 0);
    e[static_cast<size_t>(index)] = 1;
    return monomial(nvars, std::move(e), 1.0);
}

MultiPoly MultiPoly::monomial(int nvars, Exponents e, Complex c) {
    if (static_cast<int>(e.size()) != nvars) throw InputError("MultiPoly::monomial: bad exponent length");
    for (int k : e)
        if (k < 0) throw InputError("MultiPoly::monomial: negative exponent");
    MultiPoly p(nvars);
    if (c != Complex(0.0)) p.terms_.emplace(std::move(e), c);
    return p;
}

int MultiPoly::degree() const {
    if (terms_.empty()) return -1;
    // grlex order: the largest term has the maximal total degree
    return total_degree(terms_.rbegin()->first);
}

Complex MultiPoly::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

void MultiPoly::add_term(const Exponents& e, Complex c) {
    if (static_cast<int>(e.size()) != nvars_) throw InputError("MultiPoly::add_term: bad exponent length");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex(0.0)) terms_.erase(it);
    } else if (c == Complex(0.0)) {
        terms_.erase(it);
    }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& rhs) {
    if (nvars_ != rhs.nvars_) throw InputError("MultiPoly: dimension mismatch in +");
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    prune();
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& rhs) {
    if (nvars_ != rhs.nvars_) throw InputError("MultiPoly: dimension mismatch in -");
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    prune();
    return *this;
}

MultiPoly& MultiPoly::operator*=(Complex c) {
    if (c == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(*this);
    for (auto& [e, v] : r.terms_) v = -v;
    return r;
}

namespace {

MultiPoly mul_impl(const MultiPoly& a, const MultiPoly& b,
                   const std::function<bool(const Exponents&)>& keep) {
    if (a.nvars() != b.nvars()) throw InputError("MultiPoly: dimension mismatch in *");
    MultiPoly r(a.nvars());
    Exponents e(static_cast<size_t>(a.nvars()), 0);
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (!keep(e)) continue;
            r.add_term(e, ca * cb);
        }
    }
    r.prune();
    return r;
}

} // namespace

MultiPoly MultiPoly::mul(const MultiPoly& a, const MultiPoly& b) {
    return mul_impl(a, b, [](const Exponents&) { return true; });
}

MultiPoly MultiPoly::mul_trunc_total(const MultiPoly& a, const MultiPoly& b, int trunc) {
    if (trunc < 0) return mul(a, b);
    return mul_impl(a, b, [trunc](const Exponents& e) { return total_degree(e) <= trunc; });
}

MultiPoly MultiPoly::mul_trunc_var(const MultiPoly& a, const MultiPoly& b, int var, int trunc) {
    if (trunc < 0) return mul(a, b);
    return mul_impl(a, b,
                    [var, trunc](const Exponents& e) { return e[static_cast<size_t>(var)] <= trunc; });
}

MultiPoly MultiPoly::pow(int k) const {
    if (k < 0) throw InputError("MultiPoly::pow: negative exponent");
    MultiPoly r = constant(nvars_, 1.0);
    for (int i = 0; i < k; ++i) r = mul(r, *this);
    return r;
}

MultiPoly MultiPoly::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw InputError("MultiPoly::derivative: variable out of range");
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        const int k = e[static_cast<size_t>(var)];
        if (k == 0) continue;
        Exponents d = e;
        d[static_cast<size_t>(var)] = k - 1;
        r.add_term(d, c * static_cast<double>(k));
    }
    return r;
}

MultiPoly MultiPoly::truncate_total(int maxdeg) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) <= maxdeg) r.terms_.emplace(e, c);
    return r;
}

MultiPoly MultiPoly::truncate_var(int var, int maxdeg) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_)
        if (e[static_cast<size_t>(var)] <= maxdeg) r.terms_.emplace(e, c);
    return r;
}

Complex MultiPoly::eval(std::span<const Complex> z) const {
    if (static_cast<int>(z.size()) != nvars_) throw InputError("MultiPoly::eval: dimension mismatch");
    Complex acc = 0.0;
    for (const auto& [e, c] : terms_) {
        Complex t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= z[i];
        acc += t;
    }
    return acc;
}

Complex MultiPoly::eval(const Eigen::VectorXcd& z) const {
    return eval(std::span<const Complex>(z.data(), static_cast<size_t>(z.size())));
}

MultiPoly MultiPoly::substitute(std::span<const MultiPoly> args, const Trunc& tr) const {
    if (static_cast<int>(args.size()) != nvars_)
        throw InputError("MultiPoly::substitute: argument count mismatch");
    const int out_vars = args.empty() ? 0 : args[0].nvars();
    for (const auto& a : args)
        if (a.nvars() != out_vars) throw InputError("MultiPoly::substitute: inconsistent arguments");

    auto tmul = [&tr](const MultiPoly& a, const MultiPoly& b) {
        switch (tr.kind) {
            case Trunc::Kind::total: return mul_trunc_total(a, b, tr.maxdeg);
            case Trunc::Kind::var: return mul_trunc_var(a, b, tr.var, tr.maxdeg);
            default: return mul(a, b);
        }
    };

    MultiPoly acc(out_vars);
    for (const auto& [e, c] : terms_) {
        MultiPoly t = constant(out_vars, c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) t = tmul(t, args[i]);
        acc += t;
    }
    acc.prune();
    return acc;
}

MultiPoly MultiPoly::substitute_var(int var, const MultiPoly& value) const {
    if (value.nvars() != nvars_) throw InputError("MultiPoly::substitute_var: dimension mismatch");
    std::vector<MultiPoly> args;
    args.reserve(static_cast<size_t>(nvars_));
    for (int i = 0; i < nvars_; ++i)
        args.push_back(i == var ? value : variable(nvars_, i));
    return substitute(args);
}

double MultiPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

void MultiPoly::prune(double rel_tol) {
    if (terms_.empty()) return;
    const double cut = rel_tol * max_abs_coeff();
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < cut)
            it = terms_.erase(it);
        else
            ++it;
    }
}

bool MultiPoly::approx_equal(const MultiPoly& rhs, double tol) const {
    MultiPoly d = *this;
    d -= rhs;
    return d.max_abs_coeff() <= tol;
}

std::string MultiPoly::to_string(std::span<const std::string> var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real();
        if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << "i";
        os << ")";
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (i < var_names.size())
                os << "*" << var_names[i];
            else
                os << "*z" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

// --- PolyMap ---------------------------------------------------------------

PolyMap PolyMap::make(std::vector<MultiPoly> components, std::optional<int> homogeneous_degree) {
    PolyMap m;
    m.n = static_cast<int>(components.size());
    m.components = std::move(components);
    m.homogeneous_degree = homogeneous_degree;
    for (const auto& c : m.components)
        if (c.nvars() != m.n)
            throw InputError("PolyMap: every component must be a polynomial in n variables");
    if (homogeneous_degree) {
        const int d = *homogeneous_degree;
        if (d <= 0) throw InputError("PolyMap: homogeneous degree must be positive");
        for (const auto& c : m.components)
            for (const auto& [e, coef] : c.terms())
                if (total_degree(e) != d)
                    throw InputError("PolyMap: component term violates homogeneity of degree " +
                                     std::to_string(d));
    }
    return m;
}

PolyMap PolyMap::identity(int n) {
    std::vector<MultiPoly> comps;
    comps.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) comps.push_back(MultiPoly::variable(n, i));
    return make(std::move(comps), 1);
}

PolyMap PolyMap::line_conic_example() {
    auto z1 = MultiPoly::variable(3, 0), z2 = MultiPoly::variable(3, 1), z3 = MultiPoly::variable(3, 2);
    std::vector<MultiPoly> comps{z1 * z1 + z2 * z3, z2 * z2 + z1 * z3, z3 * z3};
    return make(std::move(comps), 2);
}

int PolyMap::max_degree() const {
    int d = 0;
    for (const auto& c : components) d = std::max(d, c.degree());
    return d;
}

// --- JetSeries ---------------------------------------------------------------

JetSeries::JetSeries(int order, Complex c0) : c_(static_cast<size_t>(order) + 1, 0.0) {
    if (order < 0) throw InputError("JetSeries: negative order");
    c_[0] = c0;
}

JetSeries::JetSeries(int order, std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    if (order < 0) throw InputError("JetSeries: negative order");
    c_.resize(static_cast<size_t>(order) + 1, 0.0);
}

JetSeries JetSeries::variable(int order) {
    JetSeries j(order);
    if (order >= 1) j[1] = 1.0;
    return j;
}

JetSeries& JetSeries::operator+=(const JetSeries& rhs) {
    if (order() != rhs.order()) throw InputError("JetSeries: order mismatch in +");
    for (size_t k = 0; k < c_.size(); ++k) c_[k] += rhs.c_[k];
    return *this;
}

JetSeries& JetSeries::operator-=(const JetSeries& rhs) {
    if (order() != rhs.order()) throw InputError("JetSeries: order mismatch in -");
    for (size_t k = 0; k < c_.size(); ++k) c_[k] -= rhs.c_[k];
    return *this;
}

JetSeries& JetSeries::operator*=(Complex c) {
    for (auto& v : c_) v *= c;
    return *this;
}

JetSeries JetSeries::mul(const JetSeries& a, const JetSeries& b) {
    if (a.order() != b.order()) throw InputError("JetSeries: order mismatch in *");
    JetSeries r(a.order());
    const int K = a.order();
    for (int i = 0; i <= K; ++i) {
        if (a.c_[static_cast<size_t>(i)] == Complex(0.0)) continue;
        for (int j = 0; i + j <= K; ++j)
            r.c_[static_cast<size_t>(i + j)] += a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)];
    }
    return r;
}

JetSeries JetSeries::pow(int k) const {
    JetSeries r(order());
    r[0] = 1.0;
    for (int i = 0; i < k; ++i) r = mul(r, *this);
    return r;
}

JetSeries JetSeries::compose(const JetSeries& inner) const {
    if (std::abs(inner.c_[0]) != 0.0)
        throw InputError("JetSeries::compose: inner series must have zero constant term");
    JetSeries r(order());
    JetSeries p(order());
    p[0] = 1.0; // inner^0
    for (int k = 0; k <= order(); ++k) {
        r += p * c_[static_cast<size_t>(k)];
        if (k < order()) p = mul(p, inner);
    }
    return r;
}

JetSeries JetSeries::derivative() const {
    JetSeries r(order());
    for (int k = 1; k <= order(); ++k)
        r[k - 1] = c_[static_cast<size_t>(k)] * static_cast<double>(k);
    r[order()] = 0.0;
    return r;
}

Complex JetSeries::eval(Complex zeta) const {
    Complex acc = 0.0;
    for (int k = order(); k >= 0; --k) acc = acc * zeta + c_[static_cast<size_t>(k)];
    return acc;
}

double JetSeries::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

// --- operations --------------------------------------------------------------

Eigen::VectorXcd evaluate(const PolyMap& map, const Eigen::VectorXcd& z) {
    if (z.size() != map.n) throw InputError("evaluate: point dimension mismatch");
    Eigen::VectorXcd out(map.n);
    for (int j = 0; j < map.n; ++j) out(j) = map.components[static_cast<size_t>(j)].eval(z);
    return out;
}

std::vector<std::vector<MultiPoly>> jacobian(const PolyMap& map) {
    std::vector<std::vector<MultiPoly>> J(static_cast<size_t>(map.n));
    for (int j = 0; j < map.n; ++j) {
        J[static_cast<size_t>(j)].reserve(static_cast<size_t>(map.n));
        for (int k = 0; k < map.n; ++k)
            J[static_cast<size_t>(j)].push_back(map.components[static_cast<size_t>(j)].derivative(k));
    }
    return J;
}

Eigen::MatrixXcd jacobian_at(const PolyMap& map, const Eigen::VectorXcd& z) {
    if (z.size() != map.n) throw InputError("jacobian_at: point dimension mismatch");
    Eigen::MatrixXcd J(map.n, map.n);
    for (int j = 0; j < map.n; ++j)
        for (int k = 0; k < map.n; ++k)
            J(j, k) = map.components[static_cast<size_t>(j)].derivative(k).eval(z);
    return J;
}

MultiPoly det_poly_matrix(const std::vector<std::vector<MultiPoly>>& m) {
    const size_t n = m.size();
    if (n == 0) throw InputError("det_poly_matrix: empty matrix");
    if (n == 1) return m[0][0];
    const int nv = m[0][0].nvars();
    MultiPoly det(nv);
    for (size_t k = 0; k < n; ++k) {
        if (m[0][k].is_zero()) continue;
        std::vector<std::vector<MultiPoly>> minor;
        minor.reserve(n - 1);
        for (size_t i = 1; i < n; ++i) {
            std::vector<MultiPoly> row;
            row.reserve(n - 1);
            for (size_t j = 0; j < n; ++j)
                if (j != k) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        MultiPoly term = MultiPoly::mul(m[0][k], det_poly_matrix(minor));
        if (k % 2 == 1) term = -term;
        det += term;
    }
    return det;
}

MultiPoly det_jacobian(const PolyMap& map) {
    if (map.n == 0) throw InputError("det_jacobian: empty map");
    return det_poly_matrix(jacobian(map));
}

JetVec compose_jet(std::span<const MultiPoly> polys, const JetVec& arg, int K) {
    if (K < 1) throw InputError("compose_jet: K must be >= 1");
    const int nv = polys.empty() ? 0 : polys[0].nvars();
    if (static_cast<int>(arg.size()) != nv)
        throw InputError("compose_jet: disc dimension must match the number of variables");
    // normalize all inputs to order K
    JetVec a;
    a.reserve(arg.size());
    for (const auto& j : arg) {
        JetSeries s(K);
        for (int k = 0; k <= std::min(K, j.order()); ++k) s[k] = j[k];
        a.push_back(std::move(s));
    }
    // cache powers a[i]^k up to the largest exponent of variable i
    std::vector<int> max_exp(static_cast<size_t>(nv), 0);
    for (const auto& p : polys)
        for (const auto& [e, c] : p.terms())
            for (size_t i = 0; i < e.size(); ++i)
                max_exp[i] = std::max(max_exp[i], e[i]);
    std::vector<std::vector<JetSeries>> powers(static_cast<size_t>(nv));
    for (size_t i = 0; i < powers.size(); ++i) {
        powers[i].reserve(static_cast<size_t>(max_exp[i]) + 1);
        JetSeries one(K);
        one[0] = 1.0;
        powers[i].push_back(one);
        for (int k = 1; k <= max_exp[i]; ++k)
            powers[i].push_back(JetSeries::mul(powers[i].back(), a[i]));
    }

    JetVec out;
    out.reserve(polys.size());
    for (const auto& p : polys) {
        JetSeries acc(K);
        for (const auto& [e, c] : p.terms()) {
            JetSeries t(K);
            t[0] = c;
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) t = JetSeries::mul(t, powers[i][static_cast<size_t>(e[i])]);
            acc += t;
        }
        out.push_back(std::move(acc));
    }
    return out;
}

JetVec compose_jet(const PolyMap& map, const JetVec& disc, int K) {
    return compose_jet(std::span<const MultiPoly>(map.components), disc, K);
}

std::optional<int> vanishing_order(const JetVec& f, double rel_tol) {
    if (f.empty()) return std::nullopt;
    const int K = f[0].order();
    double scale = 0.0;
    for (const auto& j : f) scale = std::max(scale, j.max_abs_coeff());
    if (scale == 0.0) return std::nullopt;
    const double cut = rel_tol * scale;
    for (int k = 1; k <= K; ++k)
        for (const auto& j : f)
            if (std::abs(j[k]) > cut) return k;
    return std::nullopt;
}

IsolatedZeroCertificate check_isolated_zero(const PolyMap& map, int samples, double tol,
                                            unsigned long seed) {
    if (!map.homogeneous_degree)
        throw HypothesisError("check_isolated_zero: map must be homogeneous");
    if (samples < 1000) throw InputError("check_isolated_zero: need at least 1000 samples");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    IsolatedZeroCertificate cert;
    cert.samples = samples;
    cert.min_abs = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd z(map.n);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < map.n; ++i) z(i) = Complex(gauss(rng), gauss(rng));
        z /= z.norm();
        const double v = evaluate(map, z).norm();
        if (v < cert.min_abs) {
            cert.min_abs = v;
            cert.argmin = z;
        }
    }
    cert.pass = cert.min_abs > tol;
    return cert;
}

int default_jet_order(const PolyMap& map) { return 2 * map.max_degree() + 4; }

} // namespace subgap::poly
