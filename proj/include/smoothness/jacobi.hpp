#pragma once

#include "smoothness/errors.hpp"
#include "smoothness/function.hpp"
#include "smoothness/quadrature.hpp"
#include "smoothness/space.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothness {

/// Algebraic polynomial in the monomial basis (index = power). The zero
/// polynomial has an empty coefficient list and degree -1.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) { trim(); }

    static Polynomial constant(double v) { return Polynomial({v}); }
    static Polynomial monomial(int power, double scale = 1.0)
    {
        std::vector<double> c(power + 1, 0.0);
        c[power] = scale;
        return Polynomial(std::move(c));
    }

    const std::vector<double>& coefficients() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    double coefficient(int power) const
    {
        return power >= 0 && power < static_cast<int>(c_.size()) ? c_[power] : 0.0;
    }

    double operator()(double x) const
    {
        double v = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
        return v;
    }

    Polynomial derivative() const
    {
        if (c_.size() <= 1) return {};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    /// Parity read off the coefficient pattern.
    Parity parity() const noexcept
    {
        bool even = true, odd = true;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0.0) continue;
            (k % 2 == 0 ? odd : even) = false;
        }
        if (even) return Parity::even;
        if (odd) return Parity::odd;
        return Parity::none;
    }

    friend Polynomial operator+(const Polynomial& l, const Polynomial& r)
    {
        std::vector<double> c(std::max(l.c_.size(), r.c_.size()), 0.0);
        for (std::size_t k = 0; k < l.c_.size(); ++k) c[k] += l.c_[k];
        for (std::size_t k = 0; k < r.c_.size(); ++k) c[k] += r.c_[k];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& l, const Polynomial& r) { return l + (-1.0) * r; }

    friend Polynomial operator*(double s, const Polynomial& p)
    {
        std::vector<double> c = p.c_;
        for (auto& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& l, const Polynomial& r)
    {
        if (l.is_zero() || r.is_zero()) return {};
        std::vector<double> c(l.c_.size() + r.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < l.c_.size(); ++i)
            for (std::size_t j = 0; j < r.c_.size(); ++j) c[i + j] += l.c_[i] * r.c_[j];
        return Polynomial(std::move(c));
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

inline constexpr int kMaxPolynomialDegree = 64;

namespace detail {

inline void check_jacobi_params(double a, double b)
{
    if (!(a > -1.0) || !(b > -1.0))
        throw std::invalid_argument("jacobi: parameters must exceed -1");
}

// Coefficients of P_n = ((c2 + c3 x) P_{n-1} - c4 P_{n-2}) / c1, classical normalization.
struct JacobiStep {
    double c1, c2, c3, c4;
};

inline JacobiStep jacobi_step(int n, double a, double b)
{
    const double s = 2.0 * n + a + b;
    return {2.0 * n * (n + a + b) * (s - 2.0), (s - 1.0) * (a * a - b * b),
            (s - 2.0) * (s - 1.0) * s, 2.0 * (n + a - 1.0) * (n + b - 1.0) * s};
}

// Classical (unnormalized) values P_0..P_max at x.
inline void jacobi_classical(int max_n, double a, double b, double x, std::vector<double>& out)
{
    out.assign(max_n + 1, 0.0);
    out[0] = 1.0;
    if (max_n == 0) return;
    out[1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int n = 2; n <= max_n; ++n) {
        const auto st = jacobi_step(n, a, b);
        out[n] = ((st.c2 + st.c3 * x) * out[n - 1] - st.c4 * out[n - 2]) / st.c1;
    }
}

} // namespace detail

/// Values P_0(x)..P_max(x) of the Jacobi polynomials for (1-x)^a (1+x)^b,
/// each scaled so that P_n(1) = 1.
inline std::vector<double> jacobi_values(int max_n, double a, double b, double x)
{
    detail::check_jacobi_params(a, b);
    std::vector<double> vx, v1;
    detail::jacobi_classical(max_n, a, b, x, vx);
    detail::jacobi_classical(max_n, a, b, 1.0, v1);
    for (int n = 0; n <= max_n; ++n) vx[n] /= v1[n];
    return vx;
}

/// Degree-n Jacobi polynomial for weight (1-x)^a (1+x)^b with P_n(1) = 1.
inline double jacobi_eval(int n, double a, double b, double x)
{
    if (n < 0) throw std::invalid_argument("jacobi_eval: negative degree");
    return jacobi_values(n, a, b, x)[n];
}

/// Monomial-basis form of jacobi_eval(n, a, b, .).
inline Polynomial jacobi_poly(int n, double a, double b)
{
    detail::check_jacobi_params(a, b);
    if (n < 0 || n > kMaxPolynomialDegree)
        throw std::invalid_argument("jacobi_poly: degree must lie in [0, 64]");
    std::vector<double> at_one;
    detail::jacobi_classical(n, a, b, 1.0, at_one);

    Polynomial prev = Polynomial::constant(1.0);
    if (n == 0) return prev;
    Polynomial cur({0.5 * (a - b), 0.5 * (a + b + 2.0)});
    const Polynomial x = Polynomial::monomial(1);
    for (int k = 2; k <= n; ++k) {
        const auto st = detail::jacobi_step(k, a, b);
        Polynomial next = (1.0 / st.c1) * ((st.c2 * cur + st.c3 * (x * cur)) - st.c4 * prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return (1.0 / at_one[n]) * cur;
}

/// A polynomial stored as coefficients in the normalized Jacobi basis.
/// Evaluation runs the recurrence, which stays accurate at degrees where
/// monomial coefficients would not.
class JacobiSeries {
public:
    JacobiSeries() = default;
    JacobiSeries(double a, double b, std::vector<double> coefficients)
        : a_(a), b_(b), c_(std::move(coefficients))
    {
        detail::check_jacobi_params(a, b);
    }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    const std::vector<double>& coefficients() const noexcept { return c_; }

    /// Index of the last nonzero coefficient, or -1.
    int degree() const noexcept
    {
        for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k)
            if (c_[k] != 0.0) return k;
        return -1;
    }

    double operator()(double x) const
    {
        if (c_.empty()) return 0.0;
        const auto v = jacobi_values(static_cast<int>(c_.size()) - 1, a_, b_, x);
        double sum = 0.0;
        for (std::size_t k = 0; k < c_.size(); ++k) sum += c_[k] * v[k];
        return sum;
    }

    Polynomial to_monomial() const
    {
        Polynomial out;
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k] != 0.0) out = out + c_[k] * jacobi_poly(static_cast<int>(k), a_, b_);
        return out;
    }

private:
    double a_ = 2.0;
    double b_ = 2.0;
    std::vector<double> c_;
};

/// Parameters of D = (1-x^2) d^2/dx^2 + (mu - nu - (nu+mu+2) x) d/dx.
struct DOperatorParams {
    double nu = 2.0;
    double mu = 2.0;
};

/// Eigenvalue of D_{x,2,2} on the degree-n Jacobi (2,2) polynomial.
inline double d_eigenvalue(int n) { return -static_cast<double>(n) * (n + 5); }

inline Polynomial apply_D_poly(const Polynomial& p, const DOperatorParams& d = {})
{
    const Polynomial p1 = p.derivative();
    const Polynomial p2 = p1.derivative();
    const Polynomial one_minus_x2({1.0, 0.0, -1.0});
    const Polynomial drift({d.mu - d.nu, -(d.nu + d.mu + 2.0)});
    return one_minus_x2 * p2 + drift * p1;
}

/// D f at x. Uses f.d1/f.d2 when present, otherwise central differences
/// with step max(1e-5, 1e-5 (1-x^2)).
inline double apply_D_func(const FunctionHandle& f, const DOperatorParams& d, double x)
{
    if (!(std::abs(x) <= 1.0 - kInteriorMargin))
        throw std::invalid_argument("apply_D_func: x outside the interior margin");
    double f1 = 0.0, f2 = 0.0;
    if (f.has_derivatives()) {
        f1 = f.d1(x);
        f2 = f.d2(x);
    } else {
        const double h = std::max(1e-5, 1e-5 * (1.0 - x * x));
        const double fp = f(x + h), f0 = f(x), fm = f(x - h);
        f1 = (fp - fm) / (2.0 * h);
        f2 = (fp - 2.0 * f0 + fm) / (h * h);
    }
    const double v = (1.0 - x * x) * f2 + (d.mu - d.nu - (d.nu + d.mu + 2.0) * x) * f1;
    if (!std::isfinite(v)) throw EvaluationError("apply_D_func: non-finite value", x);
    return v;
}

/// D_{x,nu,mu} f as a function handle (derivative fields left empty).
inline FunctionHandle d_transform(const FunctionHandle& f, const DOperatorParams& d = {})
{
    return make_function("D[" + f.label + "]",
                         [f, d](double x) { return apply_D_func(f, d, x); });
}

inline constexpr int kDefaultCoeffNodes = 128;

/// a_n(f) = integral of f P_n (1-x^2)^2 over (-1,1), P_n the (2,2) polynomial with P_n(1) = 1.
template <class F>
double fourier_jacobi_coeff(const F& f, int n, int n_nodes = kDefaultCoeffNodes)
{
    if (n < 0) throw std::invalid_argument("fourier_jacobi_coeff: negative index");
    const auto rule = shared_gauss_jacobi(n_nodes, 2.0, 2.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule->size(); ++i) {
        const double x = rule->nodes[i];
        const double v = f(x);
        if (!std::isfinite(v)) throw EvaluationError("fourier_jacobi_coeff: non-finite value", x);
        sum += rule->weights[i] * v * jacobi_eval(n, 2.0, 2.0, x);
    }
    return sum;
}

/// h_n = a_n(P_n), computed once by quadrature for n <= 64.
inline double jacobi_norm_sq(int n)
{
    static const std::array<double, kMaxPolynomialDegree + 1> table = [] {
        std::array<double, kMaxPolynomialDegree + 1> h{};
        const auto rule = shared_gauss_jacobi(2 * kMaxPolynomialDegree, 2.0, 2.0);
        for (std::size_t i = 0; i < rule->size(); ++i) {
            const auto v = jacobi_values(kMaxPolynomialDegree, 2.0, 2.0, rule->nodes[i]);
            for (int k = 0; k <= kMaxPolynomialDegree; ++k) h[k] += rule->weights[i] * v[k] * v[k];
        }
        return h;
    }();
    if (n < 0 || n > kMaxPolynomialDegree)
        throw std::invalid_argument("jacobi_norm_sq: index must lie in [0, 64]");
    return table[n];
}

/// Coefficients c_0..c_N of f in the normalized (2,2) basis, c_n = a_n(f) / h_n.
template <class F>
std::vector<double> expand_in_jacobi(const F& f, int max_degree, int n_nodes = kDefaultCoeffNodes)
{
    if (max_degree < 0 || max_degree > kMaxPolynomialDegree)
        throw std::invalid_argument("expand_in_jacobi: degree cap must lie in [0, 64]");
    const auto rule = shared_gauss_jacobi(n_nodes, 2.0, 2.0);
    std::vector<double> a(max_degree + 1, 0.0);
    for (std::size_t i = 0; i < rule->size(); ++i) {
        const double x = rule->nodes[i];
        const double v = f(x);
        if (!std::isfinite(v)) throw EvaluationError("expand_in_jacobi: non-finite value", x);
        const auto p = jacobi_values(max_degree, 2.0, 2.0, x);
        for (int k = 0; k <= max_degree; ++k) a[k] += rule->weights[i] * v * p[k];
    }
    for (int k = 0; k <= max_degree; ++k) a[k] /= jacobi_norm_sq(k);
    return a;
}

} // namespace smoothness
