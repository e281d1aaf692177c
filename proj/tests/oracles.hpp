#pragma once

// Reference computations that do not share code paths with the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

/// int_{-1}^{1} x^k (1-x^2)^a dx = B((k+1)/2, a+1) for even k, 0 for odd k.
inline double symmetric_moment(int k, double a)
{
    if (k % 2 == 1) return 0.0;
    const double s = (k + 1) / 2.0;
    return std::exp(std::lgamma(s) + std::lgamma(a + 1.0) - std::lgamma(s + a + 1.0));
}

/// int_{-1}^{1} x^k (1-x)^a (1+x)^b dx from M_0 = 2^{a+b+1} B(a+1, b+1) and the
/// integration-by-parts recurrence (k + a + b + 2) M_{k+1} = k M_{k-1} + (b - a) M_k.
inline double jacobi_moment(int k, double a, double b)
{
    double prev = 0.0;
    double cur = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                          std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    for (int j = 0; j < k; ++j) {
        const double next = (j * prev + (b - a) * cur) / (j + a + b + 2.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Adaptive Simpson on [lo, hi].
inline double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-13, int depth = 50)
{
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole, int d) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return rec(a, m, fa, flm, fm, left, d - 1) + rec(m, b, fm, frm, fb, right, d - 1);
        };
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    return rec(lo, hi, fa, fm, fb, (hi - lo) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

/// Classical Jacobi polynomial by the explicit finite sum
/// P_n^{(a,b)}(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^{n-s}.
inline double jacobi_explicit(int n, double a, double b, double x)
{
    auto gbinom = [](double top, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r *= (top - k + i) / i;
        return r;
    };
    double sum = 0.0;
    for (int s = 0; s <= n; ++s)
        sum += gbinom(n + a, n - s) * gbinom(n + b, s) * std::pow(0.5 * (x - 1.0), s) *
               std::pow(0.5 * (x + 1.0), n - s);
    return sum;
}

inline double jacobi_explicit_normalized(int n, double a, double b, double x)
{
    return jacobi_explicit(n, a, b, x) / jacobi_explicit(n, a, b, 1.0);
}

} // namespace oracle
