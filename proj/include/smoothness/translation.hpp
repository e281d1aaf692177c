#pragma once

#include "smoothness/errors.hpp"
#include "smoothness/function.hpp"
#include "smoothness/jacobi.hpp"
#include "smoothness/quadrature.hpp"
#include "smoothness/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothness {

inline constexpr int kDefaultTranslationNodes = 128;
inline constexpr int kMinTranslationNodes = 8;

namespace detail {

inline double safe_sqrt_complement(double v) { return std::sqrt(std::max(0.0, 1.0 - v * v)); }

inline void check_translation_nodes(int quad_n)
{
    if (quad_n < kMinTranslationNodes)
        throw std::invalid_argument("translation: quad_n must be at least 8");
}

inline void check_interior(double x, const char* who)
{
    if (!(std::abs(x) <= 1.0 - kInteriorMargin))
        throw std::invalid_argument(std::string(who) + ": x outside the interior margin");
}

template <class F>
double checked_eval(const F& f, double r, const char* who)
{
    const double v = f(r);
    if (!std::isfinite(v)) throw EvaluationError(std::string(who) + ": non-finite value", r);
    return v;
}

} // namespace detail

/// R = x y - z sqrt(1-x^2) sqrt(1-y^2). Symmetric in x and y, |R| <= 1.
inline double compute_R(double x, double z, double y)
{
    return x * y - z * detail::safe_sqrt_complement(x) * detail::safe_sqrt_complement(y);
}

/// B_y(x,z,R) = 2 (sqrt(1-x^2) y + z x sqrt(1-y^2) + sqrt(1-x^2)(1-y)(1-z^2))^2 - (1-R^2).
inline double kernel_B(double x, double z, double y)
{
    const double sx = detail::safe_sqrt_complement(x);
    const double sy = detail::safe_sqrt_complement(y);
    const double r = x * y - z * sx * sy;
    const double bracket = sx * y + z * x * sy + sx * (1.0 - y) * (1.0 - z * z);
    return 2.0 * bracket * bracket - (1.0 - r * r);
}

/// Asymmetric generalized translation in the algebraic parameter y:
///
///   tau_y(f,x) = 4 / (pi (1-x^2) (1+y)^2) * int B_y(x,z,R) f(R) dz / sqrt(1-z^2)
///
/// Requires |x| <= 1 - kInteriorMargin and y in (-1, 1].
template <class F>
double asym_translate(const F& f, double y, double x, int quad_n = kDefaultTranslationNodes)
{
    detail::check_translation_nodes(quad_n);
    detail::check_interior(x, "asym_translate");
    if (!(y > -1.0) || y > 1.0) throw std::invalid_argument("asym_translate: y must lie in (-1, 1]");

    const auto rule = shared_rule(RuleKind::chebyshev1, quad_n);
    const double sx = detail::safe_sqrt_complement(x);
    const double sy = detail::safe_sqrt_complement(y);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule->size(); ++k) {
        const double z = rule->nodes[k];
        const double r = x * y - z * sx * sy;
        const double bracket = sx * y + z * x * sy + sx * (1.0 - y) * (1.0 - z * z);
        const double kernel = 2.0 * bracket * bracket - (1.0 - r * r);
        sum += rule->weights[k] * kernel * detail::checked_eval(f, r, "asym_translate");
    }
    return 4.0 * sum / (std::numbers::pi * (1.0 - x * x) * (1.0 + y) * (1.0 + y));
}

/// The same operator in the angular parameter, y = cos t:
///
///   T_t(f,x) = 1 / (pi (1-x^2) cos^4(t/2)) * int [2 (sqrt(1-x^2) cos t + x z sin t
///              + sqrt(1-x^2)(1-cos t)(1-z^2))^2 - 1 + R^2] f(R) dz / sqrt(1-z^2),
///   R = x cos t - z sqrt(1-x^2) sin t.
template <class F>
double asym_translate_t(const F& f, double t, double x, int quad_n = kDefaultTranslationNodes)
{
    detail::check_translation_nodes(quad_n);
    detail::check_interior(x, "asym_translate_t");
    if (!(std::abs(t) < std::numbers::pi))
        throw std::invalid_argument("asym_translate_t: |t| must be below pi");

    const auto rule = shared_rule(RuleKind::chebyshev1, quad_n);
    const double sx = detail::safe_sqrt_complement(x);
    // The operator is even in t; folding keeps T_t and T_{-t} bit-identical.
    const double ct = std::cos(std::abs(t));
    const double st = std::sin(std::abs(t));
    double sum = 0.0;
    for (std::size_t k = 0; k < rule->size(); ++k) {
        const double z = rule->nodes[k];
        const double r = x * ct - z * sx * st;
        const double bracket = sx * ct + x * st * z + sx * (1.0 - ct) * (1.0 - z * z);
        const double kernel = 2.0 * bracket * bracket - 1.0 + r * r;
        sum += rule->weights[k] * kernel * detail::checked_eval(f, r, "asym_translate_t");
    }
    const double c2 = std::cos(0.5 * t);
    return sum / (std::numbers::pi * (1.0 - x * x) * c2 * c2 * c2 * c2);
}

/// Symmetric translation (8 / (3 pi)) int (1-z^2)^2 f(R) dz / sqrt(1-z^2).
template <class F>
double sym_translate(const F& f, double y, double x, int quad_n = kDefaultTranslationNodes)
{
    detail::check_translation_nodes(quad_n);
    if (std::abs(x) > 1.0 || std::abs(y) > 1.0)
        throw std::invalid_argument("sym_translate: |x| and |y| must not exceed 1");
    const auto rule = shared_rule(RuleKind::chebyshev1, quad_n);
    const double sxy = detail::safe_sqrt_complement(x) * detail::safe_sqrt_complement(y);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule->size(); ++k) {
        const double z = rule->nodes[k];
        const double w = 1.0 - z * z;
        sum += rule->weights[k] * w * w * detail::checked_eval(f, x * y - z * sxy, "sym_translate");
    }
    return 8.0 * sum / (3.0 * std::numbers::pi);
}

/// (1-x^2)^{-1} int (1-R^2) |f(R)| dz / sqrt(1-z^2) with R = x cos t - z sqrt(1-x^2) sin t.
/// This is the majorant that controls the size of the asymmetric operator.
template <class F>
double absolute_kernel_average(const F& f, double t, double x,
                               int quad_n = kDefaultTranslationNodes)
{
    detail::check_translation_nodes(quad_n);
    detail::check_interior(x, "absolute_kernel_average");
    const auto rule = shared_rule(RuleKind::chebyshev1, quad_n);
    const double sx = detail::safe_sqrt_complement(x);
    const double ct = std::cos(t), st = std::sin(t);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule->size(); ++k) {
        const double r = x * ct - rule->nodes[k] * sx * st;
        sum += rule->weights[k] * (1.0 - r * r) *
               std::abs(detail::checked_eval(f, r, "absolute_kernel_average"));
    }
    return sum / (1.0 - x * x);
}

/// Right-hand side of the increment representation
///
///   T_t(f,x) - f(x) = int_0^t sin v / ((1 - cos v)(1 + cos v)^5)
///                      int_0^v (1 + cos u)^4 sin u T_u(Df, x) du dv,
///
/// evaluated with nested Gauss-Legendre rules of `rule_n` points; `df` is D_{x,2,2} f.
template <class F>
double translation_increment_integral(const F& df, double t, double x, int rule_n = 64,
                                      int quad_n = kDefaultTranslationNodes)
{
    if (!(std::abs(t) < std::numbers::pi))
        throw std::invalid_argument("translation_increment_integral: |t| must be below pi");
    if (t == 0.0) return 0.0;
    const auto gl = shared_rule(RuleKind::legendre, rule_n);
    double outer = 0.0;
    for (std::size_t i = 0; i < gl->size(); ++i) {
        const double v = 0.5 * t * (gl->nodes[i] + 1.0);
        const double wv = 0.5 * t * gl->weights[i];
        double inner = 0.0;
        for (std::size_t j = 0; j < gl->size(); ++j) {
            const double u = 0.5 * v * (gl->nodes[j] + 1.0);
            const double wu = 0.5 * v * gl->weights[j];
            const double cu = 1.0 + std::cos(u);
            inner += wu * cu * cu * cu * cu * std::sin(u) * asym_translate_t(df, u, x, quad_n);
        }
        const double cv = 1.0 + std::cos(v);
        outer += wv * std::sin(v) / ((1.0 - std::cos(v)) * cv * cv * cv * cv * cv) * inner;
    }
    return outer;
}

/// Reference abscissae used to read off the multiplier psi_n(y).
inline constexpr std::array<double, 3> kPsiReferencePoints = {0.15, 0.35, 0.55};

/// psi_n(y) with tau_y(P_n, x) = P_n(x) psi_n(y): median of the ratio over the
/// reference abscissae, skipping points where |P_n(x)| < 1e-3.
inline double multiplier_psi(int n, double y, int quad_n = kDefaultTranslationNodes)
{
    if (n < 0) throw std::invalid_argument("multiplier_psi: negative degree");
    const auto pn = [n](double x) { return jacobi_eval(n, 2.0, 2.0, x); };
    std::vector<double> ratios;
    for (double x : kPsiReferencePoints) {
        const double px = pn(x);
        if (std::abs(px) < 1e-3) continue;
        ratios.push_back(asym_translate(pn, y, x, quad_n) / px);
    }
    if (ratios.empty())
        throw DegenerateReferenceError("multiplier_psi: P_" + std::to_string(n) +
                                       " vanishes near every reference abscissa");
    std::sort(ratios.begin(), ratios.end());
    const std::size_t m = ratios.size();
    return m % 2 == 1 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
}

struct MultiplierTable {
    std::vector<double> ys;
    std::vector<std::vector<double>> values; // values[n][j] = psi_n(ys[j])
    std::array<double, 3> reference = kPsiReferencePoints;
};

inline MultiplierTable build_multiplier_table(int max_n, const std::vector<double>& ys,
                                              int quad_n = kDefaultTranslationNodes)
{
    MultiplierTable table;
    table.ys = ys;
    table.values.resize(max_n + 1);
    for (int n = 0; n <= max_n; ++n)
        for (double y : ys) table.values[n].push_back(multiplier_psi(n, y, quad_n));
    return table;
}

struct ModulusOptions {
    int t_points = 16;
    int quad_n = kDefaultTranslationNodes;
    int norm_nodes = kDefaultNormNodes;
};

/// Samples of T_t(f, .) at the given abscissae.
template <class F>
std::vector<double> translate_samples(const F& f, double t, const std::vector<double>& xs,
                                      int quad_n)
{
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = asym_translate_t(f, t, xs[i], quad_n);
    return out;
}

/// Generalized modulus of smoothness sup_{|t| <= delta} ||T_t f - f||_{p,alpha},
/// taken over the grid t_k = delta k / t_points (the operator is even in t).
template <class F>
double modulus(const F& f, double delta, const SpaceParams& params,
               const ModulusOptions& options = {})
{
    if (const auto verdict = validate_params(params); !verdict)
        throw std::invalid_argument("modulus: inadmissible space parameters: " + verdict.reason);
    if (!(delta >= 0.0) || !(delta < std::numbers::pi))
        throw std::invalid_argument("modulus: delta must lie in [0, pi)");
    if (options.t_points < 1) throw std::invalid_argument("modulus: t_points must be positive");

    const NormEvaluator norm(params, options.norm_nodes);
    const auto fx = norm.sample(f);
    double best = 0.0;
    std::vector<double> diff(fx.size());
    for (int k = 1; k <= options.t_points; ++k) {
        const double t = delta * k / options.t_points;
        if (t == 0.0) continue;
        for (std::size_t i = 0; i < fx.size(); ++i)
            diff[i] = asym_translate_t(f, t, norm.nodes()[i], options.quad_n) - fx[i];
        best = std::max(best, norm.norm(diff));
    }
    return best;
}

} // namespace smoothness
