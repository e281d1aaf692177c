#pragma once

#include "smoothness/approx.hpp"
#include "smoothness/harness/checks.hpp"
#include "smoothness/harness/config.hpp"
#include "smoothness/harness/corpus.hpp"
#include "smoothness/harness/report.hpp"
#include "smoothness/jacobi.hpp"
#include "smoothness/quadrature.hpp"
#include "smoothness/space.hpp"
#include "smoothness/translation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace smoothness::harness {

inline constexpr double kGateTolerance = 1e-8;

/// Change under doubling of quad_n: Gauss-Legendre integral of f, and tau_y(f, x) at
/// probe points, whichever is larger.
template <class F>
double doubling_residual(const F& f, int quad_n)
{
    const auto coarse = shared_rule(RuleKind::legendre, quad_n);
    const auto fine = shared_rule(RuleKind::legendre, 2 * quad_n);
    double worst = std::abs(integrate(f, *coarse) - integrate(f, *fine));
    for (double y : {-0.5, 0.3})
        for (double x : {-0.6, 0.2, 0.7})
            worst = std::max(worst, std::abs(asym_translate(f, y, x, quad_n) -
                                             asym_translate(f, y, x, 2 * quad_n)));
    return worst;
}

struct LemmaContext {
    Config cfg;
    std::vector<CorpusEntry> corpus;
    std::vector<bool> resolved; ///< entry passed the quadrature-doubling gate

    std::vector<double> gate_residual;

    explicit LemmaContext(Config c) : cfg(std::move(c)), corpus(harness::corpus(cfg.seed))
    {
        for (const auto& e : corpus) {
            gate_residual.push_back(doubling_residual(e.f, cfg.quad_n));
            resolved.push_back(gate_residual.back() <= kGateTolerance);
        }
    }

    template <class Fn>
    void for_resolved(IdentityCheck& chk, Fn&& fn) const
    {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (resolved[i])
                fn(corpus[i]);
            else
                chk.skip(corpus[i].label, "quadrature doubling gate not met");
        }
    }
};

namespace detail {

inline std::string fmt_case(const std::string& label, const char* key, double v)
{
    return label + " " + key + "=" + format_double(v);
}

inline std::string fmt_case(const std::string& label, const char* key, int v)
{
    return label + " " + key + "=" + std::to_string(v);
}

/// B((k+1)/2, a+1): integral of |x|^k (1-x^2)^a over (-1,1).
inline double abs_moment(int k, double a)
{
    const double s = (k + 1) / 2.0;
    return std::exp(std::lgamma(s) + std::lgamma(a + 1.0) - std::lgamma(s + a + 1.0));
}

} // namespace detail

inline VerificationReport check_quadrature_exactness(const LemmaContext& ctx)
{
    const std::string id = "quadrature.exactness";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-12);
        struct Family {
            std::string name;
            RuleKind kind;
            double a;
        };
        std::vector<Family> families = {{"legendre", RuleKind::legendre, 0.0},
                                        {"chebyshev1", RuleKind::chebyshev1, -0.5},
                                        {"jacobi(2,2)", RuleKind::jacobi, 2.0}};
        if (!ctx.cfg.space.is_sup()) {
            const double e = ctx.cfg.space.p * ctx.cfg.space.alpha;
            families.push_back({"jacobi(" + format_double(e) + ")", RuleKind::jacobi, e});
        }
        for (const auto& fam : families)
            for (int n : {2, 4, 8, 16}) {
                const auto rule = fam.kind == RuleKind::jacobi ? shared_rule(fam.kind, n, fam.a, fam.a)
                                                               : shared_rule(fam.kind, n);
                double worst = 0.0;
                for (int k = 0; k <= 2 * n - 1; ++k) {
                    const double exact = k % 2 == 1 ? 0.0 : detail::abs_moment(k, fam.a);
                    const double got = integrate([k](double x) { return std::pow(x, k); }, *rule);
                    worst = std::max(worst, std::abs(got - exact) / detail::abs_moment(k, fam.a));
                }
                chk.add(detail::fmt_case(fam.name, "n", n), worst);
            }
        chk.note("relative to the moment of |x|^k");
        return chk.finish();
    });
}

inline VerificationReport check_doubling_gate(const LemmaContext& ctx)
{
    const std::string id = "quadrature.doubling_gate";
    return guarded(id, CheckKind::gate, [&] {
        IdentityCheck chk(id, kGateTolerance, CheckKind::gate);
        for (std::size_t i = 0; i < ctx.corpus.size(); ++i) {
            const auto& e = ctx.corpus[i];
            const double d = ctx.gate_residual[i];
            if (e.smooth() || ctx.resolved[i])
                chk.add(e.label, d);
            else
                chk.skip(e.label, std::string(to_string(e.cls)) + ": excluded from identity checks", d);
        }
        chk.note("integral and translation at quad_n vs 2 quad_n; smooth entries must converge");
        return chk.finish();
    });
}

inline VerificationReport check_jacobi_normalization(const LemmaContext&)
{
    const std::string id = "jacobi.normalization";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 0.0);
        double worst = 0.0;
        for (int n = 0; n <= 32; ++n) worst = std::max(worst, std::abs(jacobi_eval(n, 2.0, 2.0, 1.0) - 1.0));
        chk.add("n<=32", worst);
        return chk.finish();
    });
}

inline VerificationReport check_jacobi_orthogonality(const LemmaContext&)
{
    const std::string id = "jacobi.orthogonality";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-10);
        const auto rule = shared_gauss_jacobi(64, 2.0, 2.0);
        std::vector<std::vector<double>> vals;
        for (double x : rule->nodes) vals.push_back(jacobi_values(16, 2.0, 2.0, x));
        double worst = 0.0;
        for (int m = 0; m <= 16; ++m)
            for (int n = m + 1; n <= 16; ++n) {
                double s = 0.0;
                for (std::size_t i = 0; i < rule->size(); ++i) s += rule->weights[i] * vals[i][m] * vals[i][n];
                worst = std::max(worst, std::abs(s));
            }
        chk.add("m!=n<=16", worst);
        return chk.finish();
    });
}

inline VerificationReport check_eigen_relation(const LemmaContext&)
{
    const std::string id = "jacobi.eigen_relation";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-10);
        for (int n = 0; n <= 16; ++n) {
            const Polynomial p = jacobi_poly(n, 2.0, 2.0);
            const Polynomial dp = apply_D_poly(p);
            const double lambda = d_eigenvalue(n);
            double worst = dp.degree() > p.degree() ? std::numeric_limits<double>::infinity() : 0.0;
            for (int k = 0; k <= n; ++k) {
                const double scale = std::max(1.0, std::abs(lambda)) * std::max(1.0, std::abs(p.coefficient(k)));
                worst = std::max(worst, std::abs(dp.coefficient(k) - lambda * p.coefficient(k)) / scale);
            }
            chk.add("n=" + std::to_string(n), worst);
        }
        chk.note("coefficientwise, relative to |lambda| max(1, |c_k|)");
        return chk.finish();
    });
}

inline VerificationReport check_recurrence_agreement(const LemmaContext&)
{
    const std::string id = "jacobi.recurrence_agreement";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-12);
        const auto grid = make_grid(64);
        for (int n = 0; n <= 18; ++n) {
            const Polynomial p = jacobi_poly(n, 2.0, 2.0);
            double worst = 0.0;
            for (double x : grid) worst = std::max(worst, std::abs(p(x) - jacobi_eval(n, 2.0, 2.0, x)));
            chk.add("n=" + std::to_string(n), worst);
        }
        chk.note("monomial form tracks the recurrence to 1e-12 only through degree 18");
        return chk.finish();
    });
}

inline VerificationReport check_identity_at_one(const LemmaContext& ctx)
{
    const std::string id = "translation.identity_at_one";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-10);
        const auto grid = make_grid(16);
        for (const auto& e : ctx.corpus) {
            double worst = 0.0;
            for (double x : grid) {
                worst = std::max(worst, std::abs(asym_translate(e.f, 1.0, x, ctx.cfg.quad_n) - e.f(x)));
                worst = std::max(worst, std::abs(asym_translate_t(e.f, 0.0, x, ctx.cfg.quad_n) - e.f(x)));
            }
            chk.add(e.label, worst);
        }
        return chk.finish();
    });
}

inline VerificationReport check_constant_preserved(const LemmaContext& ctx)
{
    const std::string id = "translation.constant";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-10);
        const auto one = [](double) { return 1.0; };
        const auto grid = make_grid(16);
        for (double y : {-0.5, 0.0, 0.5, 0.9}) {
            double worst = 0.0;
            for (double x : grid) worst = std::max(worst, std::abs(asym_translate(one, y, x, ctx.cfg.quad_n) - 1.0));
            chk.add(detail::fmt_case("f=1", "y", y), worst);
        }
        return chk.finish();
    });
}

inline VerificationReport check_angular_form(const LemmaContext& ctx)
{
    const std::string id = "translation.angular_form";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-10);
        const auto grid = make_grid(8);
        for (const auto& e : ctx.corpus) {
            double worst = 0.0;
            for (double t : {std::numbers::pi / 3, 1.0, 2.5})
                for (double x : grid) {
                    const double a = asym_translate_t(e.f, t, x, ctx.cfg.quad_n);
                    const double b = asym_translate(e.f, std::cos(t), x, ctx.cfg.quad_n);
                    worst = std::max({worst, std::abs(a - b),
                                      std::abs(a - asym_translate_t(e.f, -t, x, ctx.cfg.quad_n))});
                }
            chk.add(e.label, worst);
        }
        chk.note("angular vs algebraic parameterization, and evenness in t");
        return chk.finish();
    });
}

inline VerificationReport check_product_formula(const LemmaContext& ctx)
{
    const std::string id = "translation.product_formula";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-8);
        const auto grid = make_grid(16);
        for (int n = 0; n <= 8; ++n) {
            const auto pn = [n](double r) { return jacobi_eval(n, 2.0, 2.0, r); };
            double worst = 0.0;
            for (double y : {-0.5, 0.0, 0.5, 0.9}) {
                const double psi = multiplier_psi(n, y, ctx.cfg.quad_n);
                for (double x : grid)
                    worst = std::max(worst, std::abs(asym_translate(pn, y, x, ctx.cfg.quad_n) - pn(x) * psi));
            }
            chk.add("P" + std::to_string(n), worst);
        }
        return chk.finish();
    });
}

inline VerificationReport check_psi_at_one(const LemmaContext& ctx)
{
    const std::string id = "translation.psi_at_one";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-10);
        double worst = 0.0;
        for (int n = 0; n <= 8; ++n) worst = std::max(worst, std::abs(multiplier_psi(n, 1.0, ctx.cfg.quad_n) - 1.0));
        chk.add("n<=8", worst);
        return chk.finish();
    });
}

inline VerificationReport check_coefficient_multiplier(const LemmaContext& ctx)
{
    const std::string id = "translation.coefficient_multiplier";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-7);
        const int qn = ctx.cfg.quad_n;
        ctx.for_resolved(chk, [&](const CorpusEntry& e) {
            double worst = 0.0;
            for (double y : {-0.5, 0.5, 0.9}) {
                const auto tf = [&](double x) { return asym_translate(e.f, y, x, qn); };
                for (int m = 0; m <= 6; ++m) {
                    const double lhs = fourier_jacobi_coeff(tf, m, qn);
                    const double rhs = fourier_jacobi_coeff(e.f, m, qn) * multiplier_psi(m, y, qn);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
            chk.add(e.label, worst);
        });
        return chk.finish();
    });
}

inline VerificationReport check_self_adjoint(const LemmaContext& ctx)
{
    const std::string id = "translation.self_adjoint";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-8);
        const int qn = ctx.cfg.quad_n;
        const auto& c = ctx.corpus;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                const std::string name = c[i].label + " , " + c[j].label;
                if (!ctx.resolved[i] || !ctx.resolved[j]) {
                    chk.skip(name, "quadrature doubling gate not met");
                    continue;
                }
                double worst = 0.0;
                for (double y : {-0.4, 0.2, 0.7}) {
                    const double lhs = fourier_jacobi_coeff(
                        [&](double x) { return c[i].f(x) * asym_translate(c[j].f, y, x, qn); }, 0, qn);
                    const double rhs = fourier_jacobi_coeff(
                        [&](double x) { return c[j].f(x) * asym_translate(c[i].f, y, x, qn); }, 0, qn);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
                chk.add(name, worst);
            }
        return chk.finish();
    });
}

inline VerificationReport check_commutation(const LemmaContext& ctx)
{
    const std::string id = "translation.commutes_with_D";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-7);
        const int qn = ctx.cfg.quad_n;
        const auto grid = make_grid(12);
        for (std::size_t i = 0; i < ctx.corpus.size(); ++i) {
            const auto& e = ctx.corpus[i];
            if (!e.poly) {
                chk.skip(e.label, "not a polynomial");
                continue;
            }
            if (!ctx.resolved[i]) {
                chk.skip(e.label, "quadrature doubling gate not met");
                continue;
            }
            const int deg = std::max(e.poly->degree(), 0);
            const Polynomial df = apply_D_poly(*e.poly);
            double worst = 0.0;
            for (double y : {-0.5, 0.4, 0.85}) {
                // Fit x -> tau_y(f, x) in the (2,2) basis, where D is diagonal.
                auto coeffs = expand_in_jacobi([&](double x) { return asym_translate(e.f, y, x, qn); }, deg, qn);
                for (int k = 0; k <= deg; ++k) coeffs[k] *= d_eigenvalue(k);
                const JacobiSeries outer(2.0, 2.0, std::move(coeffs));
                for (double x : grid)
                    worst = std::max(worst, std::abs(asym_translate(df, y, x, qn) - outer(x)));
            }
            chk.add(detail::fmt_case(e.label, "deg", deg), worst);
        }
        return chk.finish();
    });
}

inline VerificationReport check_increment_representation(const LemmaContext& ctx)
{
    const std::string id = "translation.increment_representation";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-6);
        const auto grid = make_grid(8);
        for (const auto& e : ctx.corpus) {
            if (!e.poly) {
                chk.skip(e.label, "not a polynomial");
                continue;
            }
            const Polynomial df = apply_D_poly(*e.poly);
            for (double t : {0.3, 1.0}) {
                double worst = 0.0;
                for (double x : grid) {
                    const double lhs = asym_translate_t(e.f, t, x, ctx.cfg.quad_n) - e.f(x);
                    worst = std::max(worst, std::abs(lhs - translation_increment_integral(df, t, x, 64, ctx.cfg.quad_n)));
                }
                chk.add(detail::fmt_case(e.label, "t", t), worst);
            }
        }
        chk.note("nested 64-point Gauss-Legendre rules in u and v");
        return chk.finish();
    });
}

namespace detail {

inline std::vector<double> boundedness_t_grid()
{
    std::vector<double> ts;
    for (int k = 0; k <= 12; ++k) ts.push_back(0.25 * k);
    return ts;
}

// max over corpus x t of ||op(f, t, .)|| scale(t) / ||f||, at the given resolution.
template <class Op>
double operator_ratio_bound(const LemmaContext& ctx, int quad_n, int norm_nodes, Op op,
                            std::vector<std::pair<std::string, double>>* cases)
{
    const NormEvaluator norm(ctx.cfg.space, norm_nodes);
    double worst = 0.0;
    for (const auto& e : ctx.corpus) {
        const double base = norm.norm(norm.sample(e.f));
        double entry_worst = 0.0;
        for (double t : boundedness_t_grid()) {
            std::vector<double> vals(norm.size());
            for (std::size_t i = 0; i < norm.size(); ++i) vals[i] = op(e.f, t, norm.nodes()[i], quad_n);
            entry_worst = std::max(entry_worst, norm.norm(vals) / base);
        }
        if (cases) cases->emplace_back(e.label, entry_worst);
        worst = std::max(worst, entry_worst);
    }
    return worst;
}

template <class Op>
VerificationReport bounded_operator_check(const LemmaContext& ctx, const std::string& id, Op op,
                                          const std::string& note)
{
    return guarded(id, CheckKind::ratio, [&] {
        RatioFamily fam(id, ctx.cfg.spread);
        std::vector<std::pair<std::string, double>> cases;
        const double c1 = operator_ratio_bound(ctx, ctx.cfg.quad_n, ctx.cfg.norm_nodes, op, &cases);
        const double c2 = operator_ratio_bound(ctx, 2 * ctx.cfg.quad_n, 2 * ctx.cfg.norm_nodes, op, nullptr);
        for (auto& [label, v] : cases) fam.add(label, v);
        fam.require("stability under doubling", relative_change(c1, c2), 0.10,
                    "bound " + format_double(c1) + " vs " + format_double(c2));
        fam.note(note);
        return fam.finish(false);
    });
}

} // namespace detail

inline VerificationReport check_translation_boundedness(const LemmaContext& ctx)
{
    return detail::bounded_operator_check(
        ctx, "translation.boundedness",
        [](const FunctionHandle& f, double t, double x, int qn) {
            const double c = std::cos(0.5 * t);
            return asym_translate_t(f, t, x, qn) * c * c * c * c;
        },
        "sup over corpus and t in [0,3] of ||T_t f|| cos^4(t/2) / ||f||");
}

inline VerificationReport check_kernel_average_bound(const LemmaContext& ctx)
{
    return detail::bounded_operator_check(
        ctx, "translation.kernel_average",
        [](const FunctionHandle& f, double t, double x, int qn) {
            return absolute_kernel_average(f, t, x, qn);
        },
        "sup over corpus and t in [0,3] of ||(1-x^2)^-1 int (1-R^2)|f(R)||| / ||f||");
}

inline VerificationReport check_modulus_monotone(const LemmaContext& ctx)
{
    const std::string id = "translation.modulus_monotone";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-12);
        auto deltas = ctx.cfg.deltas;
        std::sort(deltas.begin(), deltas.end());
        const ModulusOptions opt{ctx.cfg.t_points, ctx.cfg.quad_n, ctx.cfg.norm_nodes};
        for (const auto& e : ctx.corpus) {
            double prev = 0.0, worst = 0.0;
            for (double d : deltas) {
                const double w = modulus(e.f, d, ctx.cfg.space, opt);
                worst = std::max(worst, prev - w);
                prev = w;
            }
            chk.add(e.label, worst);
        }
        chk.note("largest decrease of the modulus along the increasing delta grid");
        return chk.finish();
    });
}

inline VerificationReport check_modulus_doubling(const LemmaContext& ctx)
{
    const std::string id = "translation.modulus_doubling";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-6);
        const auto f = make_function("x", [](double x) { return x; });
        const double a = modulus(f, 0.5, ctx.cfg.space, {ctx.cfg.t_points, ctx.cfg.quad_n, ctx.cfg.norm_nodes});
        const double b = modulus(f, 0.5, ctx.cfg.space, {2 * ctx.cfg.t_points, 2 * ctx.cfg.quad_n, ctx.cfg.norm_nodes});
        chk.add("x delta=0.5", std::abs(a - b));
        return chk.finish();
    });
}

inline VerificationReport check_l2_orthogonality(const LemmaContext& ctx)
{
    const std::string id = "approx.l2_orthogonality";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-9);
        const double alpha = ctx.cfg.space.p == 2.0 ? ctx.cfg.space.alpha : 1.0;
        const SpaceParams l2{2.0, alpha};
        const NormEvaluator norm(l2, ctx.cfg.norm_nodes);
        const int n = 8;
        for (const auto& e : ctx.corpus) {
            const auto r = best_approx(e.f, n, l2, ctx.cfg.norm_nodes);
            std::vector<double> ip(n, 0.0);
            for (std::size_t i = 0; i < norm.size(); ++i) {
                const double x = norm.nodes()[i];
                const auto pk = jacobi_values(n - 1, 2 * alpha, 2 * alpha, x);
                const double res = e.f(x) - r.argmin(x);
                for (int k = 0; k < n; ++k) ip[k] += norm.weights()[i] * res * pk[k];
            }
            double worst = 0.0;
            for (double v : ip) worst = std::max(worst, std::abs(v));
            chk.add(e.label, worst);
        }
        chk.note("p = 2, n = 8, alpha = " + format_double(alpha));
        return chk.finish();
    });
}

inline VerificationReport check_best_approx_value(const LemmaContext& ctx)
{
    const std::string id = "approx.best_approx_value";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-9);
        for (const auto& e : ctx.corpus)
            for (int n : {4, 8}) {
                const auto r = best_approx(e.f, n, ctx.cfg.space, ctx.cfg.norm_nodes);
                const double direct = weighted_norm([&](double x) { return e.f(x) - r.argmin(x); },
                                                    ctx.cfg.space, ctx.cfg.norm_nodes);
                chk.add(detail::fmt_case(e.label, "n", n), std::abs(r.value - direct));
            }
        return chk.finish();
    });
}

inline VerificationReport check_best_approx_monotone(const LemmaContext& ctx)
{
    const std::string id = "approx.best_approx_monotone";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-8);
        for (const auto& e : ctx.corpus) {
            double prev = best_approx(e.f, 1, ctx.cfg.space, ctx.cfg.norm_nodes).value;
            const double scale = std::max(prev, 1e-300);
            double worst = 0.0;
            for (int n = 2; n <= 16; ++n) {
                const double cur = best_approx(e.f, n, ctx.cfg.space, ctx.cfg.norm_nodes).value;
                // Increases below 1e-14 are rounding in the residual norm.
                worst = std::max(worst, (cur - prev - 1e-14) / scale);
                prev = cur;
            }
            chk.add(e.label, std::max(worst, 0.0));
        }
        chk.note("largest increase of E_n over n = 1..16, relative to E_1");
        return chk.finish();
    });
}

inline VerificationReport check_jackson_cutoff(const LemmaContext& ctx)
{
    const std::string id = "approx.jackson_cutoff";
    return guarded(id, CheckKind::identity, [&] {
        IdentityCheck chk(id, 1e-8);
        const int qn = ctx.cfg.quad_n;
        const auto rule = shared_gauss_jacobi(qn, 2.0, 2.0);
        for (std::size_t i = 0; i < ctx.corpus.size(); ++i) {
            const auto& e = ctx.corpus[i];
            for (const JacksonParams p : {JacksonParams{3, 2}, JacksonParams{3, 3}, JacksonParams{4, 2}}) {
                const std::string name = e.label + " q=" + std::to_string(p.q) + " m=" + std::to_string(p.m);
                if (!ctx.resolved[i]) {
                    chk.skip(name, "quadrature doubling gate not met");
                    continue;
                }
                const int bound = jackson_degree_bound(p);
                std::vector<double> a(bound + 7, 0.0);
                for (std::size_t k = 0; k < rule->size(); ++k) {
                    const double x = rule->nodes[k];
                    const double q = jackson_eval(e.f, x, p, qn);
                    const auto pv = jacobi_values(bound + 6, 2.0, 2.0, x);
                    for (int nu = bound + 1; nu <= bound + 6; ++nu) a[nu] += rule->weights[k] * q * pv[nu];
                }
                double worst = 0.0;
                for (int nu = bound + 1; nu <= bound + 6; ++nu) worst = std::max(worst, std::abs(a[nu]));
                chk.add(name, worst);
            }
        }
        chk.note("|a_nu(Q)| for nu in (q+2)(m-1) + 1 .. (q+2)(m-1) + 6");
        return chk.finish();
    });
}

inline VerificationReport check_direct_estimate(const LemmaContext& ctx)
{
    const std::string id = "approx.direct_estimate";
    return guarded(id, CheckKind::ratio, [&] {
        RatioFamily fam(id, ctx.cfg.spread);
        const auto& space = ctx.cfg.space;
        const int nn = ctx.cfg.norm_nodes;
        struct Series {
            std::string label;
            std::vector<double> r; // r[n] = n^2 E_n / ||Df||
        };
        std::vector<Series> smooth;
        for (const auto& e : ctx.corpus) {
            if (!e.f.has_derivatives()) continue;
            const double dnorm = weighted_norm(d_transform(e.f), space, nn);
            if (dnorm < 1e-13) continue;
            Series s{e.label, std::vector<double>(33, 0.0)};
            for (int n = 2; n <= 32; ++n)
                s.r[n] = n * n * best_approx(e.f, n, space, nn).value / dnorm;
            if (e.smooth()) {
                smooth.push_back(std::move(s));
            } else {
                double peak = 0.0;
                for (int n = 2; n <= 32; ++n) peak = std::max(peak, s.r[n]);
                fam.skip(e.label, std::string(to_string(e.cls)) + ": max ratio " + format_double(peak));
            }
        }
        for (int n = 2; n <= 32; ++n) {
            // P_n of the (2,2) family attains the extremal ratio among degree-n polynomials.
            const auto pn = make_function("P_n", [n](double x) { return jacobi_eval(n, 2.0, 2.0, x); });
            const double pnorm = weighted_norm(pn, space, nn);
            double sup = n * n * best_approx(pn, n, space, nn).value / (-d_eigenvalue(n) * pnorm);
            std::string argmax = "P_" + std::to_string(n);
            for (const auto& s : smooth)
                if (s.r[n] > sup) {
                    sup = s.r[n];
                    argmax = s.label;
                }
            fam.add("n=" + std::to_string(n), sup, "attained by " + argmax);
        }
        fam.note("per-n supremum of n^2 E_n(f) / ||D f|| over smooth entries and the probe P_n");
        return fam.finish(true);
    });
}

namespace detail {

struct KTable {
    std::vector<std::vector<double>> k; // [entry][delta]
    std::vector<std::vector<double>> two_candidate;
    std::vector<double> deltas;
};

inline KTable compute_k_table(const LemmaContext& ctx)
{
    KTable t;
    t.deltas = ctx.cfg.deltas;
    std::sort(t.deltas.begin(), t.deltas.end());
    const auto& space = ctx.cfg.space;
    const int nn = ctx.cfg.norm_nodes, kdeg = ctx.cfg.kdeg;
    for (const auto& e : ctx.corpus) {
        // Candidate g = L2 projection of degree kdeg, moved to the (2,2) basis for D.
        const double a = space.alpha;
        const auto proj = best_approx(e.f, kdeg + 1, SpaceParams{2.0, a}, nn);
        auto c = expand_in_jacobi(proj.argmin, kdeg, std::max(kDefaultCoeffNodes, kdeg + 1));
        const JacobiSeries g(2.0, 2.0, c);
        for (int k = 0; k <= kdeg; ++k) c[k] *= d_eigenvalue(k);
        const JacobiSeries dg(2.0, 2.0, c);
        const double fit = weighted_norm([&](double x) { return e.f(x) - g(x); }, space, nn);
        const double dnorm = weighted_norm(dg, space, nn);
        const double fnorm = weighted_norm(e.f, space, nn);

        std::vector<double> kv, cand;
        for (double d : t.deltas) {
            kv.push_back(k_functional(e.f, d, space, {kdeg, nn}).value);
            cand.push_back(std::min(fnorm, fit + d * d * dnorm));
        }
        t.k.push_back(std::move(kv));
        t.two_candidate.push_back(std::move(cand));
    }
    return t;
}

} // namespace detail

inline std::vector<VerificationReport> check_k_functional(const LemmaContext& ctx)
{
    std::vector<VerificationReport> out;
    detail::KTable table;
    try {
        table = detail::compute_k_table(ctx);
    } catch (const std::exception&) {
        for (const char* id : {"approx.k_upper_bound", "approx.k_monotone"})
            out.push_back(guarded(id, CheckKind::identity, [&]() -> VerificationReport { throw; }));
        return out;
    }
    IdentityCheck upper("approx.k_upper_bound", 1e-10);
    IdentityCheck mono("approx.k_monotone", 1e-10);
    for (std::size_t i = 0; i < ctx.corpus.size(); ++i) {
        double over = 0.0, drop = 0.0;
        for (std::size_t j = 0; j < table.deltas.size(); ++j) {
            over = std::max(over, table.k[i][j] - table.two_candidate[i][j]);
            if (j > 0) drop = std::max(drop, table.k[i][j - 1] - table.k[i][j]);
        }
        upper.add(ctx.corpus[i].label, std::max(over, 0.0));
        mono.add(ctx.corpus[i].label, std::max(drop, 0.0));
    }
    upper.note("K minus min(||f||, ||f - g_2|| + delta^2 ||D g_2||), g_2 the L2 projection");
    mono.note("largest decrease of K along the increasing delta grid");
    out.push_back(upper.finish());
    out.push_back(mono.finish());
    return out;
}

inline std::vector<VerificationReport> check_bernstein_markov(const LemmaContext& ctx)
{
    std::vector<VerificationReport> out;
    const std::string id_d = "approx.bernstein_derivative", id_w = "approx.bernstein_weight";
    try {
        RatioFamily d(id_d, ctx.cfg.spread), w(id_w, ctx.cfg.spread);
        for (int n : {2, 4, 8, 16}) {
            const auto r = bernstein_markov_ratios(jacobi_poly(n, 2.0, 2.0), ctx.cfg.space, 0.5, ctx.cfg.norm_nodes);
            d.add("P" + std::to_string(n), r.derivative_ratio);
            w.add("P" + std::to_string(n), r.weight_ratio);
        }
        d.note("||P'||_{p,alpha+1/2} / (n ||P||_{p,alpha})");
        w.note("||P||_{p,alpha} / (n ||P||_{p,alpha+1/2}), rho = 1/2");
        out.push_back(d.finish(true));
        out.push_back(w.finish(true));
    } catch (const std::exception&) {
        for (const auto& id : {id_d, id_w})
            out.push_back(guarded(id, CheckKind::ratio, [&]() -> VerificationReport { throw; }));
    }
    return out;
}

/// Every identity, gate and bounded-ratio check of the library, in a fixed order.
inline std::vector<VerificationReport> run_lemma_suite(const Config& cfg)
{
    validate(cfg);
    const LemmaContext ctx(cfg);
    std::vector<VerificationReport> out;
    auto add = [&](VerificationReport r) { out.push_back(std::move(r)); };
    add(check_quadrature_exactness(ctx));
    add(check_doubling_gate(ctx));
    add(check_jacobi_normalization(ctx));
    add(check_jacobi_orthogonality(ctx));
    add(check_eigen_relation(ctx));
    add(check_recurrence_agreement(ctx));
    add(check_identity_at_one(ctx));
    add(check_constant_preserved(ctx));
    add(check_angular_form(ctx));
    add(check_product_formula(ctx));
    add(check_psi_at_one(ctx));
    add(check_coefficient_multiplier(ctx));
    add(check_self_adjoint(ctx));
    add(check_commutation(ctx));
    add(check_increment_representation(ctx));
    add(check_translation_boundedness(ctx));
    add(check_kernel_average_bound(ctx));
    add(check_modulus_monotone(ctx));
    add(check_modulus_doubling(ctx));
    add(check_l2_orthogonality(ctx));
    add(check_best_approx_value(ctx));
    add(check_best_approx_monotone(ctx));
    add(check_jackson_cutoff(ctx));
    add(check_direct_estimate(ctx));
    for (auto& r : check_k_functional(ctx)) add(std::move(r));
    for (auto& r : check_bernstein_markov(ctx)) add(std::move(r));
    return out;
}

} // namespace smoothness::harness
