#include "smoothness/approx.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace smoothness;

namespace {

FunctionHandle abs_x() { return make_function("|x|", [](double x) { return std::abs(x); }, {}, {}, Parity::even); }
FunctionHandle ident() { return make_function("x", [](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }, Parity::odd); }
FunctionHandle sin3() { return make_function("sin(3x)", [](double x) { return std::sin(3 * x); }, [](double x) { return 3 * std::cos(3 * x); }, [](double x) { return -9 * std::sin(3 * x); }); }

FunctionHandle square() { return make_function("x^2", [](double x) { return x * x; }); }
FunctionHandle root_kink() { return make_function("(1-x)^(3/4)", [](double x) { return std::pow(1.0 - x, 0.75); }); }

const double kNormX = std::sqrt(16.0 / 105.0);

} // namespace

TEST(BestApprox, PolynomialIsReproduced)
{
    const Polynomial p({0.5, -1.0, 0.0, 2.0});
    const auto f = make_function("p", [p](double x) { return p(x); });
    for (const SpaceParams params : {SpaceParams{2.0, 1.0}, SpaceParams{1.0, 0.9}, SpaceParams{kInfinity, 1.2}}) {
        const auto r = best_approx(f, 4, params);
        EXPECT_NEAR(r.value, 0.0, 1e-9);
        for (double x : {-0.8, 0.1, 0.6}) EXPECT_NEAR(r.argmin(x), p(x), 1e-9);
    }
}

TEST(BestApprox, ConstantApproximantOfX)
{
    const auto r = best_approx(ident(), 1, SpaceParams{2.0, 1.0});
    EXPECT_NEAR(r.value, kNormX, 1e-12);
    EXPECT_NEAR(r.argmin(0.3), 0.0, 1e-14);
    EXPECT_EQ(r.method, ApproxMethod::l2_projection);

    const auto sup = best_approx(ident(), 1, SpaceParams{kInfinity, 1.0});
    EXPECT_NEAR(sup.value, 2.0 / (3.0 * std::sqrt(3.0)), 1e-4);
    EXPECT_EQ(sup.method, ApproxMethod::remez_grid);
}

TEST(BestApprox, MonotoneInDegree)
{
    for (const SpaceParams params : {SpaceParams{2.0, 1.0}, SpaceParams{1.0, 1.0}, SpaceParams{3.0, 1.0}}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= 16; ++n) {
            const double e = best_approx(abs_x(), n, params).value;
            EXPECT_LE(e, prev * (1.0 + 1e-9)) << params.p << " n=" << n;
            prev = e;
        }
    }
}

// Reference minima on the same 256 Gauss-Jacobi nodes from an independent conic solver.
TEST(BestApprox, MatchesConicSolverReferenceForPAboveTwo)
{
    const Polynomial p5 = jacobi_poly(5, 2.0, 2.0);
    const double p5_at_one = p5(1.0);
    const auto f = make_function("P5", [&](double x) { return p5(x) / p5_at_one; });
    const SpaceParams params{3.0, 1.0};
    EXPECT_NEAR(best_approx(f, 2, params).value, 0.05144266464279033, 1e-8);
    EXPECT_NEAR(best_approx(f, 4, params).value, 0.051059291763924174, 1e-8);
    EXPECT_NEAR(best_approx(f, 6, params).value, 0.0, 1e-12);
    EXPECT_NEAR(best_approx(root_kink(), 2, params).value, 0.018897304913355423, 1e-9);
    EXPECT_NEAR(best_approx(root_kink(), 4, params).value, 0.0018622197292938228, 1e-10);
    EXPECT_NEAR(best_approx(root_kink(), 8, params).value, 0.00016530564970742767, 1e-11);
}

TEST(BestApprox, SupNormMonotone)
{
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 12; ++n) {
        const double e = best_approx(sin3(), n, SpaceParams{kInfinity, 1.2}).value;
        EXPECT_LE(e, prev + 1e-9) << n;
        prev = e;
    }
}

TEST(BestApprox, L2ResidualIsOrthogonal)
{
    const int n = 6;
    const auto r = best_approx(sin3(), n, SpaceParams{2.0, 1.0});
    const auto rule = gauss_jacobi(256, 2.0, 2.0);
    for (int k = 0; k < n; ++k) {
        double ip = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double x = rule.nodes[i];
            ip += rule.weights[i] * (std::sin(3 * x) - r.argmin(x)) * std::pow(x, k);
        }
        EXPECT_NEAR(ip, 0.0, 1e-9) << k;
    }
}

TEST(BestApprox, ValueMatchesNorm)
{
    for (const SpaceParams params : {SpaceParams{2.0, 1.0}, SpaceParams{1.0, 0.9}, SpaceParams{kInfinity, 1.2}}) {
        const auto f = abs_x();
        const auto r = best_approx(f, 5, params);
        const double direct = weighted_norm([&](double x) { return f(x) - r.argmin(x); }, params);
        EXPECT_NEAR(r.value, direct, 1e-9);
    }
}

TEST(BestApprox, IrlsBeatsProjectionForPEqualsOne)
{
    const SpaceParams params{1.0, 1.0};
    const auto l1 = best_approx(abs_x(), 6, params);
    const auto l2 = best_approx(abs_x(), 6, SpaceParams{2.0, 1.0});
    const double l2_in_l1 = weighted_norm([&](double x) { return std::abs(x) - l2.argmin(x); }, params);
    EXPECT_EQ(l1.method, ApproxMethod::irls_grid);
    EXPECT_LE(l1.value, l2_in_l1 + 1e-12);
}

TEST(BestApprox, Errors)
{
    EXPECT_THROW(best_approx(ident(), 0, SpaceParams{}), std::invalid_argument);
    EXPECT_THROW(best_approx(ident(), 65, SpaceParams{}), std::invalid_argument);
    EXPECT_THROW(best_approx(ident(), 2, SpaceParams{0.5, 1.0}), std::invalid_argument);
}

TEST(Jackson, KernelValues)
{
    EXPECT_NEAR(jackson_kernel(0.0, {3, 4}), std::pow(4.0, 6), 1e-9);
    EXPECT_NEAR(jackson_kernel(1e-9, {3, 4}), std::pow(4.0, 6), 1e-3);
    EXPECT_NEAR(jackson_kernel(std::numbers::pi, {3, 2}), 0.0, 1e-28);
    EXPECT_NEAR(jackson_kernel(std::numbers::pi / 2, {3, 2}), 8.0, 1e-12);
}

TEST(Jackson, GammaNorm)
{
    EXPECT_NEAR(gamma_norm({3, 1}), 16.0 / 15.0, 1e-13);
    for (int q : {3, 4})
        for (int m : {1, 2, 5, 9}) EXPECT_GT(gamma_norm({q, m}), 0.0);
    // Oracle: adaptive integration of the same integrand.
    const JacksonParams p{3, 4, 128};
    const double oracle_val = oracle::adaptive_simpson(
        [&](double t) { return jackson_kernel(t, p) * std::pow(std::sin(t), 5); }, 0.0, std::numbers::pi, 1e-10);
    EXPECT_NEAR(gamma_norm(p), oracle_val, 1e-8 * oracle_val);
    // With the sin^5 measure, gamma_m grows like m^{2q-6}: m^4 needs q = 5, q = 3 is logarithmic.
    for (int m : {4, 8, 16}) {
        const double r5 = gamma_norm({5, 2 * m}) / gamma_norm({5, m});
        EXPECT_GT(r5, 8.0) << m;
        EXPECT_LT(r5, 32.0) << m;
        const double r3 = gamma_norm({3, 2 * m}) / gamma_norm({3, m});
        EXPECT_GT(r3, 1.0) << m;
        EXPECT_LT(r3, 2.0) << m;
    }
}

TEST(Jackson, SecondMomentDecay)
{
    // m^2 * int t^2 K sin^5 / gamma_m stays bounded for q = 5.
    for (int m : {4, 8, 16, 32}) {
        const JacksonParams p{5, m, 256};
        const double moment = detail::integrate_zero_pi(
            [&](double t) { return t * t * jackson_kernel(t, p) * detail::sin5(t); }, p.t_nodes);
        EXPECT_LT(moment / gamma_norm(p) * m * m, 8.0) << m;
    }
}

TEST(Jackson, DegreeBound)
{
    EXPECT_EQ(jackson_degree_bound({3, 1}), 0);
    EXPECT_EQ(jackson_degree_bound({3, 2}), 5);
    EXPECT_EQ(jackson_degree_bound({4, 3}), 12);
    EXPECT_THROW(gamma_norm({2, 3}), std::invalid_argument);
}

TEST(Jackson, ConstantIsFixed)
{
    const auto one = [](double) { return 1.0; };
    const auto q = jackson_operator(one, {3, 1});
    EXPECT_EQ(q.degree(), 0);
    EXPECT_NEAR(q(0.4), 1.0, 1e-12);
    const auto q2 = jackson_operator(one, {3, 2});
    for (double x : {-0.9, 0.0, 0.5}) EXPECT_NEAR(q2(x), 1.0, 1e-12);
}

TEST(Jackson, PreservesParity)
{
    const auto f = [](double x) { return x; };
    const auto q = jackson_operator(f, {3, 2});
    for (double x : {0.1, 0.45, 0.8}) EXPECT_NEAR(q(-x), -q(x), 1e-12);
    const auto poly = q.to_monomial();
    for (int k = 0; k <= poly.degree(); k += 2) EXPECT_NEAR(poly.coefficient(k), 0.0, 1e-10);
}

TEST(Jackson, SpectralCutoff)
{
    const std::vector<std::function<double(double)>> fs = {
        [](double x) { return x * x; },
        [](double x) { return std::sin(3 * x); },
        [](double x) { return std::exp(x); },
    };
    for (const JacksonParams p : {JacksonParams{3, 2}, JacksonParams{3, 3}, JacksonParams{4, 2}}) {
        const int bound = jackson_degree_bound(p);
        for (const auto& f : fs) {
            const auto qf = [&](double x) { return jackson_eval(f, x, p); };
            for (int nu = bound + 1; nu <= bound + 6; ++nu)
                EXPECT_LE(std::abs(fourier_jacobi_coeff(qf, nu)), 1e-8) << p.q << "," << p.m << " nu=" << nu;
        }
    }
}

TEST(Jackson, FittedPolynomialMatchesPointwise)
{
    const auto f = [](double x) { return x * x; };
    const JacksonParams p{3, 3};
    const auto q = jackson_operator(f, p);
    EXPECT_LE(q.degree(), jackson_degree_bound(p));
    for (double x : {-0.77, 0.12, 0.6}) EXPECT_NEAR(q(x), jackson_eval(f, x, p), 1e-10);
}

TEST(KFunctional, ZeroFunction)
{
    const auto zero = make_function("0", [](double) { return 0.0; });
    const auto r = k_functional(zero, 0.7, SpaceParams{2.0, 1.0});
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.witness.degree(), -1);
}

TEST(KFunctional, PolynomialAtZeroDelta)
{
    const Polynomial p({0.1, 0.0, -2.0, 0.5});
    const auto f = make_function("p", [p](double x) { return p(x); });
    const auto r = k_functional(f, 0.0, SpaceParams{2.0, 1.0});
    EXPECT_NEAR(r.value, 0.0, 1e-12);
    for (double x : {-0.5, 0.2, 0.9}) EXPECT_NEAR(r.witness(x), p(x), 1e-10);
}

TEST(KFunctional, IdentityAtSmallDelta)
{
    const SpaceParams params{2.0, 1.0};
    const double delta = 0.1;
    const auto r = k_functional(ident(), delta, params);
    // Two candidates: g = 0 gives ||x||, g = x gives delta^2 * 6 ||x||.
    const double two_candidate = std::min(kNormX, delta * delta * 6.0 * kNormX);
    EXPECT_LE(r.value, two_candidate + 1e-12);
    // Grid search over g = c x: |1 - c| ||x|| + delta^2 6 |c| ||x||, minimized at c = 1.
    double grid_best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
        const double c = i / 1000.0;
        grid_best = std::min(grid_best, (std::abs(1 - c) + delta * delta * 6 * std::abs(c)) * kNormX);
    }
    EXPECT_LE(r.value, grid_best + 1e-12);
    EXPECT_NEAR(r.value, 0.06 * kNormX, 1e-9);
}

TEST(KFunctional, ValueMatchesWitness)
{
    for (const SpaceParams params : {SpaceParams{2.0, 1.0}, SpaceParams{1.0, 0.9}, SpaceParams{kInfinity, 1.2}}) {
        const auto f = abs_x();
        const auto r = k_functional(f, 0.3, params);
        EXPECT_NEAR(r.value, k_objective(f, 0.3, params, r.witness, r.witness_d), 1e-9) << params.p;
        // D applied in coefficient space agrees with D applied to the monomial form.
        const Polynomial dg = apply_D_poly(r.witness.to_monomial());
        for (double x : {-0.4, 0.3}) EXPECT_NEAR(r.witness_d(x), dg(x), 1e-6 * (1.0 + std::abs(dg(x))));
    }
}

TEST(KFunctional, UpperBoundConsistency)
{
    const SpaceParams params{2.0, 1.0};
    for (const auto& f : {abs_x(), sin3(), ident()})
        for (double delta : {0.05, 0.4, 1.6}) {
            const auto r = k_functional(f, delta, params);
            const double at_zero = weighted_norm(f, params);
            const auto proj = best_approx(f, 33, params);
            const auto dproj = make_function("Dg", [&](double x) {
                return apply_D_poly(proj.argmin.to_monomial())(x);
            });
            const double at_proj = proj.value + delta * delta * weighted_norm(dproj, params);
            EXPECT_LE(r.value, std::min(at_zero, at_proj) + 1e-10) << f.label << " " << delta;
        }
}

TEST(KFunctional, MonotoneInDelta)
{
    for (const SpaceParams params : {SpaceParams{2.0, 1.0}, SpaceParams{1.0, 0.9}, SpaceParams{kInfinity, 1.2}}) {
        double prev = 0.0;
        for (double delta : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
            const double v = k_functional(abs_x(), delta, params).value;
            EXPECT_GE(v + 1e-10, prev) << params.p << " " << delta;
            prev = v;
        }
    }
}

// Past the saturation point the witness is the best constant, which sits on the kink of ||D g||.
TEST(KFunctional, SaturatesAtBestConstant)
{
    const SpaceParams params{3.0, 1.0};
    for (const auto& f : {square(), root_kink()}) {
        const double sat = k_functional(f, 2.4, params).value;
        EXPECT_NEAR(sat, best_approx(f, 1, params).value, 1e-12 * sat) << f.label;
        double prev = 0.0;
        for (double delta : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 2.4}) {
            const double v = k_functional(f, delta, params).value;
            EXPECT_GE(v + 1e-12 * sat, prev) << f.label << " " << delta;
            prev = v;
        }
    }
}

// Reference minima of the same discretized problem (256 norm nodes, degree <= 32),
// computed with an independent conic solver.
TEST(KFunctional, MatchesConicSolverReference)
{
    struct Case {
        SpaceParams params;
        FunctionHandle f;
        double delta;
        double expected;
    };
    const std::vector<Case> cases = {
        {{1.0, 0.9}, ident(), 0.05, 0.007894923792327438},
        {{1.0, 0.9}, ident(), 0.4, 0.43061296934124743},
        {{1.0, 0.9}, sin3(), 0.2, 0.3185075761901751},
        {{1.0, 0.9}, abs_x(), 0.2, 0.17050497252037422},
        {{1.5, 1.0}, sin3(), 0.2, 0.3054053104398484},
        {{3.0, 1.0}, ident(), 0.4, 0.3507682095034556},
        {{3.0, 1.0}, sin3(), 0.2, 0.29079984351322735},
        {{kInfinity, 1.2}, ident(), 0.05, 0.005330691405983599},
        {{kInfinity, 1.2}, ident(), 0.4, 0.2807192681631781},
        {{kInfinity, 1.2}, abs_x(), 0.1, 0.0931831078265303},
        {{kInfinity, 1.2}, sin3(), 0.2, 0.2883190209066776},
    };
    for (const auto& c : cases) {
        const auto r = k_functional(c.f, c.delta, c.params);
        EXPECT_NEAR(r.value, c.expected, 1e-6 * c.expected) << c.f.label << " p=" << c.params.p << " delta=" << c.delta;
    }
}

TEST(KFunctional, Errors)
{
    EXPECT_THROW(k_functional(ident(), 0.1, SpaceParams{2.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(k_functional(ident(), -0.1, SpaceParams{2.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(k_functional(ident(), 0.1, SpaceParams{2.0, 1.0}, {49}), std::invalid_argument);
}

TEST(BernsteinMarkov, Constant)
{
    const auto r = bernstein_markov_ratios(Polynomial::constant(2.0), SpaceParams{2.0, 1.0}, 0.5);
    EXPECT_EQ(r.derivative_ratio, 0.0);
    EXPECT_GT(r.weight_ratio, 0.0);
    EXPECT_THROW(bernstein_markov_ratios(Polynomial{}, SpaceParams{2.0, 1.0}, 0.5), std::invalid_argument);
}

TEST(BernsteinMarkov, JacobiDegreeEight)
{
    const auto r = bernstein_markov_ratios(jacobi_poly(8, 2, 2), SpaceParams{2.0, 1.0}, 0.5);
    EXPECT_TRUE(std::isfinite(r.derivative_ratio));
    EXPECT_LT(r.derivative_ratio, 10.0);
    EXPECT_LT(r.weight_ratio, 10.0);
}

TEST(BernsteinMarkov, BoundedInDegree)
{
    double d_max = 0.0, w_max = 0.0, d_first = 0.0, w_first = 0.0;
    for (int n : {2, 4, 8, 16}) {
        const auto r = bernstein_markov_ratios(jacobi_poly(n, 2, 2), SpaceParams{2.0, 1.0}, 0.5);
        if (n == 2) {
            d_first = r.derivative_ratio;
            w_first = r.weight_ratio;
        }
        d_max = std::max(d_max, r.derivative_ratio);
        w_max = std::max(w_max, r.weight_ratio);
    }
    EXPECT_LT(d_max, 3.0 * d_first);
    EXPECT_LT(w_max, 3.0 * w_first);
}
