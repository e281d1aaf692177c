#include "smoothness/quadrature.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace smoothness;

namespace {

void expect_valid_rule(const QuadratureRule& rule)
{
    ASSERT_EQ(rule.nodes.size(), rule.weights.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        EXPECT_GT(rule.nodes[i], -1.0);
        EXPECT_LT(rule.nodes[i], 1.0);
        EXPECT_GT(rule.weights[i], 0.0);
        if (i > 0) EXPECT_LT(rule.nodes[i - 1], rule.nodes[i]);
    }
}

double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

} // namespace

TEST(GaussLegendre, SmallRules)
{
    const auto one = gauss_legendre(1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one.nodes[0], 0.0);
    EXPECT_NEAR(one.weights[0], 2.0, 1e-15);

    // Roots of the Legendre companion (x^2 - 1/3) are +-1/sqrt(3).
    const auto two = gauss_legendre(2);
    EXPECT_NEAR(two.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(two.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(two.weights[0], 1.0, 1e-14);
    EXPECT_NEAR(two.weights[1], 1.0, 1e-14);
    EXPECT_NEAR(integrate([](double x) { return x * x; }, two), 2.0 / 3.0, 1e-15);
}

TEST(GaussLegendre, RejectsOutOfRange)
{
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
    EXPECT_THROW(gauss_legendre(4097), std::invalid_argument);
    EXPECT_THROW(gauss_chebyshev(0), std::invalid_argument);
    EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(gauss_jacobi(4, 0.0, -1.5), std::invalid_argument);
}

TEST(GaussChebyshev, ClosedForm)
{
    const auto one = gauss_chebyshev(1);
    EXPECT_EQ(one.nodes[0], 0.0);
    EXPECT_DOUBLE_EQ(one.weights[0], std::numbers::pi);

    const auto two = gauss_chebyshev(2);
    EXPECT_NEAR(two.nodes[0], -std::sqrt(2.0) / 2.0, 1e-15);
    EXPECT_NEAR(two.nodes[1], std::sqrt(2.0) / 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(two.weights[0], std::numbers::pi / 2.0);

    for (int n : {3, 16, 101}) {
        const auto rule = gauss_chebyshev(n);
        expect_valid_rule(rule);
        double total = 0.0;
        for (double w : rule.weights) {
            EXPECT_DOUBLE_EQ(w, std::numbers::pi / n);
            total += w;
        }
        EXPECT_NEAR(total, std::numbers::pi, 1e-13);
    }
    EXPECT_NEAR(integrate([](double) { return 1.0; }, gauss_chebyshev(16)), std::numbers::pi, 1e-14);
}

TEST(GaussJacobi, MatchesReferenceValues)
{
    const auto r = gauss_jacobi(1, 0.0, 0.0);
    EXPECT_NEAR(r.nodes[0], 0.0, 1e-16);
    EXPECT_NEAR(r.weights[0], 2.0, 1e-15);

    // 16/15 = int (1-x^2)^2 dx, frozen from the adaptive Simpson oracle.
    const double want = oracle::adaptive_simpson([](double x) { return (1 - x * x) * (1 - x * x); }, -1, 1);
    EXPECT_NEAR(want, 16.0 / 15.0, 1e-12);
    const auto rule = gauss_jacobi(4, 2.0, 2.0);
    EXPECT_NEAR(integrate([](double) { return 1.0; }, rule), 16.0 / 15.0, 1e-14);
    EXPECT_NEAR(integrate([](double x) { return x; }, rule), 0.0, 1e-16);
}

TEST(Quadrature, PolynomialExactness)
{
    for (int n : {2, 4, 8, 16}) {
        const auto leg = gauss_legendre(n);
        const auto cheb = gauss_chebyshev(n);
        const auto jac = gauss_jacobi(n, 2.0, 2.0);
        const auto asym = gauss_jacobi(n, 0.5, -0.3);
        for (const auto* rule : {&leg, &cheb, &jac, &asym}) expect_valid_rule(*rule);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const auto mono = [k](double x) { return std::pow(x, k); };
            EXPECT_LE(rel_err(integrate(mono, leg), oracle::symmetric_moment(k, 0.0)), 1e-12)
                << "legendre n=" << n << " k=" << k;
            EXPECT_LE(rel_err(integrate(mono, cheb), oracle::symmetric_moment(k, -0.5)), 1e-12)
                << "chebyshev n=" << n << " k=" << k;
            EXPECT_LE(rel_err(integrate(mono, jac), oracle::symmetric_moment(k, 2.0)), 1e-12)
                << "jacobi(2,2) n=" << n << " k=" << k;
            EXPECT_LE(rel_err(integrate(mono, asym), oracle::jacobi_moment(k, 0.5, -0.3)), 1e-12)
                << "jacobi(0.5,-0.3) n=" << n << " k=" << k;
        }
    }
}

TEST(Quadrature, LargeRulesStayWellFormed)
{
    for (int n : {512, 4096}) {
        const auto rule = gauss_legendre(n);
        expect_valid_rule(rule);
        double total = 0.0;
        for (double w : rule.weights) total += w;
        EXPECT_NEAR(total, 2.0, 1e-12);
    }
    const auto rule = gauss_jacobi(1024, 9.5, 10.0);
    expect_valid_rule(rule);
    EXPECT_LE(rel_err(integrate([](double) { return 1.0; }, rule), oracle::jacobi_moment(0, 9.5, 10.0)), 1e-12);
}

TEST(Quadrature, IntegrateReportsBadNode)
{
    const auto rule = gauss_legendre(3);
    try {
        integrate([](double x) { return x == 0.0 ? std::nan("") : 1.0; }, rule);
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_EQ(e.node(), 0.0);
    }
    EXPECT_EQ(integrate([](double) { return 0.0; }, rule), 0.0);
}

TEST(Quadrature, UnitCircleMoments)
{
    EXPECT_NEAR(integrate_unit_circle([](double) { return 1.0; }, 8), std::numbers::pi, 1e-14);
    EXPECT_NEAR(integrate_unit_circle([](double z) { return z * z; }, 8), std::numbers::pi / 2, 1e-14);
    EXPECT_NEAR(integrate_unit_circle([](double z) { return z; }, 8), 0.0, 1e-15);
    // 3 pi / 8, the mass behind the 8/(3 pi) normalization of the symmetric translation.
    const double simpson = oracle::adaptive_simpson(
        [](double phi) { const double s = std::sin(phi); return s * s * s * s; }, 0.0, std::numbers::pi);
    EXPECT_NEAR(simpson, 3 * std::numbers::pi / 8, 1e-12);
    EXPECT_NEAR(integrate([](double z) { return (1 - z * z) * (1 - z * z); }, gauss_chebyshev(8)),
                3 * std::numbers::pi / 8, 1e-14);
}

TEST(Quadrature, DoublingStabilityOnSmoothFunctions)
{
    const auto f1 = [](double x) { return std::sin(3 * x); };
    const auto f2 = [](double x) { return std::exp(x) * (1 - x * x); };
    for (const auto& f : {std::function<double(double)>(f1), std::function<double(double)>(f2)}) {
        EXPECT_LE(std::abs(integrate(f, gauss_legendre(128)) - integrate(f, gauss_legendre(256))), 1e-8);
        EXPECT_LE(std::abs(integrate(f, gauss_jacobi(128, 2, 2)) - integrate(f, gauss_jacobi(256, 2, 2))), 1e-8);
    }
}

TEST(Quadrature, Deterministic)
{
    const auto a = gauss_jacobi(77, 1.3, 0.2);
    const auto b = gauss_jacobi(77, 1.3, 0.2);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.weights, b.weights);
    const auto f = [](double x) { return std::cos(5 * x); };
    EXPECT_EQ(integrate(f, a), integrate(f, b));
    EXPECT_EQ(shared_gauss_jacobi(33, 2, 2).get(), shared_gauss_jacobi(33, 2, 2).get());
}
