#pragma once

#include "smoothness/function.hpp"
#include "smoothness/jacobi.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace smoothness::harness {

enum class SmoothnessClass { polynomial, analytic, kink, endpoint_singular, random_series };

inline const char* to_string(SmoothnessClass c)
{
    switch (c) {
    case SmoothnessClass::polynomial: return "polynomial";
    case SmoothnessClass::analytic: return "analytic";
    case SmoothnessClass::kink: return "kink";
    case SmoothnessClass::endpoint_singular: return "endpoint-singular";
    case SmoothnessClass::random_series: return "random-series";
    }
    return "unknown";
}

struct CorpusEntry {
    std::string label;
    FunctionHandle f;
    SmoothnessClass cls = SmoothnessClass::analytic;
    std::optional<std::uint64_t> seed;
    std::optional<Polynomial> poly;  ///< exact monomial form when f is a polynomial
    std::vector<double> coefficients; ///< normalized (2,2) coefficients of the random series

    /// Entries for which quadrature converges spectrally.
    bool smooth() const
    {
        return cls == SmoothnessClass::polynomial || cls == SmoothnessClass::analytic ||
               cls == SmoothnessClass::random_series;
    }
};

inline constexpr int kRandomSeriesDegree = 12;

/// Uniform draw in [-1, 1] from the top 53 bits; portable across standard libraries,
/// unlike std::uniform_real_distribution.
inline double portable_uniform(std::mt19937_64& gen)
{
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

/// c_nu = u_nu (1 + nu)^{-3}, nu = 0..12.
inline std::vector<double> random_series_coefficients(std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::vector<double> c(kRandomSeriesDegree + 1);
    for (int nu = 0; nu <= kRandomSeriesDegree; ++nu)
        c[nu] = portable_uniform(gen) / std::pow(1.0 + nu, 3);
    return c;
}

inline CorpusEntry polynomial_entry(std::string label, const Polynomial& p)
{
    const Polynomial d1 = p.derivative();
    const Polynomial d2 = d1.derivative();
    CorpusEntry e;
    e.label = label;
    e.f = make_function(std::move(label), [p](double x) { return p(x); },
                        [d1](double x) { return d1(x); }, [d2](double x) { return d2(x); },
                        p.parity());
    e.cls = SmoothnessClass::polynomial;
    e.poly = p;
    return e;
}

inline std::vector<CorpusEntry> corpus(std::uint64_t seed)
{
    std::vector<CorpusEntry> out;
    out.push_back(polynomial_entry("1", Polynomial::constant(1.0)));
    out.push_back(polynomial_entry("x", Polynomial::monomial(1)));
    out.push_back(polynomial_entry("x^2", Polynomial::monomial(2)));
    out.push_back(polynomial_entry("P5", jacobi_poly(5, 2.0, 2.0)));

    {
        CorpusEntry e;
        e.label = "|x|";
        e.f = make_function("|x|", [](double x) { return std::abs(x); }, {}, {}, Parity::even);
        e.cls = SmoothnessClass::kink;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.label = "(1-x)^(3/4)";
        e.f = make_function(
            e.label, [](double x) { return std::pow(1.0 - x, 0.75); },
            [](double x) { return -0.75 * std::pow(1.0 - x, -0.25); },
            [](double x) { return -0.1875 * std::pow(1.0 - x, -1.25); });
        e.cls = SmoothnessClass::endpoint_singular;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.label = "sin(3x)";
        e.f = make_function(
            e.label, [](double x) { return std::sin(3.0 * x); },
            [](double x) { return 3.0 * std::cos(3.0 * x); },
            [](double x) { return -9.0 * std::sin(3.0 * x); }, Parity::odd);
        e.cls = SmoothnessClass::analytic;
        out.push_back(std::move(e));
    }
    {
        const auto c = random_series_coefficients(seed);
        const JacobiSeries series(2.0, 2.0, c);
        const Polynomial p = series.to_monomial();
        const Polynomial d1 = p.derivative();
        const Polynomial d2 = d1.derivative();
        CorpusEntry e;
        e.label = "series(seed=" + std::to_string(seed) + ")";
        // Evaluate through the recurrence; the monomial form only feeds the derivatives.
        e.f = make_function(
            e.label, [series](double x) { return series(x); }, [d1](double x) { return d1(x); },
            [d2](double x) { return d2(x); });
        e.cls = SmoothnessClass::random_series;
        e.seed = seed;
        e.poly = p;
        e.coefficients = c;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace smoothness::harness
