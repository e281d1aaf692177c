#pragma once

#include "smoothness/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace smoothness {

enum class RuleKind { legendre, chebyshev1, jacobi };

/// Nodes (ascending, inside (-1,1)) and positive weights of a Gauss-type rule.
/// For `jacobi` the rule integrates against (1-x)^a (1+x)^b.
struct QuadratureRule {
    RuleKind kind = RuleKind::legendre;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kMaxRuleSize = 4096;

namespace detail {

inline void check_rule_size(int n, const char* who)
{
    if (n < 1 || n > kMaxRuleSize)
        throw std::invalid_argument(std::string(who) + ": node count must lie in [1, 4096], got " +
                                    std::to_string(n));
}

// Recurrence coefficients of the monic orthogonal polynomials for (1-x)^a (1+x)^b:
// diag[k] = alpha_k, off[k] = sqrt(beta_{k+1}).
inline void jacobi_matrix(int n, double a, double b, std::vector<double>& diag,
                          std::vector<double>& off)
{
    diag.assign(n, 0.0);
    off.assign(n > 0 ? n - 1 : 0, 0.0);
    const double ab = a + b;
    for (int k = 0; k < n; ++k) {
        if (k == 0) {
            diag[0] = (b - a) / (ab + 2.0);
        } else {
            const double s = 2.0 * k + ab;
            diag[k] = (b * b - a * a) / (s * (s + 2.0));
        }
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double beta = 0.0;
        if (k == 1) {
            beta = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off[k - 1] = std::sqrt(beta);
    }
}

// Golub-Welsch nodes from the symmetric tridiagonal eigenproblem; weights as
// Christoffel numbers mu0 / sum_k q_k(x)^2 with q_k the orthonormal recurrence.
inline QuadratureRule golub_welsch(int n, double a, double b, RuleKind kind)
{
    std::vector<double> diag, off;
    jacobi_matrix(n, a, b, diag, off);
    const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                                std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));

    QuadratureRule rule;
    rule.kind = kind;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    if (n == 1) {
        rule.nodes[0] = diag[0];
        rule.weights[0] = mu0;
        return rule;
    }

    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(off.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("golub_welsch: tridiagonal eigenvalue solve failed");
    const Eigen::VectorXd& eig = solver.eigenvalues();

    for (int i = 0; i < n; ++i) {
        double x = eig[i];
        // One Newton step on q_n polishes the eigenvalue.
        for (int pass = 0; pass < 2; ++pass) {
            double q_prev = 0.0, q = 1.0, dq_prev = 0.0, dq = 0.0;
            for (int k = 0; k < n; ++k) {
                const double beta_k = k > 0 ? off[k - 1] : 0.0;
                const double beta_next = k + 1 < n ? off[k] : 1.0;
                const double q_next = ((x - diag[k]) * q - beta_k * q_prev) / beta_next;
                const double dq_next = (q + (x - diag[k]) * dq - beta_k * dq_prev) / beta_next;
                q_prev = q;
                q = q_next;
                dq_prev = dq;
                dq = dq_next;
            }
            if (dq != 0.0 && std::isfinite(q / dq)) {
                const double step = q / dq;
                if (std::abs(step) < 1e-10) x -= step;
            }
        }
        double sum = 0.0, q_prev = 0.0, q = 1.0;
        for (int k = 0; k < n; ++k) {
            sum += q * q;
            if (k + 1 == n) break;
            const double beta_k = k > 0 ? off[k - 1] : 0.0;
            const double q_next = ((x - diag[k]) * q - beta_k * q_prev) / off[k];
            q_prev = q;
            q = q_next;
        }
        rule.nodes[i] = x;
        rule.weights[i] = mu0 / sum;
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int l, int r) { return rule.nodes[l] < rule.nodes[r]; });
    QuadratureRule sorted = rule;
    for (int i = 0; i < n; ++i) {
        sorted.nodes[i] = rule.nodes[order[i]];
        sorted.weights[i] = rule.weights[order[i]];
    }

    if (a == b) {
        // Symmetric weight: enforce exact mirror symmetry of nodes and weights.
        for (int i = 0; i < n / 2; ++i) {
            const int j = n - 1 - i;
            const double x = 0.5 * (sorted.nodes[j] - sorted.nodes[i]);
            const double w = 0.5 * (sorted.weights[i] + sorted.weights[j]);
            sorted.nodes[i] = -x;
            sorted.nodes[j] = x;
            sorted.weights[i] = w;
            sorted.weights[j] = w;
        }
        if (n % 2 == 1) sorted.nodes[n / 2] = 0.0;
    }
    return sorted;
}

} // namespace detail

inline QuadratureRule gauss_legendre(int n)
{
    detail::check_rule_size(n, "gauss_legendre");
    return detail::golub_welsch(n, 0.0, 0.0, RuleKind::legendre);
}

/// Gauss-Chebyshev (first kind): nodes cos((2k-1)pi/(2n)), weights pi/n.
inline QuadratureRule gauss_chebyshev(int n)
{
    detail::check_rule_size(n, "gauss_chebyshev");
    QuadratureRule rule;
    rule.kind = RuleKind::chebyshev1;
    rule.a = -0.5;
    rule.b = -0.5;
    rule.nodes.resize(n);
    rule.weights.assign(n, std::numbers::pi / n);
    // Ascending order: index i holds the node for k = n - i.
    for (int i = 0; i < n; ++i) {
        const int k = n - i;
        rule.nodes[i] = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
    }
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

inline QuadratureRule gauss_jacobi(int n, double a, double b)
{
    detail::check_rule_size(n, "gauss_jacobi");
    if (!(a > -1.0) || !(b > -1.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
    return detail::golub_welsch(n, a, b, RuleKind::jacobi);
}

/// Process-wide cache of rules keyed on (kind, n, a, b). Rules are immutable once built.
inline std::shared_ptr<const QuadratureRule> shared_rule(RuleKind kind, int n, double a = 0.0,
                                                         double b = 0.0)
{
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double, double>, std::shared_ptr<const QuadratureRule>>
        cache;
    const auto key = std::make_tuple(static_cast<int>(kind), n, a, b);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    QuadratureRule built;
    switch (kind) {
    case RuleKind::legendre: built = gauss_legendre(n); break;
    case RuleKind::chebyshev1: built = gauss_chebyshev(n); break;
    case RuleKind::jacobi: built = gauss_jacobi(n, a, b); break;
    }
    auto rule = std::make_shared<const QuadratureRule>(std::move(built));
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(rule)).first->second;
}

inline std::shared_ptr<const QuadratureRule> shared_gauss_jacobi(int n, double a, double b)
{
    return shared_rule(RuleKind::jacobi, n, a, b);
}

/// Sum of w_i f(x_i) in ascending node order.
template <class F>
double integrate(const F& f, const QuadratureRule& rule)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v)) throw EvaluationError("integrate: non-finite integrand", rule.nodes[i]);
        sum += rule.weights[i] * v;
    }
    return sum;
}

/// Integral of f(z) dz / sqrt(1 - z^2) over (-1,1).
template <class F>
double integrate_unit_circle(const F& f, int n)
{
    return integrate(f, gauss_chebyshev(n));
}

} // namespace smoothness
