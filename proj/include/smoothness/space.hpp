#pragma once

#include "smoothness/function.hpp"
#include "smoothness/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothness {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Pointwise evaluation stays within |x| <= 1 - kInteriorMargin.
inline constexpr double kInteriorMargin = 1e-6;

/// The weighted space L_{p,alpha}: norm ||f (1-x^2)^alpha||_p, p = kInfinity for the sup norm.
struct SpaceParams {
    double p = 2.0;
    double alpha = 1.0;

    bool is_sup() const noexcept { return std::isinf(p); }
};

struct Admissibility {
    bool valid = false;
    std::string reason;

    explicit operator bool() const noexcept { return valid; }
};

/// Parameter ranges for which the modulus/K-functional equivalence is established:
///   p = 1:        1/2 < alpha <= 1
///   1 < p < inf:  1 - 1/(2p) < alpha < 3/2 - 1/(2p)
///   p = inf:      1 <= alpha < 3/2
inline Admissibility validate_params(double p, double alpha)
{
    if (std::isnan(p) || p < 1.0) throw std::invalid_argument("validate_params: p must be >= 1");
    if (!std::isfinite(alpha)) return {false, "alpha must be finite"};
    if (p == 1.0) {
        if (alpha > 0.5 && alpha <= 1.0) return {true, {}};
        return {false, "p = 1 requires 1/2 < alpha <= 1"};
    }
    if (std::isinf(p)) {
        if (alpha >= 1.0 && alpha < 1.5) return {true, {}};
        return {false, "p = inf requires 1 <= alpha < 3/2"};
    }
    const double lo = 1.0 - 1.0 / (2.0 * p);
    const double hi = 1.5 - 1.0 / (2.0 * p);
    if (alpha > lo && alpha < hi) return {true, {}};
    return {false, "1 < p < inf requires 1 - 1/(2p) < alpha < 3/2 - 1/(2p)"};
}

inline Admissibility validate_params(const SpaceParams& params)
{
    return validate_params(params.p, params.alpha);
}

/// Chebyshev points cos((2k-1)pi/(2n)), k = 1..n, clamped to the interior margin.
inline std::vector<double> make_grid(int n)
{
    if (n < 2) throw std::invalid_argument("make_grid: need n >= 2");
    std::vector<double> grid(n);
    const double limit = 1.0 - kInteriorMargin;
    for (int k = 1; k <= n; ++k) {
        double x = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
        grid[k - 1] = std::clamp(x, -limit, limit);
    }
    if (n % 2 == 1) grid[n / 2] = 0.0;
    return grid;
}

/// Precomputed sampling points and weights for ||.||_{p,alpha}.
///
/// For finite p the points are Gauss-Jacobi nodes for (1-x^2)^{p alpha} and the
/// norm is (sum w_i |v_i|^p)^{1/p}. For p = inf the points are a Chebyshev grid
/// plus the two margin points and the norm is max_i |v_i| (1-x_i^2)^alpha.
class NormEvaluator {
public:
    NormEvaluator(const SpaceParams& params, int n_nodes) : params_(params)
    {
        if (std::isnan(params.p) || params.p < 1.0)
            throw std::invalid_argument("weighted_norm: p must be >= 1");
        if (params.is_sup()) {
            nodes_ = make_grid(std::max(n_nodes, 2));
            nodes_.push_back(1.0 - kInteriorMargin);
            nodes_.push_back(-1.0 + kInteriorMargin);
            weights_.resize(nodes_.size());
            for (std::size_t i = 0; i < nodes_.size(); ++i)
                weights_[i] = std::pow(1.0 - nodes_[i] * nodes_[i], params.alpha);
        } else {
            const double e = params.p * params.alpha;
            if (!(e > -1.0))
                throw std::invalid_argument("weighted_norm: p*alpha must exceed -1 for quadrature");
            rule_ = shared_gauss_jacobi(n_nodes, e, e);
            nodes_ = rule_->nodes;
            weights_ = rule_->weights;
        }
    }

    const SpaceParams& params() const noexcept { return params_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Norm of a function sampled at nodes().
    double norm(std::span<const double> values) const
    {
        check_size(values.size());
        if (params_.is_sup()) {
            double m = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i)
                m = std::max(m, std::abs(values[i]) * weights_[i]);
            return m;
        }
        const double p = params_.p;
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double v = std::abs(values[i]);
            sum += weights_[i] * (p == 2.0 ? v * v : (p == 1.0 ? v : std::pow(v, p)));
        }
        return p == 2.0 ? std::sqrt(sum) : (p == 1.0 ? sum : std::pow(sum, 1.0 / p));
    }

    /// Norm together with a (sub)gradient with respect to the sampled values.
    double norm_with_gradient(std::span<const double> values, std::vector<double>& grad) const
    {
        check_size(values.size());
        grad.assign(values.size(), 0.0);
        const double value = norm(values);
        if (value == 0.0) return 0.0;
        if (params_.is_sup()) {
            std::size_t best = 0;
            double m = -1.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double s = std::abs(values[i]) * weights_[i];
                if (s > m) {
                    m = s;
                    best = i;
                }
            }
            grad[best] = (values[best] >= 0.0 ? 1.0 : -1.0) * weights_[best];
            return value;
        }
        const double p = params_.p;
        const double scale = std::pow(value, 1.0 - p);
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double v = values[i];
            const double s = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
            grad[i] = weights_[i] * s * std::pow(std::abs(v), p - 1.0) * scale;
        }
        return value;
    }

    template <class F>
    std::vector<double> sample(const F& f) const
    {
        std::vector<double> values(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            values[i] = f(nodes_[i]);
            if (!std::isfinite(values[i]))
                throw EvaluationError("weighted_norm: non-finite function value", nodes_[i]);
        }
        return values;
    }

private:
    void check_size(std::size_t n) const
    {
        if (n != nodes_.size()) throw std::invalid_argument("NormEvaluator: sample size mismatch");
    }

    SpaceParams params_;
    std::shared_ptr<const QuadratureRule> rule_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

inline constexpr int kDefaultNormNodes = 256;

template <class F>
double weighted_norm(const F& f, const SpaceParams& params, int n_nodes = kDefaultNormNodes)
{
    const NormEvaluator evaluator(params, n_nodes);
    const auto values = evaluator.sample(f);
    return evaluator.norm(values);
}

} // namespace smoothness
