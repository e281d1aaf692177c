#pragma once

#include "smoothness/errors.hpp"
#include "smoothness/jacobi.hpp"
#include "smoothness/quadrature.hpp"
#include "smoothness/space.hpp"
#include "smoothness/translation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smoothness {

enum class ApproxMethod { l2_projection, remez_grid, irls_grid };

inline const char* to_string(ApproxMethod m)
{
    switch (m) {
    case ApproxMethod::l2_projection: return "l2-projection";
    case ApproxMethod::remez_grid: return "remez-grid";
    case ApproxMethod::irls_grid: return "irls-grid";
    }
    return "unknown";
}

struct BestApproxResult {
    double value = 0.0;      ///< E_n(f)_{p,alpha}
    JacobiSeries argmin;     ///< degree <= n-1
    ApproxMethod method = ApproxMethod::l2_projection;
    int iterations = 0;
    double discrete_error = 0.0; ///< objective on the solver's own grid
};

inline constexpr int kMaxApproxDegree = 64;
inline constexpr int kIrlsMaxIterations = 500;
inline constexpr double kIrlsWeightFloor = 1e-12;
inline constexpr int kMaxExchanges = 100;

namespace detail {

// Rows: sample points; columns: normalized Jacobi basis functions 0..cols-1.
inline Eigen::MatrixXd basis_matrix(const std::vector<double>& xs, int cols, double a, double b)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(xs.size()), cols);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto p = jacobi_values(cols - 1, a, b, xs[i]);
        for (int k = 0; k < cols; ++k) v(static_cast<Eigen::Index>(i), k) = p[k];
    }
    return v;
}

inline Eigen::VectorXd weighted_least_squares(const Eigen::MatrixXd& v, const Eigen::VectorXd& f,
                                              const Eigen::VectorXd& w)
{
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd a = sw.asDiagonal() * v;
    const Eigen::VectorXd rhs = sw.cwiseProduct(f);
    return a.colPivHouseholderQr().solve(rhs);
}

inline std::vector<double> to_std(const Eigen::VectorXd& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

inline BestApproxResult best_approx_l2(const std::vector<double>& fx, int n,
                                       const SpaceParams& params, const NormEvaluator& norm)
{
    // Orthogonal projection under (1-x^2)^{2 alpha} in the matching Jacobi basis.
    const double e = 2.0 * params.alpha;
    const Eigen::MatrixXd v = basis_matrix(norm.nodes(), n, e, e);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(norm.weights().data(),
                                                                static_cast<Eigen::Index>(norm.size()));
    const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(fx.data(), static_cast<Eigen::Index>(fx.size()));
    const Eigen::MatrixXd gram = v.transpose() * w.asDiagonal() * v;
    const Eigen::VectorXd rhs = v.transpose() * w.cwiseProduct(f);
    const Eigen::VectorXd c = gram.ldlt().solve(rhs);

    BestApproxResult out;
    out.method = ApproxMethod::l2_projection;
    out.argmin = JacobiSeries(e, e, to_std(c));
    return out;
}

/// Step length along `step` by halving until the objective falls, then doubling while it
/// keeps falling. Returns 0 when no tried length improves on `cur`; updates `cur` otherwise.
template <class Objective>
double line_search(const Objective& objective, const Eigen::VectorXd& c, const Eigen::VectorXd& step,
                   double& cur)
{
    double t = 1.0;
    double trial = objective(c + step);
    for (int j = 0; j < 40 && !(trial < cur); ++j) {
        t *= 0.5;
        trial = objective(c + t * step);
    }
    if (!(trial < cur)) return 0.0;
    cur = trial;
    for (int j = 0; j < 30; ++j) {
        trial = objective(c + (2.0 * t) * step);
        if (!(trial < cur)) break;
        cur = trial;
        t *= 2.0;
    }
    return t;
}

inline BestApproxResult best_approx_irls(const std::vector<double>& fx, int n,
                                         const SpaceParams& params, const NormEvaluator& norm)
{
    const double p = params.p;
    const Eigen::MatrixXd v = basis_matrix(norm.nodes(), n, -0.5, -0.5);
    const auto m = static_cast<Eigen::Index>(norm.size());
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(norm.weights().data(), m);
    const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(fx.data(), m);

    Eigen::VectorXd c = weighted_least_squares(v, f, w);
    auto objective = [&](const Eigen::VectorXd& coeffs) {
        const Eigen::VectorXd r = f - v * coeffs;
        double s = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) s += w[i] * std::pow(std::abs(r[i]), p);
        return s;
    };

    // Each reweighted solve gives a descent direction. For p > 2 the full step overshoots
    // and 1/(p-1) of it is the Newton step; near interpolating optima with p < 2 it crawls.
    const double newton_scale = p > 2.0 ? 1.0 / (p - 1.0) : 1.0;
    std::vector<double> trace{objective(c)};
    BestApproxResult out;
    out.method = ApproxMethod::irls_grid;
    for (int it = 1; it <= kIrlsMaxIterations; ++it) {
        const Eigen::VectorXd r = f - v * c;
        Eigen::VectorXd omega(m);
        for (Eigen::Index i = 0; i < m; ++i)
            omega[i] = w[i] * std::pow(std::max(std::abs(r[i]), kIrlsWeightFloor), p - 2.0);
        const Eigen::VectorXd step = newton_scale * (weighted_least_squares(v, f, omega) - c);
        const double prev = trace.back();
        double cur = prev;
        const double t = line_search(objective, c, step, cur);
        c += t * step;
        trace.push_back(cur);
        out.iterations = it;
        if (t == 0.0 || prev - cur <= 1e-13 * prev) {
            out.argmin = JacobiSeries(-0.5, -0.5, to_std(c));
            return out;
        }
    }
    throw ConvergenceError("best_approx: IRLS did not converge in 500 iterations", trace);
}

// Discrete weighted minimax by single-point exchange on a Chebyshev grid of
// max(8n, grid_n) points, so that every n <= grid_n / 8 shares one grid.
inline BestApproxResult best_approx_minimax(const FunctionHandle& f, int n,
                                            const SpaceParams& params, int grid_n)
{
    std::vector<double> grid = make_grid(std::max({8 * n, grid_n, 2}));
    std::sort(grid.begin(), grid.end());
    const auto m = static_cast<int>(grid.size());
    std::vector<double> fx(m), wx(m);
    for (int i = 0; i < m; ++i) {
        fx[i] = f(grid[i]);
        if (!std::isfinite(fx[i])) throw EvaluationError("best_approx: non-finite value", grid[i]);
        wx[i] = std::pow(1.0 - grid[i] * grid[i], params.alpha);
    }
    const Eigen::MatrixXd v = basis_matrix(grid, n, -0.5, -0.5);

    std::vector<int> ref(n + 1);
    for (int k = 0; k <= n; ++k)
        ref[k] = static_cast<int>(std::lround(static_cast<double>(k) * (m - 1) / n));

    BestApproxResult out;
    out.method = ApproxMethod::remez_grid;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    std::vector<double> trace;
    for (int exchange = 0; exchange <= kMaxExchanges; ++exchange) {
        // sum_j c_j phi_j(x_r) + (-1)^r h / w_r = f_r
        Eigen::MatrixXd sys(n + 1, n + 1);
        Eigen::VectorXd rhs(n + 1);
        for (int r = 0; r <= n; ++r) {
            sys.row(r).head(n) = v.row(ref[r]);
            sys(r, n) = (r % 2 == 0 ? 1.0 : -1.0) / wx[ref[r]];
            rhs[r] = fx[ref[r]];
        }
        const Eigen::VectorXd sol = sys.fullPivLu().solve(rhs);
        c = sol.head(n);
        const double level = std::abs(sol[n]);

        Eigen::VectorXd e(m);
        int worst = 0;
        for (int i = 0; i < m; ++i) {
            e[i] = wx[i] * (fx[i] - v.row(i).dot(c));
            if (std::abs(e[i]) > std::abs(e[worst])) worst = i;
        }
        trace.push_back(std::abs(e[worst]));
        out.iterations = exchange;
        out.discrete_error = std::abs(e[worst]);
        if (std::abs(e[worst]) <= level * (1.0 + 1e-12) + 1e-300) break;

        const auto sign = [](double s) { return s >= 0.0 ? 1 : -1; };
        const int s_new = sign(e[worst]);
        auto pos = std::lower_bound(ref.begin(), ref.end(), worst);
        const auto idx = static_cast<int>(pos - ref.begin());
        if (idx == 0) {
            if (sign(e[ref[0]]) == s_new) {
                ref[0] = worst;
            } else {
                ref.pop_back();
                ref.insert(ref.begin(), worst);
            }
        } else if (idx == n + 1) {
            if (sign(e[ref[n]]) == s_new) {
                ref[n] = worst;
            } else {
                ref.erase(ref.begin());
                ref.push_back(worst);
            }
        } else if (sign(e[ref[idx - 1]]) == s_new) {
            ref[idx - 1] = worst;
        } else {
            ref[idx] = worst;
        }
        if (exchange == kMaxExchanges) break;
    }
    out.argmin = JacobiSeries(-0.5, -0.5, to_std(c));
    return out;
}

} // namespace detail

/// E_n(f)_{p,alpha}: best approximation by polynomials of degree <= n-1.
///
/// p = 2 solves the weighted normal equations exactly, p = inf runs a discrete
/// exchange on a Chebyshev grid of max(8n, grid_n) points, other p use IRLS on Gauss-Jacobi nodes.
/// The reported value is always weighted_norm(f - argmin) with `grid_n` nodes.
inline BestApproxResult best_approx(const FunctionHandle& f, int n, const SpaceParams& params,
                                    int grid_n = kDefaultNormNodes)
{
    if (n < 1 || n > kMaxApproxDegree)
        throw std::invalid_argument("best_approx: n must lie in [1, 64]");
    if (std::isnan(params.p) || params.p < 1.0)
        throw std::invalid_argument("best_approx: p must be >= 1");

    const NormEvaluator norm(params, grid_n);
    BestApproxResult out;
    if (params.is_sup()) {
        out = detail::best_approx_minimax(f, n, params, grid_n);
    } else {
        const auto fx = norm.sample(f);
        if (params.p == 2.0) {
            if (!(2.0 * params.alpha > -1.0))
                throw std::invalid_argument("best_approx: 2 alpha must exceed -1");
            out = detail::best_approx_l2(fx, n, params, norm);
        } else {
            out = detail::best_approx_irls(fx, n, params, norm);
        }
    }
    const auto fx = norm.sample(f);
    std::vector<double> residual(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i) residual[i] = fx[i] - out.argmin(norm.nodes()[i]);
    out.value = norm.norm(residual);
    return out;
}

// ---------------------------------------------------------------------------
// Jackson-type smoothing

struct JacksonParams {
    int q = 3;
    int m = 1;
    int t_nodes = 128;
};

inline void validate(const JacksonParams& params)
{
    if (params.q <= 2) throw std::invalid_argument("jackson: q must exceed 2");
    if (params.m < 1) throw std::invalid_argument("jackson: m must be positive");
    if (params.t_nodes < 1) throw std::invalid_argument("jackson: t_nodes must be positive");
}

/// (q + 2)(m - 1)
inline int jackson_degree_bound(const JacksonParams& params)
{
    return (params.q + 2) * (params.m - 1);
}

/// (sin(m t / 2) / sin(t / 2))^{2q}, equal to m^{2q} at t = 0.
inline double jackson_kernel(double t, const JacksonParams& params)
{
    const double half = 0.5 * t;
    const double s = std::sin(half);
    double ratio = 0.0;
    if (std::abs(s) < 1e-12)
        ratio = static_cast<double>(params.m);
    else
        ratio = std::sin(params.m * half) / s;
    return std::pow(ratio, 2 * params.q);
}

namespace detail {

template <class Fn>
double integrate_zero_pi(const Fn& fn, int t_nodes)
{
    const auto gl = shared_rule(RuleKind::legendre, t_nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < gl->size(); ++i) {
        const double t = 0.5 * std::numbers::pi * (gl->nodes[i] + 1.0);
        sum += 0.5 * std::numbers::pi * gl->weights[i] * fn(t);
    }
    return sum;
}

inline double sin5(double t)
{
    const double s = std::sin(t);
    return s * s * s * s * s;
}

} // namespace detail

/// gamma_m = int_0^pi K(t) sin^5 t dt
inline double gamma_norm(const JacksonParams& params)
{
    validate(params);
    return detail::integrate_zero_pi(
        [&](double t) { return jackson_kernel(t, params) * detail::sin5(t); }, params.t_nodes);
}

/// Q(x) = (1/gamma_m) int_0^pi S_{cos t}(f, x) K(t) sin^5 t dt with S the symmetric translation.
template <class F>
double jackson_eval(const F& f, double x, const JacksonParams& params,
                    int quad_n = kDefaultTranslationNodes)
{
    validate(params);
    const double gamma = gamma_norm(params);
    const double integral = detail::integrate_zero_pi(
        [&](double t) {
            return sym_translate(f, std::cos(t), x, quad_n) * jackson_kernel(t, params) *
                   detail::sin5(t);
        },
        params.t_nodes);
    return integral / gamma;
}

inline constexpr int kMaxJacksonDegree = 48;

/// Q as an explicit polynomial of degree (q+2)(m-1): least-squares fit in the (2,2)
/// basis on a Chebyshev grid of 2 (q+2)(m-1) + 8 points, checked on a disjoint grid.
template <class F>
JacobiSeries jackson_operator(const F& f, const JacksonParams& params,
                              int quad_n = kDefaultTranslationNodes)
{
    validate(params);
    const int degree = jackson_degree_bound(params);
    if (degree > kMaxJacksonDegree)
        throw std::invalid_argument("jackson_operator: (q+2)(m-1) must not exceed 48");

    const std::vector<double> fit_grid = make_grid(2 * degree + 8);
    std::vector<double> samples(fit_grid.size());
    for (std::size_t i = 0; i < fit_grid.size(); ++i)
        samples[i] = jackson_eval(f, fit_grid[i], params, quad_n);

    const Eigen::MatrixXd v = detail::basis_matrix(fit_grid, degree + 1, 2.0, 2.0);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(samples.data(),
                                                                static_cast<Eigen::Index>(samples.size()));
    const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
    JacobiSeries q(2.0, 2.0, detail::to_std(c));

    double scale = 1.0;
    for (double s : samples) scale = std::max(scale, std::abs(s));
    double worst = 0.0;
    for (double x : make_grid(2 * degree + 9))
        worst = std::max(worst, std::abs(q(x) - jackson_eval(f, x, params, quad_n)) / scale);
    if (worst > 1e-6)
        throw DegreeViolationError("jackson_operator: fitted polynomial misses held-out samples",
                                   worst);
    return q;
}

// ---------------------------------------------------------------------------
// K-functional

struct KFunctionalResult {
    double value = 0.0;
    JacobiSeries witness;        ///< g, (2,2) basis
    JacobiSeries witness_d;      ///< D_{x,2,2} g, same basis
    int degree_cap = 0;
    std::vector<double> trace;   ///< objective after warm start and each descent step
};

inline constexpr int kMaxKDegree = 48;

struct KFunctionalOptions {
    int max_deg = 32;
    int norm_nodes = kDefaultNormNodes;
    int max_iterations = 500;
};

namespace detail {

/// Golden-section search for a minimum of a unimodal `fn` on [a, b]; returns the final
/// interior pair.
template <class Fn>
std::pair<double, double> golden_section(const Fn& fn, double a, double b, int iterations)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - inv_phi * (b - a), c2 = a + inv_phi * (b - a);
    double f1 = fn(c1), f2 = fn(c2);
    for (int it = 0; it < iterations; ++it) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - inv_phi * (b - a);
            f1 = fn(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + inv_phi * (b - a);
            f2 = fn(c2);
        }
    }
    return {c1, c2};
}

/// Discretized K objective ||f - V c|| + d2 ||DV c|| on the norm nodes.
struct KProblem {
    const Eigen::VectorXd& fx;
    const Eigen::MatrixXd& v;
    const Eigen::MatrixXd& dv;
    const NormEvaluator& norm;
    double d2;
    double fnorm; ///< objective at c = 0, used for absolute stopping floors

    double operator()(const Eigen::VectorXd& c) const
    {
        const Eigen::VectorXd r = fx - v * c;
        const Eigen::VectorXd s = dv * c;
        return norm.norm(std::span<const double>(r.data(), r.size())) +
               d2 * norm.norm(std::span<const double>(s.data(), s.size()));
    }

    bool settled(double prev, double cur) const
    {
        return prev - cur <= 1e-12 * prev || cur <= 1e-15 * fnorm;
    }
};

inline Eigen::VectorXd solve_spd(const Eigen::MatrixXd& h, const Eigen::VectorXd& rhs)
{
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() == Eigen::Success) {
        Eigen::VectorXd x = ldlt.solve(rhs);
        if (x.allFinite()) return x;
    }
    return h.completeOrthogonalDecomposition().solve(rhs);
}

/// Finite p: reweighted normal equations for ||r||_p + d2 ||s||_p give a direction
/// (a majorization step for p <= 2); the step length comes from a search on the true
/// objective, doubling while it keeps falling.
inline Eigen::VectorXd k_irls(const KProblem& k, Eigen::VectorXd c, std::vector<double>& trace,
                              int max_iterations)
{
    const double p = k.norm.params().p;
    const auto m = k.fx.size();
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(k.norm.weights().data(), m);
    const double fscale = std::max(k.fx.cwiseAbs().maxCoeff(), 1e-300);
    const double newton_scale = p > 2.0 ? 1.0 / (p - 1.0) : 1.0;
    double cur = k(c);
    for (int it = 1; it <= max_iterations; ++it) {
        const Eigen::VectorXd r = k.fx - k.v * c;
        const Eigen::VectorXd s = k.dv * c;
        const double nr = std::max(k.norm.norm(std::span<const double>(r.data(), m)), 1e-12 * k.fnorm);
        const double ns = std::max(k.norm.norm(std::span<const double>(s.data(), m)), 1e-12 * k.fnorm);
        const double floor_r = 1e-12 * std::max(r.cwiseAbs().maxCoeff(), fscale);
        const double floor_s = 1e-12 * std::max(s.cwiseAbs().maxCoeff(), fscale);
        Eigen::VectorXd a(m), b(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            a[i] = w[i] * std::pow(std::max(std::abs(r[i]), floor_r), p - 2.0) / std::pow(nr, p - 1.0);
            b[i] = k.d2 * w[i] * std::pow(std::max(std::abs(s[i]), floor_s), p - 2.0) / std::pow(ns, p - 1.0);
        }
        const Eigen::MatrixXd h = k.v.transpose() * a.asDiagonal() * k.v + k.dv.transpose() * b.asDiagonal() * k.dv;
        const Eigen::VectorXd step = newton_scale * (solve_spd(h, k.v.transpose() * a.cwiseProduct(k.fx)) - c);

        const double prev = cur;
        const double best_t = line_search(k, c, step, cur);
        c += best_t * step;
        trace.push_back(cur);
        if (best_t == 0.0 || k.settled(prev, cur)) return c;
    }
    throw ConvergenceError("k_functional: IRLS did not settle within the iteration cap", trace);
}

/// p = inf: the restricted problem is the linear program
///   min t1 + d2 t2  s.t.  |w_i (f - V c)_i| <= t1,  |w_i (DV c)_i| <= t2,
/// solved by a primal-dual interior-point method (Mehrotra predictor-corrector).
inline Eigen::VectorXd k_minimax_lp(const KProblem& k, const Eigen::VectorXd& c0,
                                    std::vector<double>& trace, int max_iterations)
{
    const auto m = k.fx.size();
    const auto cols = k.v.cols();
    const auto n = cols + 2;
    const auto rows = 4 * m;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double w = k.norm.weights()[i];
        a.block(4 * i, 0, 1, cols) = -w * k.v.row(i);
        a(4 * i, cols) = -1.0;
        b[4 * i] = -w * k.fx[i];
        a.block(4 * i + 1, 0, 1, cols) = w * k.v.row(i);
        a(4 * i + 1, cols) = -1.0;
        b[4 * i + 1] = w * k.fx[i];
        a.block(4 * i + 2, 0, 1, cols) = w * k.dv.row(i);
        a(4 * i + 2, cols + 1) = -1.0;
        a.block(4 * i + 3, 0, 1, cols) = -w * k.dv.row(i);
        a(4 * i + 3, cols + 1) = -1.0;
    }
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    g[cols] = 1.0;
    g[cols + 1] = k.d2;

    // Strictly feasible start from the warm start: lift t1, t2 above the current maxima.
    Eigen::VectorXd x(n);
    x.head(cols) = c0;
    x[cols] = x[cols + 1] = 0.0;
    Eigen::VectorXd slack = b - a * x;
    double need_r = 0.0, need_s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        need_r = std::max({need_r, -slack[4 * i], -slack[4 * i + 1]});
        need_s = std::max({need_s, -slack[4 * i + 2], -slack[4 * i + 3]});
    }
    const double lift = 1e-3 * std::max(k.fnorm, 1e-300);
    x[cols] = 1.01 * need_r + lift;
    x[cols + 1] = 1.01 * need_s + lift;
    slack = b - a * x;
    Eigen::VectorXd lambda = Eigen::VectorXd::Constant(rows, 1.0 / static_cast<double>(2 * m));

    auto max_step = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
        double alpha = 1.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
        return alpha;
    };

    Eigen::VectorXd best = c0;
    double best_value = k(c0);
    for (int it = 1; it <= max_iterations; ++it) {
        const Eigen::VectorXd rd = g + a.transpose() * lambda;
        const Eigen::VectorXd rp = a * x + slack - b;
        const double gap = slack.dot(lambda);
        const double mu = gap / static_cast<double>(rows);
        const double primal = g.dot(x);
        // Dual residual relative to the size of the terms that cancel in it.
        const double rd_scale = 1.0 + (a.cwiseAbs().transpose() * lambda.cwiseAbs()).maxCoeff();
        const double rel_gap = gap / (1.0 + std::abs(primal));
        if ((rd.lpNorm<Eigen::Infinity>() <= 1e-10 * rd_scale && rel_gap <= 1e-12) || rel_gap <= 1e-15)
            return best;
        // With ill-conditioned normal equations the gap can floor near 1e-9 while the
        // objective has stopped moving; accept once it is flat over a long window.
        constexpr int kStallWindow = 50;
        if (it > kStallWindow && rel_gap <= 1e-8 &&
            trace[trace.size() - kStallWindow] - best_value <= 1e-12 * best_value)
            return best;

        const Eigen::VectorXd d = lambda.cwiseQuotient(slack);
        const Eigen::MatrixXd h = a.transpose() * d.asDiagonal() * a;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
        auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& dl,
                             Eigen::VectorXd& ds) {
            const Eigen::VectorXd rhs = -rd - a.transpose() * (d.cwiseProduct(rp) + rc.cwiseQuotient(slack));
            dx = ldlt.solve(rhs);
            dl = d.cwiseProduct(a * dx + rp) + rc.cwiseQuotient(slack);
            ds = (rc - slack.cwiseProduct(dl)).cwiseQuotient(lambda);
        };

        Eigen::VectorXd dx, dl, ds;
        direction(-lambda.cwiseProduct(slack), dx, dl, ds);
        const double ap_aff = max_step(slack, ds), ad_aff = max_step(lambda, dl);
        const double mu_aff = (slack + ap_aff * ds).dot(lambda + ad_aff * dl) / static_cast<double>(rows);
        const double sigma = std::pow(mu_aff / mu, 3);
        const Eigen::VectorXd rc =
            (-lambda.cwiseProduct(slack)).array() + sigma * mu - ds.cwiseProduct(dl).array();
        direction(rc, dx, dl, ds);
        if (!dx.allFinite() || !dl.allFinite()) break;
        const double ap = std::min(1.0, 0.99 * max_step(slack, ds));
        const double ad = std::min(1.0, 0.99 * max_step(lambda, dl));
        x += ap * dx;
        slack += ap * ds;
        lambda += ad * dl;

        const Eigen::VectorXd c = x.head(cols);
        const double value = k(c);
        if (value < best_value) {
            best = c;
            best_value = value;
        }
        trace.push_back(best_value);
    }
    throw ConvergenceError("k_functional: interior-point iteration did not settle", trace);
}

} // namespace detail

/// Restricted Peetre K-functional
///
///   inf over polynomials g of degree <= max_deg of ||f - g||_{p,alpha} + delta^2 ||D g||_{p,alpha}.
///
/// g is parameterized in the orthonormal (2,2) basis so D acts diagonally. The search starts
/// from the best point on the weighted Tikhonov path (which contains the exact minimizer for
/// p = 2), then refines it: reweighted least squares for finite p, an interior-point linear
/// program for p = inf.
inline KFunctionalResult k_functional(const FunctionHandle& f, double delta,
                                      const SpaceParams& params,
                                      const KFunctionalOptions& options = {})
{
    if (const auto verdict = validate_params(params); !verdict)
        throw std::invalid_argument("k_functional: inadmissible space parameters: " +
                                    verdict.reason);
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("k_functional: delta must be a nonnegative number");
    if (options.max_deg < 0 || options.max_deg > kMaxKDegree)
        throw std::invalid_argument("k_functional: max_deg must lie in [0, 48]");

    const int cols = options.max_deg + 1;
    const NormEvaluator norm(params, options.norm_nodes);
    const auto fx_std = norm.sample(f);
    const auto m = static_cast<Eigen::Index>(norm.size());
    const Eigen::VectorXd fx = Eigen::Map<const Eigen::VectorXd>(fx_std.data(), m);

    Eigen::VectorXd scale(cols), lambda(cols);
    for (int k = 0; k < cols; ++k) {
        scale[k] = 1.0 / std::sqrt(jacobi_norm_sq(k));
        lambda[k] = d_eigenvalue(k);
    }
    const Eigen::MatrixXd v = detail::basis_matrix(norm.nodes(), cols, 2.0, 2.0) * scale.asDiagonal();
    const Eigen::MatrixXd dv = v * lambda.asDiagonal();
    const double d2 = delta * delta;

    auto objective = [&](const Eigen::VectorXd& c) {
        const Eigen::VectorXd r = fx - v * c;
        const Eigen::VectorXd dg = dv * c;
        return norm.norm(std::span<const double>(r.data(), r.size())) +
               d2 * norm.norm(std::span<const double>(dg.data(), dg.size()));
    };
    auto finish = [&](const Eigen::VectorXd& c, double value, std::vector<double> trace) {
        KFunctionalResult out;
        out.value = value;
        out.degree_cap = options.max_deg;
        std::vector<double> gc(cols), dc(cols);
        for (int k = 0; k < cols; ++k) {
            gc[k] = c[k] * scale[k];
            dc[k] = gc[k] * lambda[k];
        }
        out.witness = JacobiSeries(2.0, 2.0, std::move(gc));
        out.witness_d = JacobiSeries(2.0, 2.0, std::move(dc));
        out.trace = std::move(trace);
        return out;
    };

    if (fx.cwiseAbs().maxCoeff() == 0.0) return finish(Eigen::VectorXd::Zero(cols), 0.0, {0.0});

    // Warm start: best of g = 0 and the Tikhonov path through the L2 projection.
    Eigen::VectorXd lsw(m);
    for (Eigen::Index i = 0; i < m; ++i)
        lsw[i] = params.is_sup() ? norm.weights()[i] * norm.weights()[i] : norm.weights()[i];
    const Eigen::MatrixXd gram = v.transpose() * lsw.asDiagonal() * v;
    const Eigen::MatrixXd dgram = dv.transpose() * lsw.asDiagonal() * dv;
    const Eigen::VectorXd rhs = v.transpose() * lsw.cwiseProduct(fx);
    auto path_point = [&](double s) -> Eigen::VectorXd {
        return (gram + s * dgram).ldlt().solve(rhs);
    };

    Eigen::VectorXd best = Eigen::VectorXd::Zero(cols);
    double best_value = objective(best);
    {
        const Eigen::VectorXd proj = path_point(0.0);
        const double val = objective(proj);
        if (val < best_value) {
            best = proj;
            best_value = val;
        }
    }
    if (d2 > 0.0) {
        constexpr int kPathPoints = 61;
        const double lo = -12.0, hi = 4.0;
        double best_log = lo;
        double path_best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < kPathPoints; ++k) {
            const double ls = lo + (hi - lo) * k / (kPathPoints - 1);
            const double val = objective(path_point(std::pow(10.0, ls)));
            if (val < path_best) {
                path_best = val;
                best_log = ls;
            }
        }
        // Golden-section refinement in log10(s) around the best scan point.
        const double step = (hi - lo) / (kPathPoints - 1);
        const auto [c1, c2] = detail::golden_section(
            [&](double ls) { return objective(path_point(std::pow(10.0, ls))); }, best_log - step,
            best_log + step, 60);
        for (double ls : {best_log, c1, c2}) {
            const Eigen::VectorXd c = path_point(std::pow(10.0, ls));
            const double val = objective(c);
            if (val < best_value) {
                best = c;
                best_value = val;
            }
        }
    }

    // g constant (the kernel of D): the minimizer sits on the kink ||D g|| = 0, where
    // reweighting crawls, so it is located directly.
    {
        const double v0 = v(0, 0);
        const auto [c1, c2] = detail::golden_section(
            [&](double c) {
                Eigen::VectorXd g = Eigen::VectorXd::Zero(cols);
                g[0] = c;
                return objective(g);
            },
            fx.minCoeff() / v0, fx.maxCoeff() / v0, 100);
        for (double c : {c1, c2}) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(cols);
            g[0] = c;
            const double val = objective(g);
            if (val < best_value) {
                best = g;
                best_value = val;
            }
        }
    }

    std::vector<double> trace{best_value};
    if (best_value == 0.0) return finish(best, best_value, std::move(trace));

    const double fnorm = objective(Eigen::VectorXd::Zero(cols));
    const detail::KProblem problem{fx, v, dv, norm, d2, fnorm};
    const Eigen::VectorXd refined = params.is_sup()
                                        ? detail::k_minimax_lp(problem, best, trace, options.max_iterations)
                                        : detail::k_irls(problem, best, trace, options.max_iterations);
    const double refined_value = objective(refined);
    if (refined_value < best_value) {
        best = refined;
        best_value = refined_value;
    }
    return finish(best, best_value, std::move(trace));
}

/// Evaluate ||f - g|| + delta^2 ||D g|| for a given witness (used to audit results).
inline double k_objective(const FunctionHandle& f, double delta, const SpaceParams& params,
                          const JacobiSeries& g, const JacobiSeries& dg,
                          int norm_nodes = kDefaultNormNodes)
{
    const double a = weighted_norm([&](double x) { return f(x) - g(x); }, params, norm_nodes);
    const double b = weighted_norm(dg, params, norm_nodes);
    return a + delta * delta * b;
}

// ---------------------------------------------------------------------------
// Bernstein-Markov ratios

struct BernsteinMarkovRatios {
    double derivative_ratio = 0.0; ///< ||P'||_{p,alpha+1/2} / (n ||P||_{p,alpha})
    double weight_ratio = 0.0;     ///< ||P||_{p,alpha} / (n^{2 rho} ||P||_{p,alpha+rho})
};

/// Ratios whose boundedness in n expresses the Bernstein and Nikolskii-type inequalities,
/// with n = degree + 1.
inline BernsteinMarkovRatios bernstein_markov_ratios(const Polynomial& poly,
                                                     const SpaceParams& params, double rho,
                                                     int n_nodes = kDefaultNormNodes)
{
    if (poly.is_zero()) throw std::invalid_argument("bernstein_markov_ratios: zero polynomial");
    if (!(rho >= 0.0)) throw std::invalid_argument("bernstein_markov_ratios: rho must be >= 0");
    const double n = poly.degree() + 1.0;
    const Polynomial deriv = poly.derivative();
    const double base = weighted_norm(poly, params, n_nodes);
    const double d = weighted_norm(deriv, SpaceParams{params.p, params.alpha + 0.5}, n_nodes);
    const double shifted = weighted_norm(poly, SpaceParams{params.p, params.alpha + rho}, n_nodes);
    return {d / (n * base), base / (std::pow(n, 2.0 * rho) * shifted)};
}

} // namespace smoothness
