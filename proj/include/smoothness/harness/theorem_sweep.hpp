#pragma once

#include "smoothness/approx.hpp"
#include "smoothness/harness/checks.hpp"
#include "smoothness/harness/config.hpp"
#include "smoothness/harness/corpus.hpp"
#include "smoothness/harness/report.hpp"
#include "smoothness/translation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace smoothness::harness {

inline constexpr double kRatioFloor = 1e-13;
inline constexpr double kStabilityTolerance = 0.15;

struct SweepResolution {
    int quad_n;
    int norm_nodes;
    int t_points;
    int kdeg;
};

struct SweepTable {
    std::vector<std::vector<double>> modulus; ///< [entry][delta]
    std::vector<std::vector<double>> k;
};

inline SweepTable sweep_table(const std::vector<CorpusEntry>& corpus, const Config& cfg,
                              const SweepResolution& res)
{
    SweepTable t;
    const ModulusOptions mopt{res.t_points, res.quad_n, res.norm_nodes};
    for (const auto& e : corpus) {
        std::vector<double> w, k;
        for (double d : cfg.deltas) {
            w.push_back(modulus(e.f, d, cfg.space, mopt));
            k.push_back(k_functional(e.f, d, cfg.space, {res.kdeg, res.norm_nodes}).value);
        }
        t.modulus.push_back(std::move(w));
        t.k.push_back(std::move(k));
    }
    return t;
}

namespace detail {

inline double cos4_half(double d)
{
    const double c = std::cos(0.5 * d);
    return c * c * c * c;
}

// Fills a family with omega * scale(delta) / K over corpus x delta; returns {L, U}.
template <class Scale>
std::pair<double, double> equivalence_family(const std::vector<CorpusEntry>& corpus,
                                             const Config& cfg, const SweepTable& t, Scale scale,
                                             RatioFamily* fam)
{
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (std::size_t j = 0; j < cfg.deltas.size(); ++j) {
            const std::string name = corpus[i].label + " delta=" + format_double(cfg.deltas[j]);
            if (t.k[i][j] < kRatioFloor) {
                if (fam) fam->skip(name, "K below 1e-13, ratio undefined");
                continue;
            }
            const double r = t.modulus[i][j] * scale(cfg.deltas[j]) / t.k[i][j];
            if (fam) fam->add(name, r);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    return {lo, hi};
}

} // namespace detail

/// Modulus / K-functional equivalence: two ratio families over corpus x delta, each
/// required to be stable when quadrature, norm nodes, t-grid and K degree are raised.
inline std::vector<VerificationReport> check_equivalence(const std::vector<CorpusEntry>& corpus,
                                                         const Config& cfg)
{
    const std::string id1 = "sweep.modulus_over_k", id2 = "sweep.modulus_cos4_over_k";
    std::vector<VerificationReport> out;
    try {
        const SweepTable base = sweep_table(corpus, cfg, {cfg.quad_n, cfg.norm_nodes, cfg.t_points, cfg.kdeg});
        const SweepTable fine = sweep_table(
            corpus, cfg, {2 * cfg.quad_n, 2 * cfg.norm_nodes, 2 * cfg.t_points, std::min(cfg.kdeg + 16, kMaxKDegree)});
        const auto one = [](double) { return 1.0; };
        const auto cos4 = [](double d) { return detail::cos4_half(d); };

        auto family = [&](const std::string& id, auto scale, const char* what) {
            RatioFamily fam(id, cfg.spread);
            detail::equivalence_family(corpus, cfg, base, scale, &fam);
            const auto [lo, hi] = detail::equivalence_family(corpus, cfg, fine, scale, nullptr);
            fam.require("stability of L", relative_change(fam.lower(), lo), kStabilityTolerance,
                        format_double(fam.lower()) + " vs " + format_double(lo));
            fam.require("stability of U", relative_change(fam.upper(), hi), kStabilityTolerance,
                        format_double(fam.upper()) + " vs " + format_double(hi));
            fam.note(what);
            return fam.finish(true);
        };
        out.push_back(family(id1, one, "omega(f,delta) / K(f,delta)"));
        out.push_back(family(id2, cos4, "omega(f,delta) cos^4(delta/2) / K(f,delta)"));
    } catch (const std::exception&) {
        for (const auto& id : {id1, id2})
            out.push_back(guarded(id, CheckKind::ratio, [&]() -> VerificationReport { throw; }));
    }
    return out;
}

/// Direct and inverse best-approximation estimates at delta = 1/n, plus decay of E_n(|x|).
inline std::vector<VerificationReport> check_approximation_theorem(const std::vector<CorpusEntry>& corpus,
                                                                   const Config& cfg)
{
    const std::string id3 = "sweep.best_approx_over_modulus", id4 = "sweep.modulus_over_inverse_sum",
                      id5 = "sweep.abs_decay";
    std::vector<VerificationReport> out;
    try {
        const ModulusOptions mopt{cfg.t_points, cfg.quad_n, cfg.norm_nodes};
        const int nmax = *std::max_element(cfg.degrees.begin(), cfg.degrees.end());
        RatioFamily direct(id3, cfg.spread), inverse(id4, cfg.spread);
        for (const auto& e : corpus) {
            std::vector<double> en(nmax + 1, 0.0);
            for (int nu = 1; nu <= nmax; ++nu) en[nu] = best_approx(e.f, nu, cfg.space, cfg.norm_nodes).value;
            for (int n : cfg.degrees) {
                const std::string name = e.label + " n=" + std::to_string(n);
                const double w = modulus(e.f, 1.0 / n, cfg.space, mopt);
                double weighted = 0.0;
                for (int nu = 1; nu <= n; ++nu) weighted += nu * en[nu];
                if (w < kRatioFloor)
                    direct.skip(name, "modulus below 1e-13, ratio undefined");
                else
                    direct.add(name, en[n] / w);
                if (weighted < kRatioFloor)
                    inverse.skip(name, "sum of nu E_nu below 1e-13, ratio undefined");
                else
                    inverse.add(name, w * n * n / weighted);
            }
        }
        direct.note("E_n(f) / omega(f, 1/n); U is the recorded constant");
        inverse.note("omega(f, 1/n) n^2 / sum_{nu<=n} nu E_nu(f); U is the recorded constant");
        out.push_back(direct.finish(false));
        out.push_back(inverse.finish(false));

        IdentityCheck decay(id5, 0.25);
        const auto abs_f = make_function("|x|", [](double x) { return std::abs(x); });
        const double e4 = best_approx(abs_f, 4, cfg.space, cfg.norm_nodes).value;
        const double e32 = best_approx(abs_f, 32, cfg.space, cfg.norm_nodes).value;
        decay.add("|x| E_32/E_4", e32 / e4, "E_4=" + format_double(e4) + " E_32=" + format_double(e32));
        out.push_back(decay.finish());
    } catch (const std::exception&) {
        for (const auto& id : {id3, id4, id5})
            out.push_back(guarded(id, CheckKind::ratio, [&]() -> VerificationReport { throw; }));
    }
    return out;
}

/// Ratio sweeps for the modulus / K-functional equivalence and the best-approximation
/// estimates over the corpus, the delta grid and the degree grid.
inline std::vector<VerificationReport> run_theorem_sweep(const Config& cfg)
{
    validate(cfg);
    const auto entries = corpus(cfg.seed);
    auto out = check_equivalence(entries, cfg);
    for (auto& r : check_approximation_theorem(entries, cfg)) out.push_back(std::move(r));
    return out;
}

} // namespace smoothness::harness
