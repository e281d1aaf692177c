#pragma once

#include "smoothness/errors.hpp"
#include "smoothness/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <utility>

namespace smoothness::harness {

/// Accumulates cases for an identity check: each case passes when observed <= tolerance.
class IdentityCheck {
public:
    IdentityCheck(std::string id, double tolerance, CheckKind kind = CheckKind::identity)
    {
        report_.id = std::move(id);
        report_.kind = kind;
        report_.tolerance = tolerance;
    }

    void add(std::string name, double observed, std::string note = {})
    {
        add(std::move(name), observed, report_.tolerance, std::move(note));
    }

    void add(std::string name, double observed, double tolerance, std::string note)
    {
        CaseRecord c{std::move(name), observed, tolerance,
                     observed <= tolerance ? Status::pass : Status::fail, std::move(note)};
        report_.cases.push_back(std::move(c));
    }

    void skip(std::string name, std::string note,
              double observed = std::numeric_limits<double>::quiet_NaN())
    {
        report_.cases.push_back({std::move(name), observed, report_.tolerance, Status::skipped,
                                 std::move(note)});
    }

    void note(std::string text) { report_.note = std::move(text); }

    VerificationReport finish()
    {
        double worst = 0.0;
        bool any_fail = false, any_checked = false;
        for (const auto& c : report_.cases) {
            if (c.status == Status::skipped) continue;
            any_checked = true;
            if (c.status == Status::fail) any_fail = true;
            if (std::isnan(c.observed) || c.observed > worst) worst = c.observed;
        }
        report_.observed = worst;
        report_.status = any_fail ? Status::fail : (any_checked ? Status::pass : Status::skipped);
        return std::move(report_);
    }

private:
    VerificationReport report_;
};

/// A family of ratios that must lie in a positive interval [L, U] with U / L <= spread.
class RatioFamily {
public:
    RatioFamily(std::string id, double spread)
    {
        report_.id = std::move(id);
        report_.kind = CheckKind::ratio;
        report_.tolerance = spread;
    }

    void add(std::string name, double ratio, std::string note = {})
    {
        report_.cases.push_back({std::move(name), ratio, std::numeric_limits<double>::quiet_NaN(),
                                 Status::pass, std::move(note)});
        lower_ = std::min(lower_, ratio);
        upper_ = std::max(upper_, ratio);
        if (!std::isfinite(ratio)) finite_ = false;
        ++count_;
    }

    void skip(std::string name, std::string note)
    {
        report_.cases.push_back({std::move(name), std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::quiet_NaN(), Status::skipped,
                                 std::move(note)});
    }

    /// Extra pass/fail case that also gates the family (e.g. resolution stability).
    void require(std::string name, double observed, double tolerance, std::string note = {})
    {
        const bool ok = observed <= tolerance;
        report_.cases.push_back({std::move(name), observed, tolerance,
                                 ok ? Status::pass : Status::fail, std::move(note)});
        if (!ok) requirements_met_ = false;
    }

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    int count() const { return count_; }

    void note(std::string text) { report_.note = std::move(text); }

    /// two_sided: pass needs L > 0 and U / L <= spread; otherwise only a finite U.
    VerificationReport finish(bool two_sided = true)
    {
        report_.lower = count_ ? lower_ : std::numeric_limits<double>::quiet_NaN();
        report_.upper = count_ ? upper_ : std::numeric_limits<double>::quiet_NaN();
        if (count_ == 0) {
            report_.status = Status::fail;
            report_.observed = std::numeric_limits<double>::quiet_NaN();
            if (report_.note.empty()) report_.note = "no admissible cases";
            return std::move(report_);
        }
        bool ok = finite_ && requirements_met_;
        if (two_sided) {
            report_.observed = lower_ > 0.0 ? upper_ / lower_ : std::numeric_limits<double>::infinity();
            ok = ok && lower_ > 0.0 && report_.observed <= report_.tolerance;
        } else {
            report_.observed = upper_;
            report_.tolerance = std::numeric_limits<double>::infinity();
        }
        report_.status = ok ? Status::pass : Status::fail;
        return std::move(report_);
    }

private:
    VerificationReport report_;
    double lower_ = std::numeric_limits<double>::infinity();
    double upper_ = -std::numeric_limits<double>::infinity();
    bool finite_ = true;
    bool requirements_met_ = true;
    int count_ = 0;
};

/// Runs a check body; any exception becomes a failed report carrying the message.
template <class Body>
VerificationReport guarded(const std::string& id, CheckKind kind, Body&& body)
{
    try {
        return body();
    } catch (const ConvergenceError& e) {
        VerificationReport r;
        r.id = id;
        r.kind = kind;
        r.status = Status::fail;
        r.observed = std::numeric_limits<double>::quiet_NaN();
        r.note = std::string(e.what()) + " after " + std::to_string(e.trace().size()) + " steps";
        return r;
    } catch (const std::exception& e) {
        VerificationReport r;
        r.id = id;
        r.kind = kind;
        r.status = Status::fail;
        r.observed = std::numeric_limits<double>::quiet_NaN();
        r.note = e.what();
        return r;
    }
}

inline double relative_change(double a, double b)
{
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace smoothness::harness
