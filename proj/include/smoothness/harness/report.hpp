#pragma once

#include "smoothness/errors.hpp"
#include "smoothness/harness/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace smoothness::harness {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    }
    return "unknown";
}

struct CaseRecord {
    std::string name;
    double observed = 0.0;
    double tolerance = 0.0;
    Status status = Status::pass;
    std::string note;
};

enum class CheckKind { identity, ratio, gate };

inline const char* to_string(CheckKind k)
{
    switch (k) {
    case CheckKind::identity: return "identity";
    case CheckKind::ratio: return "ratio";
    case CheckKind::gate: return "gate";
    }
    return "unknown";
}

struct VerificationReport {
    std::string id;
    CheckKind kind = CheckKind::identity;
    Status status = Status::pass;
    double observed = 0.0;  ///< max error, or U/L for ratio families
    double tolerance = 0.0;
    double lower = std::numeric_limits<double>::quiet_NaN(); ///< ratio families only
    double upper = std::numeric_limits<double>::quiet_NaN();
    std::string note;
    std::vector<CaseRecord> cases;

    bool passed() const { return status != Status::fail; }
};

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; identical input gives identical text.
inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline nlohmann::ordered_json number_or_null(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline nlohmann::ordered_json config_json(const Config& cfg)
{
    nlohmann::ordered_json j;
    j["p"] = cfg.space.is_sup() ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(cfg.space.p);
    j["alpha"] = cfg.space.alpha;
    j["quad_nodes"] = cfg.quad_n;
    j["norm_nodes"] = cfg.norm_nodes;
    j["t_points"] = cfg.t_points;
    j["tol"] = cfg.spread;
    j["seed"] = cfg.seed;
    j["deltas"] = cfg.deltas;
    j["degrees"] = cfg.degrees;
    j["kdeg"] = cfg.kdeg;
    return j;
}

inline std::string to_json(const std::vector<VerificationReport>& reports, const Config& cfg)
{
    using nlohmann::ordered_json;
    ordered_json root;
    root["schema_version"] = kSchemaVersion;
    root["config"] = config_json(cfg);
    root["checks"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json c;
        c["id"] = r.id;
        c["kind"] = to_string(r.kind);
        c["status"] = to_string(r.status);
        c["observed"] = detail::number_or_null(r.observed);
        c["tolerance"] = detail::number_or_null(r.tolerance);
        if (r.kind == CheckKind::ratio) {
            c["lower"] = detail::number_or_null(r.lower);
            c["upper"] = detail::number_or_null(r.upper);
        }
        if (!r.note.empty()) c["note"] = r.note;
        c["cases"] = ordered_json::array();
        for (const auto& k : r.cases) {
            ordered_json e;
            e["case"] = k.name;
            e["observed"] = detail::number_or_null(k.observed);
            e["tolerance"] = detail::number_or_null(k.tolerance);
            e["status"] = to_string(k.status);
            if (!k.note.empty()) e["note"] = k.note;
            c["cases"].push_back(std::move(e));
        }
        root["checks"].push_back(std::move(c));
    }
    return root.dump(2) + "\n";
}

/// One row per (check, case); a check without cases gets a single summary row.
inline std::string to_csv(const std::vector<VerificationReport>& reports)
{
    std::string out = "check_id,case,observed,tolerance,status\n";
    auto row = [&](const std::string& id, const std::string& name, double obs, double tol,
                   Status st) {
        out += detail::csv_field(id) + ',' + detail::csv_field(name) + ',' + format_double(obs) +
               ',' + format_double(tol) + ',' + to_string(st) + '\n';
    };
    for (const auto& r : reports) {
        if (r.cases.empty())
            row(r.id, "-", r.observed, r.tolerance, r.status);
        else
            for (const auto& k : r.cases) row(r.id, k.name, k.observed, k.tolerance, k.status);
    }
    return out;
}

enum class ReportFormat { json, csv };

inline std::string render(const std::vector<VerificationReport>& reports, const Config& cfg,
                          ReportFormat format)
{
    return format == ReportFormat::json ? to_json(reports, cfg) : to_csv(reports);
}

inline void emit_report(const std::vector<VerificationReport>& reports, const Config& cfg,
                        ReportFormat format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("emit_report: cannot open '" + path + "' for writing");
    out << render(reports, cfg, format);
    out.flush();
    if (!out) throw IoError("emit_report: write to '" + path + "' failed");
}

inline bool all_passed(const std::vector<VerificationReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(),
                       [](const VerificationReport& r) { return r.passed(); });
}

} // namespace smoothness::harness
