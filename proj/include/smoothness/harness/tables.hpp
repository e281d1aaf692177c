#pragma once

#include "smoothness/approx.hpp"
#include "smoothness/harness/config.hpp"
#include "smoothness/harness/corpus.hpp"
#include "smoothness/harness/report.hpp"
#include "smoothness/translation.hpp"

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace smoothness::harness {

enum class TableOp { psi, modulus, bestapprox };

inline TableOp parse_table_op(const std::string& s)
{
    if (s == "psi") return TableOp::psi;
    if (s == "modulus") return TableOp::modulus;
    if (s == "bestapprox") return TableOp::bestapprox;
    throw ConfigError("table: --op must be psi, modulus or bestapprox, got '" + s + "'");
}

inline const char* to_string(TableOp op)
{
    switch (op) {
    case TableOp::psi: return "psi";
    case TableOp::modulus: return "modulus";
    case TableOp::bestapprox: return "bestapprox";
    }
    return "unknown";
}

/// Raw values for plotting: one keyed row per abscissa or corpus entry.
struct ValueTable {
    TableOp op = TableOp::psi;
    std::string key_column;
    std::vector<std::string> columns;
    std::vector<std::string> keys;
    std::vector<std::vector<double>> rows;
};

/// psi_n(y) for n = 0..max(degrees) at y = -0.9, -0.8, ..., 1.
inline ValueTable psi_table(const Config& cfg)
{
    ValueTable t{TableOp::psi, "y", {}, {}, {}};
    const int max_n = *std::max_element(cfg.degrees.begin(), cfg.degrees.end());
    std::vector<double> ys;
    for (int j = -9; j <= 10; ++j) ys.push_back(j / 10.0);
    const auto table = build_multiplier_table(max_n, ys, cfg.quad_n);
    for (int n = 0; n <= max_n; ++n) t.columns.push_back("psi_" + std::to_string(n));
    for (std::size_t j = 0; j < ys.size(); ++j) {
        t.keys.push_back(format_double(ys[j]));
        std::vector<double> row;
        for (int n = 0; n <= max_n; ++n) row.push_back(table.values[n][j]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline ValueTable modulus_table(const Config& cfg)
{
    ValueTable t{TableOp::modulus, "function", {}, {}, {}};
    for (double d : cfg.deltas) t.columns.push_back("delta=" + format_double(d));
    const ModulusOptions opt{cfg.t_points, cfg.quad_n, cfg.norm_nodes};
    for (const auto& e : corpus(cfg.seed)) {
        t.keys.push_back(e.label);
        std::vector<double> row;
        for (double d : cfg.deltas) row.push_back(modulus(e.f, d, cfg.space, opt));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline ValueTable bestapprox_table(const Config& cfg)
{
    ValueTable t{TableOp::bestapprox, "function", {}, {}, {}};
    for (int n : cfg.degrees) t.columns.push_back("E_" + std::to_string(n));
    for (const auto& e : corpus(cfg.seed)) {
        t.keys.push_back(e.label);
        std::vector<double> row;
        for (int n : cfg.degrees) row.push_back(best_approx(e.f, n, cfg.space, cfg.norm_nodes).value);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline ValueTable build_table(TableOp op, const Config& cfg)
{
    validate(cfg);
    switch (op) {
    case TableOp::psi: return psi_table(cfg);
    case TableOp::modulus: return modulus_table(cfg);
    case TableOp::bestapprox: return bestapprox_table(cfg);
    }
    return {};
}

inline std::string table_to_csv(const ValueTable& t)
{
    std::string out = detail::csv_field(t.key_column);
    for (const auto& c : t.columns) out += ',' + detail::csv_field(c);
    out += '\n';
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        out += detail::csv_field(t.keys[i]);
        for (double v : t.rows[i]) out += ',' + format_double(v);
        out += '\n';
    }
    return out;
}

inline std::string table_to_json(const ValueTable& t, const Config& cfg)
{
    using nlohmann::ordered_json;
    ordered_json root;
    root["schema_version"] = kSchemaVersion;
    root["config"] = config_json(cfg);
    root["op"] = to_string(t.op);
    root["key"] = t.key_column;
    root["columns"] = t.columns;
    root["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        ordered_json r;
        r["key"] = t.keys[i];
        r["values"] = ordered_json::array();
        for (double v : t.rows[i]) r["values"].push_back(detail::number_or_null(v));
        root["rows"].push_back(std::move(r));
    }
    return root.dump(2) + "\n";
}

inline std::string render_table(const ValueTable& t, const Config& cfg, ReportFormat format)
{
    return format == ReportFormat::json ? table_to_json(t, cfg) : table_to_csv(t);
}

} // namespace smoothness::harness
