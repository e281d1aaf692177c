#include "smoothness/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace smoothness::harness;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flags {
    std::optional<std::string> config_path;
    std::string out;
    std::string format = "json";
    std::list<std::pair<std::string, std::optional<std::string>>> settings; // stable references

    std::optional<std::string>& slot(const std::string& key)
    {
        settings.emplace_back(key, std::nullopt);
        return settings.back().second;
    }
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--p", f.slot("p"), "Lebesgue exponent (real >= 1 or 'inf')");
    cmd->add_option("--alpha", f.slot("alpha"), "weight exponent");
    cmd->add_option("--quad-nodes", f.slot("quad_nodes"), "translation quadrature nodes");
    cmd->add_option("--norm-nodes", f.slot("norm_nodes"), "norm quadrature nodes");
    cmd->add_option("--t-points", f.slot("t_points"), "t-grid points for the modulus");
    cmd->add_option("--tol", f.slot("tol"), "admissible U/L spread for ratio families");
    cmd->add_option("--seed", f.slot("seed"), "corpus seed");
    cmd->add_option("--config", f.config_path, "key=value file applied before flags");
    cmd->add_option("--out", f.out, "output path (default: stdout)");
    cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_sweep_flags(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--deltas", f.slot("deltas"), "comma-separated delta grid");
    cmd->add_option("--degrees", f.slot("degrees"), "comma-separated degree grid");
    cmd->add_option("--kdeg", f.slot("kdeg"), "K-functional witness degree");
}

Config resolve(const Flags& f)
{
    Config cfg;
    if (f.config_path) load_config_file(cfg, *f.config_path);
    for (const auto& [key, value] : f.settings)
        if (value) apply_setting(cfg, key, *value);
    validate(cfg);
    return cfg;
}

ReportFormat format_of(const Flags& f)
{
    return f.format == "csv" ? ReportFormat::csv : ReportFormat::json;
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw smoothness::IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw smoothness::IoError("write to '" + path + "' failed");
}

void summarize(const std::vector<VerificationReport>& reports)
{
    for (const auto& r : reports)
        std::cerr << to_string(r.status) << "  " << r.id << "  observed=" << format_double(r.observed)
                  << " tolerance=" << format_double(r.tolerance) << '\n';
}

int run_checks(const std::vector<VerificationReport>& reports, const Config& cfg, const Flags& f)
{
    write_output(render(reports, cfg, format_of(f)), f.out);
    summarize(reports);
    return all_passed(reports) ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generalized-translation smoothness laboratory"};
    app.require_subcommand(1);

    Flags verify_flags, sweep_flags, table_flags;
    std::string op;

    auto* verify = app.add_subcommand("verify", "run the operator and approximation property suite");
    add_common(verify, verify_flags);

    auto* sweep = app.add_subcommand("sweep", "run the modulus / K-functional / best-approximation ratio sweeps");
    add_common(sweep, sweep_flags);
    add_sweep_flags(sweep, sweep_flags);

    auto* table = app.add_subcommand("table", "emit raw value tables for plotting");
    add_common(table, table_flags);
    add_sweep_flags(table, table_flags);
    table->add_option("--op", op, "psi, modulus or bestapprox")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) {
            const Config cfg = resolve(verify_flags);
            return run_checks(run_lemma_suite(cfg), cfg, verify_flags);
        }
        if (*sweep) {
            const Config cfg = resolve(sweep_flags);
            return run_checks(run_theorem_sweep(cfg), cfg, sweep_flags);
        }
        const TableOp table_op = parse_table_op(op);
        const Config cfg = resolve(table_flags);
        write_output(render_table(build_table(table_op, cfg), cfg, format_of(table_flags)), table_flags.out);
        return kExitPass;
    } catch (const ConfigError& e) {
        std::cerr << "smoothness-lab: " << e.what() << '\n';
        return kExitUsage;
    } catch (const smoothness::IoError& e) {
        std::cerr << "smoothness-lab: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "smoothness-lab: " << e.what() << '\n';
        return kExitFail;
    }
}
