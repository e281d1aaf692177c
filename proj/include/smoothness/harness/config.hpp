#pragma once

#include "smoothness/errors.hpp"
#include "smoothness/space.hpp"
#include "smoothness/translation.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smoothness::harness {

/// Malformed or inadmissible configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Config {
    SpaceParams space{2.0, 1.0};
    int quad_n = kDefaultTranslationNodes;
    int norm_nodes = kDefaultNormNodes;
    int t_points = 16;
    double spread = 100.0; ///< admissible U/L for ratio families
    std::uint64_t seed = 7;
    std::vector<double> deltas{0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 2.4};
    std::vector<int> degrees{2, 4, 8, 16, 32};
    int kdeg = 32;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "inf" || t == "infinity" || t == "Inf") return kInfinity;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("config: '" + key + "' expects a real number, got '" + text + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    Int v{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
    return v;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& text, Parse parse)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse(key, item));
    if (out.empty()) throw ConfigError("config: '" + key + "' expects a non-empty list");
    return out;
}

} // namespace detail

/// Apply one key=value setting. Keys accept '-' or '_' as separators.
inline void apply_setting(Config& cfg, std::string key, const std::string& value)
{
    for (char& ch : key)
        if (ch == '-') ch = '_';
    using namespace detail;
    if (key == "p")
        cfg.space.p = parse_real(key, value);
    else if (key == "alpha")
        cfg.space.alpha = parse_real(key, value);
    else if (key == "quad_nodes" || key == "quad_n")
        cfg.quad_n = parse_int<int>(key, value);
    else if (key == "norm_nodes")
        cfg.norm_nodes = parse_int<int>(key, value);
    else if (key == "t_points")
        cfg.t_points = parse_int<int>(key, value);
    else if (key == "tol")
        cfg.spread = parse_real(key, value);
    else if (key == "seed")
        cfg.seed = parse_int<std::uint64_t>(key, value);
    else if (key == "deltas")
        cfg.deltas = parse_list<double>(key, value, parse_real);
    else if (key == "degrees")
        cfg.degrees = parse_list<int>(key, value, parse_int<int>);
    else if (key == "kdeg")
        cfg.kdeg = parse_int<int>(key, value);
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

/// Read a plain-text file of key=value lines; '#' starts a comment.
inline void load_config_file(Config& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
        apply_setting(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

inline void validate(const Config& cfg)
{
    if (std::isnan(cfg.space.p) || cfg.space.p < 1.0) throw ConfigError("config: p must be >= 1");
    if (const auto verdict = validate_params(cfg.space); !verdict)
        throw ConfigError("config: inadmissible (p, alpha): " + verdict.reason);
    if (cfg.quad_n < kMinTranslationNodes || cfg.quad_n > 2048)
        throw ConfigError("config: quad-nodes must lie in [8, 2048]");
    if (cfg.norm_nodes < 2 || cfg.norm_nodes > 2048)
        throw ConfigError("config: norm-nodes must lie in [2, 2048]");
    if (cfg.t_points < 1) throw ConfigError("config: t-points must be positive");
    if (!(cfg.spread > 1.0)) throw ConfigError("config: tol must exceed 1");
    for (double d : cfg.deltas)
        if (!(d > 0.0) || !(d < 3.14159))
            throw ConfigError("config: deltas must lie in (0, pi)");
    for (int n : cfg.degrees)
        if (n < 1 || n > 32) throw ConfigError("config: degrees must lie in [1, 32]");
    if (cfg.kdeg < 1 || cfg.kdeg > 32)
        throw ConfigError("config: kdeg must lie in [1, 32] (the stability rerun uses kdeg + 16)");
}

} // namespace smoothness::harness
