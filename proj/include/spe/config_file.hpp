#pragma once

#include <spe/error.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace spe {

// A small TOML subset: `key = value` lines, `#` comments, values that are
// numbers, "quoted strings", or flat [arrays] of numbers. Tables and nested
// arrays are not supported.
struct ConfigValue
{
    std::vector<std::string> items;  // scalar values hold exactly one item
    bool is_array = false;
    bool is_string = false;
};

using ConfigMap = std::map<std::string, ConfigValue, std::less<>>;

namespace detail {

inline std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::string_view strip_comment(std::string_view s) noexcept
{
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

} // namespace detail

inline ConfigMap parse_config(std::string_view text)
{
    ConfigMap out;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = detail::trim(detail::strip_comment(text.substr(pos, nl - pos)));
        pos = nl + 1;
        ++lineno;
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(ErrorKind::usage, fmt::format("config line {}: expected key = value", lineno));
        const std::string key(detail::trim(line.substr(0, eq)));
        auto raw = detail::trim(line.substr(eq + 1));
        if (key.empty() || raw.empty()) fail(ErrorKind::usage, fmt::format("config line {}: expected key = value", lineno));

        ConfigValue v;
        if (raw.front() == '[') {
            if (raw.back() != ']') fail(ErrorKind::usage, fmt::format("config line {}: unterminated array", lineno));
            v.is_array = true;
            auto body = raw.substr(1, raw.size() - 2);
            std::size_t s = 0;
            while (s <= body.size()) {
                auto c = body.find(',', s);
                if (c == std::string_view::npos) c = body.size();
                const auto item = detail::trim(body.substr(s, c - s));
                if (!item.empty()) v.items.emplace_back(item);
                s = c + 1;
            }
        } else if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"') fail(ErrorKind::usage, fmt::format("config line {}: unterminated string", lineno));
            v.is_string = true;
            v.items.emplace_back(raw.substr(1, raw.size() - 2));
        } else {
            v.items.emplace_back(raw);
        }
        out[key] = std::move(v);
    }
    return out;
}

inline ConfigMap load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::not_found, fmt::format("file not found: {}", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace detail {

inline double to_real(const std::string& key, const std::string& s)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) fail(ErrorKind::usage, fmt::format("config key '{}': '{}' is not a number", key, s));
    return v;
}

inline long long to_integer(const std::string& key, const std::string& s)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) fail(ErrorKind::usage, fmt::format("config key '{}': '{}' is not an integer", key, s));
    return v;
}

} // namespace detail

inline std::optional<std::vector<double>> config_reals(const ConfigMap& m, std::string_view key)
{
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    std::vector<double> out;
    for (const auto& s : it->second.items) out.push_back(detail::to_real(it->first, s));
    return out;
}

inline std::optional<std::vector<int>> config_ints(const ConfigMap& m, std::string_view key)
{
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    std::vector<int> out;
    for (const auto& s : it->second.items) out.push_back(static_cast<int>(detail::to_integer(it->first, s)));
    return out;
}

inline std::optional<double> config_real(const ConfigMap& m, std::string_view key)
{
    auto v = config_reals(m, key);
    if (!v) return std::nullopt;
    if (v->size() != 1) fail(ErrorKind::usage, fmt::format("config key '{}' expects a single value", key));
    return v->front();
}

inline std::optional<long long> config_integer(const ConfigMap& m, std::string_view key)
{
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    if (it->second.items.size() != 1) fail(ErrorKind::usage, fmt::format("config key '{}' expects a single value", key));
    return detail::to_integer(it->first, it->second.items.front());
}

inline std::optional<std::string> config_string(const ConfigMap& m, std::string_view key)
{
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    if (it->second.items.size() != 1) fail(ErrorKind::usage, fmt::format("config key '{}' expects a single value", key));
    return it->second.items.front();
}

} // namespace spe
