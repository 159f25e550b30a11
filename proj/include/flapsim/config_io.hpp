#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "flapsim/vec.hpp"

namespace flapsim {

// Config text format: one `section.key = value` assignment per line, `#`
// starts a comment, vectors are comma-separated triples. Keys must be dotted
// (at least one '.') so every setting names its section.

// Shortest representation that parses back to the identical double. Keeps
// serialized output byte-deterministic regardless of locale or printf quirks.
inline std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

inline std::string format_vec3(const Vec3& v) {
    return format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z);
}

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
    ConfigError(std::size_t line, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line) + ": " + what) {}
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what) {}
};

namespace detail {
inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline double parse_double(const std::string& key, std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError(key, "expected a real number, got '" + std::string(text) + "'");
    return value;
}
}  // namespace detail

// Ordered flat key-value store. Parsing and serialization round-trip exactly:
// parse(serialize(m)) == m.
class ConfigMap {
  public:
    static ConfigMap parse(std::istream& is) {
        ConfigMap m;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(is, line)) {
            ++line_no;
            std::string_view sv = line;
            if (const auto hash = sv.find('#'); hash != std::string_view::npos)
                sv = sv.substr(0, hash);
            sv = detail::trim(sv);
            if (sv.empty()) continue;
            const auto eq = sv.find('=');
            if (eq == std::string_view::npos)
                throw ConfigError(line_no, "expected 'section.key = value'");
            const std::string key{detail::trim(sv.substr(0, eq))};
            const std::string value{detail::trim(sv.substr(eq + 1))};
            if (key.empty()) throw ConfigError(line_no, "empty key");
            if (key.find('.') == std::string::npos)
                throw ConfigError(line_no, "key '" + key + "' must be section-qualified");
            if (key.find(' ') != std::string::npos || key.find('\t') != std::string::npos)
                throw ConfigError(line_no, "key '" + key + "' contains whitespace");
            if (value.empty()) throw ConfigError(line_no, "key '" + key + "' has no value");
            if (m.values_.count(key))
                throw ConfigError(line_no, "duplicate key '" + key + "'");
            m.values_[key] = value;
        }
        return m;
    }

    static ConfigMap parse_string(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

    static ConfigMap parse_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file: " + path);
        return parse(f);
    }

    // CLI override "section.key=value"; same validation as a config line.
    void apply_override(const std::string& assignment) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + assignment + "' must look like key=value");
        const std::string key{detail::trim(std::string_view(assignment).substr(0, eq))};
        const std::string value{detail::trim(std::string_view(assignment).substr(eq + 1))};
        if (key.empty() || key.find('.') == std::string::npos)
            throw ConfigError("override key '" + key + "' must be section-qualified");
        if (value.empty()) throw ConfigError("override '" + key + "' has no value");
        values_[key] = value;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return get(key).value_or(fallback);
    }

    double get_double(const std::string& key, double fallback) const {
        const auto v = get(key);
        if (!v) return fallback;
        return detail::parse_double(key, *v);
    }

    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
        const auto v = get(key);
        if (!v) return fallback;
        std::uint64_t value = 0;
        const char* first = v->data();
        const char* last = v->data() + v->size();
        const auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc{} || res.ptr != last)
            throw ConfigError(key, "expected a nonnegative integer, got '" + *v + "'");
        return value;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const auto v = get(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        throw ConfigError(key, "expected true/false, got '" + *v + "'");
    }

    Vec3 get_vec3(const std::string& key, const Vec3& fallback) const {
        const auto v = get(key);
        if (!v) return fallback;
        std::string_view sv = *v;
        double parts[3];
        for (int i = 0; i < 3; ++i) {
            const auto comma = sv.find(',');
            if ((i < 2) != (comma != std::string_view::npos))
                throw ConfigError(key, "expected a comma-separated triple, got '" + *v + "'");
            const std::string_view field = detail::trim(sv.substr(0, comma));
            parts[i] = detail::parse_double(key + " [component " + std::to_string(i + 1) + "]",
                                            field);
            if (comma != std::string_view::npos) sv.remove_prefix(comma + 1);
        }
        return {parts[0], parts[1], parts[2]};
    }

    const std::map<std::string, std::string>& values() const { return values_; }

    // Keys grouped by section (text before the first dot), alphabetical.
    std::string serialize() const {
        std::string out;
        std::string current_section;
        for (const auto& [key, value] : values_) {
            const std::string section = key.substr(0, key.find('.'));
            if (section != current_section) {
                if (!out.empty()) out += '\n';
                current_section = section;
            }
            out += key + " = " + value + "\n";
        }
        return out;
    }

    bool operator==(const ConfigMap&) const = default;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace flapsim
