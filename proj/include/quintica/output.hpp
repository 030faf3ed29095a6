#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "quintica/core.hpp"

namespace quintica {

// ---------------------------------------------------------------------------
// Canonical JSON: alphabetically ordered keys (nlohmann's default object map
// already sorts), compact separators, doubles at 17 significant digits so the
// printed text identifies the double exactly.  Parsing a document produced
// here and re-serializing it reproduces the bytes, which is what the golden
// files in the test suite rely on.

namespace detail {

inline std::string fmt_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in output record");
    if (v == 0.0) return "0";  // avoid the sign-flipping "-0" spelling
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void json_escape(const std::string& s, std::string& out) {
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
}

}  // namespace detail

inline void canonical_json_dump(const nlohmann::json& j, std::string& out) {
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += '"';
                detail::json_escape(it.key(), out);
                out += "\":";
                canonical_json_dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case nlohmann::json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                canonical_json_dump(v, out);
            }
            out += ']';
            break;
        }
        case nlohmann::json::value_t::string:
            out += '"';
            detail::json_escape(j.get<std::string>(), out);
            out += '"';
            break;
        case nlohmann::json::value_t::number_float:
            out += detail::fmt_double(j.get<double>());
            break;
        case nlohmann::json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case nlohmann::json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case nlohmann::json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case nlohmann::json::value_t::null:
            out += "null";
            break;
        default:
            throw std::invalid_argument("unsupported JSON value type in output record");
    }
}

inline std::string canonical_json_dump(const nlohmann::json& j) {
    std::string out;
    canonical_json_dump(j, out);
    return out;
}

// Complex values always serialize as [re, im] pairs, real or not.
inline nlohmann::json complex_to_json(const Complex& z) {
    if (!is_finite(z)) throw std::invalid_argument("non-finite complex value in output record");
    return nlohmann::json::array({z.real(), z.imag()});
}

// ---------------------------------------------------------------------------
// CSV: shortest round-trip float formatting.

inline std::string csv_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in CSV output");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Flatten a JSON tree into deterministic key,value rows (dotted object paths,
// bracketed array indices), for the CSV rendering of single-result commands.
inline void flatten_to_csv_rows(const nlohmann::json& j, const std::string& prefix,
                                std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten_to_csv_rows(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                                rows);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) flatten_to_csv_rows(v, prefix + "[" + std::to_string(i++) + "]", rows);
    } else if (j.is_number_float()) {
        rows.emplace_back(prefix, csv_double(j.get<double>()));
    } else if (j.is_number_integer()) {
        rows.emplace_back(prefix, std::to_string(j.get<std::int64_t>()));
    } else if (j.is_number_unsigned()) {
        rows.emplace_back(prefix, std::to_string(j.get<std::uint64_t>()));
    } else if (j.is_boolean()) {
        rows.emplace_back(prefix, j.get<bool>() ? "true" : "false");
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, "");
    }
}

inline std::string record_to_csv(const nlohmann::json& record) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten_to_csv_rows(record, "", rows);
    std::string out = "key,value\n";
    for (const auto& [k, v] : rows) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    }
    return out;
}

}  // namespace quintica
