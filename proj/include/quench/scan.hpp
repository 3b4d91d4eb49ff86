#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quench/common.hpp"
#include "quench/version.hpp"

namespace quench {

// Tabular result of one scan command.  Column order is the emission order;
// complex series emit as a (re, im) column pair.  Metadata is an ordered
// key/value list so output is byte-reproducible; no timestamps.
struct ScanResult {
    struct Column {
        std::string name;
        bool is_complex = false;
        std::vector<double> re;
        std::vector<double> im;  // empty unless is_complex
    };

    std::string command;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Column> columns;

    void add_meta(std::string key, std::string value) {
        metadata.emplace_back(std::move(key), std::move(value));
    }
    void add_real(std::string name, std::vector<double> values) {
        columns.push_back({std::move(name), false, std::move(values), {}});
    }
    void add_complex(std::string name, const std::vector<complexd>& values) {
        Column col{std::move(name), true, {}, {}};
        col.re.reserve(values.size());
        col.im.reserve(values.size());
        for (const complexd& v : values) {
            col.re.push_back(v.real());
            col.im.push_back(v.imag());
        }
        columns.push_back(std::move(col));
    }

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().re.size(); }
};

namespace detail {

// Shortest decimal that round-trips a double ("%.17g" is exact but noisy;
// try ascending precision first).
inline std::string format_double(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

}  // namespace detail

enum class EmitFormat { Csv, Json };

// CSV layout: '#'-prefixed metadata lines, one header row, then data rows;
// complex columns split into <name>_re, <name>_im; LF endings; decimals at
// full round-trip precision.
inline void emit_csv(const ScanResult& r, std::ostream& os) {
    os << "# command: " << r.command << "\n";
    os << "# version: " << version << "\n";
    for (const auto& [k, v] : r.metadata) os << "# " << k << ": " << v << "\n";
    bool first = true;
    for (const auto& col : r.columns) {
        if (col.is_complex) {
            os << (first ? "" : ",") << col.name << "_re," << col.name << "_im";
        } else {
            os << (first ? "" : ",") << col.name;
        }
        first = false;
    }
    os << "\n";
    const std::size_t n = r.rows();
    for (std::size_t i = 0; i < n; ++i) {
        first = true;
        for (const auto& col : r.columns) {
            os << (first ? "" : ",") << detail::format_double(col.re[i]);
            if (col.is_complex) os << "," << detail::format_double(col.im[i]);
            first = false;
        }
        os << "\n";
    }
}

inline void emit_json(const ScanResult& r, std::ostream& os) {
    nlohmann::ordered_json doc;
    doc["command"] = r.command;
    doc["metadata"] = nlohmann::ordered_json::object();
    doc["metadata"]["version"] = version;
    for (const auto& [k, v] : r.metadata) doc["metadata"][k] = v;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& col : r.columns) {
        nlohmann::ordered_json c;
        c["name"] = col.name;
        if (col.is_complex) {
            c["re"] = col.re;
            c["im"] = col.im;
        } else {
            c["values"] = col.re;
        }
        doc["columns"].push_back(std::move(c));
    }
    os << doc.dump(2) << "\n";
}

inline void emit(const ScanResult& r, EmitFormat format, std::ostream& os) {
    if (format == EmitFormat::Csv)
        emit_csv(r, os);
    else
        emit_json(r, os);
}

// destination "-" writes to stdout.
inline void emit_to_path(const ScanResult& r, EmitFormat format, const std::string& destination) {
    if (destination == "-") {
        emit(r, format, std::cout);
        if (!std::cout) throw IoError("<stdout>", "write failed");
        return;
    }
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw IoError(destination, "cannot open for writing");
    emit(r, format, out);
    out.flush();
    if (!out) throw IoError(destination, "write failed");
}

}  // namespace quench
