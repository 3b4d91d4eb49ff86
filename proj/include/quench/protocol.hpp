#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quench/common.hpp"

namespace quench {

enum class SystemKind { Box, Sho };

inline const char* to_string(SystemKind s) { return s == SystemKind::Box ? "box" : "sho"; }

// One piece of a piecewise-constant motion law: from t_start until the next
// segment begins, the potential center moves with velocity v and acceleration
// a.  Units are internal throughout: hbar = m = 1, and L = 1 (box) or
// omega = 1 (oscillator).
struct QuenchSegment {
    double t_start = 0.0;
    double v = 0.0;
    double a = 0.0;

    friend bool operator==(const QuenchSegment&, const QuenchSegment&) = default;
};

// A quench schedule.  Segment 1 is the pre-history the initial state lives
// in; every later t_start is a sudden change of (v, a).  x1 is the potential
// center at the first segment's t_start.
struct QuenchProtocol {
    SystemKind system = SystemKind::Sho;
    double x1 = 0.0;
    std::vector<QuenchSegment> segments;

    friend bool operator==(const QuenchProtocol&, const QuenchProtocol&) = default;
};

// Throws ValidationError identifying the first violated invariant and the
// offending segment index (0-based; -1 for x1).
inline void validate(const QuenchProtocol& p) {
    if (p.segments.size() < 2)
        throw ValidationError(ValidationIssue::TooFewSegments, -1,
                              "a protocol needs at least 2 segments (one quench), got " +
                                  std::to_string(p.segments.size()));
    if (!std::isfinite(p.x1))
        throw ValidationError(ValidationIssue::NonFiniteField, -1, "x1 is not finite");
    for (std::size_t i = 0; i < p.segments.size(); ++i) {
        const QuenchSegment& s = p.segments[i];
        if (!std::isfinite(s.t_start) || !std::isfinite(s.v) || !std::isfinite(s.a))
            throw ValidationError(ValidationIssue::NonFiniteField, static_cast<int>(i),
                                  "segment " + std::to_string(i) + " has a non-finite field");
        if (i > 0 && !(s.t_start > p.segments[i - 1].t_start))
            throw ValidationError(ValidationIssue::NonMonotonicTimes, static_cast<int>(i),
                                  "t_start of segment " + std::to_string(i) +
                                      " does not increase past its predecessor");
    }
}

// Potential-center position at each segment's t_start.  Continuity across
// every quench fixes x_{k+1} = x_k + v_k dt + a_k dt^2 / 2.
inline std::vector<double> center_positions(const QuenchProtocol& p) {
    std::vector<double> x(p.segments.size());
    x[0] = p.x1;
    for (std::size_t i = 0; i + 1 < p.segments.size(); ++i) {
        const double dt = p.segments[i + 1].t_start - p.segments[i].t_start;
        x[i + 1] = x[i] + p.segments[i].v * dt + 0.5 * p.segments[i].a * dt * dt;
    }
    return x;
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline double require_number(const nlohmann::ordered_json& j, const std::string& key) {
    if (!j.contains(key)) throw SchemaError(key, "missing required key");
    const auto& v = j.at(key);
    if (!v.is_number()) throw SchemaError(key, "expected a number");
    return v.get<double>();
}

}  // namespace detail

// Protocol file format: a JSON document with exactly the top-level keys
//   system   : "box" | "sho"
//   x1       : number
//   segments : array of objects with exactly {t_start, v, a}, all numbers
// Unknown keys are rejected.  Parsing does not validate the physics; call
// validate() on the result.
inline QuenchProtocol parse_protocol(std::string_view text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw SyntaxError(line, col, e.what());
    }
    if (!doc.is_object()) throw SchemaError("<root>", "top level must be an object");

    static const char* allowed_top[] = {"system", "x1", "segments"};
    for (const auto& item : doc.items()) {
        bool known = false;
        for (const char* k : allowed_top) known = known || item.key() == k;
        if (!known) throw SchemaError(item.key(), "unknown key");
    }

    QuenchProtocol p;
    if (!doc.contains("system")) throw SchemaError("system", "missing required key");
    if (!doc.at("system").is_string()) throw SchemaError("system", "expected \"box\" or \"sho\"");
    const std::string sys = doc.at("system").get<std::string>();
    if (sys == "box")
        p.system = SystemKind::Box;
    else if (sys == "sho")
        p.system = SystemKind::Sho;
    else
        throw SchemaError("system", "expected \"box\" or \"sho\", got \"" + sys + "\"");

    p.x1 = detail::require_number(doc, "x1");

    if (!doc.contains("segments")) throw SchemaError("segments", "missing required key");
    if (!doc.at("segments").is_array()) throw SchemaError("segments", "expected an array");
    for (const auto& seg : doc.at("segments")) {
        if (!seg.is_object()) throw SchemaError("segments", "each segment must be an object");
        for (const auto& item : seg.items()) {
            if (item.key() != "t_start" && item.key() != "v" && item.key() != "a")
                throw SchemaError(item.key(), "unknown key");
        }
        QuenchSegment s;
        s.t_start = detail::require_number(seg, "t_start");
        s.v = detail::require_number(seg, "v");
        s.a = detail::require_number(seg, "a");
        p.segments.push_back(s);
    }
    return p;
}

// Inverse of parse_protocol; parse(serialize(p)) == p field for field (the
// JSON layer prints shortest round-trip decimals).
inline std::string serialize_protocol(const QuenchProtocol& p) {
    nlohmann::ordered_json doc;
    doc["system"] = to_string(p.system);
    doc["x1"] = p.x1;
    doc["segments"] = nlohmann::ordered_json::array();
    for (const QuenchSegment& s : p.segments) {
        nlohmann::ordered_json seg;
        seg["t_start"] = s.t_start;
        seg["v"] = s.v;
        seg["a"] = s.a;
        doc["segments"].push_back(seg);
    }
    return doc.dump(2) + "\n";
}

}  // namespace quench
