#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moduli_lab/family.hpp"
#include "moduli_lab/mat2.hpp"
#include "moduli_lab/torus.hpp"

namespace moduli_lab::report {

using json = nlohmann::ordered_json;

enum class Format { structured, table };

/// Outcome of one run: the document plus the overall verdict.
struct ExperimentReport {
    json document;
    bool pass = false;
};

/// One named assertion of an experiment.
struct Check {
    std::string name;
    bool pass = false;
    json value;
    json threshold;
};

inline json to_json(const Check& c) {
    json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    if (!c.value.is_null()) j["value"] = c.value;
    if (!c.threshold.is_null()) j["threshold"] = c.threshold;
    return j;
}

inline json to_json(complex z) { return json::array({z.real(), z.imag()}); }

/// Row-major [[a11, a12], [a21, a22]] with entries as [re, im].
inline json to_json(const Mat2& m) {
    return json::array({json::array({to_json(m[0]), to_json(m[1])}), json::array({to_json(m[2]), to_json(m[3])})});
}

inline json to_json(const torus::IntMat4& g) {
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
        json row = json::array();
        for (int c = 0; c < 4; ++c) row.push_back(g(r, c));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const family::WitnessSample& s) {
    json j;
    j["t"] = s.t;
    j["witness_norm"] = s.witness_norm;
    j["witness_class"] = s.found ? s.witness_class : "none";
    j["found"] = s.found;
    j["residual"] = s.residual;
    return j;
}

inline json to_json(const family::Verdict& v) {
    json j;
    j["pointwise_iso"] = v.pointwise_iso;
    j["locally_iso"] = family::to_string(v.locally_iso);
    j["locally_equivalent"] = family::to_string(v.locally_equivalent);
    j["diagnosis"] = v.diagnosis;
    if (v.slope) j["log_log_slope"] = *v.slope;
    if (v.continued_conjugator) j["continued_conjugator"] = to_json(*v.continued_conjugator);
    if (v.continued_gamma) j["continued_gamma"] = to_json(*v.continued_gamma);
    if (!v.notes.empty()) j["notes"] = v.notes;
    return j;
}

inline json to_json(const family::ModelSummary& s) {
    json j;
    j["model"] = family::to_string(s.model);
    j["kuranishi_dim"] = s.kuranishi_dim;
    json strata = json::array();
    for (const auto& st : s.strata) {
        json x;
        x["name"] = st.name;
        x["predicate"] = st.predicate;
        x["dim"] = st.dim;
        x["kuranishi_dim_at_point"] = st.kuranishi_dim;
        x["h0"] = st.h0;
        x["leaf_dim"] = st.leaf_dim;
        strata.push_back(x);
    }
    j["strata"] = strata;
    j["h0_constant"] = s.h0_constant;
    j["foliation_trivial"] = s.foliation_trivial;
    return j;
}

inline json samples_json(const family::WitnessTrace& trace) {
    json out = json::array();
    for (const auto& s : trace.samples) out.push_back(to_json(s));
    return out;
}

namespace detail {

inline std::string number(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "\"nan\"" : (x > 0 ? "\"inf\"" : "\"-inf\"");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write(const json& j, std::ostream& os, int indent) {
    const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                os << (first ? "" : ",\n") << pad << json(k).dump() << ": ";
                write(v, os, indent + 1);
                first = false;
            }
            os << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    os << (i ? ", " : "");
                    write(j[i], os, indent + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                os << (i ? ",\n" : "") << pad;
                write(j[i], os, indent + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float: os << number(j.get<double>()); return;
        default: os << j.dump(-1, ' ', false, json::error_handler_t::replace); return;
    }
}

inline std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return number(v.get<double>());
    return v.dump();
}

}  // namespace detail

/// Indented JSON with every float printed as %.17g.
inline std::string structured(const json& j) {
    std::ostringstream os;
    detail::write(j, os, 0);
    os << "\n";
    return os.str();
}

/// Tab-separated rows, one per sample; columns are the sample keys in first-seen order.
inline std::string table(const json& report) {
    std::vector<std::string> columns;
    const json& samples = report.at("samples");
    for (const auto& s : samples)
        for (const auto& [k, v] : s.items())
            if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    std::ostringstream os;
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "\t" : "") << columns[c];
    os << "\n";
    for (const auto& s : samples) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << (c ? "\t" : "") << (s.contains(columns[c]) ? detail::cell(s[columns[c]]) : "");
        os << "\n";
    }
    return os.str();
}

inline std::string render(const ExperimentReport& r, Format f) {
    return f == Format::structured ? structured(r.document) : table(r.document);
}

}  // namespace moduli_lab::report
