#pragma once

// JSON and CSV encodings of measures, IFS descriptors and reports. Numbers are
// written with 17 significant digits so every double round-trips.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ifsframe/beurling.hpp"
#include "ifsframe/error.hpp"
#include "ifsframe/frame.hpp"
#include "ifsframe/ifs.hpp"
#include "ifsframe/measure.hpp"
#include "ifsframe/reconstruct.hpp"

namespace ifsframe {

using json = nlohmann::json;

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json to_json(const MeasurePart& p) {
    return std::visit(detail::overloaded{[](const AtomicMeasure& a) {
                                             json atoms = json::array();
                                             for (const Atom& x : a.atoms()) {
                                                 atoms.push_back({x.point, x.weight});
                                             }
                                             return json{{"type", "atomic"}, {"atoms", atoms}};
                                         },
                                         [](const DensityMeasure& d) {
                                             return json{{"type", "density"},
                                                         {"start", d.start()},
                                                         {"bin_width", d.bin_width()},
                                                         {"masses", d.masses()}};
                                         }},
                      p);
}

inline json to_json(const Measure& nu) {
    if (const auto* s = std::get_if<SumMeasure>(&nu)) {
        json parts = json::array();
        for (const MeasurePart& p : s->parts) {
            parts.push_back(to_json(p));
        }
        return json{{"type", "sum"}, {"components", parts}};
    }
    return std::visit(detail::overloaded{[](const SumMeasure&) { return json(); },
                                         [](const auto& single) { return to_json(MeasurePart{single}); }},
                      nu);
}

namespace detail {

inline const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw UsageError(std::string("json: missing field '") + key + "'");
    }
    return j.at(key);
}

inline MeasurePart part_from_json(const json& j) {
    const std::string type = require(j, "type").get<std::string>();
    if (type == "atomic") {
        std::vector<Atom> atoms;
        for (const json& a : require(j, "atoms")) {
            if (!a.is_array() || a.size() != 2) {
                throw UsageError("json: atoms must be [point, weight] pairs");
            }
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        return AtomicMeasure(std::move(atoms));
    }
    if (type == "density") {
        return DensityMeasure(require(j, "start").get<double>(), require(j, "bin_width").get<double>(),
                              require(j, "masses").get<std::vector<double>>());
    }
    throw UsageError("json: unknown measure type '" + type + "'");
}

} // namespace detail

inline Measure measure_from_json(const json& j) {
    try {
        if (detail::require(j, "type").get<std::string>() == "sum") {
            SumMeasure s;
            for (const json& p : detail::require(j, "components")) {
                s.parts.push_back(detail::part_from_json(p));
            }
            return s;
        }
        return std::visit([](auto&& x) -> Measure { return x; }, detail::part_from_json(j));
    } catch (const json::exception& e) {
        throw UsageError(std::string("json: malformed measure: ") + e.what());
    }
}

inline json to_json(const AffineIfs& ifs) {
    return json{{"R", ifs.scale()}, {"B", ifs.digits()}};
}

inline AffineIfs ifs_from_json(const json& j) {
    try {
        return AffineIfs(detail::require(j, "R").get<std::int64_t>(),
                         detail::require(j, "B").get<std::vector<std::int64_t>>());
    } catch (const json::exception& e) {
        throw UsageError(std::string("json: malformed IFS descriptor: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("json: parse error: ") + e.what());
    }
}

/// Inline JSON when the argument starts with '{', otherwise a file path.
inline json json_inline_or_file(const std::string& arg) {
    auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && arg[first] == '{') {
        return parse_json_text(arg);
    }
    return parse_json_text(read_text_file(arg));
}

inline json to_json(const FrameReport& r) {
    json j{{"level", r.level},
           {"A", r.lower},
           {"B", r.upper},
           {"residuals", {{"psd", r.psd_residual}, {"hermitian", r.hermitian_residual}}},
           {"measure_ref", r.measure_ref}};
    j["lambda_truncation"] = r.lambda_truncation ? json(*r.lambda_truncation) : json(nullptr);
    return j;
}

inline std::string frame_csv_header() { return "level,lambda,A,B,psd_residual,hermitian_residual"; }

inline std::string to_csv_row(const FrameReport& r) {
    return std::to_string(r.level) + "," +
           (r.lambda_truncation ? format_number(*r.lambda_truncation) : std::string()) + "," +
           format_number(r.lower) + "," + format_number(r.upper) + "," +
           format_number(r.psd_residual) + "," + format_number(r.hermitian_residual);
}

inline json to_json(const DimensionEstimate& d) {
    return json{{"slope", d.slope},
                {"alpha_lo", d.alpha_lo},
                {"alpha_hi", d.alpha_hi},
                {"fit_range", {d.fit_range.first, d.fit_range.second}},
                {"residual", d.residual},
                {"degenerate", d.degenerate},
                {"radii", d.radii},
                {"sup_masses", d.sup_masses}};
}

inline std::string to_csv(const DensityScan& s) {
    std::string out = "R,sup_mass,ratio\n";
    for (std::size_t i = 0; i < s.radii.size(); ++i) {
        out += format_number(s.radii[i]) + "," + format_number(s.sup_masses[i]) + "," +
               format_number(s.ratios[i]) + "\n";
    }
    return out;
}

inline json to_json(const ReconstructionReport& r) {
    return json{{"t", r.t},
                {"value_re", r.value.real()},
                {"value_im", r.value.imag()},
                {"cutoff", r.cutoff},
                {"step", r.step},
                {"richardson_residual", r.richardson_residual},
                {"outside_base_hull", r.outside_base_hull},
                {"near_cylinder_boundary", r.near_cylinder_boundary}};
}

} // namespace ifsframe
