#pragma once

// Structured output: JSON with stable key order and 17 significant digits,
// flat CSV tables and run manifests.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "choquard/asymptotics.hpp"
#include "choquard/errors.hpp"
#include "choquard/groundstate.hpp"
#include "choquard/interaction.hpp"
#include "choquard/symmetry.hpp"

namespace choquard {

using Json = nlohmann::ordered_json;

/// %.17g, or null for non-finite values.
inline std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void dump_json(const Json& j, std::ostringstream& os, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                dump_json(it.value(), os, indent, depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) os << ",\n";
                os << pad;
                dump_json(j[k], os, indent, depth + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float: os << format_number(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

}  // namespace detail

/// Deterministic text of a JSON value.
inline std::string dump(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::dump_json(j, os, indent, 0);
    os << "\n";
    return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw IoFailure("write to " + path.string() + " failed");
}

/// CSV with a header row; numbers at 17 significant digits.
inline std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << format_number(r[k]);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Conversions

inline Json to_json(const DecayLaw& w) {
    return Json{{"a", w.a}, {"b", w.b}, {"c", w.c}, {"gamma", w.gamma}, {"log_factor", w.log_factor},
                {"prefactor", w.prefactor}};
}

inline Json to_json(const ChoquardParams& p) {
    return Json{{"N", p.N}, {"alpha", p.alpha}, {"p", p.p}, {"V_inf", p.V_inf}, {"regime", to_string(p.regime)}};
}

inline Json to_json(const PotentialSpec& v) {
    return Json{{"V_inf", v.V_inf}, {"A0", v.A0},           {"sigma", v.sigma},
                {"beta", v.beta},   {"c_prime", v.c_prime}, {"gamma_prime", v.gamma_prime}};
}

inline Json vector_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
    return a;
}

/// Ground state summary; the profile itself goes to CSV.
inline Json to_json(const GroundState& s) {
    return Json{{"params", to_json(s.params)},
                {"c_infinity", s.c_infinity},
                {"nu", s.nu},
                {"residual", s.residual},
                {"residual_relative", s.residual_relative},
                {"norm_sq", s.norm_sq},
                {"l2_sq", s.l2_sq},
                {"iterations", s.iterations},
                {"boundary_margin", s.boundary_margin},
                {"omega_at_0", s.omega(0.0)},
                {"nodes", s.omega.grid()->size()},
                {"r_max", s.omega.r_max()},
                {"tail_fit", Json{{"model", s.tail_fit.model}, {"law", to_json(s.tail_fit.law)},
                                  {"t_min", s.tail_fit.t_min}, {"t_max", s.tail_fit.t_max},
                                  {"rss", s.tail_fit.rss}}}};
}

inline std::string profile_csv(const GroundState& s) {
    std::vector<std::vector<double>> rows;
    const RadialGrid& g = *s.omega.grid();
    for (std::size_t i = 0; i < g.size(); ++i) rows.push_back({g.node(i), s.omega.value_at_node(i)});
    return csv({"r", "omega"}, rows);
}

inline Json to_json(const AdmissibilityVerdict& v) {
    Json j{{"admissible", v.admissible},
           {"theorem_branch", v.theorem_branch},
           {"predicted_AV_law", v.predicted_AV_law ? to_json(*v.predicted_AV_law) : Json(nullptr)},
           {"predicted_eps_law", to_json(v.predicted_eps_law)},
           {"margin", v.margin},
           {"mu_G", Json{{"value", v.mu_G.value}, {"provenance", v.mu_G.provenance}}},
           {"law_dominated", v.law_dominated},
           {"consistent", verdict_consistent(v)}};
    if (v.c_tilde > 0.0) {
        j["c_tilde"] = v.c_tilde;
        j["eps_correction"] = v.eps_correction;
    }
    return j;
}

inline Json to_json(const ProductCheck& c) {
    Json vals = Json::array();
    for (std::size_t k = 0; k < c.ladder.size(); ++k) vals.push_back(Json::array({c.ladder[k], c.values[k]}));
    return Json{{"name", c.input.name},
                {"u", to_json(c.input.u)},
                {"v", to_json(c.input.v)},
                {"rule", c.prediction.rule},
                {"predicted", to_json(c.prediction.law)},
                {"fitted", to_json(c.fit.law)},
                {"rss_without_log", c.fit.rss_without_log},
                {"rss_with_log", c.fit.rss_with_log},
                {"dev_a", c.dev_a},
                {"dev_b", c.dev_b},
                {"dev_c", c.dev_c},
                {"log_agrees", c.log_agrees},
                {"pass", c.pass},
                {"samples", vals}};
}

inline Json to_json(const InteractionCurve& c) {
    Json s = Json::array();
    for (const auto& x : c.samples) s.push_back(Json{{"R", x.R}, {"eps", x.eps}, {"error", x.error}});
    return Json{{"samples", s},
                {"fitted", to_json(c.fitted)},
                {"predicted", to_json(c.predicted)},
                {"comparison", Json{{"dev_a", c.dev_a}, {"dev_b", c.dev_b}, {"dev_c", c.dev_c}}},
                {"agrees", c.agrees}};
}

inline std::string curve_csv(const InteractionCurve& c) {
    std::vector<std::vector<double>> rows;
    for (const auto& x : c.samples) rows.push_back({x.R, x.eps, x.error});
    return csv({"R", "eps", "error"}, rows);
}

inline Json to_json(const ExpansionReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back(Json{{"R", x.R},
                            {"eps_R", x.eps_R},
                            {"I_V", x.I_V},
                            {"excess", x.excess},
                            {"A_V", x.A_V},
                            {"ratio", x.ratio},
                            {"AV_over_eps", x.av_ratio},
                            {"restricted_sum", x.restricted_sum},
                            {"ratio_restricted", x.ratio_restricted},
                            {"T_R", x.T_R},
                            {"grid_error", x.grid_error}});
    return Json{{"params", to_json(r.params)},
                {"potential", to_json(r.potential)},
                {"ell", r.ell},
                {"mu_orbit", r.mu_orbit},
                {"ell_c_inf", r.ell_c_inf},
                {"coefficient_target", -r.coef},
                {"slack", r.slack},
                {"av_limit", r.av_limit},
                {"admissibility", to_json(r.admissibility)},
                {"override_used", r.override_used},
                {"rows", rows},
                {"below_level", r.below_level},
                {"ratio_ok", r.ratio_ok},
                {"av_decreasing", r.av_decreasing},
                {"av_small", r.av_small},
                {"verdict", r.verdict ? "PASS" : "FAIL"}};
}

inline std::string expansion_csv(const ExpansionReport& r) {
    std::vector<std::vector<double>> rows;
    for (const auto& x : r.rows) rows.push_back({x.R, x.eps_R, x.I_V, x.A_V, x.ratio});
    return csv({"R", "eps", "IV", "AV", "ratio"}, rows);
}

inline Json to_json(const RestrictedExpansion& e) {
    Json p = Json::array();
    for (const auto& x : e.pieces)
        p.push_back(Json{{"i", x.i}, {"j", x.j}, {"k", x.k}, {"l", x.l}, {"value", x.est.value},
                         {"stderr", x.est.stderr_}, {"samples", x.est.samples}});
    return Json{{"eps_R", e.eps_R}, {"sum", e.sum}, {"stderr", e.stderr_}, {"relative_gap", e.relative_gap},
                {"rho", e.rho}, {"seed", e.seed}, {"pieces", p}};
}

}  // namespace choquard
