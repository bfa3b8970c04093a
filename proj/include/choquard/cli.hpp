#pragma once

// Batch front end: a single JSON run configuration, dotted key=value
// overrides, dispatch to one command, and JSON/CSV artifacts plus a manifest.
//
// Exit status: 0 on a PASS verdict, 2 on a FAIL verdict, 1 on any error.

#include <fftw3.h>
#include <gsl/gsl_version.h>

#include <Eigen/Core>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "choquard/choquard.hpp"

namespace choquard {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"solve-limit",      "decay-check",     "orbit-info",
                                                "interaction-scan", "product-oracle",  "potential-check",
                                                "expansion-report"};
    return names;
}

// ---------------------------------------------------------------------------
// Configuration

/// Group: a builtin ("antipodal", "cyclic" with order, "z2xz3") or a JSON
/// file {"max_order": k, "generators": [[row, ...], ...]}.
struct GroupSpec {
    std::string builtin = "antipodal";
    std::size_t order = 2;
    std::string file;
};

struct LadderSpec {
    std::optional<std::vector<double>> values;  // unset: command default
};

struct RunConfig {
    std::string command;
    ChoquardParams params{3, 2.0, 2.0, 1.0};
    GroupSpec group;
    std::optional<Vec> point;
    PotentialSpec potential = PotentialSpec::constant(1.0);
    GridSpec grid;
    SolverConfig solver;
    GridConfig box;
    MonteCarloSpec mc;
    double rho = -1.0;
    LadderSpec ladder;
    ExpansionOptions expansion;
    std::optional<double> mu;
    std::string output_dir = "out";
    std::uint64_t seed = 20240611;
    Json echo;  // the configuration after overrides
};

/// Radial grid suited to the regime: long and geometric for polynomial
/// tails, fine and capped for exponential ones.
inline GridSpec default_grid_spec(const ChoquardParams& prm) {
    GridSpec g;
    g.N = prm.N;
    g.h0 = 0.02;
    g.ratio = 1.02;
    if (prm.regime == Regime::Subquadratic) {
        g.r_uniform = 2.0;
        g.h_max = 1e9;
        g.r_max = 1000.0;
    } else {
        g.r_uniform = 3.0;
        g.h_max = 0.05;
        g.r_max = 80.0 / std::sqrt(prm.V_inf);
    }
    return g;
}

namespace detail {

/// Typed access to one JSON object; every key must be consumed.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "configuration" : path_, "expected an object");
    }

    bool has(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k) && !j_.at(k).is_null();
    }
    const Json& at(const std::string& k) const { return j_.at(k); }
    std::string field(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    double number(const std::string& k, double def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (!v.is_number()) fail(field(k), "expected a number");
        return v.get<double>();
    }
    long long integer(const std::string& k, long long def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (!v.is_number_integer() && !v.is_number_unsigned()) fail(field(k), "expected an integer");
        return v.get<long long>();
    }
    std::uint64_t unsigned_integer(const std::string& k, std::uint64_t def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
        fail(field(k), "expected a nonnegative integer");
    }
    bool boolean(const std::string& k, bool def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (!v.is_boolean()) fail(field(k), "expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& k, const std::string& def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (!v.is_string()) fail(field(k), "expected a string");
        return v.get<std::string>();
    }
    std::vector<double> numbers(const std::string& k) {
        const Json& v = j_.at(k);
        if (!v.is_array()) fail(field(k), "expected an array of numbers");
        std::vector<double> out;
        for (const Json& x : v) {
            if (!x.is_number()) fail(field(k), "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(field(it.key()), "unknown key");
    }

    [[noreturn]] static void fail(const std::string& field, const std::string& what) {
        throw ConfigInvalid("config field '" + field + "': " + what);
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void section(ObjectReader& parent, const std::string& key, F&& f) {
    if (!parent.has(key)) return;
    ObjectReader r(parent.at(key), parent.field(key));
    f(r);
    r.finish();
}

}  // namespace detail

/// Parses a JSON value given on the command line; bare words become strings.
inline Json parse_override_value(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error&) {
        return Json(text);
    }
}

/// Applies "a.b.c=value" to the configuration, creating objects as needed.
inline void apply_override(Json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigInvalid("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    Json* node = &cfg;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigInvalid("override '" + assignment + "': empty key component");
        if (!node->is_object()) throw ConfigInvalid("override '" + assignment + "': '" + part + "' is not inside an object");
        if (dot == std::string::npos) {
            (*node)[part] = parse_override_value(assignment.substr(eq + 1));
            return;
        }
        Json& next = (*node)[part];
        if (next.is_null()) next = Json::object();
        node = &next;
        start = dot + 1;
    }
}

/// Reads a configuration file; parse errors carry the line and column.
inline Json load_config_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigInvalid("cannot read configuration " + path.string());
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigInvalid(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                            ": invalid JSON");
    }
}

/// Validates the configuration completely before any computation.
inline RunConfig parse_run_config(const Json& j) {
    RunConfig rc;
    rc.echo = j;
    detail::ObjectReader top(j, "");
    rc.command = top.string("command", "");
    if (std::find(command_names().begin(), command_names().end(), rc.command) == command_names().end())
        detail::ObjectReader::fail("command", "unknown command '" + rc.command + "'");

    int N = 3;
    double alpha = 2.0, p = 2.0, V = 1.0;
    detail::section(top, "params", [&](detail::ObjectReader& r) {
        N = static_cast<int>(r.integer("N", N));
        alpha = r.number("alpha", alpha);
        p = r.number("p", p);
        V = r.number("V_inf", V);
    });
    try {
        rc.params = ChoquardParams(N, alpha, p, V);
    } catch (const InvalidParams& e) {
        detail::ObjectReader::fail("params", e.what());
    }

    detail::section(top, "group", [&](detail::ObjectReader& r) {
        rc.group.builtin = r.string("builtin", rc.group.builtin);
        rc.group.order = static_cast<std::size_t>(r.integer("order", static_cast<long long>(rc.group.order)));
        rc.group.file = r.string("file", "");
        if (rc.group.file.empty() && rc.group.builtin != "antipodal" && rc.group.builtin != "cyclic" &&
            rc.group.builtin != "z2xz3")
            detail::ObjectReader::fail(r.field("builtin"), "expected antipodal, cyclic or z2xz3");
    });
    if (top.has("point")) {
        const std::vector<double> z = top.numbers("point");
        rc.point = Eigen::Map<const Vec>(z.data(), static_cast<Eigen::Index>(z.size()));
    }

    rc.potential = PotentialSpec::constant(V);
    detail::section(top, "potential", [&](detail::ObjectReader& r) {
        rc.potential.V_inf = r.number("V_inf", V);
        rc.potential.A0 = r.number("A0", 0.0);
        rc.potential.sigma = r.number("sigma", 0.0);
        rc.potential.beta = r.number("beta", 0.0);
        rc.potential.c_prime = r.number("c_prime", 0.0);
        rc.potential.gamma_prime = r.number("gamma_prime", 0.0);
    });
    try {
        rc.potential.validate();
    } catch (const InvalidParams& e) {
        detail::ObjectReader::fail("potential", e.what());
    }

    rc.grid = default_grid_spec(rc.params);
    detail::section(top, "grid", [&](detail::ObjectReader& r) {
        rc.grid.h0 = r.number("h0", rc.grid.h0);
        rc.grid.r_uniform = r.number("r_uniform", rc.grid.r_uniform);
        rc.grid.ratio = r.number("ratio", rc.grid.ratio);
        rc.grid.h_max = r.number("h_max", rc.grid.h_max);
        rc.grid.r_max = r.number("r_max", rc.grid.r_max);
    });
    detail::section(top, "solver", [&](detail::ObjectReader& r) {
        rc.solver.tolerance = r.number("tolerance", rc.solver.tolerance);
        rc.solver.tail_tolerance = r.number("tail_tolerance", rc.solver.tail_tolerance);
        rc.solver.max_iterations =
            static_cast<std::size_t>(r.integer("max_iterations", static_cast<long long>(rc.solver.max_iterations)));
        rc.solver.boundary_margin = r.number("boundary_margin", rc.solver.boundary_margin);
    });
    rc.solver.record_history = true;
    detail::section(top, "box", [&](detail::ObjectReader& r) {
        rc.box.M = static_cast<int>(r.integer("M", rc.box.M));
        rc.box.margin = r.number("margin", rc.box.margin);
        rc.box.refinement = r.boolean("refinement", rc.box.refinement);
        if (rc.box.M < 8) detail::ObjectReader::fail(r.field("M"), "need at least 8 points per axis");
    });
    rc.seed = top.unsigned_integer("seed", rc.seed);
    rc.mc.seed = rc.seed;
    detail::section(top, "monte_carlo", [&](detail::ObjectReader& r) {
        rc.mc.samples = static_cast<std::size_t>(r.integer("samples", static_cast<long long>(rc.mc.samples)));
        rc.mc.mixture = r.number("mixture", rc.mc.mixture);
        rc.rho = r.number("rho", rc.rho);
        if (!(rc.mc.mixture > 0.0 && rc.mc.mixture < 1.0)) detail::ObjectReader::fail(r.field("mixture"), "need 0 < mixture < 1");
    });
    if (top.has("ladder")) {
        const Json& l = top.at("ladder");
        if (l.is_array()) {
            rc.ladder.values = top.numbers("ladder");
        } else {
            detail::ObjectReader r(l, "ladder");
            const double from = r.number("from", 10.0), to = r.number("to", 40.0);
            const long long per = r.integer("per_octave", 4);
            r.finish();
            if (!(from > 0.0 && to >= from && per > 0)) detail::ObjectReader::fail("ladder", "need 0 < from <= to and per_octave > 0");
            rc.ladder.values = geometric_ladder(from, to, static_cast<int>(per));
        }
        for (double x : *rc.ladder.values)
            if (!(x > 0.0)) detail::ObjectReader::fail("ladder", "ladder points must be positive");
    }
    detail::section(top, "expansion", [&](detail::ObjectReader& r) {
        rc.expansion.slack = r.number("slack", rc.expansion.slack);
        rc.expansion.av_limit = r.number("av_limit", rc.expansion.av_limit);
        rc.expansion.override_admissibility = r.boolean("override_admissibility", false);
    });
    rc.expansion.rho = rc.rho;
    if (top.has("mu_G")) rc.mu = top.number("mu_G", 2.0);
    rc.output_dir = top.string("output_dir", rc.output_dir);
    top.finish();
    return rc;
}

// ---------------------------------------------------------------------------
// Building blocks

inline IsometryGroup load_group(const GroupSpec& g, int N) {
    if (!g.file.empty()) {
        const Json j = load_config_file(g.file);
        detail::ObjectReader r(j, "group file");
        const std::size_t max_order = static_cast<std::size_t>(r.integer("max_order", 1024));
        if (!r.has("generators") || !r.at("generators").is_array())
            detail::ObjectReader::fail("group file.generators", "expected an array of matrices");
        std::vector<Mat> gens;
        for (const Json& m : r.at("generators")) {
            if (!m.is_array() || m.empty()) detail::ObjectReader::fail("group file.generators", "expected square matrices");
            const auto n = static_cast<Eigen::Index>(m.size());
            Mat a(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const Json& row = m[static_cast<std::size_t>(i)];
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                    detail::ObjectReader::fail("group file.generators", "expected square matrices");
                for (Eigen::Index k = 0; k < n; ++k) a(i, k) = row[static_cast<std::size_t>(k)].get<double>();
            }
            gens.push_back(a);
        }
        r.finish();
        return close_group(gens, max_order, N);
    }
    if (g.builtin == "antipodal") return antipodal_group(N);
    if (g.builtin == "cyclic") return cyclic_rotation_group(static_cast<int>(g.order));
    return z2_times_z3_group();
}

/// Unit point realizing ell(G): the configured one, else e_1 if it does,
/// else the witness of the orbit search.
inline Vec competitor_point(const RunConfig& rc, const IsometryGroup& G, const EllResult& el) {
    if (rc.point) {
        const Vec z = *rc.point;
        if (z.size() != G.dimension || !(z.norm() > 0.0))
            throw ConfigInvalid("config field 'point': expected a nonzero vector of the group dimension");
        return z / z.norm();
    }
    const Vec e1 = Vec::Unit(G.dimension, 0);
    if (orbit(G, e1).cardinality == el.ell) return e1;
    return el.witness / el.witness.norm();
}

inline std::vector<double> default_ladder(const RunConfig& rc) {
    const bool sub = rc.params.regime == Regime::Subquadratic;
    if (rc.command == "product-oracle") return geometric_ladder(10.0, 80.0, 8);
    if (rc.command == "expansion-report") return sub ? std::vector<double>{10, 14, 20, 28} : std::vector<double>{10, 12, 14, 16};
    return sub ? geometric_ladder(10.0, 40.0, 4) : geometric_ladder(5.0, 20.0, 4);
}

inline Json manifest_libraries() {
    return Json{{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"gsl", std::string(GSL_VERSION)},
                {"fftw", std::string(fftw_version)},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"compiler", std::string(__VERSION__)}};
}

// ---------------------------------------------------------------------------
// Commands

struct CommandResult {
    int status = kExitPass;
    std::vector<std::string> files;
};

namespace detail {

class Artifacts {
public:
    explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}
    void json(const std::string& name, const Json& j) { write(name, dump(j)); }
    void write(const std::string& name, const std::string& text) {
        write_text(dir_ / name, text);
        files.push_back(name);
    }
    std::vector<std::string> files;

private:
    std::filesystem::path dir_;
};

inline std::shared_ptr<const GroundState> solve(const RunConfig& rc, std::ostream& log) {
    log << "solving the limit problem on " << rc.grid.r_max << " radius grid\n";
    return std::make_shared<const GroundState>(solve_limit(rc.params, make_grid(rc.grid), rc.solver));
}

inline void ground_state_files(const GroundState& st, Artifacts& out) {
    out.json("ground_state.json", to_json(st));
    out.write("profile.csv", profile_csv(st));
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < st.energy_history.size(); ++k)
        rows.push_back({static_cast<double>(k), st.energy_history[k]});
    out.write("energy_history.csv", csv({"step", "energy"}, rows));
}

inline int cmd_solve_limit(const RunConfig& rc, Artifacts& out, std::ostream& log) {
    const auto st = solve(rc, log);
    ground_state_files(*st, out);
    return st->residual_relative < rc.solver.tolerance ? kExitPass : kExitFail;
}

inline int cmd_decay_check(const RunConfig& rc, Artifacts& out, std::ostream& log) {
    const auto st = solve(rc, log);
    ground_state_files(*st, out);
    const DecayCheck dc = decay_check(*st);
    out.json("decay.json", Json{{"fitted", to_json(dc.fitted)},
                                {"expected", to_json(dc.expected)},
                                {"nu", st->nu},
                                {"dev_a", dc.dev_a},
                                {"dev_b", dc.dev_b},
                                {"dev_c", dc.dev_c},
                                {"verdict", dc.pass ? "PASS" : "FAIL"}});
    return dc.pass ? kExitPass : kExitFail;
}

inline int cmd_orbit_info(const RunConfig& rc, Artifacts& out, std::ostream&) {
    const IsometryGroup G = load_group(rc.group, rc.params.N);
    const SphereSampler sampler{10000, rc.seed};
    const EllResult el = ell_of_group(G, sampler);
    const MuResult mu = mu_G(G, sampler);
    const Vec z = competitor_point(rc, G, el);
    const OrbitReport orb = orbit(G, z);
    Json pts = Json::array();
    std::vector<std::vector<double>> rows;
    for (const Vec& y : orb.orbit_points) {
        pts.push_back(vector_json(y));
        rows.emplace_back(y.data(), y.data() + y.size());
    }
    std::vector<std::string> header;
    for (int k = 0; k < G.dimension; ++k) header.push_back("x" + std::to_string(k + 1));
    out.json("orbit.json", Json{{"dimension", G.dimension},
                                {"order", G.order()},
                                {"ell", el.ell},
                                {"ell_sampled_min", el.sampled_min},
                                {"ell_samples", el.samples},
                                {"mu_G", mu.mu},
                                {"mu_G_sampled", mu.sampled_mu},
                                {"mu_G_witness", vector_json(mu.witness)},
                                {"point", vector_json(z)},
                                {"orbit_size", orb.cardinality},
                                {"orbit_min_distance", orb.min_pair_distance},
                                {"orbit", pts}});
    out.write("orbit.csv", csv(header, rows));
    return kExitPass;
}

inline CompetitorConfig competitor(const RunConfig& rc, std::shared_ptr<const GroundState> st, double R) {
    const IsometryGroup G = load_group(rc.group, rc.params.N);
    const EllResult el = ell_of_group(G, SphereSampler{10000, rc.seed});
    return make_competitor(interaction_profiles(std::move(st)), G, competitor_point(rc, G, el), R, el.ell);
}

inline int cmd_interaction_scan(const RunConfig& rc, Artifacts& out, std::ostream& log) {
    const auto st = solve(rc, log);
    const std::vector<double> ladder = rc.ladder.values ? *rc.ladder.values : default_ladder(rc);
    const CompetitorConfig cfg = competitor(rc, st, ladder.empty() ? 10.0 : ladder.front());
    log << "interaction on " << ladder.size() << " radii\n";
    const InteractionCurve c = interaction_curve(cfg, ladder);
    Json j = to_json(c);
    j["ell"] = cfg.ell();
    j["mu_orbit"] = cfg.min_unit_distance();
    j["verdict"] = c.agrees ? "PASS" : "FAIL";
    out.json("interaction.json", j);
    out.write("interaction.csv", curve_csv(c));
    return c.agrees ? kExitPass : kExitFail;
}

inline int cmd_product_oracle(const RunConfig& rc, Artifacts& out, std::ostream& log) {
    const std::vector<double> ladder = rc.ladder.values ? *rc.ladder.values : default_ladder(rc);
    const GridPtr grid = make_grid(product_grid_spec(rc.params.N));
    Json cases = Json::array();
    std::ostringstream table;
    table << "case,rule,a_pred,b_pred,c_pred,log_pred,a_fit,b_fit,c_fit,log_fit,pass\n";
    bool all = true;
    for (const ProductCase& pc : standard_product_cases()) {
        log << "product case " << pc.name << "\n";
        const ProductCheck c = check_product_case(pc, grid, ladder);
        all = all && c.pass;
        cases.push_back(to_json(c));
        const DecayLaw &w = c.prediction.law, &f = c.fit.law;
        table << pc.name << "," << c.prediction.rule << "," << format_number(w.a) << "," << format_number(w.b) << ","
              << format_number(w.c) << "," << w.log_factor << "," << format_number(f.a) << "," << format_number(f.b)
              << "," << format_number(f.c) << "," << f.log_factor << "," << c.pass << "\n";
    }
    out.json("product.json", Json{{"dimension", rc.params.N}, {"cases", cases}, {"verdict", all ? "PASS" : "FAIL"}});
    out.write("product.csv", table.str());
    return all ? kExitPass : kExitFail;
}

inline MuInput mu_input(const RunConfig& rc) {
    if (rc.mu) return MuInput{*rc.mu, "config"};
    const IsometryGroup G = load_group(rc.group, rc.params.N);
    return MuInput{mu_G(G, SphereSampler{10000, rc.seed}).mu, "strata"};
}

inline int cmd_potential_check(const RunConfig& rc, Artifacts& out, std::ostream& log) {
    const auto st = solve(rc, log);
    const AdmissibilityVerdict v = check_potential(rc.params, rc.potential, mu_input(rc), st->nu);
    Json j{{"params", to_json(rc.params)}, {"potential", to_json(rc.potential)}, {"nu", st->nu}};
    j["admissibility"] = to_json(v);
    j["verdict"] = v.admissible ? "PASS" : "FAIL";
    out.json("admissibility.json", j);
    return v.admissible ? kExitPass : kExitFail;
}

inline int cmd_expansion_report(const RunConfig& rc, Artifacts& out, std::ostream& log) {
    const auto st = solve(rc, log);
    const std::vector<double> ladder = rc.ladder.values ? *rc.ladder.values : default_ladder(rc);
    const CompetitorConfig cfg = competitor(rc, st, ladder.empty() ? 10.0 : ladder.front());
    ExpansionReport rep;
    try {
        log << "competitor energies on " << ladder.size() << " radii, " << rc.box.M << "^" << rc.params.N << " box\n";
        rep = expansion_report(cfg, ladder, rc.potential, rc.box, rc.expansion);
    } catch (const HypothesisViolated&) {
        // inadmissible without override: report the classification, no energies
        rep.params = rc.params;
        rep.potential = rc.potential;
        rep.ell = cfg.ell();
        rep.mu_orbit = cfg.min_unit_distance();
        rep.ell_c_inf = static_cast<double>(rep.ell) * st->c_infinity;
        rep.coef = expansion_coefficient(rc.params.p);
        rep.slack = rc.expansion.slack;
        rep.av_limit = rc.expansion.av_limit;
        rep.admissibility = check_potential(rc.params, rc.potential, mu_input(rc), st->nu);
        assess(rep);
    }
    out.json("expansion.json", to_json(rep));
    out.write("expansion.csv", expansion_csv(rep));
    return rep.verdict ? kExitPass : kExitFail;
}

}  // namespace detail

/// Runs one validated configuration; artifacts go to rc.output_dir.
inline CommandResult run(const RunConfig& rc, std::ostream& log) {
    detail::Artifacts out(rc.output_dir);
    CommandResult res;
    const std::string& c = rc.command;
    if (c == "solve-limit") res.status = detail::cmd_solve_limit(rc, out, log);
    else if (c == "decay-check") res.status = detail::cmd_decay_check(rc, out, log);
    else if (c == "orbit-info") res.status = detail::cmd_orbit_info(rc, out, log);
    else if (c == "interaction-scan") res.status = detail::cmd_interaction_scan(rc, out, log);
    else if (c == "product-oracle") res.status = detail::cmd_product_oracle(rc, out, log);
    else if (c == "potential-check") res.status = detail::cmd_potential_check(rc, out, log);
    else res.status = detail::cmd_expansion_report(rc, out, log);
    res.files = out.files;
    return res;
}

/// Full pipeline: overrides, validation, dispatch, manifest. Never throws;
/// errors are reported on `err` and mapped to exit status 1.
inline int run_main(Json config, const std::vector<std::string>& overrides, std::ostream& log, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc;
    try {
        for (const std::string& o : overrides) apply_override(config, o);
        rc = parse_run_config(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    int status = kExitError;
    std::string error;
    std::vector<std::string> files;
    try {
        const CommandResult r = run(rc, log);
        status = r.status;
        files = r.files;
    } catch (const std::exception& e) {
        error = e.what();
        err << "error: " << error << "\n";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json manifest{{"tool", "choquard"},
                  {"version", kVersion},
                  {"command", rc.command},
                  {"seed", rc.seed},
                  {"config", rc.echo},
                  {"libraries", manifest_libraries()},
                  {"files", files},
                  {"exit_status", status},
                  {"verdict", status == kExitPass ? "PASS" : status == kExitFail ? "FAIL" : "ERROR"},
                  {"error", error.empty() ? Json(nullptr) : Json(error)},
                  {"wall_time_s", wall}};
    try {
        write_text(std::filesystem::path(rc.output_dir) / "manifest.json", dump(manifest));
    } catch (const IoFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    log << "verdict " << manifest["verdict"].get<std::string>() << " (exit " << status << ")\n";
    return status;
}

}  // namespace choquard
