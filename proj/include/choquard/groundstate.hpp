#pragma once

// Least-action solutions of -Delta u + V u = (I_alpha * |u|^p) |u|^{p-2} u on
// R^N with constant V: parameters and regimes, discrete energy, Nehari
// scaling, the projected solver, nu and the predicted decay law.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "choquard/decay_law.hpp"
#include "choquard/errors.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

enum class Regime {
    Subquadratic,
    Superquadratic,
    QuadraticLow,       // p = 2, alpha < N - 1
    QuadraticCritical,  // p = 2, alpha = N - 1
    QuadraticHigh,      // p = 2, N - 1 < alpha <= N - 1/2
    QuadraticRejected,  // p = 2, alpha > N - 1/2
};

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subquadratic: return "subquadratic";
        case Regime::Superquadratic: return "superquadratic";
        case Regime::QuadraticLow: return "quadratic_low";
        case Regime::QuadraticCritical: return "quadratic_critical";
        case Regime::QuadraticHigh: return "quadratic_high";
        case Regime::QuadraticRejected: return "quadratic_rejected";
    }
    return "unknown";
}

/// Regime boundaries are compared with this absolute slack and then snapped.
inline constexpr double kExactTol = 1e-12;

struct ChoquardParams {
    int N = 3;
    double alpha = 2.0;
    double p = 2.0;
    double V_inf = 1.0;
    Regime regime = Regime::QuadraticCritical;

    ChoquardParams() = default;
    ChoquardParams(int n, double a, double pp, double v) : N(n), alpha(a), p(pp), V_inf(v) {
        if (N < 2) throw InvalidParams("ChoquardParams: N must be at least 2");
        if (!(alpha > 0.0 && alpha < N)) throw InvalidParams("ChoquardParams: need 0 < alpha < N");
        if (!(p > 1.0)) throw InvalidParams("ChoquardParams: need p > 1");
        if (!(V_inf > 0.0)) throw InvalidParams("ChoquardParams: need V_inf > 0");
        if (std::abs(p - 2.0) < kExactTol) p = 2.0;
        if (std::abs(alpha - (N - 1)) < kExactTol) alpha = N - 1.0;
        if (std::abs(alpha - (N - 0.5)) < kExactTol) alpha = N - 0.5;
        const double inv = 1.0 / p;
        if (!((N - 2.0) / (N + alpha) < inv && inv < N / (N + alpha)))
            throw InvalidParams("ChoquardParams: p outside the admissible range (N-2)/(N+alpha) < 1/p < N/(N+alpha)");
        if (p < 2.0) regime = Regime::Subquadratic;
        else if (p > 2.0) regime = Regime::Superquadratic;
        else if (alpha < N - 1.0) regime = Regime::QuadraticLow;
        else if (alpha == N - 1.0) regime = Regime::QuadraticCritical;
        else if (alpha <= N - 0.5) regime = Regime::QuadraticHigh;
        else regime = Regime::QuadraticRejected;
    }

    double riesz_A() const { return riesz_constant(N, alpha); }
};

// ---------------------------------------------------------------------------
// Discrete problem

/// Finite-volume discretisation on a radial grid.
///
/// Q(u) = |S|(sum_i k_i (u_{i+1} - u_i)^2 + V sum_i w_i u_i^2) with
/// k_i = e_{i+1}^{N-1}/(r_{i+1} - r_i), and D(u) = |S| A g^T B g with g = |u|^p.
/// The gradient of J = Q/2 - D/(2p) is |S| (A u - W |u|^{p-2} u Phi) with
/// Phi = (A/w) B g.
class DiscreteChoquard {
public:
    DiscreteChoquard(const ChoquardParams& prm, GridPtr grid)
        : prm_(prm), grid_(std::move(grid)), op_(radial_riesz_operator(grid_, prm.alpha)) {
        if (grid_->dimension() != prm_.N) throw InvalidGrid("DiscreteChoquard: grid dimension mismatch");
        const std::size_t n = grid_->size();
        const auto& e = grid_->edges();
        k_.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            k_[i] = std::pow(e[i + 1], prm_.N - 1) / (grid_->node(i + 1) - grid_->node(i));
        area_ = sphere_area(prm_.N);
    }

    const ChoquardParams& params() const { return prm_; }
    const GridPtr& grid() const { return grid_; }
    const RadialRieszOperator& op() const { return *op_; }
    std::size_t size() const { return grid_->size(); }

    /// (A u)_i: stiffness plus V times mass, without the |S| factor.
    Eigen::VectorXd apply_A(const Eigen::VectorXd& u) const {
        const std::size_t n = size();
        Eigen::VectorXd out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = prm_.V_inf * grid_->weight(i) * u(i);
            if (i > 0) s += k_[i - 1] * (u(i) - u(i - 1));
            if (i + 1 < n) s += k_[i] * (u(i) - u(i + 1));
            out(i) = s;
        }
        return out;
    }

    double norm_sq(const Eigen::VectorXd& u) const { return area_ * u.dot(apply_A(u)); }

    Eigen::VectorXd power(const Eigen::VectorXd& u) const {
        return u.array().abs().pow(prm_.p).matrix();
    }

    double nonlinear(const Eigen::VectorXd& u) const {
        const Eigen::VectorXd g = power(u);
        return op_->pairing(g, g);
    }

    Eigen::VectorXd potential(const Eigen::VectorXd& u) const { return op_->apply_symmetric(power(u)); }

    double energy(const Eigen::VectorXd& u) const {
        return 0.5 * norm_sq(u) - nonlinear(u) / (2.0 * prm_.p);
    }

    /// Gradient of energy() with respect to the node values.
    Eigen::VectorXd gradient(const Eigen::VectorXd& u) const {
        const Eigen::VectorXd phi = potential(u);
        Eigen::VectorXd g = apply_A(u);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            const double ui = u(i);
            const double nl = ui == 0.0 ? 0.0 : std::pow(std::abs(ui), prm_.p - 2.0) * ui * phi(i);
            g(i) -= grid_->weight(static_cast<std::size_t>(i)) * nl;
        }
        return area_ * g;
    }

    /// Pointwise Euler-Lagrange defect (A u)_i/w_i - |u_i|^{p-2} u_i Phi_i.
    Eigen::VectorXd defect(const Eigen::VectorXd& u) const {
        Eigen::VectorXd d = gradient(u) / area_;
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) /= grid_->weight(static_cast<std::size_t>(i));
        return d;
    }

    /// T with T^{2p-2} = Q(u)/D(u).
    double nehari_scale(const Eigen::VectorXd& u) const {
        const double q = norm_sq(u), d = nonlinear(u);
        if (!(q > 0.0) || !(d > 0.0)) throw ZeroFunction("nehari_scale: u vanishes");
        return std::pow(q / d, 1.0 / (2.0 * prm_.p - 2.0));
    }

    /// Energy of T(u) u, i.e. (1/2 - 1/(2p)) (Q^p / D)^{1/(p-1)}.
    double projected_energy(const Eigen::VectorXd& u) const {
        const double q = norm_sq(u), d = nonlinear(u);
        return (0.5 - 0.5 / prm_.p) * std::pow(std::pow(q, prm_.p) / d, 1.0 / (prm_.p - 1.0));
    }

    /// Solves (A x)_i = rhs_i for i < n-1 with x_{n-1} = 0 (Thomas algorithm).
    Eigen::VectorXd solve_dirichlet(const Eigen::VectorXd& rhs) const {
        const std::size_t n = size() - 1;  // unknowns 0..n-1
        std::vector<double> diag(n), upper(n), c(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = prm_.V_inf * grid_->weight(i) + k_[i] + (i > 0 ? k_[i - 1] : 0.0);
            upper[i] = (i + 1 < n) ? -k_[i] : 0.0;
        }
        c[0] = upper[0] / diag[0];
        d[0] = rhs(0) / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double lower = -k_[i - 1];
            const double m = diag[i] - lower * c[i - 1];
            c[i] = upper[i] / m;
            d[i] = (rhs(static_cast<Eigen::Index>(i)) - lower * d[i - 1]) / m;
        }
        Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
        x(static_cast<Eigen::Index>(n - 1)) = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            x(static_cast<Eigen::Index>(i)) = d[i] - c[i] * x(static_cast<Eigen::Index>(i + 1));
        return x;
    }

private:
    ChoquardParams prm_;
    GridPtr grid_;
    std::shared_ptr<const RadialRieszOperator> op_;
    std::vector<double> k_;
    double area_ = 0.0;
};

// ---------------------------------------------------------------------------
// Functionals on profiles

inline void check_energy_space(const ChoquardParams& prm, const RadialProfile& u) {
    if (u.dimension() != prm.N) throw InvalidGrid("profile dimension does not match parameters");
    if (u.has_tail() && !pow(u.tail(), 2.0).integrable(prm.N))
        throw DivergentTail("profile tail is not square integrable");
}

/// I(u) = ||u||^2/2 - (1/2p) \int (I_alpha * |u|^p) |u|^p on the profile's grid.
inline double energy(const ChoquardParams& prm, const RadialProfile& u) {
    check_energy_space(prm, u);
    return DiscreteChoquard(prm, u.grid()).energy(as_vector(u.values()));
}

/// Squared V-norm ||u||^2 = \int |grad u|^2 + V u^2.
inline double norm_sq(const ChoquardParams& prm, const RadialProfile& u) {
    check_energy_space(prm, u);
    return DiscreteChoquard(prm, u.grid()).norm_sq(as_vector(u.values()));
}

/// T(u) with T^{2p-2} = ||u||^2 / \int (I_alpha * |u|^p)|u|^p.
inline double nehari_scale(const ChoquardParams& prm, const RadialProfile& u) {
    check_energy_space(prm, u);
    return DiscreteChoquard(prm, u.grid()).nehari_scale(as_vector(u.values()));
}

/// <I'(u), u> / ||u||^2, zero on the Nehari set.
inline double nehari_defect(const ChoquardParams& prm, const RadialProfile& u) {
    const DiscreteChoquard dc(prm, u.grid());
    const Eigen::VectorXd v = as_vector(u.values());
    const double q = dc.norm_sq(v);
    return (q - dc.nonlinear(v)) / q;
}

inline RadialProfile scaled(const RadialProfile& u, double s) {
    std::vector<double> v = u.values();
    for (double& x : v) x *= s;
    DecayLaw t = u.tail();
    t.prefactor *= s;
    return RadialProfile(u.grid(), std::move(v), t, u.is_density());
}

// ---------------------------------------------------------------------------
// Solver

struct SolverConfig {
    double tolerance = 1e-6;         // sup defect relative to max u
    double tail_tolerance = 1e-8;    // relative change of u on the tail window per step
    std::size_t max_iterations = 100000;
    double boundary_margin = -1.0;   // < 0: 10 / sqrt(V) plus three cells
    TailFitOptions fit;
    bool record_history = true;
};

struct GroundState {
    ChoquardParams params;
    RadialProfile omega;
    double c_infinity = 0.0;
    double nu = 0.0;
    double residual = 0.0;           // sup defect on the solver grid
    double residual_relative = 0.0;  // residual / max omega
    double norm_sq = 0.0;
    double l2_sq = 0.0;
    std::size_t iterations = 0;
    double boundary_margin = 0.0;
    TailFit tail_fit;
    std::vector<double> energy_history;  // Nehari-projected energies per accepted step
};

inline double default_margin(const ChoquardParams& prm, const RadialGrid& g) {
    const std::size_t M = g.last();
    return 10.0 / std::sqrt(prm.V_inf) + (g.node(M) - g.node(M - 3));
}

/// ||omega||_2^2 on the grid.
inline double l2_norm_sq(const RadialProfile& u) {
    const RadialGrid& g = *u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weight(i) * u.value_at_node(i) * u.value_at_node(i);
    return sphere_area(g.dimension()) * s;
}

/// nu with nu^{N-alpha} = A_alpha ||omega||_2^2 / V.
inline double nu_from_mass(const ChoquardParams& prm, double l2_sq) {
    return std::pow(prm.riesz_A() * l2_sq / prm.V_inf, 1.0 / (prm.N - prm.alpha));
}

inline double nu_constant(const GroundState& st) { return nu_from_mass(st.params, st.l2_sq); }

/// Correction exponents admitted by the regime: gamma = 1 - N + alpha when
/// p = 2 and N - 1 < alpha <= N - 1/2, none otherwise.
inline std::vector<double> gamma_candidates(const ChoquardParams& prm) {
    if (prm.regime == Regime::QuadraticHigh) return {1.0 - prm.N + prm.alpha};
    return {};
}

/// Nehari-projected descent in the energy metric.
///
/// Each step moves toward A^{-1} W |u|^{p-2} u Phi(u) (a fixed point exactly
/// at solutions), rescales onto the Nehari set and halves the step whenever
/// the projected energy would increase. The outer value is held at zero.
inline GroundState solve_limit(const ChoquardParams& prm, const GridPtr& grid, const SolverConfig& cfg = {}) {
    const DiscreteChoquard dc(prm, grid);
    const RadialGrid& g = *grid;
    const std::size_t n = g.size();
    const double margin = cfg.boundary_margin >= 0.0 ? cfg.boundary_margin : default_margin(prm, g);

    Eigen::VectorXd u(n);
    for (std::size_t i = 0; i < n; ++i) u(i) = std::pow(kPi, -0.5 * prm.N) * std::exp(-g.node(i) * g.node(i));
    u(static_cast<Eigen::Index>(n - 1)) = 0.0;

    // tail window used by the stopping gate
    std::vector<std::size_t> window;
    try {
        window = tail_window(g, cfg.fit.window_fraction, margin, std::min<std::size_t>(cfg.fit.min_points, n / 4));
    } catch (const InvalidGrid&) {
        window.clear();
    }

    auto project = [&](Eigen::VectorXd& v) {
        const double nv = v.cwiseAbs().maxCoeff();
        if (!(nv > 1e-10)) throw CollapseToZero("solve_limit: iterate collapsed to zero");
        v *= dc.nehari_scale(v);
    };

    GroundState st;
    st.params = prm;
    project(u);
    double J = dc.projected_energy(u);
    if (cfg.record_history) st.energy_history.push_back(J);
    double tau = 1.0;
    Eigen::VectorXd prev = u;
    double res = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    for (; it < cfg.max_iterations; ++it) {
        const Eigen::VectorXd phi = dc.potential(u);
        Eigen::VectorXd rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ui = u(static_cast<Eigen::Index>(i));
            rhs(static_cast<Eigen::Index>(i)) =
                g.weight(i) * (ui == 0.0 ? 0.0 : std::pow(std::abs(ui), prm.p - 2.0) * ui) * phi(static_cast<Eigen::Index>(i));
        }
        // defect on the interior nodes
        Eigen::VectorXd d = dc.defect(u);
        res = d.head(static_cast<Eigen::Index>(n - 1)).cwiseAbs().maxCoeff();
        double tail_change = 0.0;
        for (std::size_t i : window) {
            const double a = u(static_cast<Eigen::Index>(i)), b = prev(static_cast<Eigen::Index>(i));
            if (a > 0.0) tail_change = std::max(tail_change, std::abs(a - b) / a);
        }
        if (it > 0 && res <= cfg.tolerance * u.cwiseAbs().maxCoeff() && tail_change <= cfg.tail_tolerance) break;

        const Eigen::VectorXd target = dc.solve_dirichlet(rhs);
        prev = u;
        for (;;) {
            Eigen::VectorXd cand = (1.0 - tau) * u + tau * target;
            project(cand);
            const double Jc = dc.projected_energy(cand);
            if (Jc <= J * (1.0 + 1e-14) || tau < 1.0 / 64.0) {
                u = cand;
                J = Jc;
                tau = std::min(1.0, 2.0 * tau);
                break;
            }
            tau *= 0.5;
        }
        if (cfg.record_history) st.energy_history.push_back(J);
    }
    if (it >= cfg.max_iterations) throw NoConvergence("solve_limit: iteration budget exhausted");
    st.iterations = it;
    st.residual = res;
    st.residual_relative = res / u.cwiseAbs().maxCoeff();
    st.boundary_margin = margin;

    // Replace the boundary layer beyond r_M - margin by the fitted tail.
    std::vector<double> vals(u.data(), u.data() + u.size());
    RadialProfile raw(grid, vals);
    TailFitOptions fo = cfg.fit;
    fo.boundary_margin = margin;
    if (fo.gamma_candidates == TailFitOptions{}.gamma_candidates) fo.gamma_candidates = gamma_candidates(prm);
    st.tail_fit = fit_profile_tail(raw, fo);
    for (std::size_t i = 0; i < n; ++i)
        if (g.node(i) > g.r_max() - margin) vals[i] = st.tail_fit.law(g.node(i));
    st.omega = RadialProfile(grid, std::move(vals), st.tail_fit.law, true);

    const Eigen::VectorXd w = as_vector(st.omega.values());
    st.norm_sq = dc.norm_sq(w);
    st.c_infinity = (0.5 - 0.5 / prm.p) * st.norm_sq;
    st.l2_sq = l2_norm_sq(st.omega);
    st.nu = nu_from_mass(prm, st.l2_sq);
    return st;
}

/// Defect of the solution interpolated onto a grid refined `factor` times,
/// measured up to r_M - margin, relative to max omega.
inline double continuum_defect(const GroundState& st, const GridSpec& spec, int factor = 2) {
    GridSpec fine = spec;
    fine.h0 /= factor;
    fine.h_max /= factor;
    fine.ratio = std::pow(spec.ratio, 1.0 / factor);
    const GridPtr g = make_grid(fine);
    const RadialProfile u = RadialProfile::sample(g, [&](double r) { return st.omega(r); });
    const DiscreteChoquard dc(st.params, g);
    const Eigen::VectorXd v = as_vector(u.values());
    const Eigen::VectorXd d = dc.defect(v);
    double m = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
        if (g->node(i) <= g->r_max() - st.boundary_margin) m = std::max(m, std::abs(d(static_cast<Eigen::Index>(i))));
    return m / v.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Predicted decay

/// c_gamma = nu^{1-gamma} sqrt(V) / gamma.
inline double c_gamma(const ChoquardParams& prm, double nu) {
    const double g = 1.0 - prm.N + prm.alpha;
    return std::pow(nu, 1.0 - g) * std::sqrt(prm.V_inf) / g;
}

inline double tau1(const ChoquardParams& prm, double nu) {
    return prm.regime == Regime::QuadraticCritical ? nu * std::sqrt(prm.V_inf) / 2.0 : 0.0;
}

inline double tau2(const ChoquardParams& prm, double nu) {
    return (prm.regime == Regime::QuadraticHigh && prm.alpha == prm.N - 0.5) ? std::sqrt(prm.V_inf) * nu / 8.0 : 0.0;
}

/// Decay law of the ground state for the regime of prm, given nu.
inline DecayLaw expected_decay(const ChoquardParams& prm, double nu) {
    const double s = std::sqrt(prm.V_inf);
    switch (prm.regime) {
        case Regime::Subquadratic: return DecayLaw::polynomial(-(prm.N - prm.alpha) / (2.0 - prm.p));
        case Regime::Superquadratic:
        case Regime::QuadraticLow: return DecayLaw::exponential(-(prm.N - 1) / 2.0, s);
        case Regime::QuadraticCritical: return DecayLaw::exponential(-(prm.N - 1) / 2.0 + tau1(prm, nu), s);
        case Regime::QuadraticHigh:
            return DecayLaw::exponential(-(prm.N - 1) / 2.0 + tau2(prm, nu), s, c_gamma(prm, nu),
                                         1.0 - prm.N + prm.alpha);
        case Regime::QuadraticRejected: break;
    }
    throw RegimeRejected("expected_decay: p = 2 with alpha > N - 1/2 is not covered");
}

inline DecayLaw expected_decay(const GroundState& st) { return expected_decay(st.params, st.nu); }

/// Fitted tail of a ground state against its expected law.
struct DecayCheck {
    DecayLaw fitted;
    DecayLaw expected;
    double dev_a = 0.0, dev_b = 0.0, dev_c = 0.0;  // relative deviations
    bool pass = false;
};

/// Tolerances of a decay check: the exponent of a polynomial tail, or the
/// rate, power and correction of an exponential one.
struct DecayTolerance {
    double poly_a = 0.05;
    double b = 0.02;
    double a = 0.15;
    double c = 0.10;
};

inline DecayCheck decay_check(const GroundState& st, const DecayTolerance& tol = {}) {
    DecayCheck out;
    out.fitted = st.tail_fit.law;
    out.expected = expected_decay(st);
    auto rel = [](double got, double want) { return want != 0.0 ? std::abs(got / want - 1.0) : std::abs(got); };
    out.dev_a = rel(out.fitted.a, out.expected.a);
    out.dev_b = rel(out.fitted.b, out.expected.b);
    out.dev_c = out.expected.has_correction() ? rel(out.fitted.c, out.expected.c) : 0.0;
    if (out.expected.is_polynomial())
        out.pass = out.fitted.is_polynomial() && out.dev_a <= tol.poly_a;
    else
        out.pass = out.dev_b <= tol.b && out.dev_a <= tol.a && out.dev_c <= tol.c;
    return out;
}

}  // namespace choquard
