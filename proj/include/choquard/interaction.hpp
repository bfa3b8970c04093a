#pragma once

// Symmetric competitors built from translates of the ground state: pairwise
// and restricted interaction energies, the competitor energy and the
// expansion report comparing it with the interaction yardstick eps_R.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "choquard/asymptotics.hpp"
#include "choquard/errors.hpp"
#include "choquard/groundstate.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"
#include "choquard/symmetry.hpp"

namespace choquard {

// ---------------------------------------------------------------------------
// Profiles

/// Radial profiles of a ground state shared by every interaction quantity.
struct InteractionProfiles {
    std::shared_ptr<const GroundState> state;
    RieszKernel kernel;
    RadialProfile omega;    // w
    RadialProfile omega_p;  // w^p
    RadialProfile phi;      // I_alpha * w^p
    RadialProfile v;        // phi w^{p-1}

    const ChoquardParams& params() const { return state->params; }
};

using ProfilesPtr = std::shared_ptr<const InteractionProfiles>;

inline ProfilesPtr interaction_profiles(std::shared_ptr<const GroundState> st) {
    if (!st) throw InvalidParams("interaction_profiles: null state");
    auto out = std::make_shared<InteractionProfiles>();
    const ChoquardParams& prm = st->params;
    out->state = st;
    out->kernel = RieszKernel(prm.N, prm.alpha);
    out->omega = st->omega;
    const GridPtr& g = st->omega.grid();
    const std::vector<double>& w = st->omega.values();
    std::vector<double> wp(w.size()), vv(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) wp[i] = std::pow(std::max(w[i], 0.0), prm.p);
    out->omega_p = RadialProfile(g, wp, pow(st->omega.tail(), prm.p), true);
    out->phi = riesz_convolve_radial(out->kernel, out->omega_p);
    for (std::size_t i = 0; i < w.size(); ++i)
        vv[i] = out->phi.value_at_node(i) * std::pow(std::max(w[i], 0.0), prm.p - 1.0);
    out->v = RadialProfile(g, vv, out->phi.tail() * pow(st->omega.tail(), prm.p - 1.0), true);
    return out;
}

/// eps^{ij} at center separation d: \int (I_alpha * w^p)(x) w^{p-1}(x) w(x - xi) dx.
inline double epsilon_pair(const InteractionProfiles& P, double d) {
    if (!(d > 0.0)) throw InvalidParams("epsilon_pair: separation must be positive");
    return two_center_integral(P.v, P.omega, d);
}

/// Energy-space inner product \int grad w_i . grad w_j + V_inf w_i w_j at separation d.
inline double energy_inner_pair(const InteractionProfiles& P, double d) {
    if (!(d > 0.0)) throw InvalidParams("energy_inner_pair: separation must be positive");
    const RadialProfile& w = P.omega;
    const double V = P.params().V_inf;
    const TwoCenterDomain dom = two_center_domain(w, w, d);
    // x.(x - xi) / (|x| |x - xi|) = (s^2 + t^2 - d^2) / (2 s t)
    return two_center_quad(
        P.params().N, d,
        [&](double s, double t) {
            return w.derivative(s) * w.derivative(t) * (s * s + t * t - d * d) / (2.0 * s * t) + V * w(s) * w(t);
        },
        dom);
}

/// \int (I_alpha * w^p)(x) w^p(x - xi) dx at separation d.
inline double nonlinear_cross_pair(const InteractionProfiles& P, double d) {
    if (!(d > 0.0)) throw InvalidParams("nonlinear_cross_pair: separation must be positive");
    return two_center_integral(P.phi, P.omega_p, d);
}

// ---------------------------------------------------------------------------
// Competitor configuration

/// Centers R g_i z of the competitor; the orbit of z is minimal.
struct CompetitorConfig {
    ProfilesPtr profiles;
    IsometryGroup group;
    Vec z;
    double R = 0.0;
    std::vector<Vec> centers;

    std::size_t ell() const { return centers.size(); }
    int dimension() const { return group.dimension; }

    /// |g_i z - g_j z| for i != j.
    double unit_distance(std::size_t i, std::size_t j) const { return (centers[i] - centers[j]).norm() / R; }

    /// mu(Gz); 2 for a single center.
    double min_unit_distance() const {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ell(); ++i)
            for (std::size_t j = i + 1; j < ell(); ++j) m = std::min(m, unit_distance(i, j));
        return std::isfinite(m) ? m : 2.0;
    }
};

/// Builds the competitor for z on the unit sphere. The orbit size of z must
/// equal ell(G); `ell_known` skips the sampler when the caller has it.
inline CompetitorConfig make_competitor(ProfilesPtr profiles, const IsometryGroup& G, const Vec& z, double R,
                                        std::optional<std::size_t> ell_known = std::nullopt) {
    if (!profiles) throw InvalidParams("make_competitor: null profiles");
    if (G.dimension != profiles->params().N || z.size() != G.dimension)
        throw InvalidParams("make_competitor: dimension mismatch between group, point and parameters");
    if (!(R > 0.0)) throw InvalidParams("make_competitor: R must be positive");
    if (std::abs(z.norm() - 1.0) > 1e-9) throw InvalidParams("make_competitor: z must be a unit vector");
    const OrbitReport orb = orbit(G, z);
    const std::size_t ell = ell_known ? *ell_known : ell_of_group(G).ell;
    if (orb.cardinality != ell) throw InvalidParams("make_competitor: z does not realize ell(G)");
    CompetitorConfig cfg;
    cfg.profiles = std::move(profiles);
    cfg.group = G;
    cfg.z = z;
    cfg.R = R;
    for (const Vec& y : orb.orbit_points) cfg.centers.push_back(R * y);
    return cfg;
}

/// Same group and direction at another radius.
inline CompetitorConfig at_radius(const CompetitorConfig& cfg, double R) {
    if (!(R > 0.0)) throw InvalidParams("at_radius: R must be positive");
    CompetitorConfig out = cfg;
    out.R = R;
    for (Vec& c : out.centers) c *= R / cfg.R;
    return out;
}

namespace detail {

/// Sum over ordered pairs i != j of f(|c_i - c_j|), evaluating f once per distance.
template <class F>
double sum_over_pairs(const CompetitorConfig& cfg, F&& f) {
    std::vector<std::pair<double, double>> memo;
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.ell(); ++i)
        for (std::size_t j = 0; j < cfg.ell(); ++j) {
            if (i == j) continue;
            const double d = (cfg.centers[i] - cfg.centers[j]).norm();
            auto it = std::find_if(memo.begin(), memo.end(),
                                   [&](const auto& m) { return std::abs(m.first - d) <= 1e-10 * d; });
            if (it == memo.end()) {
                memo.emplace_back(d, f(d));
                it = std::prev(memo.end());
            }
            total += it->second;
        }
    return total;
}

}  // namespace detail

/// eps_R = sum over ordered pairs i != j of eps^{ij}.
inline double epsilon_R(const CompetitorConfig& cfg) {
    return detail::sum_over_pairs(cfg, [&](double d) { return epsilon_pair(*cfg.profiles, d); });
}

// ---------------------------------------------------------------------------
// Restricted pieces

/// Monte Carlo budget; every draw derives from `seed`.
struct MonteCarloSpec {
    std::size_t samples = 200000;
    std::uint64_t seed = 20240611;
    double mixture = 0.5;     // weight of the shaped proposal, the rest is uniform on the ball
    double abs_floor = 0.0;   // a standard error at or below this is never too large
};

struct RestrictedEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double rho = 0.0;
};

namespace detail {

/// Proposal on the ball B_radius(center): mixture of a shell-wise constant
/// approximation of w(|x - center|)^e and the uniform density. The density
/// returned by density() is exactly the one sampled.
class BallSampler {
public:
    BallSampler(const RadialProfile& w, double e, Vec center, double radius, double mixture)
        : c_(std::move(center)), rad_(radius), N_(static_cast<int>(c_.size())) {
        lam_ = e > 0.0 ? mixture : 0.0;
        const int cells = 400;
        edges_.resize(cells + 1);
        for (int k = 0; k <= cells; ++k) edges_[static_cast<std::size_t>(k)] = radius * std::pow(double(k) / cells, 1.5);
        cdf_.assign(cells + 1, 0.0);
        for (int k = 0; k < cells; ++k) {
            const double a = edges_[static_cast<std::size_t>(k)], b = edges_[static_cast<std::size_t>(k) + 1];
            const double m = lam_ > 0.0 ? gauss_integrate([&](double s) { return std::pow(w(s), e) * std::pow(s, N_ - 1); }, a, b, 6) : 0.0;
            cdf_[static_cast<std::size_t>(k) + 1] = cdf_[static_cast<std::size_t>(k)] + m;
        }
        if (lam_ > 0.0 && !(cdf_.back() > 0.0)) lam_ = 0.0;
        if (lam_ > 0.0)
            for (double& x : cdf_) x /= cdf_.back();
        area_ = sphere_area(N_);
        unif_ = N_ / (area_ * std::pow(rad_, N_));
    }

    template <class Rng>
    Vec sample(Rng& rng) const {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::normal_distribution<double> G(0.0, 1.0);
        double s;
        if (lam_ > 0.0 && U(rng) < lam_) {
            const double u = U(rng);
            std::size_t k = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
            k = std::clamp<std::size_t>(k, 1, cdf_.size() - 1) - 1;
            while (cdf_[k + 1] <= cdf_[k] && k + 2 < cdf_.size()) ++k;
            const double a = edges_[k], b = edges_[k + 1];
            s = std::pow(std::pow(a, N_) + U(rng) * (std::pow(b, N_) - std::pow(a, N_)), 1.0 / N_);
        } else {
            s = rad_ * std::pow(U(rng), 1.0 / N_);
        }
        Vec dir(N_);
        for (int d = 0; d < N_; ++d) dir(d) = G(rng);
        return c_ + s * dir / dir.norm();
    }

    double density(const Vec& x) const {
        const double s = (x - c_).norm();
        if (s > rad_) return 0.0;
        double q = (1.0 - lam_) * unif_;
        if (lam_ > 0.0) {
            std::size_t k = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), s) - edges_.begin());
            k = std::clamp<std::size_t>(k, 1, edges_.size() - 1) - 1;
            const double a = edges_[k], b = edges_[k + 1];
            q += lam_ * (cdf_[k + 1] - cdf_[k]) * N_ / (area_ * (std::pow(b, N_) - std::pow(a, N_)));
        }
        return q;
    }

private:
    Vec c_;
    double rad_;
    int N_;
    double lam_ = 0.0, area_ = 0.0, unif_ = 0.0;
    std::vector<double> edges_, cdf_;
};

inline double default_rho(const CompetitorConfig& cfg) { return 0.45 * cfg.min_unit_distance(); }

inline void check_rho(const CompetitorConfig& cfg, double rho) {
    if (!(rho > 0.0 && rho < 0.5 * cfg.min_unit_distance()))
        throw InvalidParams("restricted interaction: rho must lie in (0, mu(Gz)/2)");
}

}  // namespace detail

/// Monte Carlo estimate of eps^{ij}_{kl}, the double integral of
/// w_i^p(zeta) w_i^{p-1}(theta) w_j(theta) K(theta - zeta) over
/// B_{rho R}(c_k) x B_{rho R}(c_l), with K the Riesz kernel.
///
/// zeta is drawn around c_k with shape w^p when k = i; theta around c_l with
/// shape w^{p-1} when l = i and w when l = j; other balls are sampled uniformly.
inline RestrictedEstimate epsilon_restricted(const CompetitorConfig& cfg, std::size_t i, std::size_t j, std::size_t k,
                                             std::size_t l, double rho, const MonteCarloSpec& mc = {}) {
    const std::size_t n = cfg.ell();
    if (i >= n || j >= n || k >= n || l >= n || i == j) throw InvalidParams("epsilon_restricted: bad indices");
    detail::check_rho(cfg, rho);
    if (mc.samples < 2) throw BudgetTooSmall("epsilon_restricted: need at least two samples");
    const InteractionProfiles& P = *cfg.profiles;
    const double p = P.params().p;
    const RadialProfile& w = P.omega;
    const double rad = rho * cfg.R;
    const Vec& ci = cfg.centers[i];
    const Vec& cj = cfg.centers[j];
    const detail::BallSampler zs(w, k == i ? p : 0.0, cfg.centers[k], rad, mc.mixture);
    const detail::BallSampler ts(w, l == i ? p - 1.0 : (l == j ? 1.0 : 0.0), cfg.centers[l], rad, mc.mixture);
    std::seed_seq seq{static_cast<std::uint32_t>(mc.seed), static_cast<std::uint32_t>(mc.seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k),
                      static_cast<std::uint32_t>(l)};
    std::mt19937_64 rng(seq);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s < mc.samples; ++s) {
        const Vec zeta = zs.sample(rng);
        const Vec theta = ts.sample(rng);
        const double r = (theta - zeta).norm();
        double val = 0.0;
        if (r > 0.0) {
            const double F = std::pow(w((zeta - ci).norm()), p);
            const double G = std::pow(w((theta - ci).norm()), p - 1.0) * w((theta - cj).norm());
            val = F * G * P.kernel(r) / (zs.density(zeta) * ts.density(theta));
        }
        const double delta = val - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (val - mean);
    }
    RestrictedEstimate out;
    out.value = mean;
    out.stderr_ = std::sqrt(m2 / static_cast<double>(mc.samples - 1) / static_cast<double>(mc.samples));
    out.samples = mc.samples;
    out.seed = mc.seed;
    out.rho = rho;
    if (out.stderr_ > std::max(0.2 * std::abs(out.value), mc.abs_floor))
        throw BudgetTooSmall("epsilon_restricted: standard error exceeds 20% of the estimate");
    return out;
}

/// eps^{ki}_{kk} by radial quadrature: with Phi_rho = I_alpha * (w^p 1_{B_{rho R}}),
/// it equals \int_{B_{rho R}} Phi_rho w^{p-1}(x) w(x - xi) dx, |xi| = |c_k - c_i|.
inline double restricted_diagonal(const CompetitorConfig& cfg, std::size_t k, std::size_t i, double rho) {
    if (k >= cfg.ell() || i >= cfg.ell() || k == i) throw InvalidParams("restricted_diagonal: bad indices");
    detail::check_rho(cfg, rho);
    const InteractionProfiles& P = *cfg.profiles;
    const int N = P.params().N;
    const double p = P.params().p;
    const double rad = rho * cfg.R;
    const RadialProfile& w = P.omega;
    if (rad > w.r_max()) throw InvalidGrid("restricted_diagonal: ball exceeds the profile grid");
    const RadialProfile trunc = RadialProfile::project(
        w.grid(), [&](double r) { return r < rad ? std::pow(w(r), p) : 0.0; }, {rad});
    const RadialProfile phi = riesz_convolve_radial(P.kernel, trunc);
    const double d = (cfg.centers[k] - cfg.centers[i]).norm();
    TwoCenterDomain dom;
    dom.s_breaks = detail::panel_breaks(rad, detail::panel_cap(w), {1.0});
    dom.t_breaks = detail::panel_breaks(d + rad, detail::panel_cap(w), {1.0, d - rad, w.r_max()});
    return two_center_quad(
        N, d, [&](double s, double t) { return phi(s) * std::pow(w(s), p - 1.0) * w(t); }, dom);
}

/// Restricted expansion of eps_R: the sum over i != j of eps^{ij}_{ij} + eps^{ij}_{ji} + eps^{ij}_{ii}.
struct RestrictedExpansion {
    double eps_R = 0.0;
    double sum = 0.0;
    double stderr_ = 0.0;         // combined standard error of the sum
    double relative_gap = 0.0;    // |eps_R - sum| / eps_R
    double rho = 0.0;
    std::uint64_t seed = 0;
    struct Piece {
        std::size_t i, j, k, l;
        RestrictedEstimate est;
    };
    std::vector<Piece> pieces;
};

inline RestrictedExpansion restricted_expansion(const CompetitorConfig& cfg, double rho = -1.0,
                                                const MonteCarloSpec& mc = {}) {
    if (rho < 0.0) rho = detail::default_rho(cfg);
    RestrictedExpansion out;
    out.rho = rho;
    out.seed = mc.seed;
    out.eps_R = epsilon_R(cfg);
    double var = 0.0;
    for (std::size_t i = 0; i < cfg.ell(); ++i)
        for (std::size_t j = 0; j < cfg.ell(); ++j) {
            if (i == j) continue;
            const std::size_t kl[3][2] = {{i, j}, {j, i}, {i, i}};
            for (const auto& q : kl) {
                const RestrictedEstimate e = epsilon_restricted(cfg, i, j, q[0], q[1], rho, mc);
                out.pieces.push_back({i, j, q[0], q[1], e});
                out.sum += e.value;
                var += e.stderr_ * e.stderr_;
            }
        }
    out.stderr_ = std::sqrt(var);
    out.relative_gap = std::abs(out.eps_R - out.sum) / out.eps_R;
    return out;
}

// ---------------------------------------------------------------------------
// Competitor energy

/// Tensor grid for the overlap terms of the competitor.
struct GridConfig {
    int M = 256;                // points per axis
    double margin = 14.0;       // box face distance beyond the outermost center
    bool refinement = true;     // repeat the grid terms at M/2 for an error estimate
};

/// Energy of the Nehari-projected competitor T_R chi and its parts.
///
/// chi^p = S + delta with S = sum_i w_i^p, so that
///   D(chi) = ell D(w) + sum_{i != j} X(d_ij) + 2 \int (I * S) delta + \int (I * delta) delta,
/// where X is the radial cross term. Only the two delta terms use the grid.
struct CompetitorEnergy {
    double R = 0.0;
    std::size_t ell = 0;
    double ell_c_inf = 0.0;
    double I_V = 0.0;
    double excess = 0.0;          // I_V - ell c_inf, free of cancellation
    double T_R = 0.0;
    double norm_V_sq = 0.0;
    double nonlinear = 0.0;
    double A_V = 0.0;
    double A_V_diagonal = 0.0;
    double A_V_cross = 0.0;
    double eps_R = 0.0;
    double cross_norm = 0.0;      // sum over i != j of <w_i, w_j>
    double cross_radial = 0.0;    // sum over i != j of X(d_ij)
    double grid_linear = 0.0;     // 2 \int (I * S) delta
    double grid_quadratic = 0.0;  // \int (I * delta) delta
    double delta_D = 0.0;         // D(chi) - ell D(w)
    double grid_error = 0.0;      // change of the grid terms from M/2 to M
    double half_width = 0.0;
    double h = 0.0;
};

namespace detail {

struct GridTerms {
    double linear = 0.0;
    double quadratic = 0.0;
    double av_cross = 0.0;
};

inline GridTerms grid_terms(const CompetitorConfig& cfg, const PotentialSpec& pot, int M, double L) {
    const InteractionProfiles& P = *cfg.profiles;
    const int N = P.params().N;
    const double p = P.params().p;
    const std::size_t n = cfg.ell();
    GridField delta(N, L, M);
    const double h = delta.h();
    const bool with_W = pot.A0 != 0.0;
    std::vector<double> a(n), ap(n);
    double lin = 0.0, av = 0.0;
    for (std::size_t f = 0; f < delta.size(); ++f) {
        const auto ix = delta.index(f);
        Eigen::Vector3d x = Eigen::Vector3d::Zero();
        for (int d = 0; d < N; ++d) x(d) = delta.coord(ix[static_cast<std::size_t>(d)]);
        double phiS = 0.0, sumP = 0.0, rest = 0.0;
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = (x.head(N) - cfg.centers[i]).norm();
            a[i] = std::max(P.omega(r), 0.0);
            phiS += P.phi(r);
            if (a[i] > a[m]) m = i;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (i != m) {
                rest += a[i];
                sumP += std::pow(a[i], p);
            }
        double dl = 0.0;
        if (a[m] > 0.0 && rest > 0.0) dl = std::pow(a[m], p) * std::expm1(p * std::log1p(rest / a[m])) - sumP;
        delta.values[f] = dl;
        lin += phiS * dl;
        if (with_W) {
            double pairs = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) pairs += a[i] * a[j];
            av += pot.excess(x.head(N).norm()) * 2.0 * pairs;
        }
    }
    const double cell = std::pow(h, N);
    GridTerms out;
    out.linear = 2.0 * lin * cell;
    out.av_cross = av * cell;
    // the box margin bounds the truncation, so the shell test is not applied here
    const GridField conv = riesz_convolve_grid(P.kernel, delta, std::numeric_limits<double>::infinity());
    double q = 0.0;
    for (std::size_t f = 0; f < delta.size(); ++f) q += conv.values[f] * delta.values[f];
    out.quadratic = q * cell;
    return out;
}

}  // namespace detail

/// A_V = \int (V - V_inf) chi^2 with the diagonal terms by radial quadrature.
inline double potential_diagonal(const CompetitorConfig& cfg, const PotentialSpec& pot) {
    if (pot.A0 == 0.0) return 0.0;
    if (!pot.decays()) throw DivergentTail("potential term: V - V_inf does not vanish at infinity");
    const InteractionProfiles& P = *cfg.profiles;
    const RadialProfile& w = P.omega;
    const double rM = w.r_max();
    DecayLaw tl = pot.excess_law();
    tl.prefactor = 1.0;
    tl.prefactor = pot.excess(rM) / tl(rM);
    const RadialProfile W = RadialProfile::sample(w.grid(), [&](double r) { return pot.excess(r); }, tl);
    std::vector<double> w2(w.values().size());
    for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = w.value_at_node(i) * w.value_at_node(i);
    const RadialProfile W2(w.grid(), w2, pow(w.tail(), 2.0), true);
    double s = 0.0;
    for (const Vec& c : cfg.centers) s += two_center_integral(W, W2, c.norm());
    return s;
}

inline CompetitorEnergy competitor_energy(const CompetitorConfig& cfg, const PotentialSpec& pot,
                                          const GridConfig& grid = {}) {
    const InteractionProfiles& P = *cfg.profiles;
    const ChoquardParams& prm = P.params();
    if (prm.N > 3) throw RegimeRejected("competitor_energy: grid evaluation needs N <= 3");
    if (prm.N < 2) throw InvalidParams("competitor_energy: N must be 2 or 3");
    if (std::abs(pot.V_inf - prm.V_inf) > kExactTol * prm.V_inf)
        throw InvalidParams("competitor_energy: potential and ground state disagree on V_inf");
    if (grid.M < 8 || grid.M % 4 != 0) throw InvalidParams("competitor_energy: M must be a multiple of 4, at least 8");
    double reach = 0.0;
    for (const Vec& c : cfg.centers) reach = std::max(reach, c.cwiseAbs().maxCoeff());
    if (!(grid.margin > 0.0)) throw PaddingInsufficient("competitor_energy: the box needs a positive margin");
    const double L = reach + grid.margin;

    CompetitorEnergy e;
    e.R = cfg.R;
    e.ell = cfg.ell();
    const double ell = static_cast<double>(e.ell);
    const double Nw = P.state->norm_sq;
    e.ell_c_inf = ell * P.state->c_infinity;
    e.half_width = L;
    e.h = 2.0 * L / grid.M;
    if (e.ell > 1) {
        e.eps_R = epsilon_R(cfg);
        e.cross_norm = detail::sum_over_pairs(cfg, [&](double d) { return energy_inner_pair(P, d); });
        e.cross_radial = detail::sum_over_pairs(cfg, [&](double d) { return nonlinear_cross_pair(P, d); });
        const detail::GridTerms gt = detail::grid_terms(cfg, pot, grid.M, L);
        e.grid_linear = gt.linear;
        e.grid_quadratic = gt.quadratic;
        e.A_V_cross = gt.av_cross;
        if (grid.refinement) {
            const detail::GridTerms coarse = detail::grid_terms(cfg, pot, grid.M / 2, L);
            e.grid_error = std::abs(coarse.linear + coarse.quadratic - gt.linear - gt.quadratic) +
                           std::abs(coarse.av_cross - gt.av_cross);
        }
    }
    e.A_V_diagonal = potential_diagonal(cfg, pot);
    e.A_V = e.A_V_diagonal + e.A_V_cross;
    e.delta_D = e.cross_radial + e.grid_linear + e.grid_quadratic;
    // w lies on the Nehari manifold: its norm and nonlinear term coincide
    const double x = (e.cross_norm + e.A_V) / (ell * Nw);
    const double y = e.delta_D / (ell * Nw);
    const double p = prm.p;
    const double lg = p / (p - 1.0) * std::log1p(x) - std::log1p(y) / (p - 1.0);
    e.excess = e.ell_c_inf * std::expm1(lg);
    e.I_V = e.ell_c_inf * std::exp(lg);
    e.T_R = std::exp((std::log1p(x) - std::log1p(y)) / (2.0 * p - 2.0));
    e.norm_V_sq = ell * Nw * (1.0 + x);
    e.nonlinear = ell * Nw * (1.0 + y);
    return e;
}

// ---------------------------------------------------------------------------
// Nonlinear splitting

struct SplittingReport {
    std::string branch;           // "p<2", "p=2" or "p>2"
    double lhs = 0.0;             // D(chi)
    double rhs = 0.0;             // lower bound from the splitting inequality
    double difference = 0.0;      // lhs - rhs, computed without the common ell D(w)
    double restricted_sum = 0.0;  // sum over k, i != k of eps^{ki}_{kk} (p < 2)
    double eps_R = 0.0;
    double error_budget = 0.0;
    bool holds = false;
};

/// D(chi) against sum_k D(w_k) + p eps_R + p sum eps^{ki}_{kk} (p < 2),
/// + 4 eps_R (p = 2) or + 2(p-1) eps_R (p > 2).
inline SplittingReport nonlinear_splitting_check(const CompetitorConfig& cfg, const GridConfig& grid = {},
                                                 double rho = -1.0) {
    const ChoquardParams& prm = cfg.profiles->params();
    const CompetitorEnergy e = competitor_energy(cfg, PotentialSpec::constant(prm.V_inf), grid);
    SplittingReport s;
    const double base = static_cast<double>(cfg.ell()) * cfg.profiles->state->norm_sq;
    s.eps_R = e.eps_R;
    double extra;
    if (prm.regime == Regime::Subquadratic) {
        s.branch = "p<2";
        if (cfg.ell() > 1) {
            if (rho < 0.0) rho = detail::default_rho(cfg);
            for (std::size_t k = 0; k < cfg.ell(); ++k)
                for (std::size_t i = 0; i < cfg.ell(); ++i)
                    if (i != k) s.restricted_sum += restricted_diagonal(cfg, k, i, rho);
        }
        extra = prm.p * e.eps_R + prm.p * s.restricted_sum;
    } else if (prm.regime == Regime::Superquadratic) {
        s.branch = "p>2";
        extra = 2.0 * (prm.p - 1.0) * e.eps_R;
    } else {
        s.branch = "p=2";
        extra = 4.0 * e.eps_R;
    }
    s.lhs = base + e.delta_D;
    s.rhs = base + extra;
    s.difference = e.delta_D - extra;
    s.error_budget = e.grid_error + 1e-6 * (e.cross_radial + std::abs(extra));
    s.holds = s.difference >= -s.error_budget;
    return s;
}

// ---------------------------------------------------------------------------
// Interaction curve

struct InteractionSample {
    double R = 0.0;
    double eps = 0.0;
    double error = 0.0;   // estimator error bar, zero for quadrature
};

struct InteractionCurve {
    std::vector<InteractionSample> samples;
    DecayLaw fitted;
    DecayLaw predicted;
    double dev_a = 0.0, dev_b = 0.0, dev_c = 0.0;  // relative deviations
    bool agrees = false;
};

/// Fit options for eps_R along a ladder in R. Polynomial tails carry
/// relative corrections in even powers of 1/R; exponential ones in all powers.
inline LadderFitOptions interaction_fit_options(const DecayLaw& predicted) {
    LadderFitOptions o;
    o.exponential = predicted.b > 0.0;
    o.gamma = predicted.has_correction() ? predicted.gamma : 0.0;
    if (!o.exponential) o.nuisance_powers = {2.0, 4.0};
    else if (o.gamma > 0.0) o.nuisance_powers = {1.0};
    else o.nuisance_powers = {1.0, 2.0};
    return o;
}

inline double relative_deviation(double got, double want) {
    return want != 0.0 ? std::abs(got / want - 1.0) : std::abs(got);
}

/// eps_R on the ladder, fitted and compared with the predicted law: exponent
/// within 10% for p < 2, otherwise rate within 2% and correction within 10%.
inline InteractionCurve interaction_curve(const CompetitorConfig& cfg, const std::vector<double>& ladder) {
    InteractionCurve c;
    const InteractionProfiles& P = *cfg.profiles;
    c.predicted = predict_interaction(P.params(), cfg.min_unit_distance(), nu_constant(*P.state));
    std::vector<double> t, y;
    for (double R : ladder) {
        const double e = epsilon_R(at_radius(cfg, R));
        if (!(e > 0.0)) throw NonPositiveValues("interaction_curve: eps_R must be positive");
        c.samples.push_back({R, e, 0.0});
        t.push_back(R);
        y.push_back(e);
    }
    if (ladder.empty()) return c;
    c.fitted = fit_ladder(t, y, interaction_fit_options(c.predicted)).law;
    c.dev_a = relative_deviation(c.fitted.a, c.predicted.a);
    c.dev_b = relative_deviation(c.fitted.b, c.predicted.b);
    c.dev_c = c.predicted.has_correction() ? relative_deviation(c.fitted.c, c.predicted.c) : 0.0;
    if (c.predicted.b == 0.0) c.agrees = c.dev_a < 0.10;
    else c.agrees = c.dev_b < 0.02 && c.dev_c < 0.10;
    return c;
}

// ---------------------------------------------------------------------------
// Expansion report

struct ExpansionOptions {
    double slack = 0.1;                 // allowance on the ratio at finite R
    double av_limit = 0.05;             // A_V / eps_R bound at the largest R
    bool override_admissibility = false;
    double rho = -1.0;                  // restricted balls for p < 2; default 0.45 mu(Gz)
};

struct ExpansionRow {
    double R = 0.0;
    double eps_R = 0.0;
    double I_V = 0.0;
    double excess = 0.0;           // I_V - ell c_inf
    double A_V = 0.0;
    double ratio = 0.0;            // excess / eps_R
    double av_ratio = 0.0;         // A_V / eps_R
    double restricted_sum = 0.0;   // sum eps^{ki}_{kk}, p < 2
    double ratio_restricted = 0.0; // excess / restricted_sum, p < 2
    double T_R = 0.0;
    double grid_error = 0.0;
};

struct ExpansionReport {
    ChoquardParams params;
    PotentialSpec potential;
    std::size_t ell = 0;
    double mu_orbit = 0.0;
    double ell_c_inf = 0.0;
    double coef = 0.0;
    double slack = 0.0;
    double av_limit = 0.0;
    AdmissibilityVerdict admissibility;
    bool override_used = false;
    std::vector<ExpansionRow> rows;
    bool below_level = false;       // I_V < ell c_inf everywhere
    bool ratio_ok = false;          // ratio <= -coef + slack at the two largest R
    bool av_decreasing = false;
    bool av_small = false;
    bool verdict = false;
};

/// Coefficient of -eps_R in the expansion: 1/2 for p <= 2, (p-2)/(2p) above.
inline double expansion_coefficient(double p) {
    return p > 2.0 + kExactTol ? (p - 2.0) / (2.0 * p) : 0.5;
}

/// Recomputes the verdict fields from the rows.
inline void assess(ExpansionReport& rep) {
    const auto& r = rep.rows;
    rep.below_level = !r.empty();
    for (const auto& x : r) rep.below_level = rep.below_level && x.excess < 0.0;
    rep.ratio_ok = r.size() >= 2;
    for (std::size_t k = r.size() >= 2 ? r.size() - 2 : 0; k < r.size(); ++k)
        rep.ratio_ok = rep.ratio_ok && r[k].ratio <= -rep.coef + rep.slack;
    rep.av_decreasing = r.size() >= 2;
    for (std::size_t k = 1; k < r.size(); ++k) rep.av_decreasing = rep.av_decreasing && r[k].av_ratio < r[k - 1].av_ratio;
    if (rep.potential.A0 == 0.0) rep.av_decreasing = true;
    rep.av_small = !r.empty() && r.back().av_ratio < rep.av_limit;
    rep.verdict = rep.below_level && rep.ratio_ok && rep.av_decreasing && rep.av_small && rep.admissibility.admissible;
}

/// Competitor energies along the ladder (sorted ascending) for one potential.
inline ExpansionReport expansion_report(const CompetitorConfig& cfg, std::vector<double> ladder,
                                        const PotentialSpec& pot, const GridConfig& grid = {},
                                        const ExpansionOptions& opt = {}) {
    const InteractionProfiles& P = *cfg.profiles;
    ExpansionReport rep;
    rep.params = P.params();
    rep.potential = pot;
    rep.ell = cfg.ell();
    rep.mu_orbit = cfg.min_unit_distance();
    rep.coef = expansion_coefficient(rep.params.p);
    rep.slack = opt.slack;
    rep.av_limit = opt.av_limit;
    rep.ell_c_inf = static_cast<double>(rep.ell) * P.state->c_infinity;
    const MuResult mu = mu_G(cfg.group);
    rep.admissibility = check_potential(rep.params, pot, MuInput{mu.mu, "strata"}, nu_constant(*P.state));
    if (!rep.admissibility.admissible && !opt.override_admissibility)
        throw HypothesisViolated("expansion_report: potential is not admissible (" + rep.admissibility.theorem_branch + ")");
    rep.override_used = !rep.admissibility.admissible;
    std::sort(ladder.begin(), ladder.end());
    for (double R : ladder) {
        const CompetitorConfig c = at_radius(cfg, R);
        const CompetitorEnergy e = competitor_energy(c, pot, grid);
        ExpansionRow row;
        row.R = R;
        row.eps_R = e.eps_R;
        row.I_V = e.I_V;
        row.excess = e.excess;
        row.A_V = e.A_V;
        row.ratio = e.excess / e.eps_R;
        row.av_ratio = e.A_V / e.eps_R;
        row.T_R = e.T_R;
        row.grid_error = e.grid_error;
        if (rep.params.regime == Regime::Subquadratic) {
            const double rho = opt.rho > 0.0 ? opt.rho : detail::default_rho(c);
            for (std::size_t k = 0; k < c.ell(); ++k)
                for (std::size_t i = 0; i < c.ell(); ++i)
                    if (i != k) row.restricted_sum += restricted_diagonal(c, k, i, rho);
            row.ratio_restricted = e.excess / row.restricted_sum;
        }
        rep.rows.push_back(row);
    }
    assess(rep);
    return rep;
}

}  // namespace choquard
