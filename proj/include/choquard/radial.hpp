#pragma once

// Radial grids and profiles on R^N, radial integration, the two-center
// reduction of \int F(|x|) G(|x - xi|) dx, and tail fitting.

#include <gsl/gsl_interp.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "choquard/decay_law.hpp"
#include "choquard/errors.hpp"
#include "choquard/special.hpp"

namespace choquard {

// ---------------------------------------------------------------------------
// Grid

/// Parameters of a graded grid: spacing h0 up to r_uniform, then growing by
/// `ratio` per node up to h_max, until r_max.
struct GridSpec {
    int N = 3;
    double h0 = 0.02;
    double r_uniform = 5.0;
    double ratio = 1.02;
    double h_max = 0.1;
    double r_max = 60.0;
};

/// Nodes 0 = r_0 < ... < r_M with dual-cell weights.
///
/// Cell i is [e_i, e_{i+1}] with e_0 = 0, e_i = (r_{i-1} + r_i)/2 and
/// e_{M+1} = r_M; its weight is (e_{i+1}^N - e_i^N)/N, so the weights sum to
/// r_M^N/N.
class RadialGrid {
public:
    RadialGrid(int N, std::vector<double> nodes) : N_(N), r_(std::move(nodes)) {
        if (N_ < 1) throw InvalidGrid("RadialGrid: dimension must be positive");
        if (r_.size() < 3 || r_.front() != 0.0) throw InvalidGrid("RadialGrid: need r_0 = 0 and at least 3 nodes");
        for (std::size_t i = 1; i < r_.size(); ++i)
            if (!(r_[i] > r_[i - 1])) throw InvalidGrid("RadialGrid: nodes must be strictly increasing");
        const std::size_t M = r_.size() - 1;
        e_.resize(M + 2);
        e_[0] = 0.0;
        for (std::size_t i = 1; i <= M; ++i) e_[i] = 0.5 * (r_[i - 1] + r_[i]);
        e_[M + 1] = r_[M];
        w_.resize(M + 1);
        for (std::size_t i = 0; i <= M; ++i) w_[i] = (std::pow(e_[i + 1], N_) - std::pow(e_[i], N_)) / N_;
    }

    static RadialGrid graded(const GridSpec& g) {
        if (!(g.h0 > 0.0 && g.ratio >= 1.0 && g.h_max >= g.h0 && g.r_max > g.h0))
            throw InvalidGrid("RadialGrid: inconsistent grid spec");
        std::vector<double> r{0.0};
        double h = g.h0;
        while (r.back() < g.r_max - 1e-12) {
            if (r.back() >= g.r_uniform) h = std::min(h * g.ratio, g.h_max);
            r.push_back(std::min(r.back() + h, g.r_max));
            if (g.r_max - r.back() < 0.5 * h) r.back() = g.r_max;
        }
        return RadialGrid(g.N, std::move(r));
    }

    int dimension() const { return N_; }
    std::size_t size() const { return r_.size(); }
    std::size_t last() const { return r_.size() - 1; }
    double r_max() const { return r_.back(); }
    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& weights() const { return w_; }
    /// Cell edges e_0 .. e_{M+1}.
    const std::vector<double>& edges() const { return e_; }
    double node(std::size_t i) const { return r_[i]; }
    double weight(std::size_t i) const { return w_[i]; }

private:
    int N_;
    std::vector<double> r_, e_, w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(const GridSpec& g) { return std::make_shared<const RadialGrid>(RadialGrid::graded(g)); }

// ---------------------------------------------------------------------------
// Profile

namespace detail {

/// Immutable GSL interpolant over (x, y).
class Interpolant {
public:
    Interpolant(const std::vector<double>& x, const std::vector<double>& y, const gsl_interp_type* type)
        : x_(x), y_(y), interp_(gsl_interp_alloc(type, x.size()), gsl_interp_free) {
        gsl_interp_init(interp_.get(), x_.data(), y_.data(), x_.size());
    }
    double value(double x) const { return gsl_interp_eval(interp_.get(), x_.data(), y_.data(), x, nullptr); }
    double deriv(double x) const { return gsl_interp_eval_deriv(interp_.get(), x_.data(), y_.data(), x, nullptr); }

private:
    std::vector<double> x_, y_;
    std::unique_ptr<gsl_interp, void (*)(gsl_interp*)> interp_;
};

}  // namespace detail

/// Radial function sampled on a grid, extended by a DecayLaw beyond r_M.
///
/// Between nodes the profile is a cubic spline of log(value) when every
/// value is positive, otherwise a monotone (Steffen) spline of the values.
/// A tail with prefactor 0 means the profile vanishes beyond r_M.
class RadialProfile {
public:
    RadialProfile() = default;

    RadialProfile(GridPtr grid, std::vector<double> values, DecayLaw tail = zero_tail(), bool density = false)
        : grid_(std::move(grid)), v_(std::move(values)), tail_(tail), density_(density) {
        if (!grid_ || v_.size() != grid_->size()) throw InvalidGrid("RadialProfile: value count does not match grid");
        for (double x : v_)
            if (!std::isfinite(x)) throw InvalidGrid("RadialProfile: non-finite value");
        if (density_)
            for (double x : v_)
                if (x < 0.0) throw NonPositiveValues("RadialProfile: density must be nonnegative");
        build();
    }

    /// Point samples of f at the nodes.
    template <class F>
    static RadialProfile sample(GridPtr grid, F&& f, DecayLaw tail = zero_tail(), bool density = false) {
        std::vector<double> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
        return RadialProfile(std::move(grid), std::move(v), tail, density);
    }

    /// Cell averages of f against r^{N-1} dr; `breaks` lists discontinuities.
    ///
    /// The weighted sum of the averages reproduces \int_0^{r_M} f r^{N-1} dr
    /// up to the Gauss error on smooth pieces.
    template <class F>
    static RadialProfile project(GridPtr grid, F&& f, const std::vector<double>& breaks = {},
                                 DecayLaw tail = zero_tail(), bool density = false) {
        const int N = grid->dimension();
        const auto& e = grid->edges();
        std::vector<double> v(grid->size());
        auto g = [&](double r) { return f(r) * std::pow(r, N - 1); };
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::vector<double> cuts{e[i]};
            for (double b : breaks)
                if (b > e[i] && b < e[i + 1]) cuts.push_back(b);
            cuts.push_back(e[i + 1]);
            std::sort(cuts.begin(), cuts.end());
            double s = 0.0;
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) s += gauss_integrate(g, cuts[k], cuts[k + 1], 10);
            v[i] = s / grid->weight(i);
        }
        return RadialProfile(std::move(grid), std::move(v), tail, density);
    }

    static DecayLaw zero_tail() { return DecayLaw{0.0, 0.0, 0.0, 0.0, false, 0.0}; }

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& values() const { return v_; }
    double value_at_node(std::size_t i) const { return v_[i]; }
    const DecayLaw& tail() const { return tail_; }
    bool has_tail() const { return tail_.prefactor != 0.0; }
    bool is_density() const { return density_; }
    double tail_match_error() const { return tail_match_error_; }
    double r_max() const { return grid_->r_max(); }
    int dimension() const { return grid_->dimension(); }
    bool log_interpolated() const { return log_mode_; }

    double operator()(double r) const {
        r = std::abs(r);
        if (r > grid_->r_max()) return has_tail() ? tail_(r) : 0.0;
        if (log_mode_) return std::exp(interp_->value(r));
        return interp_->value(r);
    }

    double derivative(double r) const {
        const double sgn = r < 0.0 ? -1.0 : 1.0;
        r = std::abs(r);
        if (r > grid_->r_max()) return has_tail() ? sgn * tail_(r) * tail_.log_derivative(r) : 0.0;
        if (log_mode_) return sgn * std::exp(interp_->value(r)) * interp_->deriv(r);
        return sgn * interp_->deriv(r);
    }

    /// Same grid and values, new tail law.
    RadialProfile with_tail(const DecayLaw& tail) const { return RadialProfile(grid_, v_, tail, density_); }

private:
    void build() {
        log_mode_ = std::all_of(v_.begin(), v_.end(), [](double x) { return x > 0.0; });
        if (log_mode_) {
            std::vector<double> lv(v_.size());
            for (std::size_t i = 0; i < v_.size(); ++i) lv[i] = std::log(v_[i]);
            interp_ = std::make_shared<detail::Interpolant>(grid_->nodes(), lv, gsl_interp_cspline);
        } else {
            interp_ = std::make_shared<detail::Interpolant>(grid_->nodes(), v_, gsl_interp_steffen);
        }
        // mismatch between samples and tail law over the last 10% of nodes
        const std::size_t M = grid_->last();
        const std::size_t from = M - std::max<std::size_t>(1, M / 10);
        double vmax = 0.0;
        for (double x : v_) vmax = std::max(vmax, std::abs(x));
        tail_match_error_ = 0.0;
        for (std::size_t i = from; i <= M; ++i) {
            const double r = grid_->node(i);
            if (has_tail() && r > 0.0) {
                const double ref = std::abs(v_[i]) > 0.0 ? std::abs(v_[i]) : vmax;
                tail_match_error_ = std::max(tail_match_error_, std::abs(tail_(r) - v_[i]) / (ref > 0 ? ref : 1.0));
            } else if (!has_tail() && vmax > 0.0) {
                tail_match_error_ = std::max(tail_match_error_, std::abs(v_[i]) / vmax);
            }
        }
    }

    GridPtr grid_;
    std::vector<double> v_;
    DecayLaw tail_ = zero_tail();
    bool density_ = false;
    bool log_mode_ = false;
    double tail_match_error_ = 0.0;
    std::shared_ptr<const detail::Interpolant> interp_;
};

// ---------------------------------------------------------------------------
// Integration

/// \int_{r0}^\infty law(r) r^{N-1} dr; throws DivergentTail if infinite.
inline double tail_moment(const DecayLaw& law, int N, double r0) {
    if (law.prefactor == 0.0) return 0.0;
    if (!law.integrable(N)) throw DivergentTail("tail law is not integrable against r^{N-1}");
    if (law.b == 0.0 && !law.log_factor) return law.prefactor * std::pow(r0, law.a + N) / (-(law.a + N));
    return integrate_to_infinity([&](double r) { return law(r) * std::pow(r, N - 1); }, r0, 1e-13);
}

/// \int_{R^N} f(|x|) dx, including the tail beyond r_M.
inline double integrate_radial(const RadialProfile& f) {
    const RadialGrid& g = *f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weight(i) * f.value_at_node(i);
    s += tail_moment(f.tail(), g.dimension(), g.r_max());
    return sphere_area(g.dimension()) * s;
}

// ---------------------------------------------------------------------------
// Two-center reduction

/// Integration domain for the two-center quadrature in (s, t) = (|x|, |x - xi|).
struct TwoCenterDomain {
    std::vector<double> s_breaks;  // panel edges for s, last one is the cut-off
    std::vector<double> t_breaks;  // panel edges for t, last one is the cut-off
    std::size_t order = 10;        // Gauss points per panel
};

namespace detail {

/// Panel edges 0 < ... <= upper with widths clamp(rel r, h_min, h_cap).
inline std::vector<double> panel_breaks(double upper, double h_cap, const std::vector<double>& extra,
                                        double h_min = 0.25, double rel = 0.1) {
    std::vector<double> b{0.0};
    while (b.back() < upper) {
        const double r = b.back();
        const double h = std::min(h_cap, std::max(h_min, rel * r));
        b.push_back(std::min(upper, r + h));
    }
    for (double x : extra)
        if (x > 0.0 && x < upper) b.push_back(x);
    std::sort(b.begin(), b.end());
    std::vector<double> out{b.front()};
    for (std::size_t i = 1; i < b.size(); ++i)
        if (b[i] - out.back() > 1e-9 * std::max(1.0, b[i])) out.push_back(b[i]);
        else out.back() = std::max(out.back(), b[i]);
    return out;
}

/// Radius beyond which the profile can be dropped at separation d.
inline double cutoff_radius(const RadialProfile& f, double d) {
    const double base = std::max(f.r_max(), d);
    if (!f.has_tail()) return f.r_max();
    if (f.tail().b > 0.0) return base + 40.0 / f.tail().b;
    return 1e5 * std::max(base, 1.0);
}

inline double panel_cap(const RadialProfile& f) {
    if (f.has_tail() && f.tail().b > 0.0) return 1.5 / f.tail().b;
    return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Domain covering both profiles at separation d.
inline TwoCenterDomain two_center_domain(const RadialProfile& F, const RadialProfile& G, double d,
                                         std::size_t order = 10) {
    const double sF = detail::cutoff_radius(F, d), tG = detail::cutoff_radius(G, d);
    const double S = std::min(sF, d + tG), T = std::min(tG, d + sF);
    const double cap = std::min(detail::panel_cap(F), detail::panel_cap(G));
    TwoCenterDomain dom;
    dom.s_breaks = detail::panel_breaks(S, cap, {F.r_max(), d, 1.0});
    dom.t_breaks = detail::panel_breaks(T, cap, {G.r_max(), 1.0});
    dom.order = order;
    return dom;
}

/// \int_{R^N} f(|x|, |x - xi|) dx with |xi| = d > 0, for a callable f(s, t).
///
/// Uses dx = |S^{N-2}| s t rho^{N-3} / d ds dt on |s - t| <= d <= s + t,
/// rho being the distance of x from the axis; panels touching the ends of
/// the t-range use a square-root substitution that removes the endpoint
/// behaviour of rho^{N-3}.
template <class Fn>
double two_center_quad(int N, double d, Fn&& f, const TwoCenterDomain& dom) {
    if (N < 2) throw InvalidParams("two_center_quad: N must be at least 2");
    if (!(d > 0.0)) throw InvalidParams("two_center_quad: separation must be positive");
    const QuadRule& q = gauss_legendre01(dom.order);
    const double cS = sphere_area(N - 1) / d;
    const auto& tb = dom.t_breaks;
    const double T = tb.back();

    // rho^{N-3} split as outer(t) * ((t - lo)(hi - t))^{(N-3)/2}
    auto inner = [&](double s) {
        const double lo = std::abs(s - d), hi = s + d;
        const double top = std::min(hi, T);
        if (top <= lo) return 0.0;
        const bool hi_singular = hi <= T;
        const double ex = 0.5 * (N - 3);
        auto smooth = [&](double t) {
            return std::pow((s + t + d) * (t + lo), ex) / std::pow(2.0 * d, N - 3);
        };
        std::vector<double> cuts{lo};
        auto it = std::upper_bound(tb.begin(), tb.end(), lo);
        for (; it != tb.end() && *it < top; ++it)
            if (*it - cuts.back() > 1e-12 * (1.0 + *it)) cuts.push_back(*it);
        if (top - cuts.back() <= 1e-12 * (1.0 + top) && cuts.size() > 1) cuts.back() = top;
        else cuts.push_back(top);
        double sum = 0.0;
        const std::size_t P = cuts.size() - 1;
        if (P == 1 && hi_singular) {
            // t = m - h cos(theta): ((t-lo)(hi-t))^{1/2} = h sin(theta)
            const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
            for (std::size_t k = 0; k < q.size(); ++k) {
                const double th = kPi * q.x[k];
                const double t = m - h * std::cos(th);
                const double sn = std::sin(th);
                sum += q.w[k] * kPi * f(s, t) * t * smooth(t) * std::pow(h * sn, N - 2);
            }
            return sum * s;
        }
        for (std::size_t p = 0; p < P; ++p) {
            const double a = cuts[p], b = cuts[p + 1];
            const bool left = (p == 0), right = (p + 1 == P) && hi_singular;
            for (std::size_t k = 0; k < q.size(); ++k) {
                double t, jac;
                if (left) {
                    const double u = q.x[k];
                    t = a + (b - a) * u * u;
                    jac = 2.0 * (b - a) * u;
                } else if (right) {
                    const double u = q.x[k];
                    t = b - (b - a) * u * u;
                    jac = 2.0 * (b - a) * u;
                } else {
                    t = a + (b - a) * q.x[k];
                    jac = b - a;
                }
                const double prod = std::max(0.0, (t - lo) * (hi - t));
                double w = smooth(t);
                if (N != 3) w *= std::pow(prod, ex);
                sum += q.w[k] * jac * f(s, t) * t * w;
            }
        }
        return sum * s;
    };

    const auto& sb = dom.s_breaks;
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < sb.size(); ++p) {
        const double a = sb[p], b = sb[p + 1];
        for (std::size_t k = 0; k < q.size(); ++k) total += q.w[k] * (b - a) * inner(a + (b - a) * q.x[k]);
    }
    return cS * total;
}

/// \int_{R^N} F(|x|) G(|x - xi|) dx with |xi| = d.
inline double two_center_integral(const RadialProfile& F, const RadialProfile& G, double d,
                                  std::size_t order = 10) {
    if (F.dimension() != G.dimension()) throw InvalidGrid("two_center_integral: dimension mismatch");
    if (d < 0.0) throw InvalidParams("two_center_integral: negative separation");
    const int N = F.dimension();
    if (F.has_tail() && G.has_tail() && !(F.tail() * G.tail()).integrable(N))
        throw DivergentTail("two_center_integral: product of the tails is not integrable");
    if (d == 0.0) {
        // coincident centres: 1-D product integral
        const double cut = std::min(detail::cutoff_radius(F, 0.0), detail::cutoff_radius(G, 0.0));
        const double cap = std::min(detail::panel_cap(F), detail::panel_cap(G));
        auto b = detail::panel_breaks(cut, cap, {F.r_max(), G.r_max(), 1.0});
        double s = 0.0;
        for (std::size_t p = 0; p + 1 < b.size(); ++p)
            s += gauss_integrate([&](double r) { return F(r) * G(r) * std::pow(r, N - 1); }, b[p], b[p + 1], order);
        return sphere_area(N) * s;
    }
    const TwoCenterDomain dom = two_center_domain(F, G, d, order);
    return two_center_quad(N, d, [&](double s, double t) { return F(s) * G(t); }, dom);
}

// ---------------------------------------------------------------------------
// Tail fitting

struct TailFitOptions {
    double window_fraction = 0.3;     // trailing share of nodes used for the fit
    double boundary_margin = 0.0;     // length excluded before r_M
    std::vector<double> gamma_candidates{0.5};
    std::size_t min_points = 20;
    double poly_threshold = 0.5;      // b (t_max - t_min) below this means polynomial
    double corr_rss_gain = 0.05;      // correction must cut the residual by this factor
    double corr_min_effect = 0.05;    // and change log f by at least this much
};

struct TailFit {
    DecayLaw law;
    std::string model;                // "polynomial", "exponential" or "corrected"
    double rss = 0.0;
    double condition = 0.0;
    double tail_match_error = 0.0;    // max relative mismatch on the last 10% of samples
    double t_min = 0.0, t_max = 0.0;
    std::size_t points = 0;
};

namespace detail {

struct LinearFit {
    Eigen::VectorXd coef;
    double rss = 0.0;
    double condition = 0.0;
};

/// Least squares y ~ X beta with column equilibration.
inline LinearFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::VectorXd scale(X.cols());
    for (int j = 0; j < X.cols(); ++j) scale(j) = X.col(j).norm() > 0 ? X.col(j).norm() : 1.0;
    Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    LinearFit out;
    out.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (out.condition > 1e12) throw IllConditionedFit("tail regression condition number exceeds 1e12");
    Eigen::VectorXd bs = svd.solve(y);
    out.coef = bs.cwiseQuotient(scale);
    out.rss = (X * out.coef - y).squaredNorm();
    return out;
}

}  // namespace detail

/// Fit log y = log C + a log t - b t + c t^gamma on the samples (t, y).
///
/// The polynomial model is chosen when the fitted exponential rate is
/// negligible over the window; a correction t^gamma is kept only when it
/// substantially lowers the residual and visibly changes log y.
inline TailFit fit_tail(const std::vector<double>& t, const std::vector<double>& y,
                        const TailFitOptions& opt = {}) {
    const std::size_t n = t.size();
    if (n != y.size() || n < opt.min_points) throw InvalidGrid("fit_tail: need at least min_points samples");
    for (double v : y)
        if (!(v > 0.0)) throw NonPositiveValues("fit_tail: samples must be positive");
    Eigen::VectorXd ly(n), lt(n), tt(n), one = Eigen::VectorXd::Ones(n);
    for (std::size_t i = 0; i < n; ++i) {
        ly(i) = std::log(y[i]);
        lt(i) = std::log(t[i]);
        tt(i) = t[i];
    }
    const double tmin = *std::min_element(t.begin(), t.end()), tmax = *std::max_element(t.begin(), t.end());
    auto design = [&](std::initializer_list<const Eigen::VectorXd*> cols) {
        Eigen::MatrixXd X(n, cols.size());
        int j = 0;
        for (const Eigen::VectorXd* c : cols) X.col(j++) = *c;
        return X;
    };

    TailFit out;
    out.t_min = tmin;
    out.t_max = tmax;
    out.points = n;
    const detail::LinearFit E = detail::least_squares(design({&one, &lt, &tt}), ly);
    const double bE = -E.coef(2);
    if (bE * (tmax - tmin) < opt.poly_threshold) {
        const detail::LinearFit P = detail::least_squares(design({&one, &lt}), ly);
        out.law = DecayLaw::polynomial(P.coef(1), std::exp(P.coef(0)));
        out.model = "polynomial";
        out.rss = P.rss;
        out.condition = P.condition;
    } else {
        out.law = DecayLaw::exponential(E.coef(1), bE, 0.0, 0.0, std::exp(E.coef(0)));
        out.model = "exponential";
        out.rss = E.rss;
        out.condition = E.condition;
        const double floor = 1e-24 * n * (1.0 + ly.squaredNorm() / n);
        double best = E.rss;
        for (double g : opt.gamma_candidates) {
            if (!(g > 0.0 && g < 1.0)) continue;
            Eigen::VectorXd tg(n);
            for (std::size_t i = 0; i < n; ++i) tg(i) = std::pow(t[i], g);
            detail::LinearFit C;
            try {
                C = detail::least_squares(design({&one, &lt, &tt, &tg}), ly);
            } catch (const IllConditionedFit&) {
                continue;
            }
            const double effect = std::abs(C.coef(3)) * (std::pow(tmax, g) - std::pow(tmin, g));
            if (E.rss > floor && C.rss < opt.corr_rss_gain * best && effect > opt.corr_min_effect &&
                -C.coef(2) > 0.0) {
                best = C.rss;
                out.law = DecayLaw::exponential(C.coef(1), -C.coef(2), C.coef(3), g, std::exp(C.coef(0)));
                out.model = "corrected";
                out.rss = C.rss;
                out.condition = C.condition;
            }
        }
    }
    const std::size_t from = n - std::max<std::size_t>(1, n / 10);
    for (std::size_t i = from; i < n; ++i)
        out.tail_match_error = std::max(out.tail_match_error, std::abs(out.law(t[i]) / y[i] - 1.0));
    return out;
}

/// Indices of the fit window: the trailing fraction of nodes, minus the margin.
inline std::vector<std::size_t> tail_window(const RadialGrid& g, double fraction, double margin,
                                            std::size_t min_points) {
    const double rcut = g.r_max() - margin;
    std::size_t hi = g.last();
    while (hi > 0 && g.node(hi) > rcut) --hi;
    const std::size_t count = std::max<std::size_t>(min_points, static_cast<std::size_t>(fraction * g.size()));
    if (hi + 1 < count + 1) throw InvalidGrid("tail_window: grid too small for the requested window");
    std::vector<std::size_t> idx;
    for (std::size_t i = hi + 1 - count; i <= hi; ++i) idx.push_back(i);
    return idx;
}

/// Tail fit of a profile on its trailing window.
inline TailFit fit_profile_tail(const RadialProfile& f, const TailFitOptions& opt = {}) {
    const RadialGrid& g = *f.grid();
    const auto idx = tail_window(g, opt.window_fraction, opt.boundary_margin, opt.min_points);
    std::vector<double> t, y;
    for (std::size_t i : idx) {
        t.push_back(g.node(i));
        y.push_back(f.value_at_node(i));
    }
    return fit_tail(t, y, opt);
}

/// Fits on three window fractions around the configured one.
inline std::vector<TailFit> tail_sensitivity(const RadialProfile& f, const TailFitOptions& opt = {}) {
    std::vector<TailFit> out;
    for (double scale : {2.0 / 3.0, 1.0, 4.0 / 3.0}) {
        TailFitOptions o = opt;
        o.window_fraction = opt.window_fraction * scale;
        out.push_back(fit_profile_tail(f, o));
    }
    return out;
}

}  // namespace choquard
