#pragma once

// Special functions and fixed quadrature tables shared by every module.

#include <boost/math/special_functions/digamma.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <type_traits>
#include <vector>

#include "choquard/errors.hpp"

namespace choquard {

inline constexpr double kPi = std::numbers::pi;

/// Surface measure |S^{n-1}| of the unit sphere in R^n (n >= 1).
inline double sphere_area(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Nodes and weights of a fixed rule on a reference interval.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

namespace detail {

inline QuadRule gsl_fixed_rule(const gsl_integration_fixed_type* type, std::size_t n,
                               double a, double b, double alpha, double beta) {
    gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(type, n, a, b, alpha, beta);
    if (!ws) throw Error("gsl_integration_fixed_alloc failed");
    QuadRule rule;
    const double* xs = gsl_integration_fixed_nodes(ws);
    const double* ws_ = gsl_integration_fixed_weights(ws);
    rule.x.assign(xs, xs + n);
    rule.w.assign(ws_, ws_ + n);
    gsl_integration_fixed_free(ws);
    return rule;
}

}  // namespace detail

/// Gauss-Legendre rule on [0, 1]; tables are cached and shared.
inline const QuadRule& gauss_legendre01(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<QuadRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<QuadRule>(
            detail::gsl_fixed_rule(gsl_integration_fixed_legendre, n, 0.0, 1.0, 0.0, 0.0));
    return *slot;
}

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
inline const QuadRule& gauss_jacobi(std::size_t n, double alpha, double beta) {
    static std::mutex mu;
    static std::map<std::tuple<std::size_t, double, double>, std::unique_ptr<QuadRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, alpha, beta}];
    if (!slot)
        // GSL's Jacobi weight is (b-x)^alpha (x-a)^beta on [a, b].
        slot = std::make_unique<QuadRule>(
            detail::gsl_fixed_rule(gsl_integration_fixed_jacobi, n, -1.0, 1.0, alpha, beta));
    return *slot;
}

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double gauss_integrate(F&& f, double a, double b, std::size_t n = 8) {
    const QuadRule& q = gauss_legendre01(n);
    const double h = b - a;
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) s += q.w[k] * f(a + h * q.x[k]);
    return s * h;
}

namespace detail {

template <class F>
double gsl_trampoline(double x, void* p) {
    return (*static_cast<F*>(p))(x);
}

inline gsl_integration_workspace* adaptive_workspace() {
    thread_local std::unique_ptr<gsl_integration_workspace, void (*)(gsl_integration_workspace*)> ws(
        gsl_integration_workspace_alloc(4096), gsl_integration_workspace_free);
    return ws.get();
}

inline void silence_gsl() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

}  // namespace detail

/// Adaptive integral over [a, b] tolerating integrable endpoint singularities.
template <class F>
double integrate_adaptive(F f, double a, double b, double rel = 1e-12, double abs_tol = 0.0) {
    detail::silence_gsl();
    if (b <= a) return 0.0;
    gsl_function gf{&detail::gsl_trampoline<F>, &f};
    double res = 0.0, err = 0.0;
    gsl_integration_qags(&gf, a, b, abs_tol, rel, 4096, detail::adaptive_workspace(), &res, &err);
    return res;
}

/// Adaptive integral over [a, infinity).
template <class F>
double integrate_to_infinity(F f, double a, double rel = 1e-12, double abs_tol = 0.0) {
    detail::silence_gsl();
    gsl_function gf{&detail::gsl_trampoline<F>, &f};
    double res = 0.0, err = 0.0;
    gsl_integration_qagiu(&gf, a, abs_tol, rel, 4096, detail::adaptive_workspace(), &res, &err);
    return res;
}

/// Composite Gauss integral over [a, b] graded geometrically toward the
/// point c, where the integrand may have an integrable singularity.
///
/// Pieces halve toward c until they reach max(min_len, distance to c).
template <class F>
double graded_integrate(F&& f, double a, double b, double c, double min_len, std::size_t n = 8) {
    if (b <= a) return 0.0;
    // grade [lo, hi] toward its end e = lo (toward_lo) or hi; gap = |e - c|
    auto grade = [&](double lo, double hi, bool toward_lo, double gap) {
        const double stop = std::max(min_len, gap);
        double s = 0.0, len = hi - lo;
        double e = toward_lo ? lo : hi;
        double far = toward_lo ? hi : lo;
        while (len > stop) {
            len *= 0.5;
            const double mid = toward_lo ? e + len : e - len;
            s += toward_lo ? gauss_integrate(f, mid, far, n) : gauss_integrate(f, far, mid, n);
            far = mid;
        }
        s += toward_lo ? gauss_integrate(f, e, far, n) : gauss_integrate(f, far, e, n);
        return s;
    };
    if (c > a && c < b) return grade(a, c, false, 0.0) + grade(c, b, true, 0.0);
    if (c <= a) return grade(a, b, true, a - c);
    return grade(a, b, false, c - b);
}

namespace detail {

inline bool near_integer(double x, double tol = 1e-12) {
    return std::abs(x - std::round(x)) <= tol * std::max(1.0, std::abs(x));
}

/// Plain Gauss series; caller guarantees |z| <= 1/2 or a terminating series.
inline double hyp2f1_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 20000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0) break;
        if (std::abs(term) < 1e-17 * std::abs(sum) && n > 2) break;
    }
    return sum;
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) for real 0 <= z < 1.
///
/// Requires c > 0, c - a > 0 and c - b > 0 (the parameter family of the
/// spherical mean of a Riesz kernel). Uses the direct series for z <= 1/2
/// and the linear 1-z transformation otherwise, including the logarithmic
/// forms for integer c - a - b.
inline double hyp2f1(double a, double b, double c, double z) {
    if (z < 0.0 || z >= 1.0) throw OutOfRange("hyp2f1: z must lie in [0, 1)");
    const bool b_poly = b <= 0.0 && detail::near_integer(b);
    const bool a_poly = a <= 0.0 && detail::near_integer(a);
    if (z <= 0.5 || a_poly || b_poly) return detail::hyp2f1_series(a, b, c, z);

    const double w = 1.0 - z;
    const double m = c - a - b;
    using boost::math::digamma;
    if (!detail::near_integer(m, 1e-10)) {
        const double f1 = detail::hyp2f1_series(a, b, 1.0 - m, w);
        const double f2 = detail::hyp2f1_series(c - a, c - b, m + 1.0, w);
        const double g1 = std::tgamma(c) * std::tgamma(m) / (std::tgamma(c - a) * std::tgamma(c - b));
        const double g2 = std::tgamma(c) * std::tgamma(-m) / (std::tgamma(a) * std::tgamma(b));
        return g1 * f1 + g2 * std::pow(w, m) * f2;
    }
    const int mi = static_cast<int>(std::lround(m));
    if (mi < 0) throw OutOfRange("hyp2f1: c - a - b must not be a negative integer");
    const double lw = std::log(w);
    if (mi == 0) {
        const double pref = std::tgamma(a + b) / (std::tgamma(a) * std::tgamma(b));
        double coef = 1.0, wn = 1.0, sum = 0.0;
        for (int n = 0; n < 20000; ++n) {
            const double t = coef * wn *
                             (2.0 * digamma(n + 1.0) - digamma(a + n) - digamma(b + n) - lw);
            sum += t;
            if (std::abs(t) < 1e-17 * std::abs(sum) && n > 2) break;
            coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0));
            wn *= w;
        }
        return pref * sum;
    }
    // c = a + b + m with m a positive integer.
    double finite = 0.0;
    {
        double coef = 1.0, wn = 1.0;
        for (int n = 0; n < mi; ++n) {
            finite += coef * wn;
            coef *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - mi + n));
            wn *= w;
        }
        finite *= std::tgamma(static_cast<double>(mi)) * std::tgamma(c) /
                  (std::tgamma(a + mi) * std::tgamma(b + mi));
    }
    double logsum = 0.0;
    {
        double coef = 1.0 / std::tgamma(mi + 1.0), wn = 1.0;
        for (int n = 0; n < 20000; ++n) {
            const double t = coef * wn *
                             (lw - digamma(n + 1.0) - digamma(n + mi + 1.0) + digamma(a + n + mi) +
                              digamma(b + n + mi));
            logsum += t;
            if (std::abs(t) < 1e-17 * std::abs(logsum) && n > 2) break;
            coef *= (a + mi + n) * (b + mi + n) / ((n + 1.0) * (n + mi + 1.0));
            wn *= w;
        }
        const double sign = (mi % 2 == 0) ? 1.0 : -1.0;
        logsum *= sign * std::pow(w, mi) * std::tgamma(c) / (std::tgamma(a) * std::tgamma(b));
    }
    return finite - logsum;
}

/// Spherical mean kernel K(r, s) = \int_{S^{N-1}} |r e_1 - s theta|^{alpha-N} dtheta.
///
/// K is symmetric in (r, s); it diverges at r = s when alpha <= 1.
inline double shell_kernel(int N, double alpha, double r, double s) {
    const double R = std::max(r, s);
    const double q = std::min(r, s);
    if (R <= 0.0) return std::numeric_limits<double>::infinity();
    const double lam = N - alpha;
    const double area = sphere_area(N);
    const double rho = q / R;
    if (rho >= 1.0) {
        if (alpha <= 1.0) return std::numeric_limits<double>::infinity();
        const double a = 0.5 * lam, b = 1.0 - 0.5 * alpha, c = 0.5 * N;
        if (b <= 0.0 && detail::near_integer(b)) return area * std::pow(R, -lam) * detail::hyp2f1_series(a, b, c, 1.0);
        return area * std::pow(R, -lam) * std::tgamma(c) * std::tgamma(c - a - b) /
               (std::tgamma(c - a) * std::tgamma(c - b));
    }
    if (N == 3 && rho > 0.5) {
        // closed form of the angular integral in three dimensions
        const double d = R - q, sum = R + q;
        if (std::abs(alpha - 1.0) < 1e-14) return 2.0 * kPi / (r * s) * std::log(sum / d);
        return 2.0 * kPi / ((alpha - 1.0) * r * s) * (std::pow(sum, alpha - 1.0) - std::pow(d, alpha - 1.0));
    }
    return area * std::pow(R, -lam) * hyp2f1(0.5 * lam, 1.0 - 0.5 * alpha, 0.5 * N, rho * rho);
}

}  // namespace choquard
