#pragma once

// Tail model t^a (log t)^{[log]} exp(-b t + c t^gamma), times a prefactor.

#include <cmath>
#include <sstream>
#include <string>

#include "choquard/errors.hpp"

namespace choquard {

struct DecayLaw {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double gamma = 0.0;
    bool log_factor = false;
    double prefactor = 1.0;

    static DecayLaw polynomial(double a, double pref = 1.0) { return {a, 0.0, 0.0, 0.0, false, pref}; }
    static DecayLaw exponential(double a, double b, double c = 0.0, double gamma = 0.0,
                                double pref = 1.0) {
        return {a, b, c, gamma, false, pref};
    }

    bool is_polynomial() const { return b == 0.0; }
    /// A correction that actually changes the decay: c t^gamma with gamma > 0.
    bool has_correction() const { return c != 0.0 && gamma > 0.0; }

    /// log of the law without the prefactor; requires t > 1 when log_factor is set.
    double log_shape(double t) const {
        double v = a * std::log(t) - b * t + c * std::pow(t, gamma);
        if (log_factor) v += std::log(std::log(t));
        return v;
    }
    double operator()(double t) const { return prefactor * std::exp(log_shape(t)); }

    /// d/dt log of the law.
    double log_derivative(double t) const {
        double d = a / t - b + c * gamma * std::pow(t, gamma - 1.0);
        if (log_factor) d += 1.0 / (t * std::log(t));
        return d;
    }

    /// Whether \int^\infty law(r) r^{N-1} dr converges.
    bool integrable(int N) const {
        if (b > 0.0) return true;
        if (b < 0.0) return false;
        return a + N < 0.0;
    }

    /// Throws if the invariants of the model are broken.
    void validate() const {
        if (!(b >= 0.0)) throw InvalidParams("DecayLaw: b must be nonnegative");
        if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidParams("DecayLaw: gamma must lie in [0,1)");
        if (b == 0.0 && c != 0.0) throw InvalidParams("DecayLaw: polynomial laws carry no correction");
    }

    std::string str() const {
        std::ostringstream os;
        os << "t^" << a;
        if (log_factor) os << " log t";
        if (b != 0.0 || c != 0.0) os << " exp(-" << b << " t + " << c << " t^" << gamma << ")";
        return os.str();
    }
};

/// Pointwise product of two laws; corrections must share gamma (or vanish).
inline DecayLaw operator*(const DecayLaw& u, const DecayLaw& v) {
    DecayLaw w;
    w.a = u.a + v.a;
    w.b = u.b + v.b;
    w.prefactor = u.prefactor * v.prefactor;
    if (u.log_factor && v.log_factor) throw UncoveredCase("product of two logarithmic laws");
    w.log_factor = u.log_factor || v.log_factor;
    const bool cu = u.has_correction(), cv = v.has_correction();
    if (cu && cv && u.gamma != v.gamma) throw UncoveredCase("product of laws with distinct corrections");
    w.c = (cu ? u.c : 0.0) + (cv ? v.c : 0.0);
    w.gamma = cu ? u.gamma : (cv ? v.gamma : 0.0);
    if (w.c == 0.0) w.gamma = 0.0;
    return w;
}

/// Law of u^q for q > 0.
inline DecayLaw pow(const DecayLaw& u, double q) {
    if (u.log_factor) throw UncoveredCase("power of a logarithmic law");
    DecayLaw w = u;
    w.a *= q;
    w.b *= q;
    w.c *= q;
    w.prefactor = std::pow(u.prefactor, q);
    return w;
}

/// Asymptotic order: negative if u decays strictly faster than v, zero if
/// the laws agree up to the prefactor, positive otherwise.
///
/// Keys in order: b (larger is faster), the correction c t^gamma, a, log.
inline int compare_decay(const DecayLaw& u, const DecayLaw& v) {
    if (u.b != v.b) return u.b > v.b ? -1 : 1;
    const double cu = u.has_correction() ? u.c : 0.0, gu = cu != 0.0 ? u.gamma : 0.0;
    const double cv = v.has_correction() ? v.c : 0.0, gv = cv != 0.0 ? v.gamma : 0.0;
    // sign of (cu t^gu - cv t^gv) at infinity
    int corr = 0;
    if (gu == gv) {
        corr = (cu > cv) - (cu < cv);
    } else if (gu > gv) {
        corr = (cu > 0.0) - (cu < 0.0);
    } else {
        corr = (cv < 0.0) - (cv > 0.0);
    }
    if (corr != 0) return corr;
    if (u.a != v.a) return u.a > v.a ? 1 : -1;
    if (u.log_factor != v.log_factor) return u.log_factor ? 1 : -1;
    return 0;
}

}  // namespace choquard
