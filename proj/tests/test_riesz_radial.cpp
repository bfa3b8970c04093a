#include <gtest/gtest.h>

#include <cmath>

#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"

using namespace choquard;

namespace {

GridPtr fine_grid(int N, double r_max = 30.0) {
    GridSpec g;
    g.N = N;
    g.h0 = 0.01;
    g.r_uniform = 2.0;
    g.ratio = 1.02;
    g.h_max = 0.1;
    g.r_max = r_max;
    return make_grid(g);
}

}  // namespace

TEST(Riesz, ConstantMatchesNewtonKernel) {
    // I_2 in R^3 is the Newtonian kernel 1/(4 pi |x|)
    EXPECT_NEAR(riesz_constant(3, 2.0), 1.0 / (4.0 * kPi), 1e-15);
    // I_1 in R^3: Gamma(1)/(Gamma(1/2) 2 pi^{3/2}) = 1/(2 pi^2)
    EXPECT_NEAR(riesz_constant(3, 1.0), 1.0 / (2.0 * kPi * kPi), 1e-15);
    EXPECT_THROW(riesz_constant(3, 3.0), OutOfRange);
}

TEST(Radial, WeightsSumToBallVolume) {
    const GridPtr g = fine_grid(3);
    double s = 0.0;
    for (double w : g->weights()) s += w;
    EXPECT_NEAR(s, std::pow(g->r_max(), 3) / 3.0, 1e-9);
}

TEST(Radial, GaussianMass) {
    const GridPtr g = fine_grid(3);
    const RadialProfile f = RadialProfile::project(g, [](double r) { return std::exp(-r * r); });
    EXPECT_NEAR(integrate_radial(f), std::pow(kPi, 1.5), 1e-9);
}

TEST(Riesz, NewtonPotentialOfGaussian) {
    // I_2 * exp(-|y|^2) in R^3 equals pi^{3/2} erf(r) / (4 pi r)
    auto worst_error = [](double h0) {
        GridSpec spec;
        spec.N = 3;
        spec.h0 = h0;
        spec.r_uniform = 2.0;
        spec.ratio = 1.02;
        spec.h_max = 0.1;
        spec.r_max = 30.0;
        const GridPtr g = make_grid(spec);
        const RadialProfile f =
            RadialProfile::project(g, [](double r) { return std::exp(-r * r); }, {}, RadialProfile::zero_tail(), true);
        const RadialProfile phi = riesz_convolve_radial(RieszKernel(3, 2.0), f);
        double worst = 0.0;
        for (std::size_t i = 1; i < g->size(); ++i) {
            const double r = g->node(i);
            const double exact = std::pow(kPi, 1.5) * std::erf(r) / (4.0 * kPi * r);
            worst = std::max(worst, std::abs(phi.value_at_node(i) / exact - 1.0));
        }
        return std::make_pair(worst, phi);
    };
    const auto [coarse, phi] = worst_error(0.01);
    const double fine = worst_error(0.005).first;
    EXPECT_LT(coarse, 5e-5);
    // piecewise-linear collocation converges at second order in h
    EXPECT_NEAR(coarse / fine, 4.0, 0.5);
    // beyond r_M the tail is the Coulomb law of the full mass
    EXPECT_NEAR(phi(100.0) * 100.0 * 4.0 * kPi, std::pow(kPi, 1.5), 1e-8);
}

TEST(Riesz, GridMatchesRadialForGaussian) {
    const RieszKernel K(3, 2.0);
    GridField f(3, 6.0, 64);
    f.fill([](const std::array<double, 3>& x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
    const GridField out = riesz_convolve_grid(K, f, 1e-12);
    double worst = 0.0;
    for (std::size_t k = 0; k < out.size(); k += 97) {
        const auto ix = out.index(k);
        const double x = out.coord(ix[0]), y = out.coord(ix[1]), z = out.coord(ix[2]);
        const double r = std::sqrt(x * x + y * y + z * z);
        if (r < 0.5) continue;
        const double exact = std::pow(kPi, 1.5) * std::erf(r) / (4.0 * kPi * r);
        worst = std::max(worst, std::abs(out.values[k] / exact - 1.0));
    }
    EXPECT_LT(worst, 1e-2);
}

TEST(Riesz, GridRejectsFieldOnOuterShell) {
    GridField f(3, 2.0, 16);
    f.fill([](const std::array<double, 3>&) { return 1.0; });
    EXPECT_THROW(riesz_convolve_grid(RieszKernel(3, 2.0), f), PaddingInsufficient);
}

TEST(Riesz, DivergentTailRejected) {
    const GridPtr g = fine_grid(3);
    const RadialProfile f = RadialProfile::sample(g, [](double r) { return std::pow(1.0 + r, -2.0); },
                                                  DecayLaw::polynomial(-2.0), true);
    EXPECT_THROW(riesz_convolve_radial(RieszKernel(3, 2.0), f), DivergentTail);
}

TEST(Radial, TwoCenterGaussians) {
    // \int exp(-|x|^2) exp(-|x - d|^2) dx = (pi/2)^{3/2} exp(-d^2/2)
    const GridPtr g = fine_grid(3);
    const RadialProfile f = RadialProfile::sample(g, [](double r) { return std::exp(-r * r); });
    for (double d : {0.5, 2.0, 5.0}) {
        const double exact = std::pow(kPi / 2.0, 1.5) * std::exp(-0.5 * d * d);
        // interpolation error of the sampled profile is relative to its peak, not to exact
        EXPECT_NEAR(two_center_integral(f, f, d) / exact, 1.0, d < 4.0 ? 1e-6 : 1e-4) << "d = " << d;
    }
}

TEST(Radial, TwoCenterExponentials) {
    // \int e^{-|x|} e^{-|x - d|} dx = pi e^{-d} (1 + d + d^2/3) in R^3
    const GridPtr g = fine_grid(3, 60.0);
    const RadialProfile f = RadialProfile::sample(g, [](double r) { return std::exp(-r); }, DecayLaw::exponential(0.0, 1.0));
    for (double d : {1.0, 4.0, 10.0}) {
        const double exact = kPi * std::exp(-d) * (1.0 + d + d * d / 3.0);
        EXPECT_NEAR(two_center_integral(f, f, d) / exact, 1.0, 1e-5) << "d = " << d;
    }
}

TEST(Radial, TailFitRecoversExponentialLaw) {
    std::vector<double> t, y;
    for (int k = 0; k < 200; ++k) {
        const double r = 10.0 + 0.2 * k;
        t.push_back(r);
        y.push_back(3.0 * std::pow(r, -1.5) * std::exp(-0.7 * r));
    }
    const TailFit fit = fit_tail(t, y);
    EXPECT_EQ(fit.model, "exponential");
    EXPECT_NEAR(fit.law.b, 0.7, 1e-8);
    EXPECT_NEAR(fit.law.a, -1.5, 1e-6);
}
