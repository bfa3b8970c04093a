#include <gtest/gtest.h>

#include <cmath>

#include "choquard/asymptotics.hpp"

using namespace choquard;

TEST(DecayLaw, ProductAndPower) {
    const DecayLaw u = DecayLaw::exponential(-1.0, 1.0, 2.0, 0.5, 3.0);
    const DecayLaw sq = pow(u, 2.0);
    EXPECT_DOUBLE_EQ(sq.a, -2.0);
    EXPECT_DOUBLE_EQ(sq.b, 2.0);
    EXPECT_DOUBLE_EQ(sq.c, 4.0);
    EXPECT_DOUBLE_EQ(sq.prefactor, 9.0);
    EXPECT_NEAR(sq(7.0), u(7.0) * u(7.0), 1e-12 * sq(7.0));
    EXPECT_LT(compare_decay(DecayLaw::exponential(5.0, 1.0), DecayLaw::polynomial(-50.0)), 0);
    EXPECT_GT(compare_decay(DecayLaw::polynomial(-2.0), DecayLaw::polynomial(-3.0)), 0);
}

TEST(Products, EqualExponentialRatesMatchClosedForm) {
    // \int e^{-|x|} e^{-|x - d|} dx = pi e^{-d} (1 + d + d^2/3) ~ (pi/3) d^2 e^{-d} in R^3
    const ProductPrediction p = predict_product_integral(DecayLaw::exponential(0.0, 1.0), DecayLaw::exponential(0.0, 1.0), 3);
    EXPECT_DOUBLE_EQ(p.law.a, 2.0);
    EXPECT_DOUBLE_EQ(p.law.b, 1.0);
    EXPECT_FALSE(p.law.log_factor);
}

TEST(Products, IntegrableFactorLeavesSlowerLaw) {
    EXPECT_THROW(predict_product_integral(DecayLaw::polynomial(-4.0), DecayLaw::exponential(0.0, 1.0), 3),
                 UncoveredCase);
    const ProductPrediction q =
        predict_product_integral(DecayLaw::exponential(-1.0, 1.0), DecayLaw::exponential(-1.0, 2.0), 3);
    EXPECT_DOUBLE_EQ(q.law.a, -1.0);
    EXPECT_DOUBLE_EQ(q.law.b, 1.0);
}

TEST(Products, LogarithmicThreshold) {
    // equal rates with a + a' = -(N+1)/2 produce t^{a} log t
    const ProductPrediction p =
        predict_product_integral(DecayLaw::exponential(-1.0, 1.0), DecayLaw::exponential(-1.0, 1.0), 3);
    EXPECT_FALSE(p.law.log_factor);
    const ProductPrediction q =
        predict_product_integral(DecayLaw::exponential(-1.0, 1.0), DecayLaw::exponential(-2.0, 1.0), 3);
    EXPECT_TRUE(q.law.log_factor);
    EXPECT_DOUBLE_EQ(q.law.b, 1.0);
}

TEST(Products, EqualCorrectionsCombine) {
    // c~ = (c^{1/(1-g)} + c'^{1/(1-g)})^{1-g}
    const DecayLaw u = DecayLaw::exponential(-2.0, 1.0, 2.0, 0.5);
    const ProductPrediction p = predict_product_integral(u, u, 3);
    EXPECT_NEAR(p.law.c, std::sqrt(8.0), 1e-12);
    EXPECT_DOUBLE_EQ(p.law.gamma, 0.5);
}

TEST(Ladder, RecoversCorrectedLaw) {
    const std::vector<double> t = geometric_ladder(10.0, 80.0, 8);
    std::vector<double> y;
    for (double x : t) y.push_back(2.0 * std::pow(x, -1.5) * std::exp(-0.8 * x + 0.9 * std::sqrt(x)) * std::exp(0.3 / x));
    LadderFitOptions o;
    o.gamma = 0.5;
    o.nuisance_powers = {1.0};
    const LadderFit f = fit_ladder(t, y, o);
    EXPECT_NEAR(f.law.b, 0.8, 1e-6);
    EXPECT_NEAR(f.law.c, 0.9, 1e-4);
    EXPECT_NEAR(f.law.a, -1.5, 1e-3);
}

TEST(Ladder, DetectsLogarithm) {
    const std::vector<double> t = geometric_ladder(10.0, 80.0, 8);
    std::vector<double> y, z;
    for (double x : t) {
        y.push_back(std::pow(x, -2.0) * std::log(x) * std::exp(-x));
        z.push_back(std::pow(x, -2.0) * std::exp(-x));
    }
    LadderFitOptions o;
    o.try_log = true;
    o.nuisance_powers = {1.0, 2.0};
    EXPECT_TRUE(fit_ladder(t, y, o).law.log_factor);
    EXPECT_FALSE(fit_ladder(t, z, o).law.log_factor);
}

TEST(Ladder, GeometricEndpoints) {
    const std::vector<double> t = geometric_ladder(10.0, 80.0, 2);
    ASSERT_EQ(t.size(), 7u);
    EXPECT_DOUBLE_EQ(t.front(), 10.0);
    EXPECT_NEAR(t.back(), 80.0, 1e-12);
    EXPECT_NEAR(t[2], 20.0, 1e-12);
}

TEST(Classifier, UnperturbedAndNondecaying) {
    const ChoquardParams prm(3, 2.0, 2.0, 1.0);
    const AdmissibilityVerdict a = check_potential(prm, PotentialSpec::constant(1.0), MuInput{}, 3.5);
    EXPECT_TRUE(a.admissible);
    EXPECT_EQ(a.theorem_branch, "unperturbed");
    const AdmissibilityVerdict b = check_potential(prm, PotentialSpec{1.0, 1.0, 1.0, 0.0, 0.0, 0.0}, MuInput{}, 3.5);
    EXPECT_FALSE(b.admissible);
    EXPECT_EQ(b.theorem_branch, "nondecaying");
}

TEST(Classifier, Errors) {
    EXPECT_THROW(check_potential(ChoquardParams(3, 2.7, 2.0, 1.0), PotentialSpec::constant(1.0), MuInput{}, 1.0),
                 RegimeRejected);
    EXPECT_THROW(check_potential(ChoquardParams(3, 2.0, 2.0, 1.0), PotentialSpec::constant(2.0), MuInput{}, 1.0),
                 InvalidParams);
    EXPECT_THROW(PotentialSpec({1.0, -1.0, 0.0, 0.0, 0.0, 0.0}).validate(), InvalidParams);
}

TEST(Classifier, StrictThresholds) {
    const ChoquardParams sub(3, 2.0, 1.8, 1.0);
    EXPECT_FALSE(check_potential(sub, PotentialSpec::polynomial(1, 1, 5.0), MuInput{}, 0.0).admissible);
    EXPECT_TRUE(check_potential(sub, PotentialSpec::polynomial(1, 1, 5.0 + 1e-6), MuInput{}, 0.0).admissible);
    const ChoquardParams sup(3, 2.0, 2.5, 1.0);
    EXPECT_FALSE(check_potential(sup, {1, 1, -1.0, 2.0, 0, 0}, MuInput{}, 0.0).admissible);
    EXPECT_TRUE(check_potential(sup, {1, 1, -1.0 - 1e-6, 2.0, 0, 0}, MuInput{}, 0.0).admissible);
    // mu_G enters the rate threshold mu_G sqrt(V)
    EXPECT_TRUE(check_potential(sup, {1, 1, 0.0, 1.5, 0, 0}, MuInput{1.0, "test"}, 0.0).admissible);
    EXPECT_FALSE(check_potential(sup, {1, 1, 0.0, 1.5, 0, 0}, MuInput{2.0, "test"}, 0.0).admissible);
}
