#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"

using namespace choquard;
using choquard::testing::profiles;

namespace {

CompetitorConfig antipodal(double p, double R, Vec z = Vec::Unit(3, 0)) {
    return make_competitor(profiles(2.0, p), antipodal_group(3), z, R, 2);
}

}  // namespace

TEST(Interaction, InnerProductMatchesEpsilon) {
    // <w_i, w_j> in the energy space equals eps^{ij} since w solves the limit problem
    for (double p : {2.0, 1.8}) {
        const ProfilesPtr P = profiles(2.0, p);
        for (double d : {4.0, 10.0}) {
            const double e = epsilon_pair(*P, d);
            EXPECT_NEAR(energy_inner_pair(*P, d) / e, 1.0, 1e-4) << "p = " << p << ", d = " << d;
        }
    }
}

TEST(Interaction, AntipodalSumIsTwoPairs) {
    const CompetitorConfig c = antipodal(2.0, 7.0);
    EXPECT_NEAR(epsilon_R(c), 2.0 * epsilon_pair(*c.profiles, 14.0), 1e-14);
    EXPECT_DOUBLE_EQ(c.min_unit_distance(), 2.0);
}

TEST(Interaction, InvariantUnderChoiceOfDirection) {
    Vec z(3);
    z << 0.3, -0.5, 0.8;
    z.normalize();
    EXPECT_NEAR(epsilon_R(antipodal(1.8, 12.0, z)) / epsilon_R(antipodal(1.8, 12.0)), 1.0, 1e-12);
}

TEST(Interaction, HexagonOrbitDistances) {
    // Z6 acting on the first two coordinates of R^3: nearest centers sit R apart
    const IsometryGroup G = close_group({plane_rotation(3, 0, 1, kPi / 3.0)}, 12);
    const CompetitorConfig c = make_competitor(profiles(2.0, 2.0), G, Vec::Unit(3, 0), 6.0, 6);
    EXPECT_NEAR(c.min_unit_distance(), 1.0, 1e-12);
    const InteractionProfiles& P = *c.profiles;
    // ordered pairs: 12 at distance R, 12 at sqrt(3) R, 6 at 2R
    const double want = 12.0 * epsilon_pair(P, 6.0) + 12.0 * epsilon_pair(P, 6.0 * std::sqrt(3.0)) +
                        6.0 * epsilon_pair(P, 12.0);
    EXPECT_NEAR(epsilon_R(c) / want, 1.0, 1e-12);
}

TEST(Interaction, CompetitorRejectsNonMinimalOrbit) {
    const IsometryGroup G = close_group({plane_rotation(3, 0, 1, kPi / 3.0)}, 12);
    // the axis is fixed by G, so its orbit has one point, not ell = 6
    EXPECT_THROW(make_competitor(profiles(2.0, 2.0), G, Vec::Unit(3, 2), 6.0, 6), InvalidParams);
    EXPECT_THROW(make_competitor(profiles(2.0, 2.0), antipodal_group(3), Vec::Unit(3, 0) * 2.0, 6.0), InvalidParams);
}

TEST(Interaction, RestrictedDiagonalMatchesMonteCarlo) {
    const CompetitorConfig c = antipodal(1.8, 20.0);
    const double rho = 0.9;
    const double exact = restricted_diagonal(c, 0, 1, rho);
    const RestrictedEstimate mc = epsilon_restricted(c, 0, 1, 0, 0, rho);
    EXPECT_NEAR(mc.value / exact, 1.0, std::max(0.01, 5.0 * mc.stderr_ / exact));
    EXPECT_LT(mc.stderr_ / mc.value, 0.01);
}

TEST(Interaction, MonteCarloIsSeeded) {
    const CompetitorConfig c = antipodal(1.8, 20.0);
    MonteCarloSpec mc;
    mc.samples = 20000;
    const RestrictedEstimate a = epsilon_restricted(c, 0, 1, 1, 0, 0.9, mc);
    const RestrictedEstimate b = epsilon_restricted(c, 0, 1, 1, 0, 0.9, mc);
    EXPECT_EQ(a.value, b.value);
    mc.seed += 1;
    EXPECT_NE(epsilon_restricted(c, 0, 1, 1, 0, 0.9, mc).value, a.value);
}

TEST(Interaction, RestrictedRadiusIsChecked) {
    const CompetitorConfig c = antipodal(1.8, 20.0);
    EXPECT_THROW(epsilon_restricted(c, 0, 1, 0, 0, 1.0), InvalidParams);
    EXPECT_THROW(epsilon_restricted(c, 0, 0, 0, 0, 0.5), InvalidParams);
    MonteCarloSpec tiny;
    tiny.samples = 1;
    EXPECT_THROW(epsilon_restricted(c, 0, 1, 0, 0, 0.5, tiny), BudgetTooSmall);
}

TEST(Interaction, RestrictedExpansionCloseToEpsilon) {
    MonteCarloSpec mc;
    mc.samples = 50000;
    const RestrictedExpansion e = restricted_expansion(antipodal(1.8, 20.0), -1.0, mc);
    EXPECT_EQ(e.pieces.size(), 6u);
    EXPECT_LT(e.relative_gap, 0.2);
    EXPECT_LT(e.stderr_ / e.eps_R, 0.05);
}

TEST(Competitor, SingleCenterIsTheGroundState) {
    const IsometryGroup trivial = close_group({Mat::Identity(3, 3)}, 1, 3);
    const CompetitorConfig c = make_competitor(profiles(2.0, 2.0), trivial, Vec::Unit(3, 0), 5.0, 1);
    GridConfig box;
    box.M = 32;
    box.refinement = false;
    const CompetitorEnergy e = competitor_energy(c, PotentialSpec::constant(1.0), box);
    EXPECT_NEAR(e.T_R, 1.0, 1e-8);
    EXPECT_NEAR(e.excess / e.ell_c_inf, 0.0, 1e-8);
    EXPECT_EQ(e.eps_R, 0.0);
}

TEST(Competitor, QuadraticOverlapIsFourEpsilon) {
    // for p = 2 the linear overlap term 2 \int (I * S) delta equals 4 eps_R exactly
    GridConfig box;
    box.M = 128;
    box.margin = 12.0;
    const CompetitorEnergy e = competitor_energy(antipodal(2.0, 5.0), PotentialSpec::constant(1.0), box);
    EXPECT_NEAR(e.grid_linear / (4.0 * e.eps_R), 1.0, 0.02);
    EXPECT_LT(e.excess, 0.0);
    EXPECT_EQ(e.A_V, 0.0);
}

TEST(Competitor, RejectsMismatchedPotential) {
    GridConfig box;
    box.M = 32;
    EXPECT_THROW(competitor_energy(antipodal(2.0, 5.0), PotentialSpec::constant(2.0), box), InvalidParams);
}

TEST(Expansion, CoefficientPerRegime) {
    EXPECT_DOUBLE_EQ(expansion_coefficient(1.8), 0.5);
    EXPECT_DOUBLE_EQ(expansion_coefficient(2.0), 0.5);
    EXPECT_DOUBLE_EQ(expansion_coefficient(2.5), 0.1);
}

TEST(Expansion, InadmissibleNeedsOverride) {
    const CompetitorConfig c = antipodal(2.0, 6.0);
    const PotentialSpec slow{1.0, 1.0, 0.0, 1.0, 0.0, 0.0};  // beta below mu_G sqrt(V)
    GridConfig box;
    box.M = 32;
    EXPECT_THROW(expansion_report(c, {6.0}, slow, box), HypothesisViolated);
}

TEST(Expansion, AssessRequiresEveryCondition) {
    ExpansionReport r;
    r.coef = 0.5;
    r.slack = 0.1;
    r.av_limit = 0.05;
    r.potential = PotentialSpec{1.0, 1.0, 0.0, 3.0, 0.0, 0.0};
    r.admissibility.admissible = true;
    auto row = [](double R, double ratio, double av) {
        ExpansionRow x;
        x.R = R;
        x.eps_R = 1.0;
        x.excess = ratio;
        x.ratio = ratio;
        x.av_ratio = av;
        return x;
    };
    r.rows = {row(10, -0.6, 0.04), row(12, -0.5, 0.03), row(14, -0.45, 0.02)};
    assess(r);
    EXPECT_TRUE(r.verdict);
    r.rows[2].av_ratio = 0.035;  // no longer decreasing
    assess(r);
    EXPECT_FALSE(r.av_decreasing);
    EXPECT_FALSE(r.verdict);
    r.rows[2].av_ratio = 0.02;
    r.rows[2].ratio = -0.3;  // above -coef + slack
    assess(r);
    EXPECT_FALSE(r.ratio_ok);
    r.rows[2].ratio = -0.45;
    r.admissibility.admissible = false;
    assess(r);
    EXPECT_FALSE(r.verdict);
}
