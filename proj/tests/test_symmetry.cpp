#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "choquard/special.hpp"
#include "choquard/symmetry.hpp"

using namespace choquard;

namespace {

// Orbit of a point under a group given by explicit matrices, by brute force.
double brute_min_distance(const std::vector<Vec>& pts) {
    double m = INFINITY;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::min(m, (pts[i] - pts[j]).norm());
    return m;
}

}  // namespace

TEST(Symmetry, CyclicClosureHasSixElements) {
    const IsometryGroup G = close_group({plane_rotation(2, 0, 1, kPi / 3.0)}, 12);
    EXPECT_EQ(G.order(), 6u);
    EXPECT_TRUE(G.elements[0].isApprox(Mat::Identity(2, 2)));
}

TEST(Symmetry, ClosureRejectsNonOrthogonalGenerator) {
    Mat a = Mat::Identity(2, 2);
    a(0, 1) = 0.5;
    EXPECT_THROW(close_group({a}, 8), NotOrthogonal);
}

TEST(Symmetry, ClosureOverflowOnIrrationalRotation) {
    EXPECT_THROW(close_group({plane_rotation(2, 0, 1, 1.0)}, 50), ClosureOverflow);
}

TEST(Symmetry, HexagonOrbitDistances) {
    const IsometryGroup G = cyclic_rotation_group(6);
    Vec x(2);
    x << 2.0, 0.0;
    const OrbitReport o = orbit(G, x);
    EXPECT_EQ(o.cardinality, 6u);
    // a regular hexagon of circumradius r has side r
    EXPECT_NEAR(o.min_pair_distance, 2.0, 1e-12);
    EXPECT_NEAR(brute_min_distance(o.orbit_points), 2.0, 1e-12);
    for (const Vec& y : o.orbit_points) EXPECT_NEAR(y.norm(), 2.0, 1e-12);
}

TEST(Symmetry, OrbitOfZeroThrows) {
    EXPECT_THROW(orbit(antipodal_group(3), Vec::Zero(3)), ZeroPoint);
}

TEST(Symmetry, OrbitIsInvariant) {
    const IsometryGroup G = z2_times_z3_group();
    Vec x(4);
    x << 0.3, -0.2, 0.5, 0.7;
    const OrbitReport o = orbit(G, x);
    for (const Mat& g : G.elements)
        for (const Vec& y : o.orbit_points) {
            const Vec gy = g * y;
            bool found = false;
            for (const Vec& w : o.orbit_points) found = found || (gy - w).norm() < 1e-10;
            EXPECT_TRUE(found);
        }
}

TEST(Symmetry, EllAndMuOfStandardGroups) {
    const MuResult a = mu_G(antipodal_group(3));
    EXPECT_EQ(a.ell, 2u);
    EXPECT_NEAR(a.mu, 2.0, 1e-12);
    const MuResult z6 = mu_G(cyclic_rotation_group(6));
    EXPECT_EQ(z6.ell, 6u);
    EXPECT_NEAR(z6.mu, 2.0 * std::sin(kPi / 6.0), 1e-12);
    const MuResult z4 = mu_G(cyclic_rotation_group(4));
    EXPECT_NEAR(z4.mu, std::sqrt(2.0), 1e-12);
}

TEST(Symmetry, ProductGroupHasMinimalOrbitOnFirstFactor) {
    const IsometryGroup G = z2_times_z3_group();
    EXPECT_EQ(G.order(), 6u);
    const EllResult e = ell_of_group(G);
    EXPECT_EQ(e.ell, 2u);
    // generic points have orbit 6; the minimum lives on the plane fixed by Z3
    EXPECT_EQ(e.sampled_min, 6u);
    EXPECT_TRUE(e.sampler_exhausted);
    EXPECT_NEAR(e.witness(2), 0.0, 1e-12);
    EXPECT_NEAR(e.witness(3), 0.0, 1e-12);
}

TEST(Symmetry, MuTwoImpliesEllAtMostTwo) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 3;
        Vec u(n);
        for (int i = 0; i < n; ++i) u(i) = nd(rng);
        u.normalize();
        const Mat refl = Mat::Identity(n, n) - 2.0 * u * u.transpose();
        std::vector<Mat> gens{refl};
        if (trial % 2) gens.push_back(-Mat::Identity(n, n));
        const MuResult m = mu_G(close_group(gens, 16, n), SphereSampler{500, 3});
        if (std::abs(m.mu - 2.0) < 1e-9) {
            ++checked;
            EXPECT_LE(m.ell, 2u);
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Symmetry, SamplerSeedIsDeterministic) {
    const EllResult a = ell_of_group(z2_times_z3_group(), SphereSampler{200, 5});
    const EllResult b = ell_of_group(z2_times_z3_group(), SphereSampler{200, 5});
    EXPECT_TRUE(a.witness.isApprox(b.witness));
}
