#pragma once

// Finite groups of orthogonal matrices: closure, orbits, minimal orbit
// size ell(G) and the minimal orbit spacing mu_G over the minimal-orbit set.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

#include "choquard/errors.hpp"

namespace choquard {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline constexpr double kOrthoTol = 1e-10;
inline constexpr double kElementTol = 1e-9;

struct IsometryGroup {
    int dimension = 0;
    std::vector<Mat> elements;  // elements[0] is the identity

    std::size_t order() const { return elements.size(); }
};

struct OrbitReport {
    Vec base_point;
    std::vector<Vec> orbit_points;
    std::size_t cardinality = 0;
    double min_pair_distance = 0.0;
};

/// Sphere sampling controls; the seed fixes every random draw.
struct SphereSampler {
    std::size_t resolution = 10000;
    std::uint64_t seed = 12345;
};

inline bool is_orthogonal(const Mat& m, double tol = kOrthoTol) {
    if (m.rows() != m.cols()) return false;
    return ((m.transpose() * m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff()) <= tol;
}

inline double max_distance(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Breadth-first closure of the generators under multiplication.
inline IsometryGroup close_group(const std::vector<Mat>& generators, std::size_t max_order,
                                 int dimension = -1) {
    if (max_order < 1) throw InvalidParams("close_group: max_order must be >= 1");
    int n = dimension;
    for (const Mat& g : generators) {
        if (n < 0) n = static_cast<int>(g.rows());
        if (g.rows() != n || !is_orthogonal(g)) throw NotOrthogonal("close_group: generator is not an orthogonal N x N matrix");
    }
    if (n < 1) throw InvalidParams("close_group: dimension unknown");
    IsometryGroup G;
    G.dimension = n;
    G.elements.push_back(Mat::Identity(n, n));
    auto find = [&](const Mat& m) {
        for (std::size_t i = 0; i < G.elements.size(); ++i)
            if (max_distance(G.elements[i], m) < kElementTol) return static_cast<long>(i);
        return -1L;
    };
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const Mat cur = G.elements[queue.front()];
        queue.pop_front();
        for (const Mat& g : generators) {
            Mat next = g * cur;
            if (find(next) >= 0) continue;
            if (G.elements.size() >= max_order) throw ClosureOverflow("close_group: closure exceeds max_order");
            G.elements.push_back(std::move(next));
            queue.push_back(G.elements.size() - 1);
        }
    }
    return G;
}

/// Orbit of x with points identified below 1e-9 |x|.
inline OrbitReport orbit(const IsometryGroup& G, const Vec& x) {
    const double nx = x.norm();
    if (!(nx > 0.0)) throw ZeroPoint("orbit: base point is zero");
    OrbitReport rep;
    rep.base_point = x;
    const double tol = kElementTol * nx;
    for (const Mat& g : G.elements) {
        Vec y = g * x;
        bool seen = std::any_of(rep.orbit_points.begin(), rep.orbit_points.end(),
                                [&](const Vec& q) { return (q - y).norm() < tol; });
        if (!seen) rep.orbit_points.push_back(std::move(y));
    }
    rep.cardinality = rep.orbit_points.size();
    if (rep.cardinality == 1) {
        rep.min_pair_distance = 2.0 * nx;
    } else {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rep.cardinality; ++i)
            for (std::size_t j = i + 1; j < rep.cardinality; ++j)
                m = std::min(m, (rep.orbit_points[i] - rep.orbit_points[j]).norm());
        rep.min_pair_distance = m;
    }
    return rep;
}

/// A linear subspace on which a subgroup acts trivially, with its pointwise stabilizer.
struct FixedStratum {
    Mat basis;                        // orthonormal columns
    std::vector<std::size_t> stabilizer;  // indices into G.elements
    std::size_t orbit_size = 0;       // |G| / |stabilizer|, generic point of the stratum
};

namespace detail {

inline Mat null_space(const Mat& m, double tol = 1e-8) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol) ++rank;
    const Mat& V = svd.matrixV();
    return V.rightCols(V.cols() - rank);
}

inline bool same_subspace(const Mat& a, const Mat& b) {
    if (a.cols() != b.cols()) return false;
    return ((a * a.transpose()) - (b * b.transpose())).cwiseAbs().maxCoeff() < 1e-8;
}

inline Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec v(dim);
    do {
        for (int i = 0; i < dim; ++i) v(i) = nd(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

}  // namespace detail

/// All nonzero fixed-point subspaces obtained as intersections of Fix(g).
///
/// Every x != 0 lies in the relative interior of exactly one stratum, and its
/// orbit size equals that stratum's orbit_size.
inline std::vector<FixedStratum> fixed_strata(const IsometryGroup& G) {
    const int n = G.dimension;
    std::vector<Mat> subspaces{Mat::Identity(n, n)};
    for (std::size_t k = 1; k < G.order(); ++k) {
        Mat f = detail::null_space(G.elements[k] - Mat::Identity(n, n));
        if (f.cols() == 0) continue;
        const std::size_t existing = subspaces.size();
        std::vector<Mat> fresh{f};
        for (std::size_t i = 0; i < existing; ++i) {
            // intersection of span(A) and span(B): null space of [A, -B]
            const Mat& A = subspaces[i];
            Mat M(n, A.cols() + f.cols());
            M << A, -f;
            Mat ns = detail::null_space(M);
            if (ns.cols() == 0) continue;
            Mat inter = A * ns.topRows(A.cols());
            Eigen::HouseholderQR<Mat> qr(inter);
            Mat q = qr.householderQ() * Mat::Identity(n, inter.cols());
            fresh.push_back(q);
        }
        for (Mat& s : fresh) {
            bool dup = std::any_of(subspaces.begin(), subspaces.end(),
                                   [&](const Mat& t) { return detail::same_subspace(s, t); });
            if (!dup) subspaces.push_back(std::move(s));
        }
    }
    std::vector<FixedStratum> out;
    for (Mat& W : subspaces) {
        FixedStratum st;
        for (std::size_t k = 0; k < G.order(); ++k)
            if (((G.elements[k] - Mat::Identity(n, n)) * W).cwiseAbs().maxCoeff() < 1e-8) st.stabilizer.push_back(k);
        st.orbit_size = G.order() / st.stabilizer.size();
        st.basis = std::move(W);
        out.push_back(std::move(st));
    }
    return out;
}

struct EllResult {
    std::size_t ell = 0;
    Vec witness;
    std::size_t sampled_min = 0;      // minimum over plain sphere samples
    std::size_t samples = 0;
    bool sampler_exhausted = false;   // sphere samples alone never reached ell
};

/// ell(G) = min #Gx over x != 0.
///
/// Sphere samples give an upper bound; samples drawn inside every fixed-point
/// stratum make the minimum exact, since the minimal orbits live there.
inline EllResult ell_of_group(const IsometryGroup& G, const SphereSampler& sampler = {}) {
    EllResult res;
    std::mt19937_64 rng(sampler.seed);
    res.sampled_min = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < sampler.resolution; ++k) {
        Vec z = detail::random_unit(rng, G.dimension);
        res.sampled_min = std::min(res.sampled_min, orbit(G, z).cardinality);
    }
    res.samples = sampler.resolution;
    res.ell = res.sampled_min;
    for (const FixedStratum& st : fixed_strata(G)) {
        Vec z = st.basis * detail::random_unit(rng, static_cast<int>(st.basis.cols()));
        const std::size_t card = orbit(G, z).cardinality;
        if (card < res.ell || (card == res.ell && res.witness.size() == 0)) {
            res.ell = card;
            res.witness = z;
        }
    }
    if (res.witness.size() == 0) res.witness = detail::random_unit(rng, G.dimension);
    res.sampler_exhausted = res.sampled_min > res.ell;
    return res;
}

struct MuResult {
    double mu = 0.0;
    Vec witness;
    double sampled_mu = 0.0;   // minimum of mu(Gz) over random points of Sigma
    std::size_t samples = 0;
    std::size_t ell = 0;
};

/// mu_G = inf over z in Sigma of mu(Gz).
///
/// Sigma is the union of unit spheres of the strata with orbit size ell. On
/// such a stratum W, mu(Gz) = min over g outside the stabilizer of |(g - I) z|,
/// whose minimum over unit z in W is the least singular value of (g - I) on W.
inline MuResult mu_G(const IsometryGroup& G, const SphereSampler& sampler = {}) {
    MuResult res;
    const EllResult el = ell_of_group(G, sampler);
    res.ell = el.ell;
    const int n = G.dimension;
    std::mt19937_64 rng(sampler.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<FixedStratum> sigma;
    for (FixedStratum& st : fixed_strata(G))
        if (st.orbit_size == el.ell) sigma.push_back(std::move(st));
    res.mu = std::numeric_limits<double>::infinity();
    res.sampled_mu = std::numeric_limits<double>::infinity();
    const std::size_t per = std::max<std::size_t>(1, sampler.resolution / std::max<std::size_t>(1, sigma.size()));
    for (const FixedStratum& st : sigma) {
        const int d = static_cast<int>(st.basis.cols());
        for (std::size_t k = 0; k < per; ++k) {
            Vec z = st.basis * detail::random_unit(rng, d);
            res.sampled_mu = std::min(res.sampled_mu, orbit(G, z).min_pair_distance);
            ++res.samples;
        }
        if (el.ell == 1) {
            res.mu = 2.0;
            res.witness = st.basis.col(0);
            continue;
        }
        for (std::size_t k = 0; k < G.order(); ++k) {
            if (std::find(st.stabilizer.begin(), st.stabilizer.end(), k) != st.stabilizer.end()) continue;
            Mat B = (G.elements[k] - Mat::Identity(n, n)) * st.basis;
            Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullV);
            const int last = static_cast<int>(svd.singularValues().size()) - 1;
            const double s = svd.singularValues()(last);
            if (s < res.mu) {
                res.mu = s;
                res.witness = st.basis * svd.matrixV().col(last);
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Builders for the groups used throughout.

/// Rotation by angle theta in the (i, j) coordinate plane of R^n.
inline Mat plane_rotation(int n, int i, int j, double theta) {
    Mat m = Mat::Identity(n, n);
    m(i, i) = std::cos(theta);
    m(j, j) = std::cos(theta);
    m(i, j) = -std::sin(theta);
    m(j, i) = std::sin(theta);
    return m;
}

inline IsometryGroup antipodal_group(int n) { return close_group({-Mat::Identity(n, n)}, 2); }

inline IsometryGroup cyclic_rotation_group(int k) {
    return close_group({plane_rotation(2, 0, 1, 2.0 * std::acos(-1.0) / k)}, static_cast<std::size_t>(k));
}

/// Z_2 x Z_3 acting on C x C = R^4 by (s, w)(z1, z2) = (s z1, w z2).
inline IsometryGroup z2_times_z3_group() {
    Mat a = Mat::Identity(4, 4);
    a(0, 0) = -1.0;
    a(1, 1) = -1.0;
    return close_group({a, plane_rotation(4, 2, 3, 2.0 * std::acos(-1.0) / 3.0)}, 6);
}

}  // namespace choquard
