#pragma once

// Riesz potential I_alpha(x) = A_alpha |x|^{alpha - N}: constant, radial
// convolution, free-space grid convolution and the Hoelder envelope.

#include <fftw3.h>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "choquard/decay_law.hpp"
#include "choquard/errors.hpp"
#include "choquard/radial.hpp"
#include "choquard/special.hpp"

namespace choquard {

/// A_alpha = Gamma((N - alpha)/2) / (Gamma(alpha/2) 2^alpha pi^{N/2}).
inline double riesz_constant(int N, double alpha) {
    if (N < 1 || !(alpha > 0.0 && alpha < N)) throw OutOfRange("riesz_constant: need 0 < alpha < N");
    return std::tgamma(0.5 * (N - alpha)) / (std::tgamma(0.5 * alpha) * std::pow(2.0, alpha) * std::pow(kPi, 0.5 * N));
}

struct RieszKernel {
    int N = 3;
    double alpha = 2.0;
    double A = 0.0;

    RieszKernel() = default;
    RieszKernel(int n, double a) : N(n), alpha(a), A(riesz_constant(n, a)) {}
    double operator()(double r) const { return A * std::pow(r, alpha - N); }
};

// ---------------------------------------------------------------------------
// Radial operator

/// Discrete radial Riesz potential on a fixed grid.
///
/// C(i, j) = \int_{cell j} K(r_i, s) s^{N-1} ds, so (A C f)_i is the potential
/// at r_i of the cellwise-constant density f. B = sym(W C) is the symmetric
/// bilinear form with \int (I * f) g ~ |S^{N-1}| A f^T B g.
class RadialRieszOperator {
public:
    RadialRieszOperator(GridPtr grid, double alpha) : grid_(std::move(grid)), kernel_(grid_->dimension(), alpha) {
        const int N = grid_->dimension();
        const std::size_t n = grid_->size();
        const auto& e = grid_->edges();
        C_.resize(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ri = grid_->node(i);
            auto integrand = [&](double s) { return shell_kernel(N, alpha, ri, s) * std::pow(s, N - 1); };
            for (std::size_t j = 0; j < n; ++j) {
                const double len = e[j + 1] - e[j];
                C_(i, j) = graded_integrate(integrand, e[j], e[j + 1], ri, 1e-12 * len, 6);
            }
        }
        const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(grid_->weights().data(), n);
        Eigen::MatrixXd WC = w.asDiagonal() * C_;
        B_ = 0.5 * (WC + WC.transpose());
    }

    const GridPtr& grid() const { return grid_; }
    const RieszKernel& kernel() const { return kernel_; }
    const Eigen::MatrixXd& collocation() const { return C_; }
    const Eigen::MatrixXd& bilinear() const { return B_; }

    /// Potential at the nodes of the cellwise-constant density f (no tail).
    Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return kernel_.A * (C_ * f); }

    /// Symmetrised potential (A/w_i) (B f)_i, the gradient of the discrete form.
    Eigen::VectorXd apply_symmetric(const Eigen::VectorXd& f) const {
        Eigen::VectorXd out = kernel_.A * (B_ * f);
        for (Eigen::Index i = 0; i < out.size(); ++i) out(i) /= grid_->weight(static_cast<std::size_t>(i));
        return out;
    }

    /// \int\int f(x) g(y) I(x - y) dx dy with the symmetric form.
    double pairing(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
        return sphere_area(grid_->dimension()) * kernel_.A * f.dot(B_ * g);
    }

private:
    GridPtr grid_;
    RieszKernel kernel_;
    Eigen::MatrixXd C_, B_;
};

/// Operators are cached per (grid, alpha); building one costs O(M^2) kernel calls.
inline std::shared_ptr<const RadialRieszOperator> radial_riesz_operator(const GridPtr& grid, double alpha) {
    static std::mutex mu;
    static std::map<std::pair<const RadialGrid*, double>, std::shared_ptr<const RadialRieszOperator>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({grid.get(), alpha});
        if (it != cache.end() && it->second->grid() == grid) return it->second;
    }
    auto op = std::make_shared<const RadialRieszOperator>(grid, alpha);
    std::lock_guard<std::mutex> lock(mu);
    cache[{grid.get(), alpha}] = op;
    return op;
}

inline Eigen::VectorXd as_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Radial profile of I_alpha * f.
///
/// Node values come from the collocation operator plus the exact contribution
/// of f's tail beyond r_M; beyond r_M the result follows A ||f||_1 r^{alpha-N}.
inline RadialProfile riesz_convolve_radial(const RieszKernel& kernel, const RadialProfile& f) {
    const int N = f.dimension();
    if (N != kernel.N) throw InvalidGrid("riesz_convolve_radial: dimension mismatch");
    if (f.has_tail() && !f.tail().integrable(N))
        throw DivergentTail("riesz_convolve_radial: input tail is not integrable");
    const auto op = radial_riesz_operator(f.grid(), kernel.alpha);
    Eigen::VectorXd phi = op->apply(as_vector(f.values()));
    const double rM = f.r_max();
    if (f.has_tail()) {
        const DecayLaw& law = f.tail();
        for (Eigen::Index i = 0; i < phi.size(); ++i) {
            const double ri = f.grid()->node(static_cast<std::size_t>(i));
            auto g = [&](double s) { return shell_kernel(N, kernel.alpha, ri, s) * law(s) * std::pow(s, N - 1); };
            phi(i) += kernel.A * (integrate_adaptive(g, rM, 2.0 * rM, 1e-11) + integrate_to_infinity(g, 2.0 * rM, 1e-11));
        }
    }
    const double mass = integrate_radial(f);
    DecayLaw tail = DecayLaw::polynomial(kernel.alpha - N, kernel.A * mass);
    std::vector<double> v(phi.data(), phi.data() + phi.size());
    return RadialProfile(f.grid(), std::move(v), mass != 0.0 ? tail : RadialProfile::zero_tail(), f.is_density());
}

// ---------------------------------------------------------------------------
// Hoelder envelope

/// Asymptotic bound C |x - z1|^{-(N-alpha)(p-1)/p} |x - z2|^{-(N-alpha)/p}
/// for \int f(y - z1)^{p-1} f(y - z2) |y - x|^{alpha-N} dy, where
/// f <= K (1 + |x|)^{-eta} with K = law.prefactor and eta = -law.a.
inline double conv_holder_bound(const RieszKernel& kernel, const DecayLaw& law, double p, const Eigen::VectorXd& z1,
                                const Eigen::VectorXd& z2, const Eigen::VectorXd& x) {
    if (law.b != 0.0 || law.c != 0.0) throw HypothesisViolated("conv_holder_bound: law must be polynomial");
    const int N = kernel.N;
    const double eta = -law.a;
    if (!(p * eta > N)) throw HypothesisViolated("conv_holder_bound: need p * eta > N");
    // ||f^p||_1 <= K^p |S^{N-1}| Beta(N, p eta - N)
    const double beta = std::exp(std::lgamma(N) + std::lgamma(p * eta - N) - std::lgamma(p * eta));
    const double C = kernel.A * std::pow(law.prefactor, p) * sphere_area(N) * beta;
    const double lam = N - kernel.alpha;
    return C * std::pow((x - z1).norm(), -lam * (p - 1.0) / p) * std::pow((x - z2).norm(), -lam / p);
}

/// Exponents (e1, e2) of the envelope above.
inline std::pair<double, double> holder_exponents(int N, double alpha, double p) {
    return {(N - alpha) * (p - 1.0) / p, (N - alpha) / p};
}

// ---------------------------------------------------------------------------
// Grid fields

/// Samples on the tensor grid x_k = (k - M/2) h, h = 2L/M, k = 0..M-1 per axis,
/// stored row-major (last axis fastest).
struct GridField {
    int N = 3;
    double L = 1.0;
    int M = 2;
    std::vector<double> values;

    GridField() = default;
    GridField(int n, double half_width, int m) : N(n), L(half_width), M(m) {
        if (N != 2 && N != 3) throw InvalidParams("GridField: only N = 2 or 3");
        if (M < 2 || M % 2 != 0) throw InvalidParams("GridField: M must be even and >= 2");
        std::size_t total = 1;
        for (int d = 0; d < N; ++d) total *= static_cast<std::size_t>(M);
        values.assign(total, 0.0);
    }

    double h() const { return 2.0 * L / M; }
    double coord(int k) const { return (k - M / 2) * h(); }
    std::size_t size() const { return values.size(); }

    /// Multi-index of a flat index.
    std::array<int, 3> index(std::size_t flat) const {
        std::array<int, 3> ix{0, 0, 0};
        for (int d = N - 1; d >= 0; --d) {
            ix[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(M));
            flat /= static_cast<std::size_t>(M);
        }
        return ix;
    }

    /// Fill with f(point) where point is an array of N coordinates.
    template <class F>
    void fill(F&& f) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            const auto ix = index(k);
            std::array<double, 3> x{0.0, 0.0, 0.0};
            for (int d = 0; d < N; ++d) x[static_cast<std::size_t>(d)] = coord(ix[static_cast<std::size_t>(d)]);
            values[k] = f(x);
        }
    }

    /// Largest |value| on the outermost shell over the largest |value|.
    double shell_ratio() const {
        double vmax = 0.0, shell = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            const double a = std::abs(values[k]);
            vmax = std::max(vmax, a);
            const auto ix = index(k);
            for (int d = 0; d < N; ++d)
                if (ix[static_cast<std::size_t>(d)] == 0 || ix[static_cast<std::size_t>(d)] == M - 1) {
                    shell = std::max(shell, a);
                    break;
                }
        }
        return vmax > 0.0 ? shell / vmax : 0.0;
    }

    /// h^N sum of values.
    double integral() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s * std::pow(h(), N);
    }
};

/// Cube average of |y|^{alpha-N} over [-h/2, h/2]^N.
///
/// The cube is split into 2N pyramids with apex at the origin; each gives
/// (h/2)/alpha times the integral of |y|^{alpha-N} over its face.
inline double singular_cell_average(int N, double alpha, double h) {
    const double lam = N - alpha;
    const QuadRule& q = gauss_legendre01(24);
    double face = 0.0;  // \int_{[-1/2,1/2]^{N-1}} (1/4 + |u|^2)^{-lam/2} du
    if (N == 2) {
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double u = q.x[i] - 0.5;
            face += q.w[i] * std::pow(0.25 + u * u, -0.5 * lam);
        }
    } else if (N == 3) {
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j) {
                const double u = q.x[i] - 0.5, v = q.x[j] - 0.5;
                face += q.w[i] * q.w[j] * std::pow(0.25 + u * u + v * v, -0.5 * lam);
            }
    } else {
        throw InvalidParams("singular_cell_average: N must be 2 or 3");
    }
    return 2.0 * N * (0.5 / alpha) * face * std::pow(h, -lam);
}

/// Free-space I_alpha * field on the same grid (zero padding to 2M per axis).
///
/// The kernel is sampled at minimum-image offsets of the doubled box with the
/// origin cell replaced by its exact cube average, so no periodic image of
/// the field reaches the original box. Throws PaddingInsufficient when the
/// field exceeds `padding_tol` times its maximum on the outer shell.
inline GridField riesz_convolve_grid(const RieszKernel& kernel, const GridField& field, double padding_tol = 1e-8) {
    if (field.N != kernel.N) throw InvalidParams("riesz_convolve_grid: dimension mismatch");
    const int N = field.N, M = field.M, P = 2 * M;
    GridField out(N, field.L, M);
    if (field.shell_ratio() > padding_tol)
        throw PaddingInsufficient("riesz_convolve_grid: field does not decay on the outer grid shell");
    double vmax = 0.0;
    for (double v : field.values) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) return out;

    const double h = field.h();
    const std::size_t Pn = static_cast<std::size_t>(P);
    const std::size_t half = Pn / 2 + 1;
    const std::size_t rows = (N == 3) ? Pn * Pn : Pn;  // product of all but the last axis
    const std::size_t padded_last = 2 * half;
    const std::size_t total = rows * padded_last;
    std::vector<int> dims(static_cast<std::size_t>(N), P);

    // real spectrum of the kernel
    std::vector<double> spec(rows * half);
    {
        double* buf = fftw_alloc_real(total);
        const double center = kernel.A * singular_cell_average(N, kernel.alpha, h);
        for (std::size_t r = 0; r < rows; ++r) {
            const int i0 = (N == 3) ? static_cast<int>(r / Pn) : 0;
            const int i1 = static_cast<int>(r % Pn);
            for (std::size_t c = 0; c < padded_last; ++c) {
                double& slot = buf[r * padded_last + c];
                if (c >= Pn) {
                    slot = 0.0;
                    continue;
                }
                auto wrap = [&](int k) { return k < M ? k : k - P; };
                const double m0 = (N == 3) ? wrap(i0) : 0.0, m1 = wrap(i1), m2 = wrap(static_cast<int>(c));
                const double rr = h * std::sqrt(m0 * m0 + m1 * m1 + m2 * m2);
                slot = rr == 0.0 ? center : kernel(rr);
            }
        }
        fftw_plan plan = fftw_plan_dft_r2c(N, dims.data(), buf, reinterpret_cast<fftw_complex*>(buf), FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
        const fftw_complex* cbuf = reinterpret_cast<const fftw_complex*>(buf);
        for (std::size_t k = 0; k < rows * half; ++k) spec[k] = cbuf[k][0];
        fftw_free(buf);
    }

    double* buf = fftw_alloc_real(total);
    std::fill(buf, buf + total, 0.0);
    for (std::size_t k = 0; k < field.size(); ++k) {
        const auto ix = field.index(k);
        std::size_t r;
        std::size_t c;
        if (N == 3) {
            r = static_cast<std::size_t>(ix[0]) * Pn + static_cast<std::size_t>(ix[1]);
            c = static_cast<std::size_t>(ix[2]);
        } else {
            r = static_cast<std::size_t>(ix[0]);
            c = static_cast<std::size_t>(ix[1]);
        }
        buf[r * padded_last + c] = field.values[k];
    }
    fftw_complex* cbuf = reinterpret_cast<fftw_complex*>(buf);
    fftw_plan fwd = fftw_plan_dft_r2c(N, dims.data(), buf, cbuf, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    for (std::size_t k = 0; k < rows * half; ++k) {
        cbuf[k][0] *= spec[k];
        cbuf[k][1] *= spec[k];
    }
    std::vector<double>().swap(spec);
    fftw_plan bwd = fftw_plan_dft_c2r(N, dims.data(), cbuf, buf, FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    const double scale = std::pow(h, N) / std::pow(static_cast<double>(P), N);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto ix = out.index(k);
        std::size_t r, c;
        if (N == 3) {
            r = static_cast<std::size_t>(ix[0]) * Pn + static_cast<std::size_t>(ix[1]);
            c = static_cast<std::size_t>(ix[2]);
        } else {
            r = static_cast<std::size_t>(ix[0]);
            c = static_cast<std::size_t>(ix[1]);
        }
        out.values[k] = buf[r * padded_last + c] * scale;
    }
    fftw_free(buf);
    return out;
}

}  // namespace choquard
