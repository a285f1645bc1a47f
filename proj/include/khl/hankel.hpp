#ifndef KHL_HANKEL_HPP
#define KHL_HANKEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "khl/errors.hpp"
#include "khl/grid.hpp"
#include "khl/sym_matrix.hpp"

namespace khl {

/// The arc-indicator symbol: phi(z) = 1 on {|z| = 1, Re z >= 0}, 0 elsewhere.
/// On the line it reads s(t) = 2 on [-1, 1], 0 elsewhere.
struct SymbolArc {
    static double on_line(double t) { return (t >= -1.0 && t <= 1.0) ? 2.0 : 0.0; }
    static double on_circle(std::complex<double> z) { return z.real() >= 0.0 ? 1.0 : 0.0; }

    /// Cayley map z -> i(1 - z)/(1 + z) from the circle (z != -1) onto the real line.
    static double cayley(std::complex<double> z) {
        const std::complex<double> t = std::complex<double>(0.0, 1.0) * (1.0 - z) / (1.0 + z);
        return t.real();
    }
};

/// Fourier coefficient c_k of the arc symbol, k >= 1. Uses the mod-4 case
/// split so even k give exact zeros; odd k are formed as (1/pi) * (2/k),
/// the same rounding path as (1/pi) * hilbert_alt(+-1/2, N).
template <typename Scalar = double>
Scalar fourier_coeff(long k) {
    if (k <= 0) throw DomainError("hankel::fourier_coeff: k = " + std::to_string(k) + " must be >= 1");
    if (k % 2 == 0) return Scalar(0);
    const Scalar inv_pi = Scalar(1) / std::numbers::pi_v<Scalar>;
    const Scalar magnitude = inv_pi * (Scalar(2) / Scalar(k));
    return k % 4 == 1 ? magnitude : -magnitude;
}

/// c_k = (1/pi) * integral of cos(k theta) over [-pi/2, pi/2], by composite
/// 8-point Gauss-Legendre with `nodes / 8` panels. Independent of fourier_coeff.
double coeff_by_quadrature(long k, int nodes);

/// N x N section of H(phi): entries c_{n+k+1}, 0-based.
template <typename Scalar = double>
SymMatrix<Scalar> hankel_section(Eigen::Index n) {
    if (n < 1) throw InvalidArgument("hankel::hankel_section: N must be >= 1");
    VectorX<Scalar> c(2 * n);
    for (Eigen::Index k = 1; k <= 2 * n - 1; ++k) c(k) = fourier_coeff<Scalar>(k);
    return SymMatrix<Scalar>::generate(n, [&](Eigen::Index i, Eigen::Index j) { return c(i + j + 1); });
}

namespace detail {

template <typename Scalar>
void check_shift(const Scalar& p, Eigen::Index n, const char* op) {
    if (n < 1) throw InvalidArgument(std::string("hankel::") + op + ": N must be >= 1");
    for (Eigen::Index s = 1; s <= 2 * n - 1; ++s)
        if (p == Scalar(s))
            throw DomainError(std::string("hankel::") + op + ": p = " + std::to_string(s) +
                              " makes n + k + 1 - p vanish");
}

}  // namespace detail

/// p-shifted Hilbert matrix, entries 1/(n + k + 1 - p). p = 0 is the classical Hilbert matrix.
template <typename Scalar = double>
SymMatrix<Scalar> hilbert_shifted(const Scalar& p, Eigen::Index n) {
    detail::check_shift(p, n, "hilbert_shifted");
    return SymMatrix<Scalar>::generate(n, [&](Eigen::Index i, Eigen::Index j) {
        return Scalar(1) / (Scalar(i + j + 1) - p);
    });
}

/// Alternating-sign variant, entries (-1)^{n+k}/(n + k + 1 - p).
template <typename Scalar = double>
SymMatrix<Scalar> hilbert_alt(const Scalar& p, Eigen::Index n) {
    detail::check_shift(p, n, "hilbert_alt");
    return SymMatrix<Scalar>::generate(n, [&](Eigen::Index i, Eigen::Index j) {
        const Scalar entry = Scalar(1) / (Scalar(i + j + 1) - p);
        return (i + j) % 2 == 0 ? entry : Scalar(-entry);
    });
}

/// D M D with D = diag((-1)^n). Exact: only signs change.
template <typename Scalar>
SymMatrix<Scalar> sign_conjugate(const SymMatrix<Scalar>& m) {
    return SymMatrix<Scalar>::generate(m.size(), [&](Eigen::Index i, Eigen::Index j) {
        return (i + j) % 2 == 0 ? m(i, j) : Scalar(-m(i, j));
    });
}

template <typename Scalar>
struct ParitySplit {
    SymMatrix<Scalar> even;  // compression to even indices
    SymMatrix<Scalar> odd;   // compression to odd indices
    Scalar off_max;          // max |M(2n, 2k+1)|
};

template <typename Scalar>
ParitySplit<Scalar> parity_split(const SymMatrix<Scalar>& m) {
    using std::abs;
    if (m.size() % 2 != 0)
        throw InvalidArgument("hankel::parity_split: dimension " + std::to_string(m.size()) + " is odd");
    const Eigen::Index half = m.size() / 2;
    Scalar off = 0;
    for (Eigen::Index i = 0; i < half; ++i)
        for (Eigen::Index j = 0; j < half; ++j) off = std::max<Scalar>(off, abs(m(2 * i, 2 * j + 1)));
    return {SymMatrix<Scalar>::generate(half, [&](Eigen::Index i, Eigen::Index j) { return m(2 * i, 2 * j); }),
            SymMatrix<Scalar>::generate(half,
                                        [&](Eigen::Index i, Eigen::Index j) { return m(2 * i + 1, 2 * j + 1); }),
            off};
}

/// Signs and log-magnitudes of the LDL^T pivots of hilbert_shifted(p, N).
/// H_p is the symmetric Cauchy matrix 1/(x_n + x_k) with x_n = n + (1 - p)/2,
/// whose pivots have the closed form
///   d_k = 1/(2 x_k) * prod_{i<k} ((x_k - x_i)/(x_k + x_i))^2.
/// Every factor is evaluated without cancellation, so the pivots keep full
/// relative accuracy even when the eigenvalues underflow double resolution.
struct CauchyPivots {
    VectorX<double> log10_magnitude;
    bool all_positive = false;  // Sylvester: positive definite iff all pivots are positive
    double min_log10() const { return log10_magnitude.minCoeff(); }
};

CauchyPivots hilbert_ldl_pivots(double p, Eigen::Index n);

}  // namespace khl

#endif  // KHL_HANKEL_HPP
