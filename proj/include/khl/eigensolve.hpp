#ifndef KHL_EIGENSOLVE_HPP
#define KHL_EIGENSOLVE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "khl/errors.hpp"
#include "khl/sym_matrix.hpp"

namespace khl {

struct JacobiOptions {
    double tol = 1e-12;
    int max_sweeps = 30;
};

/// Ascending eigenvalues with orthonormal eigenvectors (column k pairs with
/// eigenvalue k) and the metadata needed to audit the decomposition.
template <typename Scalar>
struct EigenDecomposition {
    VectorX<Scalar> values;
    MatrixX<Scalar> vectors;
    Scalar residual = 0;     // max_k ||M v_k - lambda_k v_k||_2
    Scalar orth_defect = 0;  // max |V^T V - I|
    Scalar off_norm = 0;     // off-diagonal Frobenius mass at exit
    Scalar input_trace = 0;
    Scalar input_frobenius = 0;
    int sweeps = 0;

    Eigen::Index size() const noexcept { return values.size(); }
};

/// Relative audit of a decomposition against the identities it must satisfy.
template <typename Scalar>
struct EigenHealth {
    Scalar residual_rel;   // residual / max(||M||_F, tiny)
    Scalar orth_defect;
    Scalar trace_rel;      // |sum lambda - tr M| / max(1, |tr M|)
    Scalar frobenius_rel;  // |sum lambda^2 - ||M||_F^2| / max(1, ||M||_F^2)

    bool ok(Scalar tol = Scalar(1e-10), Scalar identity_tol = Scalar(1e-9)) const {
        return residual_rel <= tol && orth_defect <= tol && trace_rel <= identity_tol &&
               frobenius_rel <= identity_tol;
    }
};

template <typename Scalar>
EigenHealth<Scalar> health(const EigenDecomposition<Scalar>& dec) {
    using std::abs;
    using std::max;
    const Scalar fro = dec.input_frobenius;
    const Scalar fro_sq = fro * fro;
    return {dec.residual / max(fro, std::numeric_limits<Scalar>::min()), dec.orth_defect,
            abs(dec.values.sum() - dec.input_trace) / max(Scalar(1), abs(dec.input_trace)),
            abs(dec.values.squaredNorm() - fro_sq) / max(Scalar(1), fro_sq)};
}

namespace detail {

template <typename Scalar>
Scalar off_diagonal_norm(const MatrixX<Scalar>& a) {
    using std::sqrt;
    Scalar sum = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = j + 1; i < a.rows(); ++i) sum += a(i, j) * a(i, j);
    return sqrt(Scalar(2) * sum);
}

// x <- c x - s y, y <- s x + c y over contiguous storage.
template <typename Scalar>
void rotate_columns(Scalar* x, Scalar* y, Eigen::Index n, Scalar c, Scalar s) {
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar xk = x[k];
        const Scalar yk = y[k];
        x[k] = c * xk - s * yk;
        y[k] = s * xk + c * yk;
    }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver. Sweeps visit (p, q) in row-major order and skip
/// rotations with |a_pq| < tol ||M||_F / n^2; iteration stops once the
/// off-diagonal Frobenius mass drops below tol ||M||_F. Deterministic.
template <typename Scalar>
EigenDecomposition<Scalar> jacobi_eigen(const SymMatrix<Scalar>& m, const JacobiOptions& options = {}) {
    using std::abs;
    using std::sqrt;
    if (!(options.tol > 0.0)) throw InvalidArgument("eigensolve::jacobi_eigen: tol must be positive");
    if (options.max_sweeps < 1) throw InvalidArgument("eigensolve::jacobi_eigen: max_sweeps must be >= 1");

    const Eigen::Index n = m.size();
    MatrixX<Scalar> a = m.dense();
    MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);

    EigenDecomposition<Scalar> out;
    out.input_trace = a.trace();
    out.input_frobenius = a.norm();
    const Scalar tol = Scalar(options.tol);
    const Scalar target = tol * out.input_frobenius;
    const Scalar skip = target / Scalar(std::max<Eigen::Index>(1, n * n));

    Scalar off = detail::off_diagonal_norm(a);
    int sweeps = 0;
    while (off > target) {
        if (sweeps == options.max_sweeps)
            throw NoConvergence("eigensolve::jacobi_eigen: no convergence after " +
                                    std::to_string(options.max_sweeps) + " sweeps (off-diagonal mass " +
                                    std::to_string(double(off)) + ", target " + std::to_string(double(target)) +
                                    ")",
                                double(off));
        ++sweeps;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Scalar apq = a(p, q);
                if (abs(apq) < skip || apq == Scalar(0)) continue;
                const Scalar app = a(p, p);
                const Scalar aqq = a(q, q);
                const Scalar theta = (aqq - app) / (Scalar(2) * apq);
                const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                                 (abs(theta) + sqrt(theta * theta + Scalar(1)));
                const Scalar c = Scalar(1) / sqrt(t * t + Scalar(1));
                const Scalar s = t * c;

                detail::rotate_columns(a.col(p).data(), a.col(q).data(), n, c, s);
                a.row(p) = a.col(p).transpose();
                a.row(q) = a.col(q).transpose();
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = Scalar(0);
                a(q, p) = Scalar(0);

                detail::rotate_columns(v.col(p).data(), v.col(q).data(), n, c, s);
            }
        }
        off = detail::off_diagonal_norm(a);
    }
    out.sweeps = sweeps;
    out.off_norm = off;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

    out.values.resize(n);
    out.vectors.resize(n, n);
    const Scalar sign_floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = a(src, src);
        out.vectors.col(k) = v.col(src);
        // First component that is nonzero above rounding level is made positive.
        for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar x = out.vectors(i, k);
            if (abs(x) > sign_floor) {
                if (x < Scalar(0)) out.vectors.col(k) *= Scalar(-1);
                break;
            }
        }
    }

    const MatrixX<Scalar> r = m.dense() * out.vectors - out.vectors * out.values.asDiagonal();
    out.residual = n > 0 ? r.colwise().norm().maxCoeff() : Scalar(0);
    out.orth_defect =
        n > 0 ? (out.vectors.transpose() * out.vectors - MatrixX<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff()
              : Scalar(0);
    return out;
}

/// Orthogonal projection onto eigenvectors with eigenvalue strictly below mu.
template <typename Scalar>
struct ProjectionMatrix {
    SymMatrix<Scalar> p;
    Scalar mu;
    Eigen::Index rank;
};

/// 1e-8 times the spectral span (or 1e-8 when the span is zero).
template <typename Scalar>
Scalar default_guard(const EigenDecomposition<Scalar>& dec) {
    const Scalar span = dec.size() > 0 ? dec.values(dec.size() - 1) - dec.values(0) : Scalar(0);
    return Scalar(1e-8) * (span > Scalar(0) ? span : Scalar(1));
}

template <typename Scalar>
ProjectionMatrix<Scalar> spectral_projection(const EigenDecomposition<Scalar>& dec, Scalar mu, Scalar guard) {
    using std::abs;
    if (!(guard > Scalar(0))) throw InvalidArgument("eigensolve::spectral_projection: guard must be positive");
    const Eigen::Index n = dec.size();
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const Scalar distance = abs(dec.values(k) - mu);
        if (distance < guard)
            throw ThresholdTooClose("eigensolve::spectral_projection: eigenvalue " + std::to_string(double(dec.values(k))) +
                                        " lies within guard " + std::to_string(double(guard)) + " of mu = " +
                                        std::to_string(double(mu)),
                                    double(distance));
        if (dec.values(k) < mu) ++rank;
    }
    // Eigenvalues are ascending, so the projection uses the leading `rank` columns.
    const auto lead = dec.vectors.leftCols(rank);
    MatrixX<Scalar> p = lead * lead.transpose();
    return {SymMatrix<Scalar>::from_lower(p), mu, rank};
}

}  // namespace khl

#endif  // KHL_EIGENSOLVE_HPP
