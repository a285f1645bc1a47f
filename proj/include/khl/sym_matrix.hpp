#ifndef KHL_SYM_MATRIX_HPP
#define KHL_SYM_MATRIX_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

#include "khl/errors.hpp"

namespace khl {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense real symmetric matrix. The lower triangle is authoritative: it is
/// mirrored into the upper triangle on construction, so symmetry holds
/// structurally and never depends on a tolerance.
template <typename Scalar>
class SymMatrix {
public:
    using Index = Eigen::Index;

    SymMatrix() = default;

    /// Builds an n x n matrix from `entry(i, j)` evaluated only for i >= j.
    template <typename Generator>
    static SymMatrix generate(Index n, Generator&& entry) {
        SymMatrix out;
        out.m_.resize(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = j; i < n; ++i) out.m_(i, j) = entry(i, j);
        out.mirror_and_check();
        return out;
    }

    /// Takes the lower triangle of `dense`; the upper triangle is ignored.
    template <typename Derived>
    static SymMatrix from_lower(const Eigen::MatrixBase<Derived>& dense) {
        if (dense.rows() != dense.cols())
            throw DimensionMismatch("SymMatrix::from_lower: matrix is " + std::to_string(dense.rows()) +
                                    "x" + std::to_string(dense.cols()));
        SymMatrix out;
        out.m_ = dense;
        out.mirror_and_check();
        return out;
    }

    static SymMatrix identity(Index n) { return from_lower(MatrixX<Scalar>::Identity(n, n)); }
    static SymMatrix zero(Index n) { return from_lower(MatrixX<Scalar>::Zero(n, n)); }

    Index size() const noexcept { return m_.rows(); }

    /// Reads through the lower triangle.
    Scalar operator()(Index i, Index j) const { return i >= j ? m_(i, j) : m_(j, i); }

    const MatrixX<Scalar>& dense() const noexcept { return m_; }

    SymMatrix operator-() const { return scaled(Scalar(-1)); }

    SymMatrix scaled(const Scalar& factor) const {
        SymMatrix out;
        out.m_ = factor * m_;
        return out;
    }

    friend SymMatrix operator*(const Scalar& factor, const SymMatrix& m) { return m.scaled(factor); }

    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return combine(a, b, Scalar(1)); }
    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return combine(a, b, Scalar(-1)); }

private:
    static SymMatrix combine(const SymMatrix& a, const SymMatrix& b, const Scalar& sign) {
        if (a.size() != b.size())
            throw DimensionMismatch("SymMatrix: dimensions " + std::to_string(a.size()) + " and " +
                                    std::to_string(b.size()) + " differ");
        SymMatrix out;
        out.m_ = a.m_ + sign * b.m_;
        return out;
    }

    void mirror_and_check() {
        const Index n = m_.rows();
        for (Index j = 0; j < n; ++j) {
            for (Index i = j; i < n; ++i) {
                if constexpr (std::numeric_limits<Scalar>::has_quiet_NaN) {
                    using std::isfinite;
                    if (!isfinite(m_(i, j)))
                        throw DomainError("SymMatrix: non-finite entry at (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ")");
                }
                m_(j, i) = m_(i, j);
            }
        }
    }

    MatrixX<Scalar> m_;
};

}  // namespace khl

#endif  // KHL_SYM_MATRIX_HPP
