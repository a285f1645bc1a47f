#ifndef KHL_QUADRATURE_HPP
#define KHL_QUADRATURE_HPP

#include <cmath>
#include <string>

#include "khl/errors.hpp"
#include "khl/grid.hpp"
#include "khl/kernels.hpp"
#include "khl/sym_matrix.hpp"

namespace khl {

/// Symmetrized Nystrom matrix: entries sqrt(w_i w_j) k(x_i, x_j). Shares the
/// spectrum of the weighted Nystrom operator.
template <typename Scalar>
SymMatrix<Scalar> discretize(const KernelSpec& spec, const Grid<Scalar>& grid) {
    using std::sqrt;
    const VectorX<Scalar> root_w = grid.weights().cwiseSqrt();
    const auto& x = grid.nodes();
    return SymMatrix<Scalar>::generate(grid.size(), [&](Eigen::Index i, Eigen::Index j) {
        return root_w(i) * root_w(j) * eval_kernel<Scalar>(spec, x(i), x(j));
    });
}

/// ||discretize(spec, grid)||_F^2 accumulated entry by entry, without
/// materializing the matrix (grids for divergence scans run to ~10^4 nodes).
template <typename Scalar>
Scalar frobenius_norm_sq(const KernelSpec& spec, const Grid<Scalar>& grid) {
    const auto& x = grid.nodes();
    const auto& w = grid.weights();
    Scalar diagonal = 0;
    Scalar off = 0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Scalar kii = eval_kernel<Scalar>(spec, x(i), x(i));
        diagonal += w(i) * w(i) * kii * kii;
        Scalar row = 0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const Scalar k = eval_kernel<Scalar>(spec, x(i), x(j));
            row += w(j) * k * k;
        }
        off += w(i) * row;
    }
    return diagonal + Scalar(2) * off;
}

/// Smooth or box-shaped probe used to smear operators with continuous spectrum.
class TestFunction {
public:
    enum class Kind { gaussian, indicator };

    static TestFunction gaussian(double center, double width) {
        if (!(width > 0.0)) throw DomainError("quadrature::TestFunction: gaussian width must be positive");
        return TestFunction(Kind::gaussian, center, width);
    }
    static TestFunction indicator(double a, double b) {
        if (!(a < b)) throw DomainError("quadrature::TestFunction: indicator needs a < b");
        return TestFunction(Kind::indicator, a, b);
    }

    Kind kind() const noexcept { return kind_; }
    double first() const noexcept { return p0_; }   // center or a
    double second() const noexcept { return p1_; }  // width or b

    double operator()(double x) const {
        if (kind_ == Kind::gaussian) {
            const double z = (x - p0_) / p1_;
            return std::exp(-0.5 * z * z);
        }
        return (x >= p0_ && x <= p1_) ? 1.0 : 0.0;
    }

    /// Right end of the effective support (5 widths for a gaussian).
    double support_end() const noexcept { return kind_ == Kind::gaussian ? p0_ + 5.0 * p1_ : p1_; }

    /// Weighted samples sqrt(w_i) f(x_i); throws if the sampled norm vanishes.
    template <typename Scalar>
    VectorX<Scalar> sample(const Grid<Scalar>& grid) const {
        VectorX<Scalar> out(grid.size());
        for (Eigen::Index i = 0; i < grid.size(); ++i)
            out(i) = std::sqrt(grid.weights()(i)) * Scalar((*this)(double(grid.nodes()(i))));
        if (!(out.squaredNorm() > Scalar(0)))
            throw DomainError("quadrature::TestFunction: sampled norm is zero on this grid");
        return out;
    }

private:
    TestFunction(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

    Kind kind_;
    double p0_;
    double p1_;
};

std::string to_string(const TestFunction& f);

/// f^T M g with f, g sampled as sqrt(w_i) f(x_i).
template <typename Scalar>
Scalar quadratic_form(const SymMatrix<Scalar>& m, const TestFunction& f, const TestFunction& g,
                      const Grid<Scalar>& grid) {
    if (m.size() != grid.size())
        throw DimensionMismatch("quadrature::quadratic_form: matrix dimension " + std::to_string(m.size()) +
                                " != grid size " + std::to_string(grid.size()));
    const VectorX<Scalar> fs = f.sample(grid);
    const VectorX<Scalar> gs = g.sample(grid);
    return fs.dot(m.dense() * gs);
}

}  // namespace khl

#endif  // KHL_QUADRATURE_HPP
