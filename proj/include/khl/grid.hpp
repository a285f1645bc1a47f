#ifndef KHL_GRID_HPP
#define KHL_GRID_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "khl/errors.hpp"
#include "khl/sym_matrix.hpp"

namespace khl {

struct QuadratureRule {
    enum class Kind { midpoint, gauss_legendre };

    Kind kind = Kind::midpoint;
    int panels = 0;  // gauss_legendre only
    int order = 0;   // gauss_legendre only

    static QuadratureRule midpoint() { return {}; }
    static QuadratureRule gauss_legendre(int panels, int order) {
        if (panels < 1 || order < 1)
            throw InvalidArgument("quadrature::gauss_legendre: panels and order must be positive");
        return {Kind::gauss_legendre, panels, order};
    }
    /// Composite rule with `n / order` panels; n must be a multiple of order.
    static QuadratureRule gauss_legendre_for(int n, int order = 8) {
        if (order < 1 || n % order != 0)
            throw InvalidArgument("quadrature::make_grid: N = " + std::to_string(n) +
                                  " is not a multiple of the Gauss-Legendre order " + std::to_string(order));
        return gauss_legendre(n / order, order);
    }

    friend bool operator==(const QuadratureRule&, const QuadratureRule&) = default;
};

std::string to_string(const QuadratureRule& rule);

/// Truncated quadrature grid on (0, L]. Immutable once built; construction
/// validates every invariant (ascending positive nodes in (0, L], positive
/// weights summing to L).
template <typename Scalar>
class Grid {
public:
    Grid(VectorX<Scalar> nodes, VectorX<Scalar> weights, Scalar length, QuadratureRule rule)
        : nodes_(std::move(nodes)), weights_(std::move(weights)), length_(length), rule_(rule) {
        validate();
    }

    Eigen::Index size() const noexcept { return nodes_.size(); }
    const VectorX<Scalar>& nodes() const noexcept { return nodes_; }
    const VectorX<Scalar>& weights() const noexcept { return weights_; }
    Scalar length() const noexcept { return length_; }
    const QuadratureRule& rule() const noexcept { return rule_; }

    /// Largest distance between consecutive nodes, counting the gap from 0 to the first node.
    Scalar max_spacing() const {
        Scalar gap = nodes_(0);
        for (Eigen::Index i = 1; i < size(); ++i) gap = std::max(gap, nodes_(i) - nodes_(i - 1));
        return gap;
    }

private:
    void validate() const {
        using std::abs;
        if (nodes_.size() != weights_.size())
            throw DimensionMismatch("quadrature::Grid: nodes and weights differ in length");
        if (nodes_.size() < 2) throw InvalidArgument("quadrature::Grid: at least two nodes are required");
        if (!(length_ > Scalar(0))) throw DomainError("quadrature::Grid: truncation length must be positive");
        for (Eigen::Index i = 0; i < size(); ++i) {
            if (!(nodes_(i) > Scalar(0)) || nodes_(i) > length_ * (Scalar(1) + Scalar(1e-14)))
                throw InvalidArgument("quadrature::Grid: node " + std::to_string(i) + " outside (0, L]");
            if (i > 0 && !(nodes_(i) > nodes_(i - 1)))
                throw InvalidArgument("quadrature::Grid: nodes are not strictly increasing");
            if (!(weights_(i) > Scalar(0))) throw InvalidArgument("quadrature::Grid: non-positive weight");
        }
        if (abs(weights_.sum() - length_) > Scalar(1e-10) * length_)
            throw InvalidArgument("quadrature::Grid: weights do not sum to L");
    }

    VectorX<Scalar> nodes_;
    VectorX<Scalar> weights_;
    Scalar length_;
    QuadratureRule rule_;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> gauss_legendre_reference(int order) {
    using std::abs;
    using std::cos;
    VectorX<Scalar> x(order), w(order);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        Scalar z = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(order) + Scalar(0.5)));
        Scalar dp = 0;
        for (int it = 0; it < 100; ++it) {
            Scalar p0 = 1, p1 = 0;
            for (int k = 1; k <= order; ++k) {
                const Scalar p2 = p1;
                p1 = p0;
                p0 = ((Scalar(2 * k - 1)) * z * p1 - Scalar(k - 1) * p2) / Scalar(k);
            }
            dp = Scalar(order) * (z * p0 - p1) / (z * z - Scalar(1));
            const Scalar step = p0 / dp;
            z -= step;
            if (abs(step) <= std::numeric_limits<Scalar>::epsilon()) break;
        }
        // Recompute the derivative at the converged root.
        Scalar p0 = 1, p1 = 0;
        for (int k = 1; k <= order; ++k) {
            const Scalar p2 = p1;
            p1 = p0;
            p0 = ((Scalar(2 * k - 1)) * z * p1 - Scalar(k - 1) * p2) / Scalar(k);
        }
        dp = Scalar(order) * (z * p0 - p1) / (z * z - Scalar(1));
        const Scalar weight = Scalar(2) / ((Scalar(1) - z * z) * dp * dp);
        x(i) = -z;
        x(order - 1 - i) = z;
        w(i) = weight;
        w(order - 1 - i) = weight;
    }
    if (order % 2 == 1) x(order / 2) = 0;
    return {x, w};
}

}  // namespace detail

/// Deterministic truncated grid on (0, L]. For Gauss-Legendre composite rules
/// N must equal panels * order.
template <typename Scalar = double>
Grid<Scalar> make_grid(Scalar length, int n, const QuadratureRule& rule) {
    if (!(length > Scalar(0))) throw DomainError("quadrature::make_grid: L must be positive");
    if (n < 2) throw InvalidArgument("quadrature::make_grid: N must be at least 2");
    VectorX<Scalar> nodes(n), weights(n);
    switch (rule.kind) {
        case QuadratureRule::Kind::midpoint: {
            const Scalar h = length / Scalar(n);
            for (int i = 0; i < n; ++i) {
                nodes(i) = (Scalar(i) + Scalar(0.5)) * h;
                weights(i) = h;
            }
            break;
        }
        case QuadratureRule::Kind::gauss_legendre: {
            if (rule.panels * rule.order != n)
                throw InvalidArgument("quadrature::make_grid: N = " + std::to_string(n) + " != panels (" +
                                      std::to_string(rule.panels) + ") x order (" + std::to_string(rule.order) +
                                      ")");
            const auto [ref_x, ref_w] = detail::gauss_legendre_reference<Scalar>(rule.order);
            const Scalar h = length / Scalar(rule.panels);
            for (int p = 0; p < rule.panels; ++p) {
                for (int k = 0; k < rule.order; ++k) {
                    nodes(p * rule.order + k) = (Scalar(p) + (ref_x(k) + Scalar(1)) / Scalar(2)) * h;
                    weights(p * rule.order + k) = ref_w(k) * h / Scalar(2);
                }
            }
            break;
        }
    }
    return Grid<Scalar>(std::move(nodes), std::move(weights), length, rule);
}

}  // namespace khl

#endif  // KHL_GRID_HPP
