#include "khl/hankel.hpp"

#include <cmath>
#include <numbers>

namespace khl {

double coeff_by_quadrature(long k, int nodes) {
    if (k < 1) throw DomainError("hankel::coeff_by_quadrature: k must be >= 1");
    if (nodes < 64) throw InvalidArgument("hankel::coeff_by_quadrature: at least 64 nodes are required");
    constexpr double pi = std::numbers::pi;
    const int order = 8;
    const auto grid = make_grid(pi, (nodes / order) * order, QuadratureRule::gauss_legendre(nodes / order, order));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        sum += grid.weights()(i) * std::cos(double(k) * (grid.nodes()(i) - pi / 2));
    return sum / pi;
}

CauchyPivots hilbert_ldl_pivots(double p, Eigen::Index n) {
    detail::check_shift(p, n, "hilbert_ldl_pivots");
    VectorX<double> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = double(i) + (1.0 - p) / 2.0;

    CauchyPivots out;
    out.log10_magnitude.resize(n);
    out.all_positive = true;
    for (Eigen::Index k = 0; k < n; ++k) {
        double log_d = -std::log10(std::abs(2.0 * x(k)));
        for (Eigen::Index i = 0; i < k; ++i)
            log_d += 2.0 * std::log10(std::abs((x(k) - x(i)) / (x(k) + x(i))));
        out.log10_magnitude(k) = log_d;
        // The squared factors are positive, so sign(d_k) = sign(x_k).
        if (!(x(k) > 0.0)) out.all_positive = false;
    }
    return out;
}

}  // namespace khl
