#ifndef KHL_KERNELS_HPP
#define KHL_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "khl/errors.hpp"
#include "khl/grid.hpp"

namespace khl {

enum class KernelKind { A0, A1, Kmu };

/// One of the three kernels: the Dirichlet-type resolvent A0, its rank-one
/// perturbation A1, or the projection-difference kernel k_mu(x + y).
class KernelSpec {
public:
    static KernelSpec a0() { return KernelSpec(KernelKind::A0, 0.0); }
    static KernelSpec a1() { return KernelSpec(KernelKind::A1, 0.0); }
    static KernelSpec kmu(double mu) {
        if (!(mu > 0.0 && mu < 1.0))
            throw DomainError("kernels::KernelSpec: mu = " + std::to_string(mu) + " not in (0, 1)");
        return KernelSpec(KernelKind::Kmu, mu);
    }

    KernelKind kind() const noexcept { return kind_; }
    /// Only meaningful for Kmu.
    double mu() const noexcept { return mu_; }

private:
    KernelSpec(KernelKind kind, double mu) : kind_(kind), mu_(mu) {}

    KernelKind kind_;
    double mu_;
};

std::string to_string(const KernelSpec& spec);

/// lambda(mu) = 1/mu - 1, the spectral parameter paired with the threshold mu.
template <typename Scalar = double>
Scalar lambda_of_mu(Scalar mu) {
    if (!(mu > Scalar(0) && mu < Scalar(1)))
        throw DomainError("kernels::lambda_of_mu: mu not in (0, 1)");
    return Scalar(1) / mu - Scalar(1);
}

/// sin(s)/s with the removable singularity filled in.
template <typename Scalar>
Scalar sinc(Scalar s) {
    using std::abs;
    using std::sin;
    if (abs(s) < Scalar(1e-4)) {
        const Scalar s2 = s * s;
        return Scalar(1) - s2 / Scalar(6) + s2 * s2 / Scalar(120);
    }
    return sin(s) / s;
}

template <typename Scalar = double>
Scalar eval_kernel(const KernelSpec& spec, Scalar x, Scalar y) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    using std::sqrt;
    if (!(x >= Scalar(0)) || !(y >= Scalar(0)))
        throw DomainError("kernels::eval_kernel: arguments must be non-negative");
    const Scalar lo = std::min(x, y);
    const Scalar hi = std::max(x, y);
    switch (spec.kind()) {
        case KernelKind::A0:
            return sinh(lo) * exp(-hi);
        case KernelKind::A1:
            return cosh(lo) * exp(-hi);
        case KernelKind::Kmu: {
            const Scalar root = sqrt(lambda_of_mu(Scalar(spec.mu())));
            return Scalar(2) / std::numbers::pi_v<Scalar> * root * sinc(root * (x + y));
        }
    }
    return Scalar(0);
}

/// U_lambda acting on the discretization substrate.
class ScalingMap {
public:
    explicit ScalingMap(double lambda) : lambda_(lambda) {
        if (!(lambda > 0.0)) throw DomainError("kernels::ScalingMap: lambda must be positive");
    }
    double lambda() const noexcept { return lambda_; }

    /// Applying `first` then `second` equals ScalingMap(first * second).
    friend ScalingMap compose(const ScalingMap& first, const ScalingMap& second) {
        return ScalingMap(first.lambda_ * second.lambda_);
    }

private:
    double lambda_;
};

/// Nodes and weights divided by sqrt(lambda). Discretizing K_mu on
/// scale_grid(g, lambda(mu)) reproduces the discretization of K_{1/2} on g.
template <typename Scalar>
Grid<Scalar> scale_grid(const Grid<Scalar>& grid, const ScalingMap& map) {
    using std::sqrt;
    const Scalar root = sqrt(Scalar(map.lambda()));
    return Grid<Scalar>(grid.nodes() / root, grid.weights() / root, grid.length() / root, grid.rule());
}

}  // namespace khl

#endif  // KHL_KERNELS_HPP
