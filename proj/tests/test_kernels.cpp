#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "khl/kernels.hpp"
#include "khl/quadrature.hpp"

using namespace khl;

TEST(LambdaOfMu, Examples) {
    EXPECT_DOUBLE_EQ(lambda_of_mu(0.5), 1.0);
    EXPECT_DOUBLE_EQ(lambda_of_mu(0.25), 3.0);
    EXPECT_NEAR(lambda_of_mu(2.0 / 3.0), 0.5, 1e-15);
}

TEST(LambdaOfMu, StrictlyDecreasing) {
    double previous = lambda_of_mu(0.01);
    for (int i = 2; i < 100; ++i) {
        const double current = lambda_of_mu(0.01 * i);
        EXPECT_LT(current, previous);
        EXPECT_GT(current, 0.0);
        previous = current;
    }
}

TEST(LambdaOfMu, DomainErrors) {
    EXPECT_THROW(lambda_of_mu(0.0), DomainError);
    EXPECT_THROW(lambda_of_mu(1.0), DomainError);
    EXPECT_THROW(lambda_of_mu(-0.3), DomainError);
    EXPECT_THROW(KernelSpec::kmu(1.5), DomainError);
}

TEST(EvalKernel, Examples) {
    const double sinh1_e2 = 0.1590461864017892;
    EXPECT_NEAR(eval_kernel(KernelSpec::a0(), 1.0, 2.0), sinh1_e2, 1e-15);
    EXPECT_NEAR(eval_kernel(KernelSpec::a0(), 1.0, 2.0), 0.15905, 5e-6);
    for (double y : {0.0, 0.3, 2.0, 17.0}) {
        EXPECT_EQ(eval_kernel(KernelSpec::a0(), 0.0, y), 0.0);
        EXPECT_DOUBLE_EQ(eval_kernel(KernelSpec::a1(), 0.0, y), std::exp(-y));
    }
    const auto k = KernelSpec::kmu(0.5);
    EXPECT_NEAR(eval_kernel(k, std::numbers::pi / 2, std::numbers::pi / 2), 0.0, 1e-16);
    EXPECT_NEAR(eval_kernel(k, 0.0, 0.0), 2.0 / std::numbers::pi, 1e-16);
    EXPECT_NEAR(eval_kernel(k, 1e-9, 0.0), 0.63662, 5e-6);
}

TEST(EvalKernel, NegativeArgumentsRejected) {
    EXPECT_THROW(eval_kernel(KernelSpec::a0(), -1.0, 0.0), DomainError);
    EXPECT_THROW(eval_kernel(KernelSpec::kmu(0.3), 0.0, -1e-12), DomainError);
}

TEST(EvalKernel, SymmetryIsExact) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    for (const auto& spec : {KernelSpec::a0(), KernelSpec::a1(), KernelSpec::kmu(0.2), KernelSpec::kmu(0.7)}) {
        for (int i = 0; i < 2000; ++i) {
            const double x = u(rng), y = u(rng);
            EXPECT_EQ(eval_kernel(spec, x, y), eval_kernel(spec, y, x));
        }
    }
}

TEST(EvalKernel, RankOneDifference) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int i = 0; i < 5000; ++i) {
        const double x = u(rng), y = u(rng);
        const double a1 = eval_kernel(KernelSpec::a1(), x, y);
        const double diff = a1 - eval_kernel(KernelSpec::a0(), x, y);
        EXPECT_LE(std::abs(diff - std::exp(-x) * std::exp(-y)), 1e-14 * a1) << x << ", " << y;
    }
}

TEST(EvalKernel, SincBranchesAgreeAtSwitch) {
    for (double s : {1e-4, 1.0000001e-4}) {
        const double series = 1.0 - s * s / 6.0 + s * s * s * s / 120.0;
        EXPECT_NEAR(sinc(s), std::sin(s) / s, 1e-13);
        EXPECT_NEAR(series, std::sin(s) / s, 1e-13);
    }
    EXPECT_NEAR(sinc(0.99999e-4), std::sin(0.99999e-4) / 0.99999e-4, 2.3e-16);
}

TEST(EvalKernel, ContinuityAtOrigin) {
    for (double mu : {0.2, 0.5, 0.8}) {
        const auto k = KernelSpec::kmu(mu);
        const double limit = 2.0 / std::numbers::pi * std::sqrt(lambda_of_mu(mu));
        double previous = std::abs(eval_kernel(k, 0.1, 0.0) - limit);
        for (double s = 0.05; s > 1e-9; s /= 2.0) {
            const double err = std::abs(eval_kernel(k, s, 0.0) - limit);
            EXPECT_LE(err, previous + 1e-16);
            previous = err;
        }
        EXPECT_LE(previous, 1e-15);
    }
}

TEST(ScaleGrid, Examples) {
    Eigen::VectorXd nodes(2), weights(2);
    nodes << 1.0, 2.0;
    weights << 1.0, 1.0;
    const Grid<double> g(nodes, weights, 2.0, QuadratureRule::midpoint());
    const auto s = scale_grid(g, ScalingMap(4.0));
    EXPECT_DOUBLE_EQ(s.nodes()(0), 0.5);
    EXPECT_DOUBLE_EQ(s.nodes()(1), 1.0);
    EXPECT_DOUBLE_EQ(s.weights()(0), 0.5);
    EXPECT_DOUBLE_EQ(s.weights()(1), 0.5);
    EXPECT_DOUBLE_EQ(s.length(), 1.0);

    const auto id = scale_grid(g, ScalingMap(1.0));
    EXPECT_EQ(id.nodes(), g.nodes());
    EXPECT_EQ(id.weights(), g.weights());
}

TEST(ScaleGrid, CompositionLaw) {
    const auto g = make_grid(10.0, 32, QuadratureRule::gauss_legendre_for(32));
    const ScalingMap a(3.0), b(0.7);
    const auto twice = scale_grid(scale_grid(g, a), b);
    const auto once = scale_grid(g, compose(a, b));
    EXPECT_NEAR(compose(a, b).lambda(), 2.1, 1e-15);
    EXPECT_LE((twice.nodes() - once.nodes()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((twice.weights() - once.weights()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_THROW(ScalingMap(0.0), DomainError);
}

TEST(ScaleGrid, EntryIdentityAcrossMu) {
    const auto g = make_grid(8.0, 16, QuadratureRule::gauss_legendre_for(16));
    const auto reference = discretize(KernelSpec::kmu(0.5), g).dense();
    for (double mu : {0.1, 0.2, 0.25, 0.4, 0.5, 0.75, 0.9}) {
        const auto scaled = discretize(KernelSpec::kmu(mu), scale_grid(g, ScalingMap(lambda_of_mu(mu)))).dense();
        EXPECT_LE((scaled - reference).cwiseAbs().maxCoeff(), 1e-12) << "mu = " << mu;
    }
}
