#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "khl/eigensolve.hpp"
#include "khl/hankel.hpp"

using namespace khl;

namespace {

SymMatrix<double> random_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
    return SymMatrix<double>::from_lower(0.5 * (g + g.transpose()));
}

SymMatrix<double> diagonal(std::initializer_list<double> d) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return SymMatrix<double>::from_lower(Eigen::MatrixXd(v.asDiagonal()));
}

}  // namespace

TEST(SymMatrix, LowerTriangleAuthoritative) {
    Eigen::Matrix2d m;
    m << 1, 99, 2, 3;
    const auto s = SymMatrix<double>::from_lower(m);
    EXPECT_EQ(s(0, 1), 2.0);
    EXPECT_EQ(s.dense()(0, 1), 2.0);
    Eigen::Matrix2d bad;
    bad << NAN, 0, 0, 1;
    EXPECT_THROW(SymMatrix<double>::from_lower(bad), DomainError);
    EXPECT_THROW(SymMatrix<double>::identity(2) + SymMatrix<double>::identity(3), DimensionMismatch);
}

TEST(JacobiEigen, DiagonalInput) {
    const auto dec = jacobi_eigen(diagonal({3, 1, 2}));
    EXPECT_EQ(dec.values, Eigen::Vector3d(1, 2, 3));
    Eigen::Matrix3d expected;
    expected << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    EXPECT_EQ(dec.vectors, expected);
    EXPECT_EQ(dec.sweeps, 0);
}

TEST(JacobiEigen, Swap) {
    Eigen::Matrix2d m;
    m << 0, 1, 1, 0;
    const auto dec = jacobi_eigen(SymMatrix<double>::from_lower(m));
    EXPECT_NEAR(dec.values(0), -1.0, 1e-15);
    EXPECT_NEAR(dec.values(1), 1.0, 1e-15);
}

TEST(JacobiEigen, HilbertTwoByTwo) {
    const auto dec = jacobi_eigen(hilbert_shifted(0.0, 2));
    EXPECT_NEAR(dec.values(0), 0.06574145408933514, 1e-12);
    EXPECT_NEAR(dec.values(1), 1.2675918792439982, 1e-12);
}

TEST(JacobiEigen, AgreesWithEigenSelfAdjointSolver) {
    for (int n : {1, 2, 5, 30, 90}) {
        const auto m = random_symmetric(n, 100 + n);
        const auto dec = jacobi_eigen(m);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m.dense());
        const double scale = std::max(1.0, m.dense().norm());
        EXPECT_LE((dec.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12 * scale) << n;
        EXPECT_TRUE(health(dec).ok()) << n;
    }
}

TEST(JacobiEigen, HealthAndOrdering) {
    const auto dec = jacobi_eigen(random_symmetric(60, 3));
    for (Eigen::Index i = 1; i < dec.size(); ++i) EXPECT_LE(dec.values(i - 1), dec.values(i));
    const auto h = health(dec);
    EXPECT_LE(h.residual_rel, 1e-10);
    EXPECT_LE(h.orth_defect, 1e-10);
    EXPECT_LE(h.trace_rel, 1e-10);
    EXPECT_LE(h.frobenius_rel, 1e-9);
}

TEST(JacobiEigen, SignConvention) {
    const auto dec = jacobi_eigen(random_symmetric(25, 4));
    for (Eigen::Index k = 0; k < dec.size(); ++k) {
        Eigen::Index i = 0;
        while (std::abs(dec.vectors(i, k)) <= 64 * 2.220446049250313e-16) ++i;
        EXPECT_GT(dec.vectors(i, k), 0.0);
    }
}

TEST(JacobiEigen, BitwiseDeterministic) {
    const auto m = random_symmetric(40, 5);
    const auto a = jacobi_eigen(m);
    const auto b = jacobi_eigen(m);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.vectors, b.vectors);
}

TEST(JacobiEigen, SweepCapReportsOffDiagonalMass) {
    try {
        jacobi_eigen(random_symmetric(30, 6), {1e-12, 1});
        FAIL() << "expected NoConvergence";
    } catch (const NoConvergence& e) {
        EXPECT_GT(e.achieved_off_norm(), 0.0);
        EXPECT_NE(std::string(e.what()).find("eigensolve::jacobi_eigen"), std::string::npos);
    }
}

TEST(JacobiEigen, InvalidOptions) {
    EXPECT_THROW(jacobi_eigen(diagonal({1, 2}), {0.0, 30}), InvalidArgument);
    EXPECT_THROW(jacobi_eigen(diagonal({1, 2}), {1e-12, 0}), InvalidArgument);
}

TEST(SpectralProjection, Examples) {
    const auto dec = jacobi_eigen(diagonal({0.2, 0.8}));
    const auto p = spectral_projection(dec, 0.5, default_guard(dec));
    EXPECT_EQ(p.rank, 1);
    EXPECT_EQ(p.p.dense(), Eigen::Matrix2d(Eigen::Vector2d(1, 0).asDiagonal()));

    const auto low = spectral_projection(dec, -1.0, 1e-8);
    EXPECT_EQ(low.rank, 0);
    EXPECT_EQ(low.p.dense(), Eigen::Matrix2d::Zero());

    const auto high = spectral_projection(dec, 5.0, 1e-8);
    EXPECT_EQ(high.rank, 2);
    EXPECT_EQ(high.p.dense(), Eigen::Matrix2d::Identity());
}

TEST(SpectralProjection, Idempotent) {
    const auto dec = jacobi_eigen(random_symmetric(50, 7));
    const auto p = spectral_projection(dec, 0.1, default_guard(dec));
    const Eigen::MatrixXd& m = p.p.dense();
    EXPECT_LE((m * m - m).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(m, m.transpose());
    EXPECT_NEAR(m.trace(), double(p.rank), 1e-8);
}

TEST(SpectralProjection, ThresholdTooClose) {
    const auto dec = jacobi_eigen(diagonal({0.2, 0.8}));
    EXPECT_THROW(spectral_projection(dec, 0.2 + 1e-12, 1e-8), ThresholdTooClose);
    EXPECT_THROW(spectral_projection(dec, 0.5, 0.0), InvalidArgument);
    EXPECT_NEAR(default_guard(dec), 0.6e-8, 1e-20);
}
