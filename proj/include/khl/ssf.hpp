#ifndef KHL_SSF_HPP
#define KHL_SSF_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "khl/eigensolve.hpp"
#include "khl/grid.hpp"
#include "khl/quadrature.hpp"
#include "khl/sym_matrix.hpp"

namespace khl {

/// Real polynomial with coefficients in ascending degree.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    static Polynomial monomial(int degree);

    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

    double operator()(double x) const;
    Polynomial derivative() const;

private:
    std::vector<double> coeffs_{0.0};
};

/// Integer-valued, compactly supported step function. values[i] holds on the
/// open interval (breakpoints[i], breakpoints[i+1]); the tails are zero.
class StepFunction {
public:
    StepFunction() = default;
    StepFunction(std::vector<double> breakpoints, std::vector<int> values);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<int>& values() const noexcept { return values_; }

    /// Value at x; breakpoints themselves take the value of the interval to their right.
    int operator()(double x) const;

    /// Exact integral of phi' * xi, telescoped over the constant intervals.
    double integrate_derivative(const Polynomial& phi) const;
    double integral() const;

    int min_value() const;
    int max_value() const;

private:
    std::vector<double> breakpoints_;
    std::vector<int> values_;
};

/// xi(mu) = N0(mu) - N1(mu) with N_j counting eigenvalues strictly below mu.
/// Inputs must be sorted ascending and of equal length.
StepFunction counting_ssf(const std::vector<double>& eigs0, const std::vector<double>& eigs1);

/// alpha0_i <= alpha1_i <= alpha0_{i+1} (up to slack), the order forced by a
/// positive rank-one perturbation.
bool interlaces(const std::vector<double>& eigs0, const std::vector<double>& eigs1, double slack = 1e-10);

struct TraceCheckReport {
    Polynomial phi;
    double coupling = 0.0;
    double lhs = 0.0;  // tr(phi(A1) - phi(A0))
    double rhs = 0.0;  // integral of phi' xi
    double abs_diff = 0.0;
    StepFunction xi;
    std::vector<double> eigs0;
    std::vector<double> eigs1;
    EigenHealth<double> health0{};
    EigenHealth<double> health1{};

    bool passes(double rel_tol = 1e-8) const;
};

/// Checks tr(phi(A1) - phi(A0)) = integral phi' xi for A1 = A0 + c v v^T.
TraceCheckReport trace_formula_check(const SymMatrix<double>& a0, const VectorX<double>& v, double c,
                                     const Polynomial& phi, const JacobiOptions& options = {});

/// Same check over several polynomials sharing one pair of decompositions.
std::vector<TraceCheckReport> trace_formula_check(const SymMatrix<double>& a0, const VectorX<double>& v, double c,
                                                  const std::vector<Polynomial>& phis,
                                                  const JacobiOptions& options = {});

/// One seeded random rank-one trial: gaussian symmetric A0 ((G + G^T)/2),
/// gaussian v, coupling c, and `phis` plus one random polynomial of
/// degree `random_degree` (omitted when random_degree < 0).
struct RandomTrial {
    std::uint64_t seed = 0;
    double coupling = 0.0;
    std::vector<TraceCheckReport> checks;
    bool interlacing = true;  // meaningful for coupling > 0
};

RandomTrial random_trace_trial(std::uint64_t seed, int dim, double coupling, const std::vector<Polynomial>& phis,
                               int random_degree, const JacobiOptions& options = {});

/// E_{A1}(delta_mu) - E_{A0}(delta_mu) for delta_mu = (-inf, mu).
SymMatrix<double> projection_difference(const EigenDecomposition<double>& dec0,
                                        const EigenDecomposition<double>& dec1, double mu, double guard);

struct CrosscheckPair {
    TestFunction f;
    TestFunction g;
    double projection_form = 0.0;  // f^T (E0 - E1) g
    double kernel_form = 0.0;      // f^T discretize(Kmu) g
    double discrepancy = 0.0;      // |projection - kernel| / (1 + |kernel|)
    double discrepancy_reversed = 0.0;  // same with E1 - E0 in place of E0 - E1
};

struct CrosscheckReport {
    double mu = 0.0;
    double lambda = 0.0;
    std::vector<CrosscheckPair> pairs;
    double max_discrepancy = 0.0;
    double max_discrepancy_reversed = 0.0;
    Eigen::Index rank0 = 0;  // rank of E_{A0}(delta_mu)
    Eigen::Index rank1 = 0;
    EigenHealth<double> health0{};
    EigenHealth<double> health1{};
};

/// Rejects grids coarser than 0.2/sqrt(lambda(mu)), windows shorter than one
/// oscillation period 2 pi/sqrt(lambda(mu)), and test functions whose
/// support leaves (0, L].
void check_crosscheck_resolution(double mu, const Grid<double>& grid,
                                 const std::vector<std::pair<TestFunction, TestFunction>>& tests);

/// Smeared comparison of the projection difference of the discretized A0, A1
/// with the discretized k_mu(x + y) kernel. The projection difference enters
/// as E0 - E1: on the half-line E1 - E0 has kernel -k_mu(x + y), so that is
/// the orientation that matches the kernel.
CrosscheckReport crosscheck_kernel(double mu, const Grid<double>& grid,
                                   const std::vector<std::pair<TestFunction, TestFunction>>& tests,
                                   double guard = -1.0, const JacobiOptions& options = {});

/// Gaussian pairs (f_i, f_j), i <= j, centered at `centers` with a common width.
std::vector<std::pair<TestFunction, TestFunction>> gaussian_pairs(const std::vector<double>& centers, double width);

struct DivergenceScan {
    double mu = 0.0;
    std::vector<double> lengths;
    std::vector<double> log_lengths;
    std::vector<double> frob_sq;
    std::vector<Eigen::Index> nodes;
    double slope = 0.0;
    double intercept = 0.0;
};

/// ||discretize(Kmu(mu), grid(L))||_F^2 over L, and the least-squares fit
/// against ln L. The grid for each L has ceil(nodes_per_unit * L) nodes,
/// rounded up to the rule's panel size.
DivergenceScan hs_divergence_scan(double mu, const std::vector<double>& lengths, double nodes_per_unit,
                                  QuadratureRule::Kind rule = QuadratureRule::Kind::gauss_legendre, int jobs = 1);

/// Least-squares line y = slope x + intercept.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace khl

#endif  // KHL_SSF_HPP
