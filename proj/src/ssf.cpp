#include "khl/ssf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "khl/kernels.hpp"
#include "khl/parallel.hpp"

namespace khl {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::monomial(int degree) {
    if (degree < 0) throw InvalidArgument("ssf::Polynomial::monomial: negative degree");
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = 1.0;
    return Polynomial(std::move(c));
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

// -------------------------------------------------------------- StepFunction

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<int> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end()))
        throw InvalidArgument("ssf::StepFunction: breakpoints must be sorted");
    const std::size_t intervals = breakpoints_.empty() ? 0 : breakpoints_.size() - 1;
    if (values_.size() != intervals)
        throw DimensionMismatch("ssf::StepFunction: need one value per interval between breakpoints");
}

int StepFunction::operator()(double x) const {
    if (breakpoints_.size() < 2 || x < breakpoints_.front() || x >= breakpoints_.back()) return 0;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::integrate_derivative(const Polynomial& phi) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (values_[i] != 0) sum += values_[i] * (phi(breakpoints_[i + 1]) - phi(breakpoints_[i]));
    return sum;
}

double StepFunction::integral() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) sum += values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
    return sum;
}

int StepFunction::min_value() const {
    return values_.empty() ? 0 : std::min(0, *std::min_element(values_.begin(), values_.end()));
}

int StepFunction::max_value() const {
    return values_.empty() ? 0 : std::max(0, *std::max_element(values_.begin(), values_.end()));
}

StepFunction counting_ssf(const std::vector<double>& eigs0, const std::vector<double>& eigs1) {
    if (eigs0.size() != eigs1.size())
        throw DimensionMismatch("ssf::counting_ssf: spectra have " + std::to_string(eigs0.size()) + " and " +
                                std::to_string(eigs1.size()) + " eigenvalues");
    if (!std::is_sorted(eigs0.begin(), eigs0.end()) || !std::is_sorted(eigs1.begin(), eigs1.end()))
        throw InvalidArgument("ssf::counting_ssf: eigenvalues must be sorted ascending");

    std::vector<double> breaks;
    breaks.reserve(eigs0.size() + eigs1.size());
    std::merge(eigs0.begin(), eigs0.end(), eigs1.begin(), eigs1.end(), std::back_inserter(breaks));
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<int> values;
    if (breaks.size() >= 2) values.reserve(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        // Every mu inside (breaks[i], breaks[i+1]) sees the eigenvalues <= breaks[i] below it.
        const auto n0 = std::upper_bound(eigs0.begin(), eigs0.end(), breaks[i]) - eigs0.begin();
        const auto n1 = std::upper_bound(eigs1.begin(), eigs1.end(), breaks[i]) - eigs1.begin();
        values.push_back(static_cast<int>(n0 - n1));
    }
    return StepFunction(std::move(breaks), std::move(values));
}

bool interlaces(const std::vector<double>& eigs0, const std::vector<double>& eigs1, double slack) {
    if (eigs0.size() != eigs1.size()) throw DimensionMismatch("ssf::interlaces: spectra differ in length");
    for (std::size_t i = 0; i < eigs0.size(); ++i) {
        if (eigs1[i] < eigs0[i] - slack) return false;
        if (i + 1 < eigs0.size() && eigs1[i] > eigs0[i + 1] + slack) return false;
    }
    return true;
}

// ------------------------------------------------------------- trace formula

bool TraceCheckReport::passes(double rel_tol) const { return abs_diff <= rel_tol * std::max(1.0, std::abs(lhs)); }

namespace {

std::vector<double> to_std(const VectorX<double>& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::vector<TraceCheckReport> trace_formula_check(const SymMatrix<double>& a0, const VectorX<double>& v, double c,
                                                  const std::vector<Polynomial>& phis,
                                                  const JacobiOptions& options) {
    if (v.size() != a0.size())
        throw DimensionMismatch("ssf::trace_formula_check: perturbation vector has the wrong length");
    const auto a1 = SymMatrix<double>::from_lower(a0.dense() + c * v * v.transpose());
    const auto dec0 = jacobi_eigen(a0, options);
    const auto dec1 = jacobi_eigen(a1, options);
    const auto eigs0 = to_std(dec0.values);
    const auto eigs1 = to_std(dec1.values);
    const StepFunction xi = counting_ssf(eigs0, eigs1);

    std::vector<TraceCheckReport> out;
    out.reserve(phis.size());
    for (const auto& phi : phis) {
        TraceCheckReport r;
        r.phi = phi;
        r.coupling = c;
        for (std::size_t i = 0; i < eigs0.size(); ++i) r.lhs += phi(eigs1[i]) - phi(eigs0[i]);
        r.rhs = xi.integrate_derivative(phi);
        r.abs_diff = std::abs(r.lhs - r.rhs);
        r.xi = xi;
        r.eigs0 = eigs0;
        r.eigs1 = eigs1;
        r.health0 = health(dec0);
        r.health1 = health(dec1);
        out.push_back(std::move(r));
    }
    return out;
}

TraceCheckReport trace_formula_check(const SymMatrix<double>& a0, const VectorX<double>& v, double c,
                                     const Polynomial& phi, const JacobiOptions& options) {
    return trace_formula_check(a0, v, c, std::vector<Polynomial>{phi}, options).front();
}

RandomTrial random_trace_trial(std::uint64_t seed, int dim, double coupling, const std::vector<Polynomial>& phis,
                               int random_degree, const JacobiOptions& options) {
    if (dim < 2) throw InvalidArgument("ssf::random_trace_trial: dimension must be >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixX<double> g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = normal(rng);
    VectorX<double> v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);

    std::vector<Polynomial> all = phis;
    if (random_degree >= 0) {
        std::vector<double> coeffs(static_cast<std::size_t>(random_degree) + 1);
        for (auto& x : coeffs) x = normal(rng);
        all.emplace_back(std::move(coeffs));
    }

    RandomTrial trial;
    trial.seed = seed;
    trial.coupling = coupling;
    const auto a0 = SymMatrix<double>::from_lower(0.5 * (g + g.transpose()));
    trial.checks = trace_formula_check(a0, v, coupling, all, options);
    if (coupling > 0.0 && !trial.checks.empty())
        trial.interlacing = interlaces(trial.checks.front().eigs0, trial.checks.front().eigs1);
    return trial;
}

// ------------------------------------------------------ projection difference

SymMatrix<double> projection_difference(const EigenDecomposition<double>& dec0,
                                        const EigenDecomposition<double>& dec1, double mu, double guard) {
    if (dec0.size() != dec1.size())
        throw DimensionMismatch("ssf::projection_difference: decompositions differ in dimension");
    const auto e0 = spectral_projection(dec0, mu, guard);
    const auto e1 = spectral_projection(dec1, mu, guard);
    return e1.p - e0.p;
}

std::vector<std::pair<TestFunction, TestFunction>> gaussian_pairs(const std::vector<double>& centers, double width) {
    std::vector<std::pair<TestFunction, TestFunction>> out;
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i; j < centers.size(); ++j)
            out.emplace_back(TestFunction::gaussian(centers[i], width), TestFunction::gaussian(centers[j], width));
    return out;
}

void check_crosscheck_resolution(double mu, const Grid<double>& grid,
                                 const std::vector<std::pair<TestFunction, TestFunction>>& tests) {
    const double root = std::sqrt(lambda_of_mu(mu));
    const double max_spacing = 0.2 / root;
    if (grid.max_spacing() > max_spacing)
        throw ResolutionError("ssf::crosscheck_kernel: node spacing " + std::to_string(grid.max_spacing()) +
                              " exceeds 0.2/sqrt(lambda(mu)) = " + std::to_string(max_spacing));
    const double period = 2.0 * std::numbers::pi / root;
    if (grid.length() < period)
        throw ResolutionError("ssf::crosscheck_kernel: window L = " + std::to_string(grid.length()) +
                              " is shorter than the oscillation period " + std::to_string(period) +
                              " of k_mu at mu = " + std::to_string(mu));
    if (tests.empty()) throw InvalidArgument("ssf::crosscheck_kernel: no test pairs given");
    for (const auto& [f, g] : tests)
        for (const TestFunction* t : {&f, &g})
            if (t->support_end() > grid.length())
                throw ResolutionError("ssf::crosscheck_kernel: test function " + to_string(*t) +
                                      " is supported beyond L = " + std::to_string(grid.length()));
}

CrosscheckReport crosscheck_kernel(double mu, const Grid<double>& grid,
                                   const std::vector<std::pair<TestFunction, TestFunction>>& tests, double guard,
                                   const JacobiOptions& options) {
    check_crosscheck_resolution(mu, grid, tests);

    const auto dec0 = jacobi_eigen(discretize(KernelSpec::a0(), grid), options);
    const auto dec1 = jacobi_eigen(discretize(KernelSpec::a1(), grid), options);
    if (!(guard > 0.0)) guard = std::max(default_guard(dec0), default_guard(dec1));
    const auto e0 = spectral_projection(dec0, mu, guard);
    const auto e1 = spectral_projection(dec1, mu, guard);
    const SymMatrix<double> lowered = e0.p - e1.p;  // E0 - E1
    const SymMatrix<double> kernel = discretize(KernelSpec::kmu(mu), grid);

    CrosscheckReport out;
    out.mu = mu;
    out.lambda = lambda_of_mu(mu);
    out.rank0 = e0.rank;
    out.rank1 = e1.rank;
    out.health0 = health(dec0);
    out.health1 = health(dec1);
    for (const auto& [f, g] : tests) {
        CrosscheckPair pair{f, g};
        pair.projection_form = quadratic_form(lowered, f, g, grid);
        pair.kernel_form = quadratic_form(kernel, f, g, grid);
        const double scale = 1.0 + std::abs(pair.kernel_form);
        pair.discrepancy = std::abs(pair.projection_form - pair.kernel_form) / scale;
        pair.discrepancy_reversed = std::abs(-pair.projection_form - pair.kernel_form) / scale;
        out.max_discrepancy = std::max(out.max_discrepancy, pair.discrepancy);
        out.max_discrepancy_reversed = std::max(out.max_discrepancy_reversed, pair.discrepancy_reversed);
        out.pairs.push_back(pair);
    }
    return out;
}

// ---------------------------------------------------------------- divergence

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("ssf::fit_line: need >= 2 matched points");
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidArgument("ssf::fit_line: abscissae are all equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

DivergenceScan hs_divergence_scan(double mu, const std::vector<double>& lengths, double nodes_per_unit,
                                  QuadratureRule::Kind rule, int jobs) {
    const double root = std::sqrt(lambda_of_mu(mu));
    if (lengths.size() < 3) throw InvalidArgument("ssf::hs_divergence_scan: at least three lengths are required");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!(lengths[i] > 0.0)) throw InvalidArgument("ssf::hs_divergence_scan: lengths must be positive");
        if (i > 0 && !(lengths[i] > lengths[i - 1]))
            throw InvalidArgument("ssf::hs_divergence_scan: lengths must be strictly increasing");
    }
    if (!(nodes_per_unit >= 10.0 * root))
        throw ResolutionError("ssf::hs_divergence_scan: nodes_per_unit " + std::to_string(nodes_per_unit) +
                              " is below 10 sqrt(lambda(mu)) = " + std::to_string(10.0 * root));

    const KernelSpec spec = KernelSpec::kmu(mu);
    struct Point {
        double frob_sq = 0.0;
        Eigen::Index nodes = 0;
    };
    const auto points = parallel_map<Point>(lengths.size(), jobs, [&](std::size_t i) {
        int n = static_cast<int>(std::ceil(nodes_per_unit * lengths[i]));
        QuadratureRule r = QuadratureRule::midpoint();
        if (rule == QuadratureRule::Kind::gauss_legendre) {
            n = ((n + 7) / 8) * 8;
            r = QuadratureRule::gauss_legendre_for(n);
        }
        const auto grid = make_grid(lengths[i], n, r);
        return Point{frobenius_norm_sq(spec, grid), grid.size()};
    });

    DivergenceScan out;
    out.mu = mu;
    out.lengths = lengths;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        out.log_lengths.push_back(std::log(lengths[i]));
        out.frob_sq.push_back(points[i].frob_sq);
        out.nodes.push_back(points[i].nodes);
    }
    std::tie(out.slope, out.intercept) = fit_line(out.log_lengths, out.frob_sq);
    return out;
}

}  // namespace khl
