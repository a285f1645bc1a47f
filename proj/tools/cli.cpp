#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "khl/eigensolve.hpp"
#include "khl/errors.hpp"
#include "khl/hankel.hpp"
#include "khl/kernels.hpp"
#include "khl/parallel.hpp"
#include "khl/quadrature.hpp"
#include "khl/spectra.hpp"
#include "khl/ssf.hpp"

namespace khl::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

/// Invalid flag values or combinations; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string op;
    double p = 0.5;
    double mu = 0.5;
    std::vector<double> lengths;
    int n = 0;
    std::string rule = "gauss-legendre";
    std::vector<int> sizes;
    std::optional<std::uint64_t> seed;
    int trials = 100;
    int degree = 5;
    int probe = 0;
    std::vector<double> centers{2.0, 5.0, 10.0};
    double width = 1.0;
    double nodes_per_unit = 0.0;
    double guard = 0.0;
    std::string out;
    std::string format;
    int jobs = 1;
    double tol = 1e-12;
    int max_sweeps = 30;
    bool timing = false;

    JacobiOptions jacobi() const { return {tol, max_sweeps}; }
    QuadratureRule::Kind rule_kind() const {
        return rule == "midpoint" ? QuadratureRule::Kind::midpoint : QuadratureRule::Kind::gauss_legendre;
    }
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ----------------------------------------------------------------- validation

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

const std::vector<std::string> kOperators{"a0", "a1", "kmu", "hilbert", "hilbert-alt", "hankel-symbol"};

bool is_kernel_operator(const std::string& op) { return op == "a0" || op == "a1" || op == "kmu"; }

void validate_common(const RunConfig& c) {
    require(c.tol > 0.0, "--tol must be positive");
    require(c.max_sweeps >= 1, "--max-sweeps must be >= 1");
    require(c.jobs >= 1, "--jobs must be >= 1");
    require(c.format == "csv" || c.format == "json", "--format must be csv or json");
    require(c.rule == "midpoint" || c.rule == "gauss-legendre", "--rule must be midpoint or gauss-legendre");
}

void validate_operator(const RunConfig& c) {
    require(std::find(kOperators.begin(), kOperators.end(), c.op) != kOperators.end(),
            "--operator must be one of a0, a1, kmu, hilbert, hilbert-alt, hankel-symbol");
    if (c.op == "hilbert" || c.op == "hilbert-alt")
        require(c.p == 0.0 || c.p == 0.5 || c.p == -0.5, "--p must be one of 0, 0.5, -0.5");
    if (c.op == "kmu") require(c.mu > 0.0 && c.mu < 1.0, "--mu must lie in (0, 1)");
    if (is_kernel_operator(c.op)) {
        require(c.lengths.size() == 1, "--L takes a single value for " + c.op);
        require(c.lengths.front() > 0.0, "--L must be positive");
    }
}

void validate_size_for_rule(const RunConfig& c, int n) {
    if (is_kernel_operator(c.op) && c.rule == "gauss-legendre")
        require(n % 8 == 0, "--N = " + std::to_string(n) + " must be a multiple of 8 for --rule gauss-legendre");
}

void validate_sizes(const RunConfig& c) {
    require(c.sizes.size() >= 3, "--sizes needs at least three entries");
    for (std::size_t i = 0; i < c.sizes.size(); ++i) {
        require(c.sizes[i] >= 2, "--sizes entries must be >= 2");
        if (i > 0) require(c.sizes[i] > c.sizes[i - 1], "--sizes must be strictly increasing");
        validate_size_for_rule(c, c.sizes[i]);
    }
}

SectionBuilder make_builder(const RunConfig& c) {
    if (c.op == "hankel-symbol") return builders::hankel();
    if (c.op == "hilbert") return builders::hilbert(c.p);
    if (c.op == "hilbert-alt") return builders::hilbert_alt(c.p);
    const double length = c.lengths.front();
    if (c.op == "a0") return builders::discretized(KernelSpec::a0(), length, c.rule_kind());
    if (c.op == "a1") return builders::discretized(KernelSpec::a1(), length, c.rule_kind());
    return builders::kmu(c.mu, length, c.rule_kind());
}

/// The interval the operator's spectrum is expected to fill.
std::pair<double, double> natural_interval(const std::string& op) {
    if (op == "a0" || op == "a1") return {0.0, 1.0};
    if (op == "hilbert" || op == "hilbert-alt") return {0.0, std::numbers::pi};
    return {-1.0, 1.0};
}

// -------------------------------------------------------------- serialization

Json to_json(const EigenHealth<double>& h) {
    return Json{{"residual_rel", h.residual_rel},
                {"orth_defect", h.orth_defect},
                {"trace_rel", h.trace_rel},
                {"frobenius_rel", h.frobenius_rel}};
}

Json to_json(const FillReport& f) {
    return Json{{"a", f.a},
                {"b", f.b},
                {"min_eig", f.min_eig},
                {"max_eig", f.max_eig},
                {"max_gap", f.max_gap},
                {"count_outside", f.count_outside}};
}

Json vector_json(const VectorX<double>& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json config_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    if (!c.op.empty()) j["operator"] = c.op;
    if (c.command == "spectrum" || c.command == "fill-scan" || c.command == "ac-probe") {
        if (c.op == "hilbert" || c.op == "hilbert-alt") j["p"] = c.p;
        if (c.op == "kmu") j["mu"] = c.mu;
        if (is_kernel_operator(c.op)) {
            j["L"] = c.lengths.front();
            j["rule"] = c.rule;
        }
    }
    if (c.command == "divergence" || c.command == "crosscheck") {
        j["mu"] = c.mu;
        j["L"] = c.lengths;
        j["rule"] = c.rule;
    }
    if (c.command == "divergence") j["nodes_per_unit"] = c.nodes_per_unit;
    if (c.command == "crosscheck") {
        j["centers"] = c.centers;
        j["width"] = c.width;
        if (c.guard > 0.0) j["guard"] = c.guard;
    }
    if (c.n > 0) j["N"] = c.n;
    if (!c.sizes.empty()) j["sizes"] = c.sizes;
    if (c.command == "ac-probe") j["probe"] = c.probe;
    if (c.command == "ssf-demo") {
        j["trials"] = c.trials;
        j["seed"] = *c.seed;
        j["degree"] = c.degree;
    }
    j["format"] = c.format;
    j["jobs"] = c.jobs;
    j["tol"] = c.tol;
    j["max_sweeps"] = c.max_sweeps;
    return j;
}

struct Output {
    std::string csv;
    Json payload;
};

// ------------------------------------------------------------------- commands

Output cmd_spectrum(const RunConfig& c) {
    const auto dec = jacobi_eigen(make_builder(c)(c.n), c.jacobi());
    const auto [a, b] = natural_interval(c.op);
    Output out;
    std::ostringstream csv;
    csv << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < dec.size(); ++i) csv << i << ',' << num(dec.values(i)) << '\n';
    out.csv = csv.str();
    out.payload = Json{{"dimension", dec.size()},
                       {"eigenvalues", vector_json(dec.values)},
                       {"fill", to_json(fill_metrics(dec, a, b))},
                       {"sweeps", dec.sweeps},
                       {"health", to_json(health(dec))}};
    return out;
}

Output cmd_parity_check(const RunConfig& c) {
    const ParityCheck r = parity_check(c.n, c.jacobi());
    Output out;
    std::ostringstream csv;
    csv << "metric,value\n"
        << "off_max," << num(r.off_max) << '\n'
        << "even_deviation," << num(r.even_deviation) << '\n'
        << "odd_deviation," << num(r.odd_deviation) << '\n'
        << "spectrum_union_mismatch," << num(r.spectrum_union_mismatch) << '\n';
    out.csv = csv.str();
    Json health = Json::array();
    for (const auto& h : r.health) health.push_back(to_json(h));
    out.payload = Json{{"N", r.half},
                       {"dimension", 2 * r.half},
                       {"off_max", r.off_max},
                       {"even_deviation", r.even_deviation},
                       {"odd_deviation", r.odd_deviation},
                       {"spectrum_union_mismatch", r.spectrum_union_mismatch},
                       {"health", health}};
    return out;
}

Output cmd_ssf_demo(const RunConfig& c) {
    static constexpr double kCouplings[] = {1.0, -1.0, 0.1, -0.1};
    const std::uint64_t base = *c.seed;
    const std::vector<Polynomial> monomials{Polynomial::monomial(1), Polynomial::monomial(2), Polynomial::monomial(3)};
    const auto trials = parallel_map<RandomTrial>(static_cast<std::size_t>(c.trials), c.jobs, [&](std::size_t t) {
        return random_trace_trial(base + t, c.n, kCouplings[t % 4], monomials, c.degree, c.jacobi());
    });

    Output out;
    std::ostringstream csv;
    csv << "trial,seed,coupling,phi_degree,lhs,rhs,abs_diff\n";
    Json results = Json::array();
    double max_abs = 0.0, max_rel = 0.0;
    bool all_pass = true, all_interlace = true, xi_range_ok = true;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& trial = trials[t];
        const auto& first = trial.checks.front();
        if (trial.coupling > 0.0) {
            all_interlace = all_interlace && trial.interlacing;
            xi_range_ok = xi_range_ok && first.xi.min_value() >= 0 && first.xi.max_value() <= 1;
        }

        // Naive counting at the mean eigenvalue of A0, next to the trace of E1 - E0 there.
        double naive_mu = 0.0;
        for (double x : first.eigs0) naive_mu += x;
        naive_mu /= double(first.eigs0.size());
        const auto below = [naive_mu](const std::vector<double>& e) {
            return std::lower_bound(e.begin(), e.end(), naive_mu) - e.begin();
        };
        const long trace_e1_minus_e0 = static_cast<long>(below(first.eigs1) - below(first.eigs0));

        Json checks = Json::array();
        for (const auto& r : trial.checks) {
            max_abs = std::max(max_abs, r.abs_diff);
            max_rel = std::max(max_rel, r.abs_diff / std::max(1.0, std::abs(r.lhs)));
            all_pass = all_pass && r.passes();
            csv << t << ',' << trial.seed << ',' << num(trial.coupling) << ',' << r.phi.degree() << ','
                << num(r.lhs) << ',' << num(r.rhs) << ',' << num(r.abs_diff) << '\n';
            checks.push_back(Json{{"phi", r.phi.coefficients()}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"abs_diff", r.abs_diff}});
        }
        results.push_back(Json{{"trial", t},
                               {"seed", trial.seed},
                               {"coupling", trial.coupling},
                               {"checks", checks},
                               {"xi_min", first.xi.min_value()},
                               {"xi_max", first.xi.max_value()},
                               {"xi_integral", first.xi.integral()},
                               {"interlacing", trial.interlacing},
                               {"naive_mu", naive_mu},
                               {"trace_E1_minus_E0", trace_e1_minus_e0},
                               {"xi_at_mu", first.xi(naive_mu)}});
    }
    out.csv = csv.str();
    out.payload = Json{{"dim", c.n},
                       {"results", results},
                       {"summary",
                        Json{{"max_abs_diff", max_abs},
                             {"max_rel_diff", max_rel},
                             {"all_pass", all_pass},
                             {"interlacing_positive_couplings", all_interlace},
                             {"xi_range_positive_couplings", xi_range_ok}}}};
    return out;
}

Output cmd_divergence(const RunConfig& c) {
    const DivergenceScan scan = hs_divergence_scan(c.mu, c.lengths, c.nodes_per_unit, c.rule_kind(), c.jobs);
    Output out;
    std::ostringstream csv;
    csv << "L,ln_L,frob_sq\n";
    for (std::size_t i = 0; i < scan.lengths.size(); ++i)
        csv << num(scan.lengths[i]) << ',' << num(scan.log_lengths[i]) << ',' << num(scan.frob_sq[i]) << '\n';
    out.csv = csv.str();
    out.payload = Json{{"mu", scan.mu},
                       {"lambda", lambda_of_mu(scan.mu)},
                       {"L", scan.lengths},
                       {"ln_L", scan.log_lengths},
                       {"frob_sq", scan.frob_sq},
                       {"nodes", scan.nodes},
                       {"slope", scan.slope},
                       {"intercept", scan.intercept},
                       {"reference_slope", 2.0 / (std::numbers::pi * std::numbers::pi)}};
    return out;
}

Grid<double> crosscheck_grid(const RunConfig& c) {
    const QuadratureRule rule =
        c.rule == "midpoint" ? QuadratureRule::midpoint() : QuadratureRule::gauss_legendre_for(c.n);
    return make_grid(c.lengths.front(), c.n, rule);
}

Output cmd_crosscheck(const RunConfig& c) {
    const auto grid = crosscheck_grid(c);
    const auto report = crosscheck_kernel(c.mu, grid, gaussian_pairs(c.centers, c.width),
                                          c.guard > 0.0 ? c.guard : -1.0, c.jacobi());
    Output out;
    std::ostringstream csv;
    csv << "f,g,projection_form,kernel_form,discrepancy\n";
    Json pairs = Json::array();
    for (const auto& p : report.pairs) {
        csv << '"' << to_string(p.f) << "\",\"" << to_string(p.g) << "\"," << num(p.projection_form) << ','
            << num(p.kernel_form) << ',' << num(p.discrepancy) << '\n';
        pairs.push_back(Json{{"f", to_string(p.f)},
                             {"g", to_string(p.g)},
                             {"projection_form", p.projection_form},
                             {"kernel_form", p.kernel_form},
                             {"discrepancy", p.discrepancy},
                             {"discrepancy_reversed", p.discrepancy_reversed}});
    }
    out.csv = csv.str();
    out.payload = Json{{"mu", report.mu},
                       {"lambda", report.lambda},
                       {"rank_E0", report.rank0},
                       {"rank_E1", report.rank1},
                       {"pairs", pairs},
                       {"max_discrepancy", report.max_discrepancy},
                       {"max_discrepancy_reversed", report.max_discrepancy_reversed},
                       {"health", Json::array({to_json(report.health0), to_json(report.health1)})}};
    return out;
}

Output cmd_fill_scan(const RunConfig& c) {
    const auto builder = make_builder(c);
    const auto [a, b] = natural_interval(c.op);
    const auto reports = parallel_map<FillReport>(c.sizes.size(), c.jobs, [&](std::size_t i) {
        return fill_metrics(jacobi_eigen(builder(c.sizes[i]), c.jacobi()), a, b);
    });
    Output out;
    std::ostringstream csv;
    csv << "N,min_eig,max_eig,max_gap,count_outside\n";
    Json rows = Json::array();
    bool nonincreasing = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        if (i > 0 && r.max_gap > reports[i - 1].max_gap) nonincreasing = false;
        csv << c.sizes[i] << ',' << num(r.min_eig) << ',' << num(r.max_eig) << ',' << num(r.max_gap) << ','
            << r.count_outside << '\n';
        Json row = to_json(r);
        row["N"] = c.sizes[i];
        rows.push_back(row);
    }
    out.csv = csv.str();
    out.payload = Json{{"interval", {a, b}}, {"reports", rows}, {"max_gap_nonincreasing", nonincreasing}};
    return out;
}

Output cmd_ac_probe(const RunConfig& c) {
    std::vector<Eigen::Index> sizes(c.sizes.begin(), c.sizes.end());
    const AcDecayReport r = ac_decay_probe(make_builder(c), sizes, c.probe, c.jacobi(), c.jobs);
    Output out;
    std::ostringstream csv;
    csv << "N,max_atom,decay_ratio\n";
    for (std::size_t i = 0; i < r.sizes.size(); ++i)
        csv << r.sizes[i] << ',' << num(r.max_atom[i]) << ',' << (i == 0 ? std::string() : num(r.decay_ratios[i - 1]))
            << '\n';
    out.csv = csv.str();
    Json health = Json::array();
    for (const auto& h : r.health) health.push_back(to_json(h));
    out.payload = Json{{"sizes", r.sizes},
                       {"max_atom", r.max_atom},
                       {"decay_ratios", r.decay_ratios},
                       {"monotone_decay", r.monotone_decay()},
                       {"health", health}};
    return out;
}

// ------------------------------------------------------------------- plumbing

void validate(RunConfig& c) {
    validate_common(c);
    const std::string& cmd = c.command;
    if (cmd == "spectrum") {
        validate_operator(c);
        require(c.n >= 1, "--N must be >= 1");
        validate_size_for_rule(c, c.n);
        if (is_kernel_operator(c.op)) require(c.n >= 2, "--N must be >= 2 for discretized operators");
    } else if (cmd == "parity-check") {
        require(c.n >= 1, "--N must be >= 1");
    } else if (cmd == "ssf-demo") {
        require(c.n >= 2, "--dim must be >= 2");
        require(c.trials >= 1, "--trials must be >= 1");
        require(c.degree >= 0 && c.degree <= 8, "--degree must lie in [0, 8]");
        if (!c.seed) {
            if (const char* env = std::getenv("KHL_SEED")) {
                try {
                    std::size_t used = 0;
                    c.seed = std::stoull(env, &used);
                    require(used == std::string(env).size(), "KHL_SEED is not an unsigned integer");
                } catch (const std::logic_error&) {
                    throw ConfigError("KHL_SEED is not an unsigned integer");
                }
            } else {
                c.seed = 1;
            }
        }
    } else if (cmd == "divergence") {
        require(c.mu > 0.0 && c.mu < 1.0, "--mu must lie in (0, 1)");
        require(c.lengths.size() >= 3, "--L needs at least three lengths for a divergence scan");
        for (std::size_t i = 0; i < c.lengths.size(); ++i) {
            require(c.lengths[i] > 0.0, "--L entries must be positive");
            if (i > 0) require(c.lengths[i] > c.lengths[i - 1], "--L entries must be strictly increasing");
        }
        const double floor = 10.0 * std::sqrt(lambda_of_mu(c.mu));
        if (c.nodes_per_unit <= 0.0) c.nodes_per_unit = floor;
        require(c.nodes_per_unit >= floor,
                "--nodes-per-unit must be >= 10 sqrt(lambda(mu)) = " + num(floor));
    } else if (cmd == "crosscheck") {
        require(c.mu > 0.0 && c.mu < 1.0, "--mu must lie in (0, 1)");
        require(c.lengths.size() == 1 && c.lengths.front() > 0.0, "--L takes a single positive value");
        require(c.n >= 2, "--N must be >= 2");
        require(c.width > 0.0, "--width must be positive");
        require(!c.centers.empty(), "--centers needs at least one value");
        if (c.rule == "gauss-legendre") require(c.n % 8 == 0, "--N must be a multiple of 8 for --rule gauss-legendre");
        try {
            check_crosscheck_resolution(c.mu, crosscheck_grid(c), gaussian_pairs(c.centers, c.width));
        } catch (const khl::Error& e) {
            throw ConfigError(e.what());
        }
    } else if (cmd == "fill-scan" || cmd == "ac-probe") {
        validate_operator(c);
        validate_sizes(c);
        if (cmd == "ac-probe") require(c.probe >= 0 && c.probe < c.sizes.front(), "--probe must index the smallest section");
    }
}

Output dispatch(const RunConfig& c) {
    if (c.command == "spectrum") return cmd_spectrum(c);
    if (c.command == "parity-check") return cmd_parity_check(c);
    if (c.command == "ssf-demo") return cmd_ssf_demo(c);
    if (c.command == "divergence") return cmd_divergence(c);
    if (c.command == "crosscheck") return cmd_crosscheck(c);
    if (c.command == "fill-scan") return cmd_fill_scan(c);
    return cmd_ac_probe(c);
}

std::string single_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Spectral probes of a rank-one perturbation pair, its projection difference, and Hankel sections",
                 "khl"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of one operator (CSV) or its fill report (JSON)");
    auto* parity = app.add_subcommand("parity-check", "Parity block structure of the Hankel section of size 2N");
    auto* ssf = app.add_subcommand("ssf-demo", "Seeded trace-formula trials for random rank-one pairs");
    auto* divergence = app.add_subcommand("divergence", "Frobenius norm growth of the discretized k_mu kernel");
    auto* cross = app.add_subcommand("crosscheck", "Projection difference of A0, A1 against the k_mu kernel");
    auto* fill = app.add_subcommand("fill-scan", "Spectrum filling across section sizes");
    auto* ac = app.add_subcommand("ac-probe", "Spectral-measure atom decay across section sizes");

    spectrum->add_option("--N", c.n, "Matrix dimension")->required();
    spectrum->add_option("--operator", c.op, "a0 | a1 | kmu | hilbert | hilbert-alt | hankel-symbol")->required();
    spectrum->add_option("--p", c.p, "Hilbert shift p (0, 0.5 or -0.5)")->capture_default_str();
    spectrum->add_option("--mu", c.mu, "Spectral threshold mu in (0, 1)")->capture_default_str();
    spectrum->add_option("--L", c.lengths, "Truncation length")->expected(1);
    spectrum->add_option("--rule", c.rule, "midpoint | gauss-legendre")->capture_default_str();

    parity->add_option("--N", c.n, "Half dimension N (the section has size 2N)")->required();

    ssf->add_option("--N,--dim", c.n, "Matrix dimension");
    ssf->add_option("--trials", c.trials, "Number of seeded trials");
    ssf->add_option("--seed", c.seed, "Base seed (falls back to KHL_SEED)");
    ssf->add_option("--degree", c.degree, "Degree of the random test polynomial");

    divergence->add_option("--mu", c.mu, "Spectral threshold mu in (0, 1)");
    divergence->add_option("--L", c.lengths, "Truncation lengths")->delimiter(',');
    divergence->add_option("--rule", c.rule, "midpoint | gauss-legendre");
    divergence->add_option("--nodes-per-unit", c.nodes_per_unit, "Grid density (default 10 sqrt(lambda(mu)))");

    cross->add_option("--mu", c.mu, "Spectral threshold mu in (0, 1)");
    cross->add_option("--L", c.lengths, "Truncation length")->expected(1);
    cross->add_option("--N", c.n, "Grid size");
    cross->add_option("--rule", c.rule, "midpoint | gauss-legendre");
    cross->add_option("--centers", c.centers, "Gaussian test-function centers")->delimiter(',');
    cross->add_option("--width", c.width, "Gaussian test-function width");
    cross->add_option("--guard", c.guard, "Minimum eigenvalue distance from mu (default 1e-8 x span)");

    for (auto* sub : {fill, ac}) {
        sub->add_option("--operator", c.op, "a0 | a1 | kmu | hilbert | hilbert-alt | hankel-symbol");
        sub->add_option("--p", c.p, "Hilbert shift p (0, 0.5 or -0.5)");
        sub->add_option("--mu", c.mu, "Spectral threshold mu in (0, 1)");
        sub->add_option("--L", c.lengths, "Truncation length")->expected(1);
        sub->add_option("--rule", c.rule, "midpoint | gauss-legendre");
        sub->add_option("--sizes", c.sizes, "Section sizes")->delimiter(',');
    }
    ac->add_option("--probe", c.probe, "Basis index of the probe vector");

    for (auto* sub : {spectrum, parity, ssf, divergence, cross, fill, ac}) {
        sub->add_option("--out", c.out, "Write the report to this file instead of stdout");
        sub->add_option("--format", c.format, "csv or json");
        sub->add_option("--jobs", c.jobs, "Worker threads for independent scan points");
        sub->add_option("--tol", c.tol, "Jacobi off-diagonal tolerance relative to ||M||_F");
        sub->add_option("--max-sweeps", c.max_sweeps, "Jacobi sweep cap");
        sub->add_flag("--timing", c.timing, "Include wall-clock timing in JSON output");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "khl: error: " << single_line(e.what()) << '\n';
        return kExitConfig;
    }

    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    if (c.format.empty()) c.format = (c.command == "spectrum" || c.command == "divergence") ? "csv" : "json";
    if (c.lengths.empty()) {
        if (c.command == "divergence")
            c.lengths = {50.0, 100.0, 200.0, 400.0};
        else
            c.lengths = {40.0};
    }
    if (c.command == "crosscheck" && c.n == 0) c.n = 800;
    if (c.command == "ssf-demo" && c.n == 0) c.n = 20;
    if ((c.command == "fill-scan" || c.command == "ac-probe") && c.op.empty()) c.op = "hankel-symbol";
    if ((c.command == "fill-scan" || c.command == "ac-probe") && c.sizes.empty()) c.sizes = {64, 128, 256, 512};

    try {
        validate(c);
    } catch (const ConfigError& e) {
        err << "khl: error: " << c.command << ": " << single_line(e.what()) << '\n';
        return kExitConfig;
    } catch (const khl::Error& e) {
        err << "khl: error: " << c.command << ": " << single_line(e.what()) << '\n';
        return kExitConfig;
    }

    Output result;
    const auto start = std::chrono::steady_clock::now();
    try {
        result = dispatch(c);
    } catch (const khl::DomainError& e) {
        err << "khl: error: " << c.command << ": " << single_line(e.what()) << '\n';
        return kExitConfig;
    } catch (const khl::InvalidArgument& e) {
        err << "khl: error: " << c.command << ": " << single_line(e.what()) << '\n';
        return kExitConfig;
    } catch (const khl::Error& e) {
        err << "khl: numerical failure: " << c.command << ": " << single_line(e.what()) << '\n';
        return kExitNumerical;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string text;
    if (c.format == "csv") {
        text = result.csv;
    } else {
        Json envelope{{"schema", 1}, {"tool", "khl"}, {"version", kVersion}, {"config", config_json(c)}};
        if (c.timing) envelope["timing"] = Json{{"seconds", seconds}};
        envelope["payload"] = std::move(result.payload);
        text = envelope.dump(2) + "\n";
    }

    if (c.out.empty()) {
        out << text;
        out.flush();
    } else {
        std::ofstream file(c.out, std::ios::binary);
        if (!file) {
            err << "khl: error: cannot open output file " << c.out << '\n';
            return kExitConfig;
        }
        file << text;
    }
    return kExitOk;
}

}  // namespace khl::cli
