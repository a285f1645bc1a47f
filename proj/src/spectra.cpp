#include "khl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "khl/hankel.hpp"
#include "khl/kernels.hpp"
#include "khl/parallel.hpp"
#include "khl/quadrature.hpp"

namespace khl {

double SpectralMeasure::max_atom() const {
    return weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
}

SpectralMeasure spectral_measure(const EigenDecomposition<double>& dec, const VectorX<double>& f) {
    if (f.size() != dec.size())
        throw DimensionMismatch("spectra::spectral_measure: vector length " + std::to_string(f.size()) +
                                " != dimension " + std::to_string(dec.size()));
    if (!(f.squaredNorm() > 0.0)) throw DomainError("spectra::spectral_measure: zero vector");
    SpectralMeasure out;
    const VectorX<double> coeffs = dec.vectors.transpose() * f;
    out.locations.assign(dec.values.data(), dec.values.data() + dec.size());
    out.weights.resize(static_cast<std::size_t>(dec.size()));
    for (Eigen::Index i = 0; i < dec.size(); ++i) out.weights[static_cast<std::size_t>(i)] = coeffs(i) * coeffs(i);
    out.total_mass = coeffs.squaredNorm();
    out.norm_sq = f.squaredNorm();
    return out;
}

FillReport fill_metrics(const VectorX<double>& eigenvalues, double a, double b) {
    if (!(a < b)) throw InvalidArgument("spectra::fill_metrics: need a < b");
    FillReport out;
    out.a = a;
    out.b = b;
    if (eigenvalues.size() > 0) {
        out.min_eig = eigenvalues.minCoeff();
        out.max_eig = eigenvalues.maxCoeff();
    }
    std::vector<double> inside;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double x = eigenvalues(i);
        if (x > a && x < b)
            inside.push_back(x);
        else
            ++out.count_outside;
    }
    std::sort(inside.begin(), inside.end());
    double previous = a;
    for (double x : inside) {
        out.max_gap = std::max(out.max_gap, x - previous);
        previous = x;
    }
    out.max_gap = std::max(out.max_gap, b - previous);
    return out;
}

namespace builders {

SectionBuilder hankel() {
    return [](Eigen::Index n) { return hankel_section<double>(n); };
}

SectionBuilder hilbert(double p) {
    return [p](Eigen::Index n) { return khl::hilbert_shifted<double>(p, n); };
}

SectionBuilder hilbert_alt(double p) {
    return [p](Eigen::Index n) { return khl::hilbert_alt<double>(p, n); };
}

SectionBuilder discretized(const KernelSpec& spec, double length, QuadratureRule::Kind rule) {
    return [spec, length, rule](Eigen::Index n) {
        const int size = static_cast<int>(n);
        const QuadratureRule r =
            rule == QuadratureRule::Kind::midpoint ? QuadratureRule::midpoint() : QuadratureRule::gauss_legendre_for(size);
        return discretize(spec, make_grid(length, size, r));
    };
}

}  // namespace builders

ParityCheck parity_check(Eigen::Index half, const JacobiOptions& options) {
    if (half < 1) throw InvalidArgument("spectra::parity_check: N must be >= 1");
    const double inv_pi = 1.0 / std::numbers::pi;
    const auto full = hankel_section<double>(2 * half);
    const auto split = parity_split(full);

    ParityCheck out;
    out.half = half;
    out.off_max = split.off_max;
    out.even_deviation = (split.even.dense() - hilbert_alt<double>(0.5, half).scaled(inv_pi).dense()).cwiseAbs().maxCoeff();
    out.odd_deviation = (split.odd.dense() - hilbert_alt<double>(-0.5, half).scaled(-inv_pi).dense()).cwiseAbs().maxCoeff();

    const auto dec_full = jacobi_eigen(full, options);
    const auto dec_even = jacobi_eigen(hilbert_shifted<double>(0.5, half).scaled(inv_pi), options);
    const auto dec_odd = jacobi_eigen(hilbert_shifted<double>(-0.5, half).scaled(-inv_pi), options);
    std::vector<double> merged(dec_even.values.data(), dec_even.values.data() + half);
    merged.insert(merged.end(), dec_odd.values.data(), dec_odd.values.data() + half);
    std::sort(merged.begin(), merged.end());
    for (Eigen::Index i = 0; i < 2 * half; ++i)
        out.spectrum_union_mismatch =
            std::max(out.spectrum_union_mismatch, std::abs(dec_full.values(i) - merged[static_cast<std::size_t>(i)]));
    out.health = {health(dec_full), health(dec_even), health(dec_odd)};
    return out;
}

bool AcDecayReport::monotone_decay() const {
    for (double r : decay_ratios)
        if (!(r < 1.0)) return false;
    return true;
}

AcDecayReport ac_decay_probe(const SectionBuilder& builder, const std::vector<Eigen::Index>& sizes,
                             Eigen::Index probe, const JacobiOptions& options, int jobs) {
    if (sizes.size() < 3) throw InvalidArgument("spectra::ac_decay_probe: at least three sizes are required");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (!(sizes[i] > sizes[i - 1]))
            throw InvalidArgument("spectra::ac_decay_probe: sizes must be strictly increasing");
    if (probe < 0 || probe >= sizes.front())
        throw InvalidArgument("spectra::ac_decay_probe: probe index outside the smallest section");

    struct Point {
        double max_atom = 0.0;
        EigenHealth<double> health{};
    };
    const auto points = parallel_map<Point>(sizes.size(), jobs, [&](std::size_t i) {
        const auto dec = jacobi_eigen(builder(sizes[i]), options);
        const VectorX<double> e = VectorX<double>::Unit(sizes[i], probe);
        return Point{spectral_measure(dec, e).max_atom(), health(dec)};
    });

    AcDecayReport out;
    out.sizes = sizes;
    for (const auto& p : points) {
        out.max_atom.push_back(p.max_atom);
        out.health.push_back(p.health);
    }
    for (std::size_t i = 1; i < out.max_atom.size(); ++i) out.decay_ratios.push_back(out.max_atom[i] / out.max_atom[i - 1]);
    return out;
}

}  // namespace khl
