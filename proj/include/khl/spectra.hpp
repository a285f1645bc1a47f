#ifndef KHL_SPECTRA_HPP
#define KHL_SPECTRA_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "khl/eigensolve.hpp"
#include "khl/errors.hpp"
#include "khl/grid.hpp"
#include "khl/kernels.hpp"
#include "khl/sym_matrix.hpp"

namespace khl {

/// Atoms (lambda_i, <v_i, f>^2) of the spectral measure of f.
struct SpectralMeasure {
    std::vector<double> locations;
    std::vector<double> weights;
    double total_mass = 0.0;
    double norm_sq = 0.0;  // ||f||^2; equals total_mass up to rounding

    double max_atom() const;
};

SpectralMeasure spectral_measure(const EigenDecomposition<double>& dec, const VectorX<double>& f);

struct FillReport {
    double a = 0.0;
    double b = 0.0;
    double min_eig = 0.0;
    double max_eig = 0.0;
    double max_gap = 0.0;     // over {a} U (eigenvalues inside (a, b)) U {b}
    long count_outside = 0;   // eigenvalues not strictly inside (a, b)
};

FillReport fill_metrics(const VectorX<double>& eigenvalues, double a, double b);
inline FillReport fill_metrics(const EigenDecomposition<double>& dec, double a, double b) {
    return fill_metrics(dec.values, a, b);
}

/// Produces the N x N member of a family of finite sections or discretizations.
using SectionBuilder = std::function<SymMatrix<double>(Eigen::Index)>;

namespace builders {
SectionBuilder hankel();
SectionBuilder hilbert(double p);
SectionBuilder hilbert_alt(double p);
/// discretize(spec, make_grid(L, N, rule)); N must fit the rule.
SectionBuilder discretized(const KernelSpec& spec, double length, QuadratureRule::Kind rule);
inline SectionBuilder kmu(double mu, double length, QuadratureRule::Kind rule) {
    return discretized(KernelSpec::kmu(mu), length, rule);
}
}  // namespace builders

/// Block structure of the 2N section of H(phi): vanishing cross blocks, the
/// two compression identities against (1/pi) hilbert_alt(1/2, N) and
/// -(1/pi) hilbert_alt(-1/2, N), and the spectrum of the 2N section against
/// the union of the spectra of (1/pi) H_{1/2} and -(1/pi) H_{-1/2}.
struct ParityCheck {
    Eigen::Index half = 0;
    double off_max = 0.0;
    double even_deviation = 0.0;
    double odd_deviation = 0.0;
    double spectrum_union_mismatch = 0.0;
    std::vector<EigenHealth<double>> health;  // full, even-side, odd-side
};

ParityCheck parity_check(Eigen::Index half, const JacobiOptions& options = {});

struct AcDecayReport {
    std::vector<Eigen::Index> sizes;
    std::vector<double> max_atom;
    std::vector<double> decay_ratios;  // max_atom[i+1] / max_atom[i]
    std::vector<EigenHealth<double>> health;

    bool monotone_decay() const;
};

/// Largest spectral-measure atom of e_probe across growing sections. A
/// non-decaying atom signals point spectrum; steady decay is consistent with
/// absolutely continuous spectrum (never a proof of it).
AcDecayReport ac_decay_probe(const SectionBuilder& builder, const std::vector<Eigen::Index>& sizes,
                             Eigen::Index probe = 0, const JacobiOptions& options = {}, int jobs = 1);

/// Numerical dimension of span{v, Mv, ..., M^{n-1} v}. Each Krylov vector is
/// orthogonalized twice against the accepted basis and kept when
/// ||residual||^2 > tol^2 ||vector||^2. Rank n certifies that v is cyclic, so
/// the spectrum of M is simple. Works over exact rationals as well (tol = 0).
template <typename Scalar>
Eigen::Index krylov_rank(const MatrixX<Scalar>& m, const VectorX<Scalar>& v, const Scalar& tol) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n || v.size() != n)
        throw DimensionMismatch("spectra::krylov_rank: matrix and vector dimensions differ");
    if (!(v.squaredNorm() > Scalar(0))) throw DomainError("spectra::krylov_rank: zero start vector");

    std::vector<VectorX<Scalar>> basis;
    std::vector<Scalar> basis_norm_sq;
    const Scalar tol_sq = tol * tol;
    VectorX<Scalar> w = v;
    for (Eigen::Index k = 0; k < n; ++k) {
        VectorX<Scalar> y = w;
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t b = 0; b < basis.size(); ++b) y -= (basis[b].dot(y) / basis_norm_sq[b]) * basis[b];
        const Scalar y_sq = y.squaredNorm();
        if (y_sq > tol_sq * w.squaredNorm() && y_sq > Scalar(0)) {
            basis.push_back(y);
            basis_norm_sq.push_back(y_sq);
        }
        if (k + 1 == n) break;
        w = m * w;
        if constexpr (!std::numeric_limits<Scalar>::is_exact) {
            using std::sqrt;
            const Scalar norm = sqrt(w.squaredNorm());
            if (!(norm > Scalar(0))) break;
            w /= norm;
        }
    }
    return static_cast<Eigen::Index>(basis.size());
}

}  // namespace khl

#endif  // KHL_SPECTRA_HPP
