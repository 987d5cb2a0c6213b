#ifndef VECGP_SAMPLER_HPP
#define VECGP_SAMPLER_HPP

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <array>
#include <stdexcept>
#include <vector>

#include "vecgp/geometry.hpp"
#include "vecgp/gp.hpp"
#include "vecgp/kernels.hpp"
#include "vecgp/rng.hpp"
#include "vecgp/types.hpp"

namespace vecgp {

/// Evaluation grid with optional quadrature weights.  The midpoint factory
/// builds a tensor-product midpoint rule (cell centers, weights = cell
/// volume), whose weights are positive as required for the symmetrized
/// Nystrom eigenproblem and sum exactly to the domain volume.
template <typename Scalar = double>
struct EvaluationGrid {
    MatX<Scalar> points;          // d x M
    VecX<Scalar> weights;         // M, or empty when no quadrature is attached
    std::vector<Index> per_axis;  // tensor structure; empty when unstructured
    VecX<Scalar> spacing;         // per-axis cell width (with per_axis)

    Index dimension() const { return points.rows(); }
    Index size() const { return points.cols(); }
    bool has_weights() const { return weights.size() == points.cols() && points.cols() > 0; }
    bool is_tensor() const { return !per_axis.empty(); }

    static EvaluationGrid midpoint(const Domain<Scalar>& dom, const std::vector<Index>& counts) {
        const Index d = dom.dimension();
        if (static_cast<Index>(counts.size()) != d)
            throw std::invalid_argument("EvaluationGrid: one count per axis required");
        EvaluationGrid grid;
        grid.per_axis = counts;
        grid.spacing.resize(d);
        Index total = 1;
        Scalar cell_volume = 1;
        for (Index a = 0; a < d; ++a) {
            if (counts[static_cast<std::size_t>(a)] < 1)
                throw std::invalid_argument("EvaluationGrid: counts >= 1 required");
            total *= counts[static_cast<std::size_t>(a)];
            grid.spacing[a] =
                (dom.upper[a] - dom.lower[a]) / Scalar(counts[static_cast<std::size_t>(a)]);
            cell_volume *= grid.spacing[a];
        }
        grid.points.resize(d, total);
        grid.weights = VecX<Scalar>::Constant(total, cell_volume);
        for (Index flat = 0; flat < total; ++flat) {
            Index rem = flat;
            for (Index a = 0; a < d; ++a) {
                const Index ia = rem % counts[static_cast<std::size_t>(a)];
                rem /= counts[static_cast<std::size_t>(a)];
                grid.points(a, flat) = dom.lower[a] + grid.spacing[a] * (Scalar(ia) + Scalar(0.5));
            }
        }
        return grid;
    }

    static EvaluationGrid midpoint(const Domain<Scalar>& dom, Index count_per_axis) {
        return midpoint(dom, std::vector<Index>(static_cast<std::size_t>(dom.dimension()),
                                                count_per_axis));
    }
};

enum class SampleSource { prior, posterior, kl_truncated };

template <typename Scalar = double>
struct FieldSample {
    MatX<Scalar> values;  // d x M, column i is the field at grid point i
    std::uint64_t seed = 0;
    SampleSource source = SampleSource::prior;
    Index kl_truncation = 0;
};

namespace detail {

// Lower-triangular factor of a PSD matrix, with jitter escalated until the
// Cholesky succeeds.  The jitter is scaled by scale_hint (typically the prior
// variance scale) so that numerically-zero covariances, e.g. the posterior at
// the data sites, still factor.
template <typename Scalar>
MatX<Scalar> psd_lower_factor(MatX<Scalar> cov, Scalar scale_hint = 0) {
    const Scalar scale =
        std::max({cov.diagonal().maxCoeff(), scale_hint, Scalar(1e-300)});
    const std::array<Scalar, 5> rungs = {Scalar(0), Scalar(1e-14), Scalar(1e-12), Scalar(1e-10),
                                         Scalar(1e-8)};
    for (const Scalar r : rungs) {
        MatX<Scalar> shifted = cov;
        shifted.diagonal().array() += r * scale;
        Eigen::LLT<MatX<Scalar>> llt(shifted);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw std::runtime_error("psd_lower_factor: covariance factorization failed");
}

template <typename Scalar>
void draw_samples(const VecX<Scalar>& mean, const MatX<Scalar>& lower, Index n_samples,
                  std::uint64_t seed, std::vector<FieldSample<Scalar>>& out, Index d,
                  SampleSource source) {
    const Index m = mean.size();
    out.clear();
    out.reserve(static_cast<std::size_t>(n_samples));
    for (Index s = 0; s < n_samples; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        VecX<Scalar> xi(m);
        for (Index i = 0; i < m; ++i) xi[i] = Scalar(rng.normal());
        VecX<Scalar> v = mean + lower * xi;
        FieldSample<Scalar> sample;
        sample.values = Eigen::Map<const MatX<Scalar>>(v.data(), d, m / d);
        sample.seed = seed;
        sample.source = source;
        out.push_back(std::move(sample));
    }
}

}  // namespace detail

/// Draw centered prior samples of the kernel's Gaussian field on the grid.
/// One independent RNG stream per sample index, so draws are reproducible and
/// order-independent.
template <typename Scalar>
std::vector<FieldSample<Scalar>> sample_gaussian_field(const MatrixKernel<Scalar>& kernel,
                                                       const EvaluationGrid<Scalar>& grid,
                                                       Index n_samples, std::uint64_t seed) {
    if (grid.size() == 0) throw std::invalid_argument("sample_gaussian_field: empty grid");
    if (n_samples < 1) throw std::invalid_argument("sample_gaussian_field: n_samples >= 1");
    const Index d = kernel.dimension();
    auto fn = [&](const auto& a, const auto& b) { return eval_matrix(kernel, a, b); };
    MatX<Scalar> cov = assemble_gram_blocks<Scalar>(fn, grid.points, d);
    MatX<Scalar> lower = detail::psd_lower_factor(std::move(cov));
    std::vector<FieldSample<Scalar>> out;
    detail::draw_samples(VecX<Scalar>(VecX<Scalar>::Zero(d * grid.size())), lower, n_samples,
                         seed, out, d, SampleSource::prior);
    return out;
}

/// Posterior mean stacked over the grid (d * M).
template <typename Scalar>
VecX<Scalar> posterior_mean_on_grid(const GPModel<Scalar>& model,
                                    const EvaluationGrid<Scalar>& grid) {
    const Index d = model.dimension();
    VecX<Scalar> mean(d * grid.size());
    for (Index i = 0; i < grid.size(); ++i)
        mean.segment(d * i, d) = model.predict_mean(VecX<Scalar>(grid.points.col(i)));
    return mean;
}

/// Posterior covariance over the grid: K(G,G) - K(G,X) C^{-1} K(G,X)^T.
template <typename Scalar>
MatX<Scalar> posterior_cov_on_grid(const GPModel<Scalar>& model,
                                   const EvaluationGrid<Scalar>& grid) {
    const Index d = model.dimension();
    auto fn = [&](const auto& a, const auto& b) { return eval_matrix(model.kernel(), a, b); };
    MatX<Scalar> cov = assemble_gram_blocks<Scalar>(fn, grid.points, d);
    if (model.site_count() == 0) return cov;
    MatX<Scalar> cross(d * grid.size(), d * model.site_count());
    for (Index i = 0; i < grid.size(); ++i)
        cross.middleRows(d * i, d) = model.cross_covariance(VecX<Scalar>(grid.points.col(i)));
    cov -= cross * model.factorization().solve(cross.transpose());
    return ((cov + cov.transpose()) / 2).eval();
}

/// Draw posterior samples of a fitted model on the grid.
template <typename Scalar>
std::vector<FieldSample<Scalar>> sample_gaussian_field(const GPModel<Scalar>& model,
                                                       const EvaluationGrid<Scalar>& grid,
                                                       Index n_samples, std::uint64_t seed) {
    if (grid.size() == 0) throw std::invalid_argument("sample_gaussian_field: empty grid");
    if (n_samples < 1) throw std::invalid_argument("sample_gaussian_field: n_samples >= 1");
    const Index d = model.dimension();
    VecX<Scalar> mean = posterior_mean_on_grid(model, grid);
    Scalar prior_scale = 0;
    for (Index i = 0; i < grid.size(); ++i) {
        const VecX<Scalar> x = grid.points.col(i);
        prior_scale =
            std::max(prior_scale, eval_matrix(model.kernel(), x, x).diagonal().maxCoeff());
    }
    MatX<Scalar> lower =
        detail::psd_lower_factor(posterior_cov_on_grid(model, grid), prior_scale);
    std::vector<FieldSample<Scalar>> out;
    detail::draw_samples(mean, lower, n_samples, seed, out, d, SampleSource::posterior);
    return out;
}

/// Discrete Karhunen-Loeve eigensystem of the kernel integral operator,
/// obtained from the symmetrized Nystrom eigenproblem
///   W^{1/2} K(G,G) W^{1/2} u = lambda u,   phi_k(x_i) = u_{k,i} / sqrt(w_i).
/// Eigenfunction blocks are weighted-orthonormal on the grid.  Eigenvalues
/// below 1e-12 * lambda_1 are discarded as numerically zero.
template <typename Scalar = double>
struct NystromEigensystem {
    VecX<Scalar> eigenvalues;     // m, descending, all positive
    MatX<Scalar> eigenfunctions;  // (d*M) x m, column k holds phi_k at grid points
    EvaluationGrid<Scalar> grid;
    MatrixKernel<Scalar> kernel;
    Index requested = 0;  // truncation asked for; size() may be smaller

    Index size() const { return eigenvalues.size(); }

    auto eigenfunction_block(Index k, Index point) const {
        const Index d = kernel.dimension();
        return eigenfunctions.col(k).segment(d * point, d);
    }

    /// Nystrom extension phi_k(x) = lambda_k^{-1} sum_i w_i K(x, x_i) phi_k(x_i);
    /// reproduces the grid values exactly at grid points.
    VecX<Scalar> extend_eigenfunction(Index k, const VecX<Scalar>& x) const {
        const Index d = kernel.dimension();
        VecX<Scalar> value = VecX<Scalar>::Zero(d);
        for (Index i = 0; i < grid.size(); ++i)
            value += grid.weights[i] * eval_matrix(kernel, x, grid.points.col(i)) *
                     eigenfunctions.col(k).segment(d * i, d);
        return value / eigenvalues[k];
    }

    /// Off-grid value of the truncated KL field sum_k sqrt(lambda_k) xi_k phi_k(x).
    VecX<Scalar> extend_kl_field(const VecX<Scalar>& xi, const VecX<Scalar>& x) const {
        const Index d = kernel.dimension();
        VecX<Scalar> value = VecX<Scalar>::Zero(d);
        for (Index k = 0; k < size() && k < xi.size(); ++k)
            value += std::sqrt(eigenvalues[k]) * xi[k] * extend_eigenfunction(k, x);
        return value;
    }
};

template <typename Scalar, typename KernelFn>
NystromEigensystem<Scalar> nystrom_eigensystem_fn(KernelFn&& fn, const MatrixKernel<Scalar>& tag,
                                                  const EvaluationGrid<Scalar>& grid,
                                                  Index truncation) {
    if (!grid.has_weights() || grid.weights.minCoeff() <= 0)
        throw std::invalid_argument("nystrom_eigensystem: positive quadrature weights required");
    const Index d = tag.dimension();
    const Index total = d * grid.size();
    if (truncation < 1 || truncation > total)
        throw std::invalid_argument("nystrom_eigensystem: truncation must be in [1, M*d]");

    MatX<Scalar> kernel_matrix = assemble_gram_blocks<Scalar>(fn, grid.points, d);
    VecX<Scalar> sqrt_w(total);
    for (Index i = 0; i < grid.size(); ++i)
        sqrt_w.segment(d * i, d).setConstant(std::sqrt(grid.weights[i]));
    MatX<Scalar> symmetrized = sqrt_w.asDiagonal() * kernel_matrix * sqrt_w.asDiagonal();
    symmetrized = ((symmetrized + symmetrized.transpose()) / 2).eval();

    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> eig(symmetrized);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("nystrom_eigensystem: eigensolver failed");

    // Eigen returns ascending order; keep the top `truncation` above cutoff.
    const VecX<Scalar> all = eig.eigenvalues();
    const Scalar lambda1 = all[total - 1];
    const Scalar cutoff = Scalar(1e-12) * lambda1;
    Index kept = 0;
    for (Index k = 0; k < truncation; ++k) {
        if (all[total - 1 - k] > cutoff) ++kept;
        else break;
    }

    NystromEigensystem<Scalar> out{VecX<Scalar>(kept), MatX<Scalar>(total, kept), grid, tag,
                                   truncation};
    for (Index k = 0; k < kept; ++k) {
        out.eigenvalues[k] = all[total - 1 - k];
        out.eigenfunctions.col(k) =
            eig.eigenvectors().col(total - 1 - k).cwiseQuotient(sqrt_w);
    }
    return out;
}

template <typename Scalar>
NystromEigensystem<Scalar> nystrom_eigensystem(const MatrixKernel<Scalar>& kernel,
                                               const EvaluationGrid<Scalar>& grid,
                                               Index truncation) {
    auto fn = [&](const auto& a, const auto& b) { return eval_matrix(kernel, a, b); };
    return nystrom_eigensystem_fn(fn, kernel, grid, truncation);
}

/// Max Frobenius norm over test pairs of K(x,x') - sum_{k<=m} lambda_k
/// phi_k(x) phi_k(x')^T.  Monotone non-increasing in m.  Points are evaluated
/// through the Nystrom extension, which is exact on the grid.
template <typename Scalar>
Scalar mercer_residual(const NystromEigensystem<Scalar>& eigs,
                       const std::vector<std::pair<VecX<Scalar>, VecX<Scalar>>>& pairs,
                       Index truncation = -1) {
    if (pairs.empty()) throw std::invalid_argument("mercer_residual: empty pairs");
    const Index m = truncation < 0 ? eigs.size() : std::min(truncation, eigs.size());
    Scalar worst = 0;
    for (const auto& [x, xp] : pairs) {
        MatX<Scalar> residual = eval_matrix(eigs.kernel, x, xp);
        for (Index k = 0; k < m; ++k) {
            const VecX<Scalar> fx = eigs.extend_eigenfunction(k, x);
            const VecX<Scalar> fxp = eigs.extend_eigenfunction(k, xp);
            residual -= eigs.eigenvalues[k] * fx * fxp.transpose();
        }
        worst = std::max(worst, residual.norm());
    }
    return worst;
}

/// KL draw with the normal coefficients returned, for off-grid extension.
template <typename Scalar>
std::pair<FieldSample<Scalar>, VecX<Scalar>> kl_sample_with_coefficients(
    const NystromEigensystem<Scalar>& eigs, std::uint64_t seed) {
    const Index d = eigs.kernel.dimension();
    Rng rng = Rng::stream(seed, 0x6b6cULL);
    VecX<Scalar> xi(eigs.size());
    for (Index k = 0; k < eigs.size(); ++k) xi[k] = Scalar(rng.normal());
    VecX<Scalar> stacked = VecX<Scalar>::Zero(d * eigs.grid.size());
    for (Index k = 0; k < eigs.size(); ++k)
        stacked += std::sqrt(eigs.eigenvalues[k]) * xi[k] * eigs.eigenfunctions.col(k);
    FieldSample<Scalar> sample;
    sample.values = Eigen::Map<const MatX<Scalar>>(stacked.data(), d, eigs.grid.size());
    sample.seed = seed;
    sample.source = SampleSource::kl_truncated;
    sample.kl_truncation = eigs.size();
    return {std::move(sample), std::move(xi)};
}

/// One truncated KL draw  sum_k sqrt(lambda_k) xi_k phi_k  on the grid, with
/// xi_k i.i.d. standard normal from the seed.
template <typename Scalar>
FieldSample<Scalar> kl_sample(const NystromEigensystem<Scalar>& eigs, std::uint64_t seed) {
    return kl_sample_with_coefficients(eigs, seed).first;
}

}  // namespace vecgp

#endif  // VECGP_SAMPLER_HPP
