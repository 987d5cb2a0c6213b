#ifndef VECGP_GP_HPP
#define VECGP_GP_HPP

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <array>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "vecgp/geometry.hpp"
#include "vecgp/kernels.hpp"
#include "vecgp/types.hpp"

namespace vecgp {

enum class NoiseModel { exact, gaussian };

/// Vector observations y_j = v(x_j) + eps_j, stored as d x N blocks.  The
/// stacked order is Y = (y_1^T, ..., y_N^T)^T in R^{dN}.
template <typename Scalar = double>
struct Observations {
    PointSet<Scalar> sites;
    MatX<Scalar> values;  // d x N
    NoiseModel noise_model = NoiseModel::exact;
    Scalar noise_variance = 0;

    Observations(PointSet<Scalar> obs_sites, MatX<Scalar> obs_values,
                 NoiseModel model = NoiseModel::exact, Scalar sigma2 = 0)
        : sites(std::move(obs_sites)),
          values(std::move(obs_values)),
          noise_model(model),
          noise_variance(sigma2) {
        if (values.cols() != sites.size() || values.rows() != sites.dimension())
            throw std::invalid_argument("Observations: value blocks must be d x N");
    }

    VecX<Scalar> stacked() const {
        return Eigen::Map<const VecX<Scalar>>(values.data(), values.size());
    }
};

enum class MeanStructure { zero, divergence_free, curl_free, generic };

template <typename Scalar = double>
struct MeanFunction {
    std::function<VecX<Scalar>(const VecX<Scalar>&)> evaluator;  // empty => zero
    MeanStructure declared_structure = MeanStructure::zero;

    static MeanFunction zero() { return MeanFunction{}; }

    bool is_zero() const { return !evaluator; }

    VecX<Scalar> operator()(const VecX<Scalar>& x) const {
        if (!evaluator) return VecX<Scalar>::Zero(x.size());
        return evaluator(x);
    }
};

enum class FitMode { interpolate, posterior, penalized };

inline const char* fit_mode_name(FitMode mode) {
    switch (mode) {
        case FitMode::interpolate: return "interpolate";
        case FitMode::posterior: return "posterior";
        case FitMode::penalized: return "penalized";
    }
    return "?";
}

/// Fit request: plain interpolation, noisy posterior with variance sigma^2,
/// or penalized least squares with parameter lambda.  sigma^2 and lambda
/// share the diagonal-shift mechanism; the semantics is recorded because the
/// two mean different things downstream (power function, noise bookkeeping).
template <typename Scalar = double>
struct FitSpec {
    FitMode mode = FitMode::interpolate;
    Scalar value = 0;  // sigma^2 or lambda

    static FitSpec interpolate() { return {FitMode::interpolate, 0}; }
    static FitSpec posterior(Scalar sigma2) {
        if (sigma2 < 0) throw std::invalid_argument("FitSpec: sigma2 >= 0 required");
        return {FitMode::posterior, sigma2};
    }
    static FitSpec penalized(Scalar lambda) {
        if (lambda < 0) throw std::invalid_argument("FitSpec: lambda >= 0 required");
        return {FitMode::penalized, lambda};
    }
};

/// Block Gram matrix K(X,X) in R^{dN x dN}; block (i,j) is K(x_i, x_j) and
/// diagonal_shift is added to every diagonal entry.  Symmetry is exact by
/// construction (lower blocks copied from upper).
template <typename Scalar, typename KernelFn>
MatX<Scalar> assemble_gram_blocks(KernelFn&& kernel, const MatX<Scalar>& pts, Index block,
                                  Scalar diagonal_shift = 0) {
    const Index n = pts.cols();
    MatX<Scalar> gram(block * n, block * n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            MatX<Scalar> b = kernel(pts.col(i), pts.col(j));
            if (i == j) b = ((b + b.transpose()) / 2).eval();
            gram.block(block * i, block * j, block, block) = b;
            if (i != j)
                gram.block(block * j, block * i, block, block) = b.transpose();
        }
    }
    gram.diagonal().array() += diagonal_shift;
    return gram;
}

template <typename Scalar>
MatX<Scalar> assemble_gram(const MatrixKernel<Scalar>& kernel, const PointSet<Scalar>& sites,
                           Scalar diagonal_shift = 0) {
    const Index d = kernel.dimension();
    if (sites.size() > 0 && sites.dimension() != d)
        throw std::invalid_argument("assemble_gram: dimension mismatch");
    auto fn = [&](const auto& a, const auto& b) { return eval_matrix(kernel, a, b); };
    return assemble_gram_blocks<Scalar>(fn, sites.points(), d, diagonal_shift);
}

/// Fitted posterior state.  Holds the unshifted Gram matrix, the Cholesky
/// factor of the shifted Gram, and the coefficient block vector A solving
///   (K(X,X) + (sigma^2 or lambda) I + jitter I) A = Y - m(X).
template <typename Scalar = double>
class GPModel {
public:
    GPModel(MatrixKernel<Scalar> kernel, MeanFunction<Scalar> prior_mean,
            PointSet<Scalar> sites, FitSpec<Scalar> fit_spec, MatX<Scalar> gram,
            Eigen::LLT<MatX<Scalar>> factor, VecX<Scalar> coefficients, Scalar jitter,
            Scalar residual)
        : kernel_(std::move(kernel)),
          prior_mean_(std::move(prior_mean)),
          sites_(std::move(sites)),
          fit_spec_(fit_spec),
          gram_(std::move(gram)),
          factor_(std::move(factor)),
          coefficients_(std::move(coefficients)),
          jitter_used_(jitter),
          residual_relative_(residual) {}

    const MatrixKernel<Scalar>& kernel() const { return kernel_; }
    const MeanFunction<Scalar>& prior_mean() const { return prior_mean_; }
    const PointSet<Scalar>& sites() const { return sites_; }
    FitMode mode() const { return fit_spec_.mode; }
    Scalar regularization() const { return fit_spec_.value; }
    Scalar jitter_used() const { return jitter_used_; }
    Scalar residual_relative() const { return residual_relative_; }
    const VecX<Scalar>& coefficients() const { return coefficients_; }
    const MatX<Scalar>& gram() const { return gram_; }
    Index dimension() const { return kernel_.dimension(); }
    Index site_count() const { return sites_.size(); }

    /// m(x) + sum_j K(x, x_j) A_j
    VecX<Scalar> predict_mean(const VecX<Scalar>& x) const {
        const Index d = dimension();
        if (x.size() != d) throw std::invalid_argument("predict_mean: dimension mismatch");
        VecX<Scalar> out = prior_mean_(x);
        for (Index j = 0; j < sites_.size(); ++j)
            out += eval_matrix(kernel_, x, sites_.point(j)) * coefficients_.segment(d * j, d);
        return out;
    }

    /// K(x, x') - K(x, X) (K(X,X) + shift I)^{-1} K(x', X)^T via the stored
    /// factorization.
    MatX<Scalar> predict_cov(const VecX<Scalar>& x, const VecX<Scalar>& xp) const {
        const Index d = dimension();
        if (x.size() != d || xp.size() != d)
            throw std::invalid_argument("predict_cov: dimension mismatch");
        MatX<Scalar> prior = eval_matrix(kernel_, x, xp);
        if (sites_.size() == 0) return prior;
        const MatX<Scalar> kx = cross_covariance(x);
        const MatX<Scalar> kxp = cross_covariance(xp);
        MatX<Scalar> cov = prior - kx * factor_.solve(kxp.transpose());
        if (x == xp) cov = ((cov + cov.transpose()) / 2).eval();
        return cov;
    }

    /// K(x, X) as a d x dN matrix.
    MatX<Scalar> cross_covariance(const VecX<Scalar>& x) const {
        const Index d = dimension();
        MatX<Scalar> kx(d, d * sites_.size());
        for (Index j = 0; j < sites_.size(); ++j)
            kx.block(0, d * j, d, d) = eval_matrix(kernel_, x, sites_.point(j));
        return kx;
    }

    /// Native-space norm of the kernel part of the fit, sqrt(A^T K(X,X) A).
    Scalar native_norm() const {
        if (coefficients_.size() == 0) return 0;
        const Scalar sq = coefficients_.dot(gram_ * coefficients_);
        return std::sqrt(std::max(Scalar(0), sq));
    }

    const Eigen::LLT<MatX<Scalar>>& factorization() const { return factor_; }

private:
    MatrixKernel<Scalar> kernel_;
    MeanFunction<Scalar> prior_mean_;
    PointSet<Scalar> sites_;
    FitSpec<Scalar> fit_spec_;
    MatX<Scalar> gram_;
    Eigen::LLT<MatX<Scalar>> factor_;
    VecX<Scalar> coefficients_;
    Scalar jitter_used_;
    Scalar residual_relative_;
};

/// Fit a model.  The factorization is attempted with the requested shift
/// alone, then with jitter escalated through {1e-12, 1e-10, 1e-8} times the
/// mean diagonal; failure after the last rung raises with a condition
/// estimate.  N = 0 is allowed and returns the prior.
template <typename Scalar>
GPModel<Scalar> fit(const MatrixKernel<Scalar>& kernel, const MeanFunction<Scalar>& prior_mean,
                    const Observations<Scalar>& obs, const FitSpec<Scalar>& fit_spec) {
    const Index d = kernel.dimension();
    const Index n = obs.sites.size();
    if (n == 0) {
        return GPModel<Scalar>(kernel, prior_mean, obs.sites, fit_spec, MatX<Scalar>(0, 0),
                               Eigen::LLT<MatX<Scalar>>(), VecX<Scalar>(), 0, 0);
    }
    if (obs.sites.dimension() != d)
        throw std::invalid_argument("fit: observation dimension does not match kernel");

    MatX<Scalar> gram = assemble_gram(kernel, obs.sites);
    const Scalar shift = fit_spec.mode == FitMode::interpolate ? Scalar(0) : fit_spec.value;
    const Scalar mean_diag = gram.trace() / Scalar(d * n);

    VecX<Scalar> rhs(d * n);
    for (Index j = 0; j < n; ++j)
        rhs.segment(d * j, d) =
            obs.values.col(j) - prior_mean(VecX<Scalar>(obs.sites.point(j)));

    const std::array<Scalar, 4> jitter_rungs = {Scalar(0), Scalar(1e-12) * mean_diag,
                                                Scalar(1e-10) * mean_diag,
                                                Scalar(1e-8) * mean_diag};
    for (const Scalar jitter : jitter_rungs) {
        MatX<Scalar> shifted = gram;
        shifted.diagonal().array() += shift + jitter;
        Eigen::LLT<MatX<Scalar>> llt(shifted);
        if (llt.info() != Eigen::Success) continue;

        VecX<Scalar> coeff = llt.solve(rhs);
        const Scalar rhs_norm = rhs.norm();
        Scalar rel_residual = 0;
        for (int pass = 0; pass < 4; ++pass) {
            VecX<Scalar> residual = rhs - shifted * coeff;
            rel_residual = rhs_norm > 0 ? residual.norm() / rhs_norm : Scalar(0);
            if (rel_residual <= Scalar(1e-13) || pass == 3) break;
            coeff += llt.solve(residual);
        }
        return GPModel<Scalar>(kernel, prior_mean, obs.sites, fit_spec, std::move(gram),
                               std::move(llt), std::move(coeff), jitter, rel_residual);
    }

    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "fit: gram not positive definite (eigenvalue range [" << eig.eigenvalues().minCoeff()
        << ", " << eig.eigenvalues().maxCoeff() << "], shift " << shift << ")";
    throw std::runtime_error(msg.str());
}

template <typename Scalar>
struct PowerFunctionValue {
    MatX<Scalar> covariance;  // K_N(x, x)
    Scalar lambda_max;
};

/// Power function of an interpolation model: K_N(x,x) together with its
/// largest eigenvalue, the squared worst-case pointwise error over the native
/// unit ball.  Directional values are alpha^T K_N(x,x) alpha.
template <typename Scalar>
PowerFunctionValue<Scalar> power_function(const GPModel<Scalar>& model, const VecX<Scalar>& x) {
    if (model.mode() != FitMode::interpolate)
        throw std::invalid_argument("power_function: power function defined for interpolation only");
    PowerFunctionValue<Scalar> out;
    out.covariance = model.predict_cov(x, x);
    Eigen::SelfAdjointEigenSolver<MatX<Scalar>> eig(out.covariance, Eigen::EigenvaluesOnly);
    out.lambda_max = eig.eigenvalues().maxCoeff();
    return out;
}

}  // namespace vecgp

#endif  // VECGP_GP_HPP
