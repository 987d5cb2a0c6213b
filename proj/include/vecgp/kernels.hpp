#ifndef VECGP_KERNELS_HPP
#define VECGP_KERNELS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "vecgp/fd.hpp"
#include "vecgp/radial_profile.hpp"
#include "vecgp/types.hpp"

namespace vecgp {

/// Scalar radial base kernel Phi(z) = alpha^2 psi(kappa^2 |z|^2) with
/// smoothness metadata.  kappa is the inverse length scale, alpha^2 the
/// variance; neither is ever estimated, both are pass-through configuration.
template <typename Scalar = double>
struct ScalarKernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    Scalar matern_nu = 0;  // in {3/2, 5/2, 7/2}
    int wendland_k = 0;    // in {1, 2, 3}; base smoothness index d_w = 3
    Scalar kappa = 1;
    Scalar alpha2 = 1;
    Index dim = 2;

    static ScalarKernelSpec gaussian(Scalar kappa, Scalar alpha2, Index dim) {
        ScalarKernelSpec spec;
        spec.family = KernelFamily::gaussian;
        spec.kappa = kappa;
        spec.alpha2 = alpha2;
        spec.dim = dim;
        spec.validate();
        return spec;
    }

    static ScalarKernelSpec matern(Scalar nu, Scalar kappa, Scalar alpha2, Index dim) {
        ScalarKernelSpec spec;
        spec.family = KernelFamily::matern;
        spec.matern_nu = nu;
        spec.kappa = kappa;
        spec.alpha2 = alpha2;
        spec.dim = dim;
        spec.validate();
        return spec;
    }

    static ScalarKernelSpec wendland(int k, Scalar kappa, Scalar alpha2, Index dim) {
        ScalarKernelSpec spec;
        spec.family = KernelFamily::wendland;
        spec.wendland_k = k;
        spec.kappa = kappa;
        spec.alpha2 = alpha2;
        spec.dim = dim;
        spec.validate();
        return spec;
    }

    int matern_p() const { return static_cast<int>(std::lround(matern_nu - Scalar(0.5))); }

    void validate() const {
        if (!(kappa > 0)) throw std::invalid_argument("ScalarKernelSpec: kappa > 0 required");
        if (!(alpha2 > 0)) throw std::invalid_argument("ScalarKernelSpec: alpha2 > 0 required");
        if (dim < 2 || dim > 3)
            throw std::invalid_argument("ScalarKernelSpec: dim must be 2 or 3");
        if (family == KernelFamily::matern) {
            const int p = matern_p();
            if (p < 1 || p > 3 || std::abs(matern_nu - (Scalar(p) + Scalar(0.5))) > Scalar(1e-12))
                throw std::invalid_argument("ScalarKernelSpec: matern nu must be 3/2, 5/2 or 7/2");
        }
        if (family == KernelFamily::wendland && (wendland_k < 1 || wendland_k > 3))
            throw std::invalid_argument("ScalarKernelSpec: wendland k must be 1, 2 or 3");
        // Smoothness floor tau > d/2 for the derived matrix kernel.
        auto tau = derived_sobolev_order();
        if (tau && !(*tau > Scalar(dim) / 2))
            throw std::invalid_argument("ScalarKernelSpec: derived tau > d/2 required");
    }

    /// Sobolev order tau of the derived divergence-/curl-free matrix kernel:
    /// its native space is H^tau(D; div) resp. H^tau(D; curl).  The scalar
    /// base itself reproduces H^{tau+1}.  Mapping:
    ///   matern:    tau + 1 = nu + d/2
    ///   wendland:  tau + 1 = d_w/2 + k + 1/2 with d_w = 3 (valid for d <= 3)
    ///   gaussian:  no finite order (empty optional; rate prediction disabled)
    std::optional<Scalar> derived_sobolev_order() const {
        switch (family) {
            case KernelFamily::gaussian: return std::nullopt;
            case KernelFamily::matern: return matern_nu + Scalar(dim) / 2 - 1;
            case KernelFamily::wendland: return Scalar(wendland_k) + 1;
        }
        return std::nullopt;
    }

    std::optional<Scalar> sobolev_order_base() const {
        auto tau = derived_sobolev_order();
        if (!tau) return std::nullopt;
        return *tau + 1;
    }

    RadialProfile<Scalar> profile() const {
        switch (family) {
            case KernelFamily::gaussian: return make_radial_profile<Scalar>(family);
            case KernelFamily::matern: return make_radial_profile<Scalar>(family, matern_p());
            case KernelFamily::wendland:
                return make_radial_profile<Scalar>(family, 0, wendland_k);
        }
        throw std::invalid_argument("ScalarKernelSpec: unknown family");
    }

    /// True when the base is three times differentiable, the requirement for
    /// classically divergence-/curl-free kernel columns.
    bool three_times_differentiable() const {
        switch (family) {
            case KernelFamily::gaussian: return true;
            case KernelFamily::matern: return matern_nu >= Scalar(2.5) - Scalar(1e-12);
            case KernelFamily::wendland: return wendland_k >= 2;
        }
        return false;
    }
};

template <typename Scalar>
std::optional<Scalar> sobolev_order(const ScalarKernelSpec<Scalar>& spec) {
    return spec.derived_sobolev_order();
}

template <typename Scalar>
RadialProfile<Scalar> radial_profile(const ScalarKernelSpec<Scalar>& spec) {
    return spec.profile();
}

/// Phi(x - y) = alpha^2 psi(kappa^2 |x - y|^2).
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar eval_scalar(const ScalarKernelSpec<Scalar>& spec,
                   const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& y) {
    if (x.size() != spec.dim || y.size() != spec.dim)
        throw std::invalid_argument("eval_scalar: dimension mismatch");
    const Scalar s = spec.kappa * spec.kappa * (x - y).squaredNorm();
    return spec.alpha2 * spec.profile().psi(s);
}

/// Hessian of Phi at z:
///   H = alpha^2 (4 kappa^4 psi''(s) z z^T + 2 kappa^2 psi'(s) I),  s = kappa^2 |z|^2.
/// Exactly symmetric by construction.
template <typename Scalar, typename Derived>
MatX<Scalar> hessian(const ScalarKernelSpec<Scalar>& spec,
                     const Eigen::MatrixBase<Derived>& z) {
    const Scalar k2 = spec.kappa * spec.kappa;
    const Scalar s = k2 * z.squaredNorm();
    const auto profile = spec.profile();
    // materialize the outer product before scaling so the scalar multiplies
    // every entry the same way and symmetry is exact
    MatX<Scalar> outer = z * z.transpose();
    MatX<Scalar> h = (spec.alpha2 * 4 * k2 * k2 * profile.psi2(s)) * outer;
    h.diagonal().array() += spec.alpha2 * 2 * k2 * profile.psi1(s);
    return h;
}

/// Laplacian of Phi at z: alpha^2 (4 kappa^4 psi''(s) |z|^2 + 2 d kappa^2 psi'(s)).
template <typename Scalar, typename Derived>
Scalar laplacian(const ScalarKernelSpec<Scalar>& spec,
                 const Eigen::MatrixBase<Derived>& z) {
    const Index d = z.size();
    const Scalar k2 = spec.kappa * spec.kappa;
    const Scalar z2 = z.squaredNorm();
    const Scalar s = k2 * z2;
    const auto profile = spec.profile();
    return spec.alpha2 * (4 * k2 * k2 * profile.psi2(s) * z2 + 2 * Scalar(d) * k2 * profile.psi1(s));
}

enum class KernelMode { divergence_free, curl_free, diagonal };

inline const char* kernel_mode_name(KernelMode mode) {
    switch (mode) {
        case KernelMode::divergence_free: return "divergence_free";
        case KernelMode::curl_free: return "curl_free";
        case KernelMode::diagonal: return "diagonal";
    }
    return "?";
}

/// Matrix-valued kernel built from a scalar base:
///   divergence_free  K(x,y) = (-Delta Phi) I + (grad grad^T Phi)   at z = x - y
///   curl_free        K(x,y) = -(grad grad^T Phi)
///   diagonal         K(x,y) = Phi I                  (scalar regression fallback)
/// All three satisfy K(x,y)^T = K(y,x) and positive semi-definite block Gram
/// matrices.
template <typename Scalar = double>
struct MatrixKernel {
    ScalarKernelSpec<Scalar> base;
    KernelMode mode = KernelMode::diagonal;

    MatrixKernel(ScalarKernelSpec<Scalar> base_spec, KernelMode kernel_mode)
        : base(std::move(base_spec)), mode(kernel_mode) {
        if (mode != KernelMode::diagonal && (base.dim < 2 || base.dim > 3))
            throw std::invalid_argument("MatrixKernel: structured modes require d in {2,3}");
        if (mode != KernelMode::diagonal && !base.three_times_differentiable())
            warning_ = std::string("base kernel is C^2 but not C^3 (") +
                       (base.family == KernelFamily::wendland ? "wendland k=1" : "matern nu=3/2") +
                       "); columns are divergence/curl free only away from coincident points";
    }

    Index dimension() const { return base.dim; }

    /// Set when the base smoothness is marginal for the structured modes.
    const std::optional<std::string>& smoothness_warning() const { return warning_; }

private:
    std::optional<std::string> warning_;
};

template <typename Scalar, typename DerivedA, typename DerivedB>
MatX<Scalar> eval_matrix(const MatrixKernel<Scalar>& kernel,
                         const Eigen::MatrixBase<DerivedA>& x,
                         const Eigen::MatrixBase<DerivedB>& y) {
    const Index d = kernel.dimension();
    if (x.size() != d || y.size() != d)
        throw std::invalid_argument("eval_matrix: dimension mismatch");
    const ScalarKernelSpec<Scalar>& spec = kernel.base;
    const VecX<Scalar> z = x - y;
    const Scalar k2 = spec.kappa * spec.kappa;
    const Scalar z2 = z.squaredNorm();
    const Scalar s = k2 * z2;
    const auto profile = spec.profile();

    if (kernel.mode == KernelMode::diagonal)
        return spec.alpha2 * profile.psi(s) * MatX<Scalar>::Identity(d, d);

    const Scalar psi1 = profile.psi1(s);
    const Scalar psi2 = profile.psi2(s);
    MatX<Scalar> outer = z * z.transpose();
    MatX<Scalar> hess = (spec.alpha2 * 4 * k2 * k2 * psi2) * outer;
    hess.diagonal().array() += spec.alpha2 * 2 * k2 * psi1;

    if (kernel.mode == KernelMode::curl_free) return -hess;

    // divergence-free: (-Delta Phi) I + Hessian
    const Scalar lap =
        spec.alpha2 * (4 * k2 * k2 * psi2 * z2 + 2 * Scalar(d) * k2 * psi1);
    hess.diagonal().array() -= lap;
    return hess;
}

template <typename Scalar>
void require_structured_smoothness(const MatrixKernel<Scalar>& kernel, const char* op) {
    if (kernel.mode == KernelMode::diagonal)
        throw std::invalid_argument(std::string(op) + ": diagonal mode has no structural columns");
    if (!kernel.base.three_times_differentiable())
        throw std::invalid_argument(std::string(op) +
                                    ": base kernel must be three times differentiable "
                                    "(matern nu >= 5/2, wendland k >= 2, or gaussian)");
}

/// Central-difference divergence in x of column `col` of K(x, y), expected to
/// be ~0 for divergence-free kernels.  Default step 1e-4 / kappa.
template <typename Scalar>
Scalar divergence_of_column(const MatrixKernel<Scalar>& kernel, const VecX<Scalar>& x,
                            const VecX<Scalar>& y, Index col, Scalar fd_step = 0) {
    if (kernel.mode != KernelMode::divergence_free)
        throw std::invalid_argument("divergence_of_column: kernel mode must be divergence_free");
    require_structured_smoothness(kernel, "divergence_of_column");
    const Scalar h = fd_step > 0 ? fd_step : Scalar(1e-4) / kernel.base.kappa;
    auto column = [&](const VecX<Scalar>& p) -> VecX<Scalar> {
        return eval_matrix(kernel, p, y).col(col);
    };
    return fd_divergence(column, x, h, 4);
}

/// Central-difference curl in x of column `col` of K(x, y); ~0 for curl-free
/// kernels.  Returns a length-1 vector for d = 2, length-3 for d = 3.
template <typename Scalar>
VecX<Scalar> curl_of_column(const MatrixKernel<Scalar>& kernel, const VecX<Scalar>& x,
                            const VecX<Scalar>& y, Index col, Scalar fd_step = 0) {
    if (kernel.mode != KernelMode::curl_free)
        throw std::invalid_argument("curl_of_column: kernel mode must be curl_free");
    require_structured_smoothness(kernel, "curl_of_column");
    const Scalar h = fd_step > 0 ? fd_step : Scalar(1e-4) / kernel.base.kappa;
    auto column = [&](const VecX<Scalar>& p) -> VecX<Scalar> {
        return eval_matrix(kernel, p, y).col(col);
    };
    return fd_curl(column, x, h, 4);
}

}  // namespace vecgp

#endif  // VECGP_KERNELS_HPP
