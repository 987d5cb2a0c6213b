#ifndef VECGP_FIELDS_HPP
#define VECGP_FIELDS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vecgp/fd.hpp"
#include "vecgp/geometry.hpp"
#include "vecgp/gp.hpp"
#include "vecgp/kernels.hpp"
#include "vecgp/rng.hpp"

namespace vecgp {

enum class FieldStructure { divergence_free, curl_free, generic };

enum class FieldKind { stream2d, vectorpotential3d, gradient, kernel_combo };

/// Analytic target field with a declared structural property.  The declared
/// structure is certified at construction by finite differences over 100
/// seeded probe points (see certify_structure).
template <typename Scalar = double>
struct AnalyticField {
    FieldKind kind;
    FieldStructure structure;
    Index dim;
    std::function<VecX<Scalar>(const VecX<Scalar>&)> evaluator;
    Scalar native_norm = 0;  // kernel_combo only: norm in the kernel's native space

    VecX<Scalar> operator()(const VecX<Scalar>& x) const { return evaluator(x); }
};

/// Max finite-difference divergence (or curl magnitude) over `count` seeded
/// probe points in the box, divided by the larger of 1 and the max field
/// magnitude seen.
template <typename Scalar>
Scalar structure_residual(const AnalyticField<Scalar>& field, const Domain<Scalar>& box,
                          Index count = 100, std::uint64_t seed = 0x636572ULL,
                          Scalar fd_step = Scalar(1e-4)) {
    if (field.structure == FieldStructure::generic) return 0;
    Rng rng = Rng::stream(seed, 1);
    Scalar worst = 0;
    Scalar magnitude = 0;
    for (Index i = 0; i < count; ++i) {
        VecX<Scalar> x(field.dim);
        for (Index a = 0; a < field.dim; ++a)
            x[a] = Scalar(rng.uniform(static_cast<double>(box.lower[a]),
                                      static_cast<double>(box.upper[a])));
        magnitude = std::max(magnitude, field.evaluator(x).norm());
        Scalar r;
        if (field.structure == FieldStructure::divergence_free)
            r = std::abs(fd_divergence(field.evaluator, x, fd_step));
        else
            r = fd_curl(field.evaluator, x, fd_step).norm();
        worst = std::max(worst, r);
    }
    return worst / std::max(Scalar(1), magnitude);
}

template <typename Scalar>
void certify_structure(const AnalyticField<Scalar>& field, const Domain<Scalar>& box,
                       Scalar tolerance = Scalar(1e-6)) {
    const Scalar residual = structure_residual(field, box);
    if (residual > tolerance)
        throw std::runtime_error("AnalyticField: declared structure violated, residual " +
                                 std::to_string(static_cast<double>(residual)));
}

/// One trigonometric mode of a stream function / potential.
template <typename Scalar = double>
struct TrigMode {
    Scalar amplitude = 1;
    Scalar ax = 1;  // frequency along x1
    Scalar bx = 1;  // frequency along x2
    Scalar cx = 1;  // frequency along x3 (d = 3 only)
};

/// 2-D divergence-free field from a stream function,
///   psi = sum_m c_m sin(a_m x1) sin(b_m x2),   v = (d2 psi, -d1 psi).
template <typename Scalar = double>
AnalyticField<Scalar> make_stream_field_2d(std::vector<TrigMode<Scalar>> modes = {{}}) {
    AnalyticField<Scalar> field;
    field.kind = FieldKind::stream2d;
    field.structure = FieldStructure::divergence_free;
    field.dim = 2;
    field.evaluator = [modes](const VecX<Scalar>& x) {
        VecX<Scalar> v = VecX<Scalar>::Zero(2);
        for (const auto& m : modes) {
            v[0] += m.amplitude * m.bx * std::sin(m.ax * x[0]) * std::cos(m.bx * x[1]);
            v[1] -= m.amplitude * m.ax * std::cos(m.ax * x[0]) * std::sin(m.bx * x[1]);
        }
        return v;
    };
    certify_structure(field, Domain<Scalar>::unit_box(2));
    return field;
}

/// Curl-free field v = grad(phi) with
///   phi = sum_m c_m sin(a_m x1) cos(b_m x2) [cos(c_m x3)].
template <typename Scalar = double>
AnalyticField<Scalar> make_gradient_field(Index dim, std::vector<TrigMode<Scalar>> modes = {{}}) {
    if (dim < 2 || dim > 3)
        throw std::invalid_argument("make_gradient_field: dim must be 2 or 3");
    AnalyticField<Scalar> field;
    field.kind = FieldKind::gradient;
    field.structure = FieldStructure::curl_free;
    field.dim = dim;
    field.evaluator = [modes, dim](const VecX<Scalar>& x) {
        VecX<Scalar> v = VecX<Scalar>::Zero(dim);
        for (const auto& m : modes) {
            const Scalar s1 = std::sin(m.ax * x[0]), c1 = std::cos(m.ax * x[0]);
            const Scalar s2 = std::sin(m.bx * x[1]), c2 = std::cos(m.bx * x[1]);
            if (dim == 2) {
                v[0] += m.amplitude * m.ax * c1 * c2;
                v[1] -= m.amplitude * m.bx * s1 * s2;
            } else {
                const Scalar s3 = std::sin(m.cx * x[2]), c3 = std::cos(m.cx * x[2]);
                v[0] += m.amplitude * m.ax * c1 * c2 * c3;
                v[1] -= m.amplitude * m.bx * s1 * s2 * c3;
                v[2] -= m.amplitude * m.cx * s1 * c2 * s3;
            }
        }
        return v;
    };
    certify_structure(field, Domain<Scalar>::unit_box(dim));
    return field;
}

/// 3-D divergence-free field v = curl(Psi) from the trigonometric vector
/// potential
///   Psi = (c1 sin(b x2) sin(c x3), c2 sin(a x1) sin(c x3), c3 sin(a x1) sin(b x2)).
template <typename Scalar = double>
AnalyticField<Scalar> make_vectorpotential_field_3d(Scalar c1, Scalar c2, Scalar c3,
                                                    Scalar a = 1, Scalar b = 1, Scalar c = 1) {
    AnalyticField<Scalar> field;
    field.kind = FieldKind::vectorpotential3d;
    field.structure = FieldStructure::divergence_free;
    field.dim = 3;
    field.evaluator = [=](const VecX<Scalar>& x) {
        const Scalar s1 = std::sin(a * x[0]), k1 = std::cos(a * x[0]);
        const Scalar s2 = std::sin(b * x[1]), k2 = std::cos(b * x[1]);
        const Scalar s3 = std::sin(c * x[2]), k3 = std::cos(c * x[2]);
        VecX<Scalar> v(3);
        v[0] = c3 * b * s1 * k2 - c2 * c * s1 * k3;
        v[1] = c1 * c * s2 * k3 - c3 * a * k1 * s2;
        v[2] = c2 * a * k1 * s3 - c1 * b * k2 * s3;
        return v;
    };
    certify_structure(field, Domain<Scalar>::unit_box(3));
    return field;
}

/// Native-space member sum_j K(., z_j) beta_j with exactly computable native
/// norm  |v|^2 = sum_{ij} beta_i^T K(z_i, z_j) beta_j.
template <typename Scalar = double>
AnalyticField<Scalar> make_kernel_combo(const MatrixKernel<Scalar>& kernel,
                                        const PointSet<Scalar>& centers,
                                        const MatX<Scalar>& betas) {
    const Index d = kernel.dimension();
    if (centers.dimension() != d || betas.rows() != d || betas.cols() != centers.size())
        throw std::invalid_argument("make_kernel_combo: centers/betas shape mismatch");
    AnalyticField<Scalar> field;
    field.kind = FieldKind::kernel_combo;
    field.dim = d;
    switch (kernel.mode) {
        case KernelMode::divergence_free: field.structure = FieldStructure::divergence_free; break;
        case KernelMode::curl_free: field.structure = FieldStructure::curl_free; break;
        case KernelMode::diagonal: field.structure = FieldStructure::generic; break;
    }

    const MatX<Scalar> gram = assemble_gram(kernel, centers);
    const VecX<Scalar> beta_stacked = Eigen::Map<const VecX<Scalar>>(betas.data(), betas.size());
    field.native_norm = std::sqrt(std::max(Scalar(0), beta_stacked.dot(gram * beta_stacked)));

    MatX<Scalar> centers_pts = centers.points();
    MatX<Scalar> beta_copy = betas;
    field.evaluator = [kernel, centers_pts, beta_copy, d](const VecX<Scalar>& x) {
        VecX<Scalar> v = VecX<Scalar>::Zero(d);
        for (Index j = 0; j < centers_pts.cols(); ++j)
            v += eval_matrix(kernel, x, centers_pts.col(j)) * beta_copy.col(j);
        return v;
    };
    if (field.structure != FieldStructure::generic && kernel.base.three_times_differentiable())
        certify_structure(field, Domain<Scalar>::unit_box(d));
    return field;
}

template <typename Scalar = double>
struct NoiseSpec {
    Scalar sigma = 0;
    std::uint64_t seed = 0;

    NoiseSpec() = default;
    NoiseSpec(Scalar sd, std::uint64_t noise_seed) : sigma(sd), seed(noise_seed) {
        if (sigma < 0) throw std::invalid_argument("NoiseSpec: sigma >= 0 required");
    }
};

/// y_j = v(x_j) + sigma xi_j with xi_j i.i.d. standard normal d-vectors.
/// Noise is seeded per site from (seed, site index), so the draw for a given
/// site does not depend on evaluation order.
template <typename Scalar>
Observations<Scalar> sample_observations(const AnalyticField<Scalar>& field,
                                         const PointSet<Scalar>& sites,
                                         const NoiseSpec<Scalar>& noise = {}) {
    const Index d = field.dim;
    if (sites.dimension() != d)
        throw std::invalid_argument("sample_observations: dimension mismatch");
    MatX<Scalar> values(d, sites.size());
    for (Index j = 0; j < sites.size(); ++j) {
        values.col(j) = field.evaluator(VecX<Scalar>(sites.point(j)));
        if (noise.sigma > 0) {
            Rng rng = Rng::stream(noise.seed, static_cast<std::uint64_t>(j));
            for (Index a = 0; a < d; ++a) values(a, j) += noise.sigma * Scalar(rng.normal());
        }
    }
    return Observations<Scalar>(sites, std::move(values),
                                noise.sigma > 0 ? NoiseModel::gaussian : NoiseModel::exact,
                                noise.sigma * noise.sigma);
}

}  // namespace vecgp

#endif  // VECGP_FIELDS_HPP
