#ifndef VECGP_NORMS_HPP
#define VECGP_NORMS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vecgp/sampler.hpp"
#include "vecgp/types.hpp"

namespace vecgp {

/// Discrete norm over sites and components,
///   |v|_{l_p(X)^d} = (sum_l sum_j |v_l(x_j)|^p)^{1/p},
/// with max over everything for p = inf (pass p <= 0 or infinity).
template <typename Scalar>
Scalar discrete_site_norm(const MatX<Scalar>& values, Scalar p) {
    if (values.size() == 0) throw std::invalid_argument("discrete_site_norm: empty input");
    if (!(p >= 1) || std::isinf(p)) return values.cwiseAbs().maxCoeff();
    if (p == Scalar(1)) return values.cwiseAbs().sum();
    if (p == Scalar(2)) return values.norm();
    return std::pow(values.cwiseAbs().array().pow(p).sum(), Scalar(1) / p);
}

namespace detail {

// Per-axis first derivative of component values on a tensor midpoint grid:
// central differences inside, one-sided 2-point differences at the boundary.
template <typename Scalar>
MatX<Scalar> grid_axis_derivative(const EvaluationGrid<Scalar>& grid, const MatX<Scalar>& values,
                                  Index axis) {
    Index stride = 1;
    for (Index a = 0; a < axis; ++a) stride *= grid.per_axis[static_cast<std::size_t>(a)];
    const Index count = grid.per_axis[static_cast<std::size_t>(axis)];
    const Scalar h = grid.spacing[axis];

    MatX<Scalar> deriv(values.rows(), values.cols());
    for (Index i = 0; i < grid.size(); ++i) {
        const Index ia = (i / stride) % count;
        if (count == 1) {
            deriv.col(i).setZero();
        } else if (ia == 0) {
            deriv.col(i) = (values.col(i + stride) - values.col(i)) / h;
        } else if (ia == count - 1) {
            deriv.col(i) = (values.col(i) - values.col(i - stride)) / h;
        } else {
            deriv.col(i) = (values.col(i + stride) - values.col(i - stride)) / (2 * h);
        }
    }
    return deriv;
}

// Quadrature-weighted L_q norm of component values on the grid:
//   ( sum_l sum_i w_i |v_l(x_i)|^q )^{1/q},  max for q = inf.
template <typename Scalar>
Scalar weighted_lq(const EvaluationGrid<Scalar>& grid, const MatX<Scalar>& values, Scalar q) {
    if (std::isinf(q) || !(q >= 1)) return values.cwiseAbs().maxCoeff();
    Scalar acc = 0;
    for (Index i = 0; i < grid.size(); ++i)
        acc += grid.weights[i] * values.col(i).cwiseAbs().array().pow(q).sum();
    return std::pow(acc, Scalar(1) / q);
}

}  // namespace detail

/// Order-1 Sobolev seminorm on the grid,
///   |v|_{W_q^1} = ( sum_k |d_k v|_{L_q}^2 )^{1/2},
/// with derivatives from grid-value finite differences (one-sided at the
/// boundary).
template <typename Scalar>
Scalar grid_W1q_seminorm(const EvaluationGrid<Scalar>& grid, const MatX<Scalar>& values,
                         Scalar q) {
    if (!grid.is_tensor())
        throw std::invalid_argument("grid_W1q_seminorm: tensor grid required for derivatives");
    Scalar acc = 0;
    for (Index axis = 0; axis < grid.dimension(); ++axis) {
        const Scalar part = detail::weighted_lq(grid, detail::grid_axis_derivative(grid, values, axis), q);
        acc += part * part;
    }
    return std::sqrt(acc);
}

/// Full W_q^s norm of a field given by its values on the grid; s = 0 is the
/// plain L_q norm, s = 1 combines it with the first-order seminorm as
///   ( |v|_{L_q}^q + |v|_{W_q^1}^q )^{1/q}   (max of the two for q = inf).
template <typename Scalar>
Scalar grid_Lq_norm(const EvaluationGrid<Scalar>& grid, const MatX<Scalar>& values, Scalar q,
                    int s) {
    if (values.cols() != grid.size())
        throw std::invalid_argument("grid_Lq_norm: one value column per grid point required");
    if (grid.size() == 0) throw std::invalid_argument("grid_Lq_norm: empty grid");
    if (s != 0 && s != 1) throw std::invalid_argument("grid_Lq_norm: s must be 0 or 1");
    if (!grid.has_weights() && !(std::isinf(q) || !(q >= 1)))
        throw std::invalid_argument("grid_Lq_norm: quadrature weights required for finite q");

    const Scalar l0 = detail::weighted_lq(grid, values, q);
    if (s == 0) return l0;
    const Scalar l1 = grid_W1q_seminorm(grid, values, q);
    if (std::isinf(q) || !(q >= 1)) return std::max(l0, l1);
    return std::pow(std::pow(l0, q) + std::pow(l1, q), Scalar(1) / q);
}

/// Least-squares slope of log(e) against log(h) plus the pairwise slopes.
/// Non-positive error values are dropped (interpolation can bottom out at
/// machine precision); at least two usable pairs are required.
template <typename Scalar>
struct RateEstimate {
    Scalar slope = std::numeric_limits<Scalar>::quiet_NaN();
    std::vector<Scalar> pairwise;
    Index dropped = 0;
};

template <typename Scalar>
RateEstimate<Scalar> estimate_rate(const std::vector<std::pair<Scalar, Scalar>>& pairs) {
    std::vector<std::pair<Scalar, Scalar>> usable;
    RateEstimate<Scalar> out;
    for (const auto& [h, e] : pairs) {
        if (!(h > 0)) throw std::invalid_argument("estimate_rate: h must be positive");
        if (e > 0 && std::isfinite(e)) usable.emplace_back(h, e);
        else ++out.dropped;
    }
    if (usable.size() < 2)
        throw std::invalid_argument("estimate_rate: need at least two positive (h, e) pairs");

    Scalar sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [h, e] : usable) {
        const Scalar lx = std::log(h), ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const Scalar n = Scalar(usable.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    for (std::size_t i = 1; i < usable.size(); ++i) {
        const auto& [h0, e0] = usable[i - 1];
        const auto& [h1, e1] = usable[i];
        out.pairwise.push_back(std::log(e0 / e1) / std::log(h0 / h1));
    }
    return out;
}

}  // namespace vecgp

#endif  // VECGP_NORMS_HPP
