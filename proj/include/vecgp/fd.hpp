#ifndef VECGP_FD_HPP
#define VECGP_FD_HPP

#include <stdexcept>

#include "vecgp/types.hpp"

// Central finite-difference stencils used to verify analytic derivatives and
// structural properties (zero divergence / zero curl).  Second order is the
// plain 3-point stencil; fourth order uses the 5-point stencil, which keeps
// truncation error negligible for fields with large high-order derivatives
// (fine-grid posterior means, high-index eigenfunctions).

namespace vecgp {

template <typename F, typename Scalar>
Scalar fd_partial(F&& f, VecX<Scalar> x, Index axis, Scalar h, int order = 2) {
    VecX<Scalar> xp = x, xm = x;
    xp[axis] += h;
    xm[axis] -= h;
    if (order == 2) return (f(xp) - f(xm)) / (2 * h);
    if (order == 4) {
        VecX<Scalar> xpp = x, xmm = x;
        xpp[axis] += 2 * h;
        xmm[axis] -= 2 * h;
        return (-f(xpp) + 8 * f(xp) - 8 * f(xm) + f(xmm)) / (12 * h);
    }
    throw std::invalid_argument("fd_partial: order must be 2 or 4");
}

// Hessian of a scalar function via nested central differences of the values.
template <typename F, typename Scalar>
MatX<Scalar> fd_hessian(F&& f, const VecX<Scalar>& x, Scalar h) {
    const Index d = x.size();
    MatX<Scalar> hess(d, d);
    const Scalar f0 = f(x);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i; j < d; ++j) {
            if (i == j) {
                VecX<Scalar> xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                hess(i, i) = (f(xp) - 2 * f0 + f(xm)) / (h * h);
            } else {
                VecX<Scalar> xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[i] += h; xpp[j] += h;
                xpm[i] += h; xpm[j] -= h;
                xmp[i] -= h; xmp[j] += h;
                xmm[i] -= h; xmm[j] -= h;
                hess(i, j) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * h * h);
                hess(j, i) = hess(i, j);
            }
        }
    }
    return hess;
}

// Divergence of a vector field F: R^d -> R^d.
template <typename F, typename Scalar>
Scalar fd_divergence(F&& field, const VecX<Scalar>& x, Scalar h, int order = 2) {
    const Index d = x.size();
    Scalar div = 0;
    for (Index k = 0; k < d; ++k) {
        auto component = [&](const VecX<Scalar>& p) { return field(p)[k]; };
        div += fd_partial(component, x, k, h, order);
    }
    return div;
}

// Curl of a vector field.  Returns a length-1 vector for d = 2 (the scalar
// curl dv2/dx1 - dv1/dx2) and a length-3 vector for d = 3.
template <typename F, typename Scalar>
VecX<Scalar> fd_curl(F&& field, const VecX<Scalar>& x, Scalar h, int order = 2) {
    const Index d = x.size();
    auto dcomp = [&](Index comp, Index axis) {
        auto component = [&](const VecX<Scalar>& p) { return field(p)[comp]; };
        return fd_partial(component, x, axis, h, order);
    };
    if (d == 2) {
        VecX<Scalar> c(1);
        c[0] = dcomp(1, 0) - dcomp(0, 1);
        return c;
    }
    if (d == 3) {
        VecX<Scalar> c(3);
        c[0] = dcomp(2, 1) - dcomp(1, 2);
        c[1] = dcomp(0, 2) - dcomp(2, 0);
        c[2] = dcomp(1, 0) - dcomp(0, 1);
        return c;
    }
    throw std::invalid_argument("fd_curl: curl defined for d = 2, 3 only");
}

}  // namespace vecgp

#endif  // VECGP_FD_HPP
