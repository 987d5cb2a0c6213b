#ifndef VECGP_RADIAL_PROFILE_HPP
#define VECGP_RADIAL_PROFILE_HPP

#include <cmath>
#include <stdexcept>

namespace vecgp {

enum class KernelFamily { gaussian, matern, wendland };

// Radial profiles are parameterized by the squared scaled radius
// s = kappa^2 |z|^2, so that Phi(z) = alpha^2 psi(s).  In this variable the
// Hessian of Phi is
//     alpha^2 (4 kappa^4 psi''(s) z z^T + 2 kappa^2 psi'(s) I),
// which has no 1/r factor and therefore no removable singularity at z = 0.
//
// Closed forms, with u = sqrt(c s) for the Matern decay constant c = 2 nu and
// t = sqrt(s) for the Wendland polynomials:
//
//   gaussian        psi = exp(-s)
//   matern 3/2      psi = (1 + u) e^-u                         u = sqrt(3 s)
//   matern 5/2      psi = (1 + u + u^2/3) e^-u                 u = sqrt(5 s)
//   matern 7/2      psi = (1 + u + 2u^2/5 + u^3/15) e^-u       u = sqrt(7 s)
//   wendland k=1,2,3  psi_{3,k}(t) on t <= 1, zero outside
//
// psi(0) = 1 for every family; alpha^2 carries the magnitude.
//
// For matern 3/2 and wendland k=1 the second derivative psi'' diverges like
// 1/sqrt(s) as s -> 0 (the kernel is C^2 but not C^4 there).  Those profiles
// report second_derivative_bounded = false and return psi2(0) = 0; the
// Hessian stays exact because the psi'' term is multiplied by z z^T = 0.
template <typename Scalar = double>
struct RadialProfile {
    KernelFamily family = KernelFamily::gaussian;
    int matern_p = 0;    // nu = p + 1/2, p in {1,2,3}
    int wendland_k = 0;  // k in {1,2,3}
    bool second_derivative_bounded = true;

    Scalar psi(Scalar s) const {
        switch (family) {
            case KernelFamily::gaussian: return std::exp(-s);
            case KernelFamily::matern: {
                if (matern_p == 1) {
                    const Scalar u = std::sqrt(3 * s);
                    return (1 + u) * std::exp(-u);
                }
                if (matern_p == 2) {
                    const Scalar u = std::sqrt(5 * s);
                    return (1 + u + u * u / 3) * std::exp(-u);
                }
                const Scalar u = std::sqrt(7 * s);
                return (1 + u + Scalar(0.4) * u * u + u * u * u / 15) * std::exp(-u);
            }
            case KernelFamily::wendland: {
                // factored forms (1-t)^m poly(t): no cancellation near the
                // support boundary
                const Scalar t = std::sqrt(s);
                if (t >= 1) return 0;
                const Scalar w = 1 - t;
                const Scalar w2 = w * w, w4 = w2 * w2;
                if (wendland_k == 1) return w4 * (4 * t + 1);
                if (wendland_k == 2) return w4 * w2 * (t * (35 * t + 18) + 3) / 3;
                // k = 3
                return w4 * w4 * (t * (t * (32 * t + 25) + 8) + 1);
            }
        }
        return 0;
    }

    Scalar psi1(Scalar s) const {
        switch (family) {
            case KernelFamily::gaussian: return -std::exp(-s);
            case KernelFamily::matern: {
                if (matern_p == 1) return Scalar(-1.5) * std::exp(-std::sqrt(3 * s));
                if (matern_p == 2) {
                    const Scalar u = std::sqrt(5 * s);
                    return Scalar(-5) / 6 * (1 + u) * std::exp(-u);
                }
                const Scalar u = std::sqrt(7 * s);
                return Scalar(-7) / 30 * (3 + u * (3 + u)) * std::exp(-u);
            }
            case KernelFamily::wendland: {
                const Scalar t = std::sqrt(s);
                if (t >= 1) return 0;
                const Scalar w = 1 - t;
                const Scalar w2 = w * w;
                if (wendland_k == 1) return -10 * w2 * w;
                if (wendland_k == 2) return Scalar(-28) / 3 * w2 * w2 * w * (5 * t + 1);
                // k = 3
                return -11 * w2 * w2 * w2 * w * (t * (16 * t + 7) + 1);
            }
        }
        return 0;
    }

    Scalar psi2(Scalar s) const {
        switch (family) {
            case KernelFamily::gaussian: return std::exp(-s);
            case KernelFamily::matern: {
                if (matern_p == 1) {
                    if (s == 0) return 0;  // unbounded limit, see note above
                    const Scalar u = std::sqrt(3 * s);
                    return 9 / (4 * u) * std::exp(-u);
                }
                if (matern_p == 2) return Scalar(25) / 12 * std::exp(-std::sqrt(5 * s));
                const Scalar u = std::sqrt(7 * s);
                return Scalar(49) / 60 * (1 + u) * std::exp(-u);
            }
            case KernelFamily::wendland: {
                const Scalar t = std::sqrt(s);
                if (t >= 1) return 0;
                const Scalar w = 1 - t;
                const Scalar w2 = w * w;
                if (wendland_k == 1) {
                    if (s == 0) return 0;  // unbounded limit, see note above
                    return 15 * w2 / t;
                }
                if (wendland_k == 2) return 140 * w2 * w2;
                // k = 3
                return 132 * w2 * w2 * w2 * (6 * t + 1);
            }
        }
        return 0;
    }

    /// True if psi vanishes identically for s >= 1 (scaled support radius 1).
    bool compactly_supported() const { return family == KernelFamily::wendland; }
};

template <typename Scalar = double>
RadialProfile<Scalar> make_radial_profile(KernelFamily family, int matern_p = 0,
                                          int wendland_k = 0) {
    RadialProfile<Scalar> profile;
    profile.family = family;
    switch (family) {
        case KernelFamily::gaussian:
            profile.second_derivative_bounded = true;
            break;
        case KernelFamily::matern:
            if (matern_p < 1 || matern_p > 3)
                throw std::invalid_argument("RadialProfile: matern nu must be 3/2, 5/2 or 7/2");
            profile.matern_p = matern_p;
            profile.second_derivative_bounded = matern_p >= 2;
            break;
        case KernelFamily::wendland:
            if (wendland_k < 1 || wendland_k > 3)
                throw std::invalid_argument("RadialProfile: wendland k must be 1, 2 or 3");
            profile.wendland_k = wendland_k;
            profile.second_derivative_bounded = wendland_k >= 2;
            break;
    }
    return profile;
}

}  // namespace vecgp

#endif  // VECGP_RADIAL_PROFILE_HPP
