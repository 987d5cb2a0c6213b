#ifndef VECGP_GEOMETRY_HPP
#define VECGP_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vecgp/rng.hpp"
#include "vecgp/types.hpp"

namespace vecgp {

/// Axis-aligned box domain in R^d, d in {2,3}.
template <typename Scalar = double>
struct Domain {
    VecX<Scalar> lower;
    VecX<Scalar> upper;

    Domain(VecX<Scalar> lo, VecX<Scalar> hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size())
            throw std::invalid_argument("Domain: lower/upper dimension mismatch");
        if (lower.size() < 2 || lower.size() > 3)
            throw std::invalid_argument("Domain: dimension must be 2 or 3");
        for (Index i = 0; i < lower.size(); ++i)
            if (!(lower[i] < upper[i]))
                throw std::invalid_argument("Domain: lower[i] < upper[i] required");
    }

    static Domain unit_box(Index d) {
        return Domain(VecX<Scalar>::Zero(d), VecX<Scalar>::Ones(d));
    }

    Index dimension() const { return lower.size(); }

    Scalar volume() const { return (upper - lower).prod(); }

    bool contains(const VecX<Scalar>& x, Scalar tol = Scalar(0)) const {
        for (Index i = 0; i < lower.size(); ++i)
            if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
        return true;
    }
};

/// Scattered data sites, stored column-wise (d x N).  Construction rejects
/// near-duplicate points (distance below 1e-12 in domain units), which would
/// otherwise produce numerically singular Gram matrices.
template <typename Scalar = double>
class PointSet {
public:
    static constexpr double duplicate_tolerance = 1e-12;

    explicit PointSet(MatX<Scalar> points) : pts_(std::move(points)) {
        for (Index i = 0; i < pts_.cols(); ++i)
            for (Index j = i + 1; j < pts_.cols(); ++j)
                if ((pts_.col(i) - pts_.col(j)).norm() < Scalar(duplicate_tolerance))
                    throw std::invalid_argument("PointSet: duplicate points");
    }

    static PointSet empty(Index dim) { return PointSet(MatX<Scalar>(dim, 0)); }

    Index dimension() const { return pts_.rows(); }
    Index size() const { return pts_.cols(); }
    const MatX<Scalar>& points() const { return pts_; }
    auto point(Index i) const { return pts_.col(i); }

    void require_inside(const Domain<Scalar>& dom, Scalar tol = Scalar(0)) const {
        if (dimension() != dom.dimension())
            throw std::invalid_argument("PointSet: dimension does not match domain");
        for (Index i = 0; i < size(); ++i)
            if (!dom.contains(pts_.col(i), tol))
                throw std::invalid_argument("PointSet: point outside domain");
    }

private:
    MatX<Scalar> pts_;
};

template <typename Scalar = double>
struct GeometryStats {
    Scalar fill_distance;      // h
    Scalar separation_radius;  // q
    Scalar mesh_ratio;         // rho = h / q
};

/// Half-diagonal of one probe-grid cell: the amount by which the probe scan
/// can underestimate the exact fill distance.
template <typename Scalar>
Scalar fill_distance_slack(const Domain<Scalar>& dom, Index probe_resolution) {
    VecX<Scalar> spacing = (dom.upper - dom.lower) / Scalar(probe_resolution - 1);
    return spacing.norm() / 2;
}

/// Fill distance h = sup_{x in dom} min_j |x - x_j|, approximated by a dense
/// regular probe grid with probe_resolution points per axis (boundary
/// included).  The returned value underestimates the exact supremum by at
/// most fill_distance_slack(dom, probe_resolution).
template <typename Scalar>
Scalar fill_distance(const PointSet<Scalar>& sites, const Domain<Scalar>& dom,
                     Index probe_resolution) {
    if (sites.size() == 0) throw std::invalid_argument("fill_distance: empty point set");
    if (probe_resolution < 2)
        throw std::invalid_argument("fill_distance: probe_resolution >= 2 required");
    const Index d = dom.dimension();
    if (sites.dimension() != d)
        throw std::invalid_argument("fill_distance: dimension mismatch");

    const Index per_axis = probe_resolution;
    Index total = 1;
    for (Index i = 0; i < d; ++i) total *= per_axis;

    VecX<Scalar> spacing = (dom.upper - dom.lower) / Scalar(per_axis - 1);
    const MatX<Scalar>& pts = sites.points();

    Scalar worst_sq = 0;
    VecX<Scalar> probe(d);
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        for (Index a = 0; a < d; ++a) {
            probe[a] = dom.lower[a] + spacing[a] * Scalar(rem % per_axis);
            rem /= per_axis;
        }
        Scalar best_sq = std::numeric_limits<Scalar>::max();
        for (Index j = 0; j < pts.cols(); ++j) {
            const Scalar dist_sq = (pts.col(j) - probe).squaredNorm();
            if (dist_sq < best_sq) best_sq = dist_sq;
        }
        if (best_sq > worst_sq) worst_sq = best_sq;
    }
    return std::sqrt(worst_sq);
}

/// Separation radius q = (1/2) min_{j != k} |x_j - x_k| (exhaustive O(N^2)).
template <typename Scalar>
Scalar separation_radius(const PointSet<Scalar>& sites) {
    if (sites.size() < 2)
        throw std::invalid_argument("separation_radius: separation radius undefined");
    const MatX<Scalar>& pts = sites.points();
    Scalar min_sq = std::numeric_limits<Scalar>::max();
    for (Index i = 0; i < pts.cols(); ++i)
        for (Index j = i + 1; j < pts.cols(); ++j) {
            const Scalar dist_sq = (pts.col(i) - pts.col(j)).squaredNorm();
            if (dist_sq < min_sq) min_sq = dist_sq;
        }
    return std::sqrt(min_sq) / 2;
}

template <typename Scalar>
GeometryStats<Scalar> mesh_ratio(const PointSet<Scalar>& sites, const Domain<Scalar>& dom,
                                 Index probe_resolution) {
    GeometryStats<Scalar> stats;
    stats.fill_distance = fill_distance(sites, dom, probe_resolution);
    stats.separation_radius = separation_radius(sites);
    stats.mesh_ratio = stats.fill_distance / stats.separation_radius;
    return stats;
}

enum class PointKind { grid, halton, uniform_random };

/// van der Corput radical inverse in the given base, index starting at 1.
inline double halton_radical_inverse(std::uint64_t base, std::uint64_t index) {
    double result = 0.0;
    double digit_weight = 1.0 / static_cast<double>(base);
    while (index > 0) {
        result += digit_weight * static_cast<double>(index % base);
        index /= base;
        digit_weight /= static_cast<double>(base);
    }
    return result;
}

/// Tensor-product lattice with per_axis points per axis, boundary included.
template <typename Scalar>
PointSet<Scalar> grid_points(Index per_axis, const Domain<Scalar>& dom) {
    if (per_axis < 1) throw std::invalid_argument("grid_points: per_axis >= 1 required");
    const Index d = dom.dimension();
    Index total = 1;
    for (Index i = 0; i < d; ++i) total *= per_axis;
    MatX<Scalar> pts(d, total);
    for (Index flat = 0; flat < total; ++flat) {
        Index rem = flat;
        for (Index a = 0; a < d; ++a) {
            const Index ia = rem % per_axis;
            rem /= per_axis;
            pts(a, flat) =
                per_axis == 1
                    ? (dom.lower[a] + dom.upper[a]) / 2
                    : dom.lower[a] + (dom.upper[a] - dom.lower[a]) * Scalar(ia) / Scalar(per_axis - 1);
        }
    }
    return PointSet<Scalar>(std::move(pts));
}

/// First `count` Halton points, bases (2,3) for d = 2 and (2,3,5) for d = 3,
/// scaled into the domain.  Seed-free and deterministic.
template <typename Scalar>
PointSet<Scalar> halton_points(Index count, const Domain<Scalar>& dom) {
    if (count < 1) throw std::invalid_argument("halton_points: count >= 1 required");
    const Index d = dom.dimension();
    static constexpr std::uint64_t bases[3] = {2, 3, 5};
    MatX<Scalar> pts(d, count);
    for (Index n = 0; n < count; ++n)
        for (Index a = 0; a < d; ++a) {
            const double u = halton_radical_inverse(bases[a], static_cast<std::uint64_t>(n) + 1);
            pts(a, n) = dom.lower[a] + (dom.upper[a] - dom.lower[a]) * Scalar(u);
        }
    return PointSet<Scalar>(std::move(pts));
}

/// I.i.d. uniform draws on the domain; exact duplicates (closer than the
/// PointSet tolerance) are redrawn.
template <typename Scalar>
PointSet<Scalar> uniform_random_points(Index count, const Domain<Scalar>& dom,
                                       std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("uniform_random_points: count >= 1 required");
    const Index d = dom.dimension();
    Rng rng = Rng::stream(seed, 0x706f696e7473ULL);
    MatX<Scalar> pts(d, count);
    Index accepted = 0;
    while (accepted < count) {
        VecX<Scalar> candidate(d);
        for (Index a = 0; a < d; ++a)
            candidate[a] = Scalar(rng.uniform(static_cast<double>(dom.lower[a]),
                                              static_cast<double>(dom.upper[a])));
        bool duplicate = false;
        for (Index j = 0; j < accepted; ++j)
            if ((pts.col(j) - candidate).norm() < Scalar(PointSet<Scalar>::duplicate_tolerance)) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        pts.col(accepted++) = candidate;
    }
    return PointSet<Scalar>(std::move(pts));
}

/// Dispatch on kind; `count_or_per_axis` is points-per-axis for grids and the
/// total count otherwise.
template <typename Scalar>
PointSet<Scalar> generate_points(PointKind kind, Index count_or_per_axis,
                                 const Domain<Scalar>& dom, std::uint64_t seed = 0) {
    switch (kind) {
        case PointKind::grid: return grid_points(count_or_per_axis, dom);
        case PointKind::halton: return halton_points(count_or_per_axis, dom);
        case PointKind::uniform_random:
            return uniform_random_points(count_or_per_axis, dom, seed);
    }
    throw std::invalid_argument("generate_points: unknown kind");
}

}  // namespace vecgp

#endif  // VECGP_GEOMETRY_HPP
