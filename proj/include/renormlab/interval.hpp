#pragma once

#include <algorithm>
#include <cmath>

#include "renormlab/error.hpp"

namespace renormlab {

/// Nondegenerate closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw Error(ErrorCode::DegenerateInterval, "interval endpoints must be finite");
        if (!(lo < hi)) throw Error(ErrorCode::DegenerateInterval, "interval must satisfy lo < hi");
    }

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains_open(double x) const { return lo < x && x < hi; }
    bool contains(const Interval& o, double tol = 0.0) const {
        return lo - tol <= o.lo && o.hi <= hi + tol;
    }
    /// Length of the intersection (0 when disjoint).
    double overlap(const Interval& o) const { return std::max(0.0, std::min(hi, o.hi) - std::max(lo, o.lo)); }
    /// Affine chart zeta_I : [0,1] -> I.
    double from_unit(double t) const { return lo + t * (hi - lo); }
    double to_unit(double x) const { return (x - lo) / (hi - lo); }
};

inline const Interval kUnit{0.0, 1.0};

}  // namespace renormlab
