#pragma once

#include <cmath>

namespace butterfly::detail {

struct Bracket {
    double lo;  // predicate true: the root lies above
    double hi;  // predicate false
};

/// Bisection on a monotone predicate: above(lo) holds, above(hi) does not.
/// Stops once the bracket is as narrow as the floating grid allows or the
/// width falls below rel_tol * max(1, |hi|).
template <class Above>
Bracket bisect(Above above, double lo, double hi, double rel_tol = 1e-16, int max_iter = 400) {
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= rel_tol * std::fmax(1.0, std::fabs(hi))) break;
        if (above(mid))
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

/// Bisection over positive reals with geometric midpoints, for roots spread
/// over hundreds of decades.  The returned ends are points the predicate saw.
template <class Above>
Bracket bisect_positive(Above above, double lo, double hi, int max_iter = 2000) {
    for (int i = 0; i < max_iter; ++i) {
        double mid = std::sqrt(lo) * std::sqrt(hi);
        if (mid <= lo || mid >= hi) mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (above(mid))
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace butterfly::detail
