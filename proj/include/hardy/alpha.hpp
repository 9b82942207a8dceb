#pragma once

#include <cmath>

#include "hardy/errors.hpp"

namespace hardy {

/// Best constant of the convex case, ((p-1)/p)^p. Also the maximum of
/// alpha -> (p-1) alpha^(p-1) (1-alpha), attained at alpha = (p-1)/p.
inline double convex_value(double p) {
    if (!(p > 1.0)) throw InvalidConfig("convex_value requires p > 1");
    return std::pow((p - 1.0) / p, p);
}

/// Largest root alpha in [(p-1)/p, 1[ of (p-1) alpha^(p-1) (1-alpha) = H.
/// The map decreases from its maximum ((p-1)/p)^p to 0 on that bracket, so
/// bisection on the decreasing branch converges unconditionally.
inline double solve_alpha(double H, double p) {
    if (!(p > 1.0)) throw InvalidConfig("solve_alpha requires p > 1");
    if (!(H > 0.0)) throw InvalidConfig("solve_alpha requires H > 0");
    const double Hmax = convex_value(p);
    if (H > Hmax * (1.0 + 1e-12) + 1e-300)
        throw NoRoot("H exceeds the maximum ((p-1)/p)^p of the alpha equation");
    if (H >= Hmax) return (p - 1.0) / p;
    auto f = [p](double alpha) {
        return (p - 1.0) * std::pow(alpha, p - 1.0) * (1.0 - alpha);
    };
    double lo = (p - 1.0) / p, hi = 1.0;
    // f(lo) = Hmax > H, f(hi) = 0 < H is false -> f decreasing: f(hi)=0 <= H
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > H) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

/// Membership test for the set of p with strict inequality H_p < ((p-1)/p)^p.
inline bool membership_in_A(double H, double p, double tol) {
    if (!(H > 0.0)) throw InvalidConfig("membership_in_A requires H > 0");
    return H < convex_value(p) - tol;
}

/// The non-decreasing transform p(1 + H^(1/p)).
inline double monotone_transform(double p, double H) {
    if (!(H >= 0.0)) throw InvalidConfig("monotone_transform requires H >= 0");
    return p * (1.0 + std::pow(H, 1.0 / p));
}

} // namespace hardy
