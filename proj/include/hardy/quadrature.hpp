#pragma once

#include <cmath>
#include <vector>

namespace hardy {

/// Quadrature node in barycentric coordinates (triangle) or on [0,1] (segment),
/// with weight normalized to the unit measure.
struct QuadNode1D {
    double x;
    double w;
};
struct QuadNodeTri {
    double l0, l1, l2;
    double w;
};

/// Gauss-Legendre on [0,1]. order selects the point count (4 or 8).
inline std::vector<QuadNode1D> gauss_segment(int points = 4) {
    if (points <= 4) {
        // 4-point Gauss-Legendre, exact through degree 7
        const double a = 0.5 - 0.5 * 0.8611363115940526;
        const double b = 0.5 - 0.5 * 0.3399810435848563;
        const double wa = 0.5 * 0.3478548451374538;
        const double wb = 0.5 * 0.6521451548625461;
        return {{a, wa}, {b, wb}, {1.0 - b, wb}, {1.0 - a, wa}};
    }
    // 8-point Gauss-Legendre, exact through degree 15
    const double x[4] = {0.9602898564975363, 0.7966664774136267, 0.5255324099163290,
                         0.1834346424956498};
    const double w[4] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                         0.3626837833783620};
    std::vector<QuadNode1D> out;
    for (int i = 0; i < 4; ++i) {
        out.push_back({0.5 - 0.5 * x[i], 0.5 * w[i]});
        out.push_back({0.5 + 0.5 * x[i], 0.5 * w[i]});
    }
    return out;
}

/// Triangle rules: Dunavant's 7-point degree-5 rule by default; a collapsed
/// (Duffy) 8x8 tensor rule as the high-order cross-check.
inline std::vector<QuadNodeTri> gauss_triangle(bool high_order = false) {
    if (!high_order) {
        std::vector<QuadNodeTri> out;
        out.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225});
        const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
        const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
        out.push_back({a1, b1, b1, w1});
        out.push_back({b1, a1, b1, w1});
        out.push_back({b1, b1, a1, w1});
        out.push_back({a2, b2, b2, w2});
        out.push_back({b2, a2, b2, w2});
        out.push_back({b2, b2, a2, w2});
        return out;
    }
    const auto g = gauss_segment(8);
    std::vector<QuadNodeTri> out;
    for (const auto& gu : g) {
        for (const auto& gv : g) {
            // map unit square to triangle: l1 = u, l2 = v(1-u), jacobian (1-u)
            const double l1 = gu.x;
            const double l2 = gv.x * (1.0 - gu.x);
            const double l0 = 1.0 - l1 - l2;
            out.push_back({l0, l1, l2, 2.0 * gu.w * gv.w * (1.0 - gu.x)});
        }
    }
    return out;
}

/// Kahan compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace hardy
