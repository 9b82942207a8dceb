#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hardy/fem.hpp"
#include "hardy/mesh.hpp"

namespace hardy {

namespace detail {

// Signed-offset axis entries are ordered by physical position, which equals
// lexicographic order on (sign bit, value): the lower-wall block ascends,
// then the upper-wall block (negative values) ascends towards -0.
inline bool axis_key_less(double a, double b) {
    const bool sa = std::signbit(a), sb = std::signbit(b);
    if (sa != sb) return !sa;
    return a < b;
}

/// Index i of the axis cell [axis[i], axis[i+1]] containing q (clamped).
inline std::size_t axis_cell(const std::vector<double>& axis, double q) {
    const std::size_t n = axis.size();
    if (!axis_key_less(axis[0], q)) return 0;
    if (!axis_key_less(q, axis[n - 1])) return n - 2;
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (axis_key_less(axis[mid], q)) lo = mid;
        else hi = mid;
    }
    return lo;
}

/// Fractional position of q inside [s0, s1]; exact in the deep layers where
/// all three share a wall, via absolute coordinates otherwise.
inline double axis_frac(double s0, double s1, double q, double L) {
    const bool mixed = std::signbit(s0) != std::signbit(s1) ||
                       std::signbit(s0) != std::signbit(q);
    const double X0 = mixed ? axis_pos(s0, L) : s0;
    const double X1 = mixed ? axis_pos(s1, L) : s1;
    const double Xq = mixed ? axis_pos(q, L) : q;
    if (!(X1 > X0)) return 0.0;
    return std::clamp((Xq - X0) / (X1 - X0), 0.0, 1.0);
}

/// P1 value at fractions (u, v) of a quad cell split along the a-c diagonal
/// into triangles {a,b,c} and {a,c,d}.
inline double split_cell_value(double fa, double fb, double fc, double fd, double u, double v) {
    if (u >= v) return fa + (fb - fa) * u + (fc - fb) * v;
    return fa + (fc - fd) * u + (fd - fa) * v;
}

} // namespace detail

/// Point evaluation of a P1 field on an unstructured straight mesh, with a
/// uniform-bin element locator. Queries outside the mesh fall back to the
/// nearest vertex value. Structured meshes (interval/rectangle/annulus) use
/// the direct tensor-grid path in transfer_field instead.
class FieldEvaluator {
public:
    explicit FieldEvaluator(const Mesh& m) : mesh_(&m) {
        if (m.polar || m.offsets)
            throw InvalidConfig("FieldEvaluator requires an unstructured straight mesh");
        if (m.dim == 1) return;
        tri_coords_.resize(m.triangles.size());
        for (std::size_t e = 0; e < m.triangles.size(); ++e)
            for (int k = 0; k < 3; ++k) tri_coords_[e][k] = m.vertices[m.triangles[e][k]];
        build_bins();
    }

    double operator()(const ScalarField& u, Point2 x) const {
        const Mesh& m = *mesh_;
        if (m.dim == 1) {
            const double q = x.x;
            std::size_t lo = 0, hi = m.n_vertices() - 1;
            if (q <= m.vertices[lo].x) return u.coeffs[lo];
            if (q >= m.vertices[hi].x) return u.coeffs[hi];
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                if (m.vertices[mid].x <= q) lo = mid;
                else hi = mid;
            }
            const double t = (q - m.vertices[lo].x) / (m.vertices[hi].x - m.vertices[lo].x);
            return (1.0 - t) * u.coeffs[lo] + t * u.coeffs[hi];
        }
        const int e = locate(x);
        if (e >= 0) {
            const auto& P = tri_coords_[e];
            const double twoA = orient2d(P[0], P[1], P[2]);
            const double l0 = orient2d(x, P[1], P[2]) / twoA;
            const double l1 = orient2d(P[0], x, P[2]) / twoA;
            const double l2 = 1.0 - l0 - l1;
            const auto& t = m.triangles[e];
            return l0 * u.coeffs[t[0]] + l1 * u.coeffs[t[1]] + l2 * u.coeffs[t[2]];
        }
        // nearest vertex fallback
        std::size_t best = 0;
        double bd = 1e300;
        for (std::size_t i = 0; i < m.n_vertices(); ++i) {
            const double d = dist(m.vertices[i], x);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        return u.coeffs[best];
    }

private:
    void build_bins() {
        xmin_ = ymin_ = 1e300;
        xmax_ = ymax_ = -1e300;
        for (const auto& P : tri_coords_) {
            for (const Point2& p : P) {
                xmin_ = std::min(xmin_, p.x);
                xmax_ = std::max(xmax_, p.x);
                ymin_ = std::min(ymin_, p.y);
                ymax_ = std::max(ymax_, p.y);
            }
        }
        nbx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(tri_coords_.size())));
        nby_ = nbx_;
        bins_.assign(nbx_ * nby_, {});
        for (std::size_t e = 0; e < tri_coords_.size(); ++e) {
            const auto& P = tri_coords_[e];
            const double x0 = std::min({P[0].x, P[1].x, P[2].x});
            const double x1 = std::max({P[0].x, P[1].x, P[2].x});
            const double y0 = std::min({P[0].y, P[1].y, P[2].y});
            const double y1 = std::max({P[0].y, P[1].y, P[2].y});
            for (std::size_t bx = bin_x(x0); bx <= bin_x(x1); ++bx)
                for (std::size_t by = bin_y(y0); by <= bin_y(y1); ++by)
                    bins_[by * nbx_ + bx].push_back(static_cast<int>(e));
        }
    }

    std::size_t bin_x(double x) const {
        const double t = (x - xmin_) / std::max(xmax_ - xmin_, 1e-300);
        return std::min(nbx_ - 1, static_cast<std::size_t>(std::max(0.0, t * nbx_)));
    }
    std::size_t bin_y(double y) const {
        const double t = (y - ymin_) / std::max(ymax_ - ymin_, 1e-300);
        return std::min(nby_ - 1, static_cast<std::size_t>(std::max(0.0, t * nby_)));
    }

    int locate(Point2 q) const {
        if (q.x < xmin_ || q.x > xmax_ || q.y < ymin_ || q.y > ymax_) return -1;
        for (const int e : bins_[bin_y(q.y) * nbx_ + bin_x(q.x)]) {
            const auto& P = tri_coords_[e];
            const double twoA = orient2d(P[0], P[1], P[2]);
            if (twoA <= 0.0) continue;
            const double tol = -1e-10 * twoA;
            if (orient2d(q, P[1], P[2]) >= tol && orient2d(P[0], q, P[2]) >= tol &&
                orient2d(P[0], P[1], q) >= tol)
                return e;
        }
        return -1;
    }

    const Mesh* mesh_;
    std::vector<std::array<Point2, 3>> tri_coords_;
    std::vector<std::vector<int>> bins_;
    double xmin_ = 0, xmax_ = 0, ymin_ = 0, ymax_ = 0;
    std::size_t nbx_ = 1, nby_ = 1;
};

/// Interpolate a field from one mesh onto another mesh of the same domain;
/// used for warm starts along refinement ladders. Structured meshes are
/// matched through their wall-offset tensor grids, which stays exact in
/// boundary layers far below coordinate resolution.
inline ScalarField transfer_field(const ScalarField& src, const Mesh& dst) {
    const Mesh& s = *src.mesh;
    ScalarField out(dst);
    if (s.offsets && dst.offsets && s.dim == dst.dim && s.polar == dst.polar) {
        if (s.dim == 1) {
            for (std::size_t i = 0; i < dst.n_vertices(); ++i) {
                if (dst.boundary[i]) continue;
                const double q = dst.param[i].x;
                const std::size_t c = detail::axis_cell(s.axis1, q);
                const double t = detail::axis_frac(s.axis1[c], s.axis1[c + 1], q, s.axis_len1);
                out.coeffs[i] = (1.0 - t) * src.coeffs[c] + t * src.coeffs[c + 1];
            }
        } else if (s.polar) {
            const int nphi = static_cast<int>(s.axis2.size());
            const double dphi = 2.0 * M_PI / nphi;
            auto id = [&](std::size_t i, int j) { return i * nphi + (j % nphi); };
            for (std::size_t i = 0; i < dst.n_vertices(); ++i) {
                if (dst.boundary[i]) continue;
                const double qr = dst.param[i].x;
                double phi = dst.param[i].y;
                if (phi >= 2.0 * M_PI) phi -= 2.0 * M_PI;
                const std::size_t ci = detail::axis_cell(s.axis1, qr);
                const double u = detail::axis_frac(s.axis1[ci], s.axis1[ci + 1], qr, s.axis_len1);
                int j = std::clamp(static_cast<int>(phi / dphi), 0, nphi - 1);
                const double v = std::clamp(phi / dphi - j, 0.0, 1.0);
                out.coeffs[i] = detail::split_cell_value(
                    src.coeffs[id(ci, j)], src.coeffs[id(ci + 1, j)],
                    src.coeffs[id(ci + 1, j + 1)], src.coeffs[id(ci, j + 1)], u, v);
            }
        } else {
            const int nx = static_cast<int>(s.axis1.size());
            auto id = [&](std::size_t i, std::size_t j) { return j * nx + i; };
            for (std::size_t i = 0; i < dst.n_vertices(); ++i) {
                if (dst.boundary[i]) continue;
                const double qx = dst.param[i].x, qy = dst.param[i].y;
                const std::size_t ci = detail::axis_cell(s.axis1, qx);
                const std::size_t cj = detail::axis_cell(s.axis2, qy);
                const double u = detail::axis_frac(s.axis1[ci], s.axis1[ci + 1], qx, s.axis_len1);
                const double v = detail::axis_frac(s.axis2[cj], s.axis2[cj + 1], qy, s.axis_len2);
                out.coeffs[i] = detail::split_cell_value(
                    src.coeffs[id(ci, cj)], src.coeffs[id(ci + 1, cj)],
                    src.coeffs[id(ci + 1, cj + 1)], src.coeffs[id(ci, cj + 1)], u, v);
            }
        }
        out.zero_boundary();
        return out;
    }
    const FieldEvaluator eval(s);
    for (std::size_t i = 0; i < dst.n_vertices(); ++i)
        out.coeffs[i] = dst.boundary[i] ? 0.0 : eval(src, dst.vertices[i]);
    return out;
}

} // namespace hardy
