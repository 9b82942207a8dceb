#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace hardy {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

/// Distance from point p to segment [a, b].
inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * ab);
}

/// Closest point on segment [a, b] to p, together with the parameter t in [0,1].
inline Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b, double* t_out = nullptr) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = (len2 == 0.0) ? 0.0 : std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    if (t_out) *t_out = t;
    return a + t * ab;
}

/// Twice the signed area of triangle (a, b, c); positive for counterclockwise.
inline double orient2d(Point2 a, Point2 b, Point2 c) {
    return cross(b - a, c - a);
}

/// Signed polygon area (shoelace); positive for counterclockwise vertex order.
inline double polygon_signed_area(const std::vector<Point2>& v) {
    double a = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = v[i];
        const Point2& q = v[(i + 1) % n];
        a += cross(p, q);
    }
    return 0.5 * a;
}

/// Proper segment intersection test for simplicity checking: returns true when
/// the open segments (a,b) and (c,d) cross or overlap in more than a shared
/// polygon vertex.
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double d1 = orient2d(c, d, a);
    const double d2 = orient2d(c, d, b);
    const double d3 = orient2d(a, b, c);
    const double d4 = orient2d(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](Point2 p, Point2 q, Point2 r) {
        return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
               std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
    };
    if (d1 == 0 && on_segment(c, a, d)) return true;
    if (d2 == 0 && on_segment(c, b, d)) return true;
    if (d3 == 0 && on_segment(a, c, b)) return true;
    if (d4 == 0 && on_segment(a, d, b)) return true;
    return false;
}

/// Winding-number point-in-polygon test; boundary points count as inside.
inline bool point_in_polygon(Point2 p, const std::vector<Point2>& v, double boundary_tol = 1e-12) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, v[i], v[(i + 1) % n]) <= boundary_tol) return true;
    }
    int winding = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && orient2d(a, b, p) > 0) ++winding;
        } else {
            if (b.y <= p.y && orient2d(a, b, p) < 0) --winding;
        }
    }
    return winding != 0;
}

} // namespace hardy
