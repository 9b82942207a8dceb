#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <vector>

#include "hardy/delaunay.hpp"
#include "hardy/domain.hpp"
#include "hardy/errors.hpp"
#include "hardy/geometry.hpp"

namespace hardy {

/// Signed wall offset: distance to the lower axis endpoint when the sign bit
/// is clear, negated distance to the upper endpoint when set (-0.0 encodes
/// "on the upper wall"). Deep boundary layers live many orders of magnitude
/// below the coordinate scale; storing offsets instead of absolute positions
/// keeps them exact where `L - tiny` would round back to `L`.
inline double axis_pos(double s, double L) { return std::signbit(s) ? L + s : s; }
inline bool axis_upper(double s) { return std::signbit(s); }

/// Conforming triangulation (2-D) or partition into segments (1-D) with
/// per-vertex exact boundary distance. Element size shrinks geometrically
/// towards the boundary so that the singular weight d^{-ap} stays resolved.
struct Mesh {
    int dim = 2;
    std::vector<Point2> vertices; // y = 0 in 1-D
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> segments;
    std::vector<char> boundary;
    std::vector<double> distance;
    double h_target = 0.0;
    double grading_factor = 1.0;
    std::shared_ptr<const Domain> domain;

    /// Annulus meshes are curved: elements are straight in (r, phi)
    /// parameter space and mapped onto the exact circles. param holds the
    /// per-vertex (r, phi) coordinates, phi in [0, 2*pi).
    bool polar = false;
    std::vector<Point2> param;

    /// Structured meshes (interval, axis-aligned rectangle, annulus) store
    /// signed wall offsets in param instead of absolute coordinates:
    /// interval -> (offset, 0); rectangle -> (x offset, y offset);
    /// annulus -> (radial offset, phi). axis1/axis2 keep the generating
    /// tensor grids for field transfer between ladder levels.
    bool offsets = false;
    std::vector<double> axis1, axis2;
    double axis_len1 = 0.0, axis_len2 = 0.0;
    Point2 axis_origin{0.0, 0.0};

    std::size_t n_vertices() const { return vertices.size(); }
    std::size_t n_elements() const { return dim == 1 ? segments.size() : triangles.size(); }

    /// Cancellation-free local coordinates of a 2-D element: signed wall
    /// offsets per axis when all vertices sit on the same side, absolute
    /// coordinates otherwise (mid-domain, where doubles are fine). For polar
    /// meshes x is the radial coordinate and y the raw angle.
    std::array<Point2, 3> local_tri(std::size_t e) const {
        const auto& t = triangles[e];
        std::array<Point2, 3> P;
        if (polar || offsets) {
            for (int k = 0; k < 3; ++k) P[k] = param[t[k]];
            if (polar) {
                // unwrap the periodic seam so the element is contiguous in phi
                const double phi_max = std::max({P[0].y, P[1].y, P[2].y});
                for (auto& p : P)
                    if (phi_max - p.y > M_PI) p.y += 2.0 * M_PI;
            }
            if (offsets) {
                const bool mixed_x = axis_upper(P[0].x) != axis_upper(P[1].x) ||
                                     axis_upper(P[0].x) != axis_upper(P[2].x);
                if (mixed_x)
                    for (auto& p : P) p.x = axis_pos(p.x, axis_len1);
                if (!polar) {
                    const bool mixed_y = axis_upper(P[0].y) != axis_upper(P[1].y) ||
                                         axis_upper(P[0].y) != axis_upper(P[2].y);
                    if (mixed_y)
                        for (auto& p : P) p.y = axis_pos(p.y, axis_len2);
                }
            }
        } else {
            for (int k = 0; k < 3; ++k) P[k] = vertices[t[k]];
        }
        return P;
    }

    /// Exact 1-D segment length (from offsets when available).
    double segment_length(std::size_t e) const {
        const auto& s = segments[e];
        if (!offsets) return std::abs(vertices[s[1]].x - vertices[s[0]].x);
        const double s0 = param[s[0]].x, s1 = param[s[1]].x;
        if (axis_upper(s0) == axis_upper(s1)) return s1 - s0;
        return axis_pos(s1, axis_len1) - axis_pos(s0, axis_len1);
    }

    double element_diameter(std::size_t e) const {
        if (dim == 1) return segment_length(e);
        const auto P = local_tri(e);
        return std::max({dist(P[0], P[1]), dist(P[1], P[2]), dist(P[2], P[0])});
    }

    double element_measure(std::size_t e) const {
        if (dim == 1) return segment_length(e);
        const auto P = local_tri(e);
        return 0.5 * orient2d(P[0], P[1], P[2]);
    }

    double max_element_diameter() const {
        double m = 0.0;
        for (std::size_t e = 0; e < n_elements(); ++e) m = std::max(m, element_diameter(e));
        return m;
    }
};

namespace detail {

/// Graded size function: target element size at boundary distance d. The
/// step is additionally capped by a fixed fraction of d itself so that the
/// mesh resolves every octave of the boundary layer down to the floor;
/// without that cap the first step h*(d_floor/D)^theta overshoots d_floor by
/// many orders of magnitude and the effective depth collapses.
struct SizeFn {
    double h, theta, d_floor, D;
    double growth = 1.6;     // max adjacent cell size ratio in the boundary layer
    bool log_resolve = true; // apply the (growth-1)*d cap (structured meshes only)
    double operator()(double d) const {
        const double t = std::max(d, d_floor) / D;
        double s = h * std::pow(t, theta);
        if (log_resolve && theta > 0.0)
            s = std::min(s, (growth - 1.0) * std::max(d, d_floor));
        return s;
    }
    double min_size() const {
        return (log_resolve && theta > 0.0) ? (growth - 1.0) * d_floor
                                            : h * std::pow(d_floor / D, theta);
    }
};

/// Graded 1-D ladder on [0, L], returned as signed wall offsets ordered by
/// physical position: 0, x1, ..., mid, ..., -x1, -0 (negative = offset from
/// the upper endpoint, see axis_pos). The geometric growth ratio caps the
/// per-octave interpolation penalty, which is what limits accuracy for
/// non-attained infima.
inline std::vector<double> graded_axis(double L, const SizeFn& sz) {
    const double mid = 0.5 * L;
    std::vector<double> half{0.0};
    double x = 0.0, prev = 0.0;
    while (x < mid) {
        double step = sz(x);
        if (prev > 0.0) step = std::min(step, sz.growth * prev);
        x += step;
        prev = step;
        if (x >= mid - 0.45 * step) break;
        half.push_back(x);
    }
    std::vector<double> out = half;
    out.push_back(mid);
    for (auto it = half.rbegin(); it != half.rend(); ++it) out.push_back(-*it);
    return out;
}

inline bool axis_aligned_rectangle(const std::vector<Point2>& v) {
    if (v.size() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        const Point2 e = v[(i + 1) % 4] - v[i];
        if (e.x != 0.0 && e.y != 0.0) return false;
    }
    return true;
}

/// Deterministic pseudo-random jitter in [-1, 1] from integer coordinates.
inline double hash_jitter(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = a * 0x9e3779b97f4a7c15ULL ^ b * 0xc2b2ae3d27d4eb4fULL ^
                      c * 0x165667b19e3779f9ULL;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return 2.0 * (static_cast<double>(h & 0xffffffffULL) / 4294967295.0) - 1.0;
}

/// Vertex distances and boundary flags. Offset meshes derive both exactly
/// from the stored wall offsets; unstructured meshes fall back to geometric
/// distance with a snap tolerance at the boundary.
inline void finalize_vertex_data(Mesh& m) {
    const Domain& dom = *m.domain;
    m.distance.resize(m.vertices.size());
    m.boundary.resize(m.vertices.size());
    if (m.offsets) {
        for (std::size_t i = 0; i < m.vertices.size(); ++i) {
            double d;
            if (m.dim == 1 || m.polar) d = std::abs(m.param[i].x);
            else d = std::min(std::abs(m.param[i].x), std::abs(m.param[i].y));
            m.distance[i] = d;
            m.boundary[i] = (d == 0.0) ? 1 : 0;
        }
        return;
    }
    const double tol = 1e-12 * dom.diameter();
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        double d = dom.distance_to_boundary(m.vertices[i]);
        if (d <= tol) d = 0.0;
        m.distance[i] = d;
        m.boundary[i] = (d == 0.0) ? 1 : 0;
    }
}

inline Mesh mesh_interval(const Domain& dom, double h, double g, double d_floor,
                          double growth) {
    const double L = dom.interval_length();
    SizeFn sz{h, (g - 1.0) / g, d_floor, L, growth};
    Mesh m;
    m.dim = 1;
    m.offsets = true;
    m.axis1 = graded_axis(L, sz);
    m.axis_len1 = L;
    for (const double s : m.axis1) {
        m.vertices.push_back({axis_pos(s, L), 0.0});
        m.param.push_back({s, 0.0});
    }
    for (int i = 0; i + 1 < static_cast<int>(m.vertices.size()); ++i)
        m.segments.push_back({i, i + 1});
    return m;
}

inline Mesh mesh_rectangle(const Domain& dom, double h, double g, double d_floor,
                           double growth) {
    const auto& v = dom.polygon_vertices();
    double x0 = v[0].x, x1 = x0, y0 = v[0].y, y1 = y0;
    for (const Point2& p : v) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double D = dom.diameter();
    SizeFn sz{h, (g - 1.0) / g, d_floor, D, growth};
    Mesh m;
    m.offsets = true;
    m.axis1 = graded_axis(x1 - x0, sz);
    m.axis2 = graded_axis(y1 - y0, sz);
    m.axis_len1 = x1 - x0;
    m.axis_len2 = y1 - y0;
    m.axis_origin = {x0, y0};
    const int nx = static_cast<int>(m.axis1.size());
    const int ny = static_cast<int>(m.axis2.size());
    m.vertices.reserve(static_cast<std::size_t>(nx) * ny);
    m.param.reserve(m.vertices.capacity());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            m.vertices.push_back(
                {x0 + axis_pos(m.axis1[i], m.axis_len1), y0 + axis_pos(m.axis2[j], m.axis_len2)});
            m.param.push_back({m.axis1[i], m.axis2[j]});
        }
    }
    auto id = [nx](int i, int j) { return j * nx + i; };
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    }
    return m;
}

inline Mesh mesh_annulus(const Domain& dom, double h, double g, double d_floor,
                         double growth) {
    const double ri = dom.annulus_inner();
    const double ro = dom.annulus_outer();
    SizeFn sz{h, (g - 1.0) / g, d_floor, dom.diameter(), growth};
    Mesh m;
    m.polar = true;
    m.offsets = true;
    m.axis1 = graded_axis(ro - ri, sz); // radial offsets from the two circles
    m.axis_len1 = ro - ri;
    const int nr = static_cast<int>(m.axis1.size());
    const int nphi = std::max(16, static_cast<int>(std::ceil(2.0 * M_PI * ro / h)));
    m.axis2.resize(nphi);
    m.axis_len2 = 2.0 * M_PI;
    for (int j = 0; j < nphi; ++j) m.axis2[j] = 2.0 * M_PI * j / nphi;
    m.vertices.reserve(static_cast<std::size_t>(nr) * nphi);
    m.param.reserve(m.vertices.capacity());
    for (int i = 0; i < nr; ++i) {
        const double r = ri + axis_pos(m.axis1[i], m.axis_len1);
        for (int j = 0; j < nphi; ++j) {
            const double phi = m.axis2[j];
            m.vertices.push_back({r * std::cos(phi), r * std::sin(phi)});
            m.param.push_back({m.axis1[i], phi});
        }
    }
    auto id = [nphi](int i, int j) { return i * nphi + (j % nphi); };
    for (int i = 0; i + 1 < nr; ++i) {
        for (int j = 0; j < nphi; ++j) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    }
    return m;
}

inline Mesh mesh_polygon(const Domain& dom, double h, double g, double d_floor,
                         double growth) {
    const auto& poly = dom.polygon_vertices();
    const double D = dom.diameter();
    // unstructured meshes scan dyadic background grids, so the depth is
    // capped to keep the finest grid enumerable; general polygons are the
    // non-convex cases where the infimum is attained and moderate grading
    // already converges
    d_floor = std::max(d_floor, D * std::pow(h / D, 2.0));
    SizeFn sz{h, (g - 1.0) / g, d_floor, D, growth, false};
    const double s_min = sz.min_size();

    std::vector<Point2> pts;
    // boundary chain at the finest spacing
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = poly[i];
        const Point2 b = poly[(i + 1) % n];
        const int m = std::max(1, static_cast<int>(std::ceil(dist(a, b) / s_min)));
        for (int k = 0; k < m; ++k) pts.push_back(a + (static_cast<double>(k) / m) * (b - a));
    }
    const std::size_t n_boundary = pts.size();

    // interior points on dyadic grids, one level per octave of the size function
    double xmin = poly[0].x, xmax = xmin, ymin = poly[0].y, ymax = ymin;
    for (const Point2& p : poly) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const int levels = std::max(0, static_cast<int>(std::ceil(std::log2(h / s_min))));
    for (int lvl = 0; lvl <= levels; ++lvl) {
        const double s = h / std::pow(2.0, lvl);
        const int gx = static_cast<int>(std::ceil((xmax - xmin) / s));
        const int gy = static_cast<int>(std::ceil((ymax - ymin) / s));
        for (int j = 0; j < gy; ++j) {
            for (int i = 0; i < gx; ++i) {
                Point2 p{xmin + (i + 0.5) * s, ymin + (j + 0.5) * s};
                p.x += 0.12 * s * hash_jitter(lvl, i, 2 * j);
                p.y += 0.12 * s * hash_jitter(lvl, i, 2 * j + 1);
                if (!dom.contains(p)) continue;
                const double d = dom.distance_to_boundary(p);
                const double want = sz(d);
                const bool in_window = (lvl == 0) ? (want >= s) : (want >= s && want < 2.0 * s);
                const bool deepest_catchall = (lvl == levels) && (want < s);
                if (!in_window && !deepest_catchall) continue;
                if (d < 0.7 * want) continue;
                pts.push_back(p);
            }
        }
    }

    Delaunay dt(pts);
    Mesh m;
    std::vector<int> remap(pts.size(), -1);
    auto use_vertex = [&](int i) {
        if (remap[i] < 0) {
            remap[i] = static_cast<int>(m.vertices.size());
            m.vertices.push_back(pts[i]);
        }
        return remap[i];
    };
    // keep boundary vertices in their construction order
    for (std::size_t i = 0; i < n_boundary; ++i) use_vertex(static_cast<int>(i));
    for (const auto& t : dt.triangles()) {
        const Point2 c = (1.0 / 3.0) * (pts[t[0]] + pts[t[1]] + pts[t[2]]);
        if (!dom.contains(c)) continue;
        if (orient2d(pts[t[0]], pts[t[1]], pts[t[2]]) <= 0.0) continue;
        m.triangles.push_back({use_vertex(t[0]), use_vertex(t[1]), use_vertex(t[2])});
    }
    return m;
}

} // namespace detail

/// Boundary-graded triangulation. Element size near the boundary follows
/// h_target * (d/diameter)^((g-1)/g) down to a floor depth; depth_rel < 0
/// selects the default floor (h/diameter)^g relative to the diameter.
inline Mesh triangulate(const Domain& dom, double h_target, double grading_factor = 1.0,
                        double depth_rel = -1.0, double growth = 1.6) {
    if (!(h_target > 0.0) || !(grading_factor >= 1.0))
        throw InvalidConfig("triangulate needs h_target > 0 and grading_factor >= 1");
    if (!(growth > 1.0)) throw InvalidConfig("growth ratio must exceed 1");
    const double D = dom.diameter();
    if (h_target > D / 4.0)
        throw ResolutionTooCoarse("h_target must be below diameter/4 = " + std::to_string(D / 4.0));
    if (depth_rel < 0.0) depth_rel = std::pow(h_target / D, grading_factor);
    // the weight d^{-ap} must stay finite in double precision, which caps the
    // usable depth at roughly 1e-75 for p up to 4
    const double d_floor = std::max(D * depth_rel, 1e-75 * D);

    Mesh m;
    if (dom.is_interval()) {
        m = detail::mesh_interval(dom, h_target, grading_factor, d_floor, growth);
    } else if (dom.is_annulus()) {
        m = detail::mesh_annulus(dom, h_target, grading_factor, d_floor, growth);
    } else if (detail::axis_aligned_rectangle(dom.polygon_vertices())) {
        m = detail::mesh_rectangle(dom, h_target, grading_factor, d_floor, growth);
    } else {
        m = detail::mesh_polygon(dom, h_target, grading_factor, d_floor, growth);
    }
    m.h_target = h_target;
    m.grading_factor = grading_factor;
    m.domain = std::make_shared<Domain>(dom);
    detail::finalize_vertex_data(m);
    return m;
}

/// Structural invariants: positive element measures, conforming edges,
/// distance zero exactly on boundary-flagged vertices.
inline void validate_mesh(const Mesh& m) {
    if (m.n_elements() == 0) throw InvalidConfig("mesh has no elements");
    for (std::size_t e = 0; e < m.n_elements(); ++e) {
        if (!(m.element_measure(e) > 0.0))
            throw InvalidConfig("element " + std::to_string(e) + " has non-positive measure");
    }
    for (std::size_t i = 0; i < m.n_vertices(); ++i) {
        const bool on_bd = m.boundary[i] != 0;
        if (on_bd && m.distance[i] != 0.0)
            throw InvalidConfig("boundary vertex with nonzero distance");
        if (!on_bd && !(m.distance[i] > 0.0))
            throw InvalidConfig("interior vertex with non-positive distance");
    }
    if (m.dim == 2) {
        std::map<std::pair<int, int>, int> edge_count;
        for (const auto& t : m.triangles) {
            for (int e = 0; e < 3; ++e) {
                int a = t[e], b = t[(e + 1) % 3];
                if (a > b) std::swap(a, b);
                ++edge_count[{a, b}];
            }
        }
        for (const auto& [edge, count] : edge_count) {
            if (count > 2) throw InvalidConfig("non-conforming edge shared by >2 elements");
            if (count == 1 && !(m.boundary[edge.first] && m.boundary[edge.second]))
                throw InvalidConfig("interior hole: free edge with non-boundary endpoints");
        }
    }
}

/// Plain-text export: header, then `index x y d flag` per vertex and one
/// element per line (vertex indices).
inline void write_mesh(const Mesh& m, std::ostream& os) {
    os.precision(17);
    os << "vertices " << m.n_vertices() << " elements " << m.n_elements() << " dim " << m.dim
       << "\n";
    for (std::size_t i = 0; i < m.n_vertices(); ++i) {
        os << i << " " << m.vertices[i].x << " " << m.vertices[i].y << " " << m.distance[i] << " "
           << static_cast<int>(m.boundary[i]) << "\n";
    }
    if (m.dim == 1) {
        for (const auto& s : m.segments) os << s[0] << " " << s[1] << "\n";
    } else {
        for (const auto& t : m.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
}

} // namespace hardy
