#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/geometry.hpp"

namespace hardy {

/// Incremental Bowyer-Watson Delaunay triangulation of a fixed point set.
/// Deterministic: points are inserted in the order given. Near-degenerate
/// incircle cases are resolved towards "outside", which keeps the
/// triangulation valid (not strictly Delaunay) for cocircular inputs.
class Delaunay {
public:
    struct Tri {
        std::array<int, 3> v;   // vertex indices, CCW
        std::array<int, 3> adj; // adj[i] = triangle opposite v[i], -1 if none
        bool alive = true;
    };

    explicit Delaunay(const std::vector<Point2>& points) : pts_(points) {
        if (pts_.size() < 3) throw InvalidConfig("Delaunay needs at least 3 points");
        build();
    }

    /// Triangles over the input points (super-triangle removed), CCW.
    std::vector<std::array<int, 3>> triangles() const {
        const int n = static_cast<int>(pts_.size()) - 3;
        std::vector<std::array<int, 3>> out;
        for (const Tri& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
            out.push_back(t.v);
        }
        return out;
    }

private:
    std::vector<Point2> pts_;
    std::vector<Tri> tris_;
    std::vector<int> mark_; // epoch stamps for cavity membership
    int epoch_ = 0;
    int last_ = 0; // walk start hint
    double scale_ = 1.0;

    static double incircle_det(Point2 a, Point2 b, Point2 c, Point2 p) {
        const double ax = a.x - p.x, ay = a.y - p.y;
        const double bx = b.x - p.x, by = b.y - p.y;
        const double cx = c.x - p.x, cy = c.y - p.y;
        const double a2 = ax * ax + ay * ay;
        const double b2 = bx * bx + by * by;
        const double c2 = cx * cx + cy * cy;
        return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
    }

    bool in_circumcircle(const Tri& t, Point2 p) const {
        const double det = incircle_det(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p);
        return det > 1e-12 * scale_ * scale_ * scale_ * scale_;
    }

    void build() {
        const int n = static_cast<int>(pts_.size());
        double xmin = pts_[0].x, xmax = xmin, ymin = pts_[0].y, ymax = ymin;
        for (const Point2& p : pts_) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
        scale_ = std::max({xmax - xmin, ymax - ymin, 1e-30});
        const double R = 64.0 * scale_;
        pts_.push_back({cx - 2.0 * R, cy - R});
        pts_.push_back({cx + 2.0 * R, cy - R});
        pts_.push_back({cx, cy + 2.0 * R});
        tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
        last_ = 0;
        for (int i = 0; i < n; ++i) insert(i);
    }

    int locate(Point2 p) const {
        int t = last_;
        if (!tris_[t].alive)
            for (int k = static_cast<int>(tris_.size()) - 1; k >= 0; --k)
                if (tris_[k].alive) {
                    t = k;
                    break;
                }
        const double tol = -1e-13 * scale_ * scale_;
        for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
            const Tri& tr = tris_[t];
            int next = -1;
            for (int e = 0; e < 3; ++e) {
                const Point2 a = pts_[tr.v[(e + 1) % 3]];
                const Point2 b = pts_[tr.v[(e + 2) % 3]];
                if (orient2d(a, b, p) < tol) {
                    next = tr.adj[e];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
        }
        return t; // walk cycled on a degeneracy; cavity search recovers
    }

    void insert(int pi) {
        const Point2 p = pts_[pi];
        const int seed = locate(p);

        // grow the cavity of triangles whose circumcircle contains p
        ++epoch_;
        mark_.resize(tris_.size(), 0);
        auto in_cavity = [&](int t) { return mark_[t] == epoch_; };
        std::vector<int> cavity;
        std::vector<int> stack{seed};
        mark_[seed] = epoch_;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[t].adj[e];
                if (nb < 0 || in_cavity(nb)) continue;
                if (in_circumcircle(tris_[nb], p)) {
                    mark_[nb] = epoch_;
                    stack.push_back(nb);
                }
            }
        }

        // boundary edges of the cavity, with their outside neighbors
        struct BEdge {
            int a, b, outside;
        };
        std::vector<BEdge> boundary;
        for (const int t : cavity) {
            for (int e = 0; e < 3; ++e) {
                const int nb = tris_[t].adj[e];
                if (nb >= 0 && in_cavity(nb)) continue;
                boundary.push_back({tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], nb});
            }
        }
        for (const int t : cavity) tris_[t].alive = false;

        // star the cavity from p
        std::vector<int> fresh;
        fresh.reserve(boundary.size());
        for (const BEdge& be : boundary) {
            Tri nt;
            nt.v = {pi, be.a, be.b};
            nt.adj = {be.outside, -1, -1};
            tris_.push_back(nt);
            fresh.push_back(static_cast<int>(tris_.size()) - 1);
            if (be.outside >= 0) {
                Tri& out = tris_[be.outside];
                for (int e = 0; e < 3; ++e) {
                    if ((out.v[(e + 1) % 3] == be.b && out.v[(e + 2) % 3] == be.a))
                        out.adj[e] = fresh.back();
                }
            }
        }
        // link the fan: triangle with edge (p, a) pairs the one with edge (b, p)
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            Tri& ti = tris_[fresh[i]];
            for (std::size_t j = 0; j < fresh.size(); ++j) {
                if (i == j) continue;
                const Tri& tj = tris_[fresh[j]];
                if (ti.v[2] == tj.v[1]) ti.adj[1] = fresh[j]; // edge (p, v2)
                if (ti.v[1] == tj.v[2]) ti.adj[2] = fresh[j]; // edge (p, v1)
            }
        }
        last_ = fresh.empty() ? last_ : fresh.back();
    }
};

} // namespace hardy
