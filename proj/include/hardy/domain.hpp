#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hardy/errors.hpp"
#include "hardy/geometry.hpp"

namespace hardy {

struct IntervalSpec {
    double length = 1.0;
};
struct PolygonSpec {
    std::vector<Point2> vertices; // counterclockwise, simple
};
struct AnnulusSpec {
    double inner = 1.0;
    double outer = 2.0;
};

using DomainSpec = std::variant<IntervalSpec, PolygonSpec, AnnulusSpec>;

/// Classification of the boundary feature nearest to a query point.
/// Reentrant corners dominate the local distance field of non-convex
/// polygons and are excluded from boundary-decay fits.
enum class NearestFeature { Edge, ConvexCorner, ReentrantCorner, Circle };

/// A validated bounded domain with exact distance-to-boundary evaluation.
class Domain {
public:
    explicit Domain(DomainSpec spec) : spec_(std::move(spec)) { validate_and_cache(); }

    const DomainSpec& spec() const { return spec_; }
    bool is_interval() const { return std::holds_alternative<IntervalSpec>(spec_); }
    bool is_polygon() const { return std::holds_alternative<PolygonSpec>(spec_); }
    bool is_annulus() const { return std::holds_alternative<AnnulusSpec>(spec_); }
    int dim() const { return is_interval() ? 1 : 2; }

    double diameter() const { return diameter_; }
    double measure() const { return measure_; }

    const std::vector<Point2>& polygon_vertices() const {
        return std::get<PolygonSpec>(spec_).vertices;
    }
    double annulus_inner() const { return std::get<AnnulusSpec>(spec_).inner; }
    double annulus_outer() const { return std::get<AnnulusSpec>(spec_).outer; }
    double interval_length() const { return std::get<IntervalSpec>(spec_).length; }

    /// Exact Euclidean distance from x to the boundary. Throws OutsideDomain
    /// when x lies outside the closure (within a small geometric slack).
    double distance_to_boundary(Point2 x) const {
        NearestFeature f;
        return distance_to_boundary(x, f);
    }

    double distance_to_boundary(Point2 x, NearestFeature& feature) const {
        if (is_interval()) {
            const double L = interval_length();
            if (x.x < -outside_tol() || x.x > L + outside_tol())
                throw OutsideDomain("point outside interval closure [0," + std::to_string(L) + "]");
            feature = NearestFeature::Edge;
            return std::max(0.0, std::min(x.x, L - x.x));
        }
        if (is_annulus()) {
            const double r = norm(x);
            const double ri = annulus_inner();
            const double ro = annulus_outer();
            if (r < ri - outside_tol() || r > ro + outside_tol())
                throw OutsideDomain("point radius outside annulus closure");
            feature = NearestFeature::Circle;
            return std::max(0.0, std::min(r - ri, ro - r));
        }
        const auto& v = polygon_vertices();
        if (!point_in_polygon(x, v, outside_tol()))
            throw OutsideDomain("point outside polygon closure");
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_edge = 0;
        double best_t = 0.0;
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            double t;
            const Point2 c = closest_point_on_segment(x, v[i], v[(i + 1) % n], &t);
            const double d = dist(x, c);
            if (d < best) {
                best = d;
                best_edge = i;
                best_t = t;
            }
        }
        const double corner_tol = 1e-9;
        if (best_t <= corner_tol || best_t >= 1.0 - corner_tol) {
            const std::size_t ci = (best_t <= corner_tol) ? best_edge : (best_edge + 1) % n;
            feature = reentrant_vertex_[ci] ? NearestFeature::ReentrantCorner
                                            : NearestFeature::ConvexCorner;
        } else {
            feature = NearestFeature::Edge;
        }
        return best;
    }

    bool contains(Point2 x) const {
        if (is_interval()) return x.x >= 0.0 && x.x <= interval_length();
        if (is_annulus()) {
            const double r = norm(x);
            return r >= annulus_inner() && r <= annulus_outer();
        }
        return point_in_polygon(x, polygon_vertices(), outside_tol());
    }

    /// Interval and convex polygons are convex; the annulus never is.
    /// Collinear polygon vertices count as convex (cross-product tolerance 1e-12).
    bool is_convex() const {
        if (is_interval()) return true;
        if (is_annulus()) return false;
        const auto& v = polygon_vertices();
        const std::size_t n = v.size();
        const double tol = 1e-12 * diameter_ * diameter_;
        for (std::size_t i = 0; i < n; ++i) {
            if (orient2d(v[i], v[(i + 1) % n], v[(i + 2) % n]) < -tol) return false;
        }
        return true;
    }

    static Domain from_json(const nlohmann::json& j) {
        const std::string type = j.at("type").get<std::string>();
        if (type == "interval") return Domain(IntervalSpec{j.at("length").get<double>()});
        if (type == "annulus")
            return Domain(AnnulusSpec{j.at("inner").get<double>(), j.at("outer").get<double>()});
        if (type == "polygon") {
            PolygonSpec ps;
            for (const auto& vj : j.at("vertices"))
                ps.vertices.push_back({vj.at(0).get<double>(), vj.at(1).get<double>()});
            return Domain(std::move(ps));
        }
        throw InvalidDomain("unknown domain type '" + type + "'");
    }

    static Domain from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidDomain("cannot open domain spec file " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        if (is_interval()) {
            j["type"] = "interval";
            j["length"] = interval_length();
        } else if (is_annulus()) {
            j["type"] = "annulus";
            j["inner"] = annulus_inner();
            j["outer"] = annulus_outer();
        } else {
            j["type"] = "polygon";
            auto arr = nlohmann::json::array();
            for (const auto& p : polygon_vertices()) arr.push_back({p.x, p.y});
            j["vertices"] = arr;
        }
        return j;
    }

private:
    double outside_tol() const { return 1e-9 * diameter_; }

    void validate_and_cache() {
        if (is_interval()) {
            const double L = interval_length();
            if (!(L > 0.0)) throw InvalidDomain("interval length must be positive");
            diameter_ = L;
            measure_ = L;
            return;
        }
        if (is_annulus()) {
            const double ri = annulus_inner();
            const double ro = annulus_outer();
            if (!(ri > 0.0)) throw InvalidDomain("annulus inner radius must be positive");
            if (!(ri < ro)) throw InvalidDomain("annulus requires inner < outer");
            diameter_ = 2.0 * ro;
            measure_ = M_PI * (ro * ro - ri * ri);
            return;
        }
        const auto& v = polygon_vertices();
        const std::size_t n = v.size();
        if (n < 3) throw InvalidDomain("polygon needs at least 3 vertices");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                // adjacent edges share one endpoint; skip those pairs
                if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
                if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                    throw SelfIntersecting("polygon edges " + std::to_string(i) + " and " +
                                           std::to_string(j) + " intersect");
            }
        }
        const double area = polygon_signed_area(v);
        if (!(area > 0.0))
            throw InvalidDomain("polygon must have positive area and counterclockwise orientation");
        measure_ = area;
        diameter_ = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                diameter_ = std::max(diameter_, dist(v[i], v[j]));
        reentrant_vertex_.assign(n, false);
        const double tol = 1e-12 * diameter_ * diameter_;
        for (std::size_t i = 0; i < n; ++i)
            reentrant_vertex_[i] =
                orient2d(v[(i + n - 1) % n], v[i], v[(i + 1) % n]) < -tol;
    }

    DomainSpec spec_;
    double diameter_ = 0.0;
    double measure_ = 0.0;
    std::vector<bool> reentrant_vertex_; // polygon only
};

inline Domain build_domain(DomainSpec spec) { return Domain(std::move(spec)); }

/// Regular n-gon inscribed in a circle of radius r; used to approximate disks.
inline PolygonSpec regular_polygon(int n, double r, Point2 center = {0.0, 0.0}) {
    PolygonSpec ps;
    ps.vertices.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        ps.vertices.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
    }
    return ps;
}

} // namespace hardy
