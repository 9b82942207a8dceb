#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/mesh.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

/// Piecewise-linear coefficient vector on a mesh, vanishing on boundary
/// vertices (the discrete zero-trace space).
struct ScalarField {
    const Mesh* mesh = nullptr;
    std::vector<double> coeffs;

    ScalarField() = default;
    explicit ScalarField(const Mesh& m) : mesh(&m), coeffs(m.n_vertices(), 0.0) {}

    void zero_boundary() {
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (mesh->boundary[i]) coeffs[i] = 0.0;
    }

    bool boundary_is_zero() const {
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (mesh->boundary[i] && coeffs[i] != 0.0) return false;
        return true;
    }

    bool is_zero() const {
        for (const double c : coeffs)
            if (c != 0.0) return false;
        return true;
    }
};

/// Interpolate a pointwise function of (x, d) at the mesh vertices;
/// boundary vertices are forced to zero.
inline ScalarField interpolate(const Mesh& m,
                               const std::function<double(Point2, double)>& f) {
    ScalarField u(m);
    for (std::size_t i = 0; i < m.n_vertices(); ++i)
        u.coeffs[i] = m.boundary[i] ? 0.0 : f(m.vertices[i], m.distance[i]);
    return u;
}

enum class IntegralMode { GradientPower, WeightedPower, GradientPowerLog, WeightedPowerLog };

struct QuotientValue {
    double numerator = 0.0;   // integral of |grad u|^p
    double denominator = 0.0; // integral of |u|^p / d^(a p)
    double value = 0.0;
    double p = 2.0;
    double a = 1.0;
};

/// x^p * ln(x) extended by its limit 0 at x = 0.
inline double pow_log(double x, double p) {
    return x > 0.0 ? std::pow(x, p) * std::log(x) : 0.0;
}

/// Precomputed per-quadrature-point geometry (weights, shape gradients,
/// exact boundary distance). Annulus meshes are curved: shape gradients and
/// jacobians come from the polar parameterization, so the discrete space is
/// conforming on the exact annulus. Building one context per (mesh, order)
/// and reusing it across evaluations is the solver's hot path.
class QuadContext {
public:
    explicit QuadContext(const Mesh& m, bool high_order = false) : mesh_(&m) {
        if (m.dim == 1) build_1d(high_order);
        else build_2d(high_order);
    }

    const Mesh& mesh() const { return *mesh_; }
    int n_shape() const { return mesh_->dim + 1; }
    std::size_t n_elements() const { return elem_ids_.size(); }
    std::size_t n_qpoints() const { return nq_; }

    const std::array<int, 3>& element(std::size_t e) const { return elem_ids_[e]; }
    double qweight(std::size_t e, std::size_t q) const { return wq_[e * nq_ + q]; }
    double shape(std::size_t q, int k) const { return shape_[q * n_shape() + k]; }
    Point2 shape_grad(std::size_t e, std::size_t q, int k) const {
        return grad_[(e * nq_ + q) * n_shape() + k];
    }
    double distance_at(std::size_t e, std::size_t q) const { return dq_[e * nq_ + q]; }

    Point2 field_grad(const ScalarField& u, std::size_t e, std::size_t q) const {
        Point2 g{0.0, 0.0};
        for (int k = 0; k < n_shape(); ++k) {
            const Point2 gk = shape_grad(e, q, k);
            const double c = u.coeffs[elem_ids_[e][k]];
            g.x += c * gk.x;
            g.y += c * gk.y;
        }
        return g;
    }

    double field_at(const ScalarField& u, std::size_t e, std::size_t q) const {
        double v = 0.0;
        for (int k = 0; k < n_shape(); ++k) v += u.coeffs[elem_ids_[e][k]] * shape(q, k);
        return v;
    }

private:
    // Axis offset of an interpolated local coordinate: |X| when the element
    // lies on one side of the axis (X is then a signed wall offset, exact
    // arbitrarily deep), otherwise X is an absolute coordinate and the
    // nearest wall is found directly (mid-domain, no cancellation risk).
    static double axis_distance(double X, bool mixed, double L) {
        if (mixed) return std::min(X, L - X);
        return std::min(std::abs(X), L - std::abs(X));
    }

    void build_1d(bool high_order) {
        const Mesh& m = *mesh_;
        const auto rule = gauss_segment(high_order ? 8 : 4);
        nq_ = rule.size();
        for (const auto& n : rule) {
            shape_.push_back(1.0 - n.x);
            shape_.push_back(n.x);
        }
        const double L = m.axis_len1;
        for (const auto& s : m.segments) {
            const double s0 = m.param[s[0]].x, s1 = m.param[s[1]].x;
            const bool mixed = axis_upper(s0) != axis_upper(s1);
            const double X0 = mixed ? axis_pos(s0, L) : s0;
            const double X1 = mixed ? axis_pos(s1, L) : s1;
            const double Le = X1 - X0;
            elem_ids_.push_back({s[0], s[1], -1});
            for (std::size_t q = 0; q < nq_; ++q) {
                wq_.push_back(rule[q].w * Le);
                grad_.push_back({-1.0 / Le, 0.0});
                grad_.push_back({1.0 / Le, 0.0});
                const double Xq = X0 + rule[q].x * Le;
                dq_.push_back(axis_distance(Xq, mixed, L));
            }
        }
    }

    void build_2d(bool high_order) {
        const Mesh& m = *mesh_;
        const auto rule = gauss_triangle(high_order);
        nq_ = rule.size();
        for (const auto& n : rule) {
            shape_.push_back(n.l0);
            shape_.push_back(n.l1);
            shape_.push_back(n.l2);
        }
        const double ri = m.polar ? m.domain->annulus_inner() : 0.0;
        const double ro = m.polar ? m.domain->annulus_outer() : 0.0;
        for (std::size_t e = 0; e < m.triangles.size(); ++e) {
            const auto& t = m.triangles[e];
            elem_ids_.push_back(t);
            const std::array<Point2, 3> P = m.local_tri(e);
            bool mixed_x = false, mixed_y = false;
            if (m.offsets) {
                mixed_x = axis_upper(m.param[t[0]].x) != axis_upper(m.param[t[1]].x) ||
                          axis_upper(m.param[t[0]].x) != axis_upper(m.param[t[2]].x);
                if (!m.polar)
                    mixed_y = axis_upper(m.param[t[0]].y) != axis_upper(m.param[t[1]].y) ||
                              axis_upper(m.param[t[0]].y) != axis_upper(m.param[t[2]].y);
            }
            const double twoA = orient2d(P[0], P[1], P[2]);
            const Point2 g[3] = {{(P[1].y - P[2].y) / twoA, (P[2].x - P[1].x) / twoA},
                                 {(P[2].y - P[0].y) / twoA, (P[0].x - P[2].x) / twoA},
                                 {(P[0].y - P[1].y) / twoA, (P[1].x - P[0].x) / twoA}};
            for (std::size_t q = 0; q < nq_; ++q) {
                const Point2 xq = rule[q].l0 * P[0] + rule[q].l1 * P[1] + rule[q].l2 * P[2];
                if (m.polar) {
                    // radial local coordinate -> absolute radius (smooth, so
                    // rounding is harmless) and exact boundary distance
                    double r, d;
                    if (m.offsets) {
                        if (mixed_x) {
                            r = ri + xq.x;
                            d = std::min(xq.x, m.axis_len1 - xq.x);
                        } else if (axis_upper(m.param[t[0]].x)) {
                            r = ro + xq.x;
                            d = std::min(-xq.x, m.axis_len1 + xq.x);
                        } else {
                            r = ri + xq.x;
                            d = std::min(xq.x, m.axis_len1 - xq.x);
                        }
                    } else {
                        r = xq.x;
                        d = std::min(r - ri, ro - r);
                    }
                    wq_.push_back(rule[q].w * 0.5 * twoA * r);
                    for (int k = 0; k < 3; ++k) grad_.push_back({g[k].x, g[k].y / r});
                    dq_.push_back(d);
                } else {
                    wq_.push_back(rule[q].w * 0.5 * twoA);
                    for (int k = 0; k < 3; ++k) grad_.push_back(g[k]);
                    if (m.offsets) {
                        dq_.push_back(std::min(axis_distance(xq.x, mixed_x, m.axis_len1),
                                               axis_distance(xq.y, mixed_y, m.axis_len2)));
                    } else {
                        dq_.push_back(m.domain->distance_to_boundary(xq));
                    }
                }
            }
        }
    }

    const Mesh* mesh_;
    std::size_t nq_ = 0;
    std::vector<std::array<int, 3>> elem_ids_;
    std::vector<double> wq_;
    std::vector<Point2> grad_;
    std::vector<double> shape_;
    std::vector<double> dq_;
};

/// One of the four quotient building blocks: the p-energy, the weighted
/// p-norm, and their logarithmic derivatives in p.
inline double integrate_weighted(const QuadContext& ctx, const ScalarField& u, double p, double a,
                                 IntegralMode mode) {
    if (!(p > 1.0)) throw InvalidConfig("integrate_weighted requires p > 1");
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidConfig("weight exponent a must lie in [0,1]");
    KahanSum acc;
    const std::size_t ne = ctx.n_elements();
    const std::size_t nq = ctx.n_qpoints();
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t q = 0; q < nq; ++q) {
            const double w = ctx.qweight(e, q);
            switch (mode) {
                case IntegralMode::GradientPower: {
                    const double gn = norm(ctx.field_grad(u, e, q));
                    acc.add(w * std::pow(gn, p));
                    break;
                }
                case IntegralMode::GradientPowerLog: {
                    const double gn = norm(ctx.field_grad(u, e, q));
                    acc.add(w * pow_log(gn, p));
                    break;
                }
                case IntegralMode::WeightedPower:
                case IntegralMode::WeightedPowerLog: {
                    const double uv = std::abs(ctx.field_at(u, e, q));
                    const double d = ctx.distance_at(e, q);
                    const double ratio = (a == 0.0) ? uv : uv / std::pow(d, a);
                    if (mode == IntegralMode::WeightedPower) acc.add(w * std::pow(ratio, p));
                    else acc.add(w * pow_log(ratio, p));
                    break;
                }
            }
        }
    }
    const double out = acc.value();
    if (!std::isfinite(out))
        throw QuadratureOverflow("non-finite weighted integral; mesh grading is insufficient");
    return out;
}

inline double integrate_weighted(const Mesh& m, const ScalarField& u, double p, double a,
                                 IntegralMode mode) {
    return integrate_weighted(QuadContext(m), u, p, a, mode);
}

inline QuotientValue evaluate_quotient(const QuadContext& ctx, const ScalarField& u, double p,
                                       double a) {
    if (!u.boundary_is_zero())
        throw InvalidConfig("quotient argument must vanish on boundary vertices");
    QuotientValue qv;
    qv.p = p;
    qv.a = a;
    qv.numerator = integrate_weighted(ctx, u, p, a, IntegralMode::GradientPower);
    qv.denominator = integrate_weighted(ctx, u, p, a, IntegralMode::WeightedPower);
    if (!(qv.denominator > 0.0))
        throw DegenerateField("quotient denominator vanishes (field is zero)");
    qv.value = qv.numerator / qv.denominator;
    return qv;
}

inline QuotientValue evaluate_quotient(const Mesh& m, const ScalarField& u, double p, double a) {
    return evaluate_quotient(QuadContext(m), u, p, a);
}

/// Gradient of the Rayleigh quotient with respect to vertex coefficients;
/// boundary entries are forced to zero. Uses the same quadrature as
/// evaluate_quotient so value and gradient are mutually consistent.
inline std::vector<double> quotient_gradient(const QuadContext& ctx, const ScalarField& u, double p,
                                             double a, const QuotientValue* known = nullptr) {
    const QuotientValue qv = known ? *known : evaluate_quotient(ctx, u, p, a);
    const Mesh& m = ctx.mesh();
    std::vector<double> dN(m.n_vertices(), 0.0), dD(m.n_vertices(), 0.0);
    const std::size_t ne = ctx.n_elements();
    const std::size_t nq = ctx.n_qpoints();
    const int ns = ctx.n_shape();
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& ids = ctx.element(e);
        for (std::size_t q = 0; q < nq; ++q) {
            const double w = ctx.qweight(e, q);
            const Point2 g = ctx.field_grad(u, e, q);
            const double gn = norm(g);
            if (gn > 0.0) {
                const double f = w * p * std::pow(gn, p - 2.0);
                for (int k = 0; k < ns; ++k) dN[ids[k]] += f * dot(g, ctx.shape_grad(e, q, k));
            }
            const double uv = ctx.field_at(u, e, q);
            if (uv != 0.0) {
                const double d = ctx.distance_at(e, q);
                const double wgt = (a == 0.0) ? 1.0 : std::pow(d, -a * p);
                const double f = w * p * std::pow(std::abs(uv), p - 2.0) * uv * wgt;
                for (int k = 0; k < ns; ++k) dD[ids[k]] += f * ctx.shape(q, k);
            }
        }
    }
    std::vector<double> grad(m.n_vertices(), 0.0);
    for (std::size_t i = 0; i < m.n_vertices(); ++i) {
        if (m.boundary[i]) continue;
        grad[i] = (dN[i] - qv.value * dD[i]) / qv.denominator;
        if (!std::isfinite(grad[i]))
            throw QuadratureOverflow("non-finite quotient gradient entry");
    }
    return grad;
}

inline std::vector<double> quotient_gradient(const Mesh& m, const ScalarField& u, double p,
                                             double a) {
    return quotient_gradient(QuadContext(m), u, p, a);
}

/// Rescale so the weighted denominator integral equals one.
inline void normalize_denominator(const QuadContext& ctx, ScalarField& u, double p, double a) {
    const double D = integrate_weighted(ctx, u, p, a, IntegralMode::WeightedPower);
    if (!(D > 0.0)) throw DegenerateField("cannot normalize the zero field");
    const double s = std::pow(D, -1.0 / p);
    for (double& c : u.coeffs) c *= s;
}

/// Discrete W^{1,q} distance between two fields on the same mesh.
inline double sobolev_distance(const QuadContext& ctx, const ScalarField& u, const ScalarField& v,
                               double q) {
    ScalarField w(ctx.mesh());
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) w.coeffs[i] = u.coeffs[i] - v.coeffs[i];
    const double grad_part = integrate_weighted(ctx, w, q, 0.0, IntegralMode::GradientPower);
    const double val_part = integrate_weighted(ctx, w, q, 0.0, IntegralMode::WeightedPower);
    return std::pow(grad_part + val_part, 1.0 / q);
}

/// Field export: header with p, a and the quotient value, then one
/// coefficient per line in mesh vertex order.
inline void write_field(const ScalarField& u, double p, double a, double value, std::ostream& os) {
    os.precision(17);
    os << "p " << p << " a " << a << " value " << value << "\n";
    for (const double c : u.coeffs) os << c << "\n";
}

} // namespace hardy
