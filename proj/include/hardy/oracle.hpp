#pragma once

// Independent high-accuracy references used to cross-validate the 2-D FEM
// pipeline: the exact convex value, a self-contained 1-D radial reduction
// for annuli (measure r^{n-1} dr, d(r) = min(r - inner, outer - r)), and
// classical second-order eigenvalues (interval, disk). The radial solver
// shares no code with modules fem/solver; agreement between the two
// discretizations validates both.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "hardy/alpha.hpp"
#include "hardy/errors.hpp"

namespace hardy {

/// 1-D radial restriction of the Hardy quotient on an annulus
/// inner < r < outer in ambient dimension n: minimize
///   ∫ |u'|^p r^{n-1} dr / ∫ (|u|^p / d^{ap}) r^{n-1} dr,  u(inner)=u(outer)=0.
/// `grid` holds strictly increasing radii; `wall_offset` optionally gives the
/// exact distance from each node to its nearer endpoint, which stays
/// meaningful far below the resolution of absolute radii (inner + 1e-40
/// rounds back to inner in double precision). The factory fills it; plain
/// user grids may leave it empty and it is derived from the radii.
struct RadialProblem {
    double inner = 1.0;
    double outer = 2.0;
    int ambient_dim = 2; // n = 1 degenerates to the plain interval problem
    double p = 2.0;
    double a = 1.0;
    std::vector<double> grid;
    std::vector<double> wall_offset; // optional; same length as grid when set

    void validate() const {
        if (!(inner > 0.0)) throw InvalidConfig("radial problem requires inner > 0");
        if (!(outer > inner)) throw InvalidConfig("radial problem requires outer > inner");
        if (ambient_dim < 1) throw InvalidConfig("radial problem requires ambient_dim >= 1");
        if (!(p > 1.0)) throw InvalidConfig("radial problem requires p > 1");
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidConfig("radial weight exponent a must lie in [0,1]");
        if (grid.size() < 65) throw InvalidConfig("radial grid needs at least 64 cells");
        if (grid.front() != inner || grid.back() != outer)
            throw InvalidConfig("radial grid endpoints must equal inner/outer");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1] || (!wall_offset.empty() &&
                                            wall_offset[i] != wall_offset[i - 1])))
                throw InvalidConfig("radial grid must be strictly increasing");
        if (!wall_offset.empty() && wall_offset.size() != grid.size())
            throw InvalidConfig("wall_offset must match the grid size");
    }
};

struct RadialResult {
    double value = 0.0;
    std::vector<double> profile; // nodal values on the grid, normalized
};

namespace oracle_detail {

/// Geometric ladders of wall offsets from both endpoints, capped by a bulk
/// size, mirrored and merged at the midpoint.
inline void graded_radii(double inner, double outer, double depth_rel, double ratio,
                         double bulk_frac, std::vector<double>& radii,
                         std::vector<double>& offs) {
    const double L = outer - inner;
    const double half = 0.5 * L;
    const double bulk = bulk_frac * L;
    std::vector<double> lower{0.0};
    double x = std::max(depth_rel, 1e-74) * L;
    while (x < half) {
        lower.push_back(x);
        x = std::min(x * ratio, x + bulk);
    }
    radii.clear();
    offs.clear();
    for (const double off : lower) {
        radii.push_back(inner + off);
        offs.push_back(off);
    }
    radii.push_back(inner + half);
    offs.push_back(half);
    for (std::size_t k = lower.size(); k-- > 1;) {
        radii.push_back(outer - lower[k]);
        offs.push_back(lower[k]);
    }
    radii.push_back(outer);
    offs.push_back(0.0);
    radii.front() = inner;
    radii.back() = outer;
}

/// Kahan-compensated accumulator (denominator spans many decades).
struct Accum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace oracle_detail

/// Convenience factory: annulus radial problem with geometric grading toward
/// both walls down to depth_rel * (outer - inner).
inline RadialProblem make_radial_problem(double inner, double outer, int ambient_dim,
                                         double p, double a, double depth_rel = 1e-40,
                                         double ratio = 1.6, double bulk_frac = 0.02) {
    RadialProblem prob;
    prob.inner = inner;
    prob.outer = outer;
    prob.ambient_dim = ambient_dim;
    prob.p = p;
    prob.a = a;
    oracle_detail::graded_radii(inner, outer, depth_rel, ratio, bulk_frac, prob.grid,
                                prob.wall_offset);
    while (prob.grid.size() < 65) { // honor the minimum cell count on thin shells
        std::vector<double> r2, o2;
        for (std::size_t i = 0; i + 1 < prob.grid.size(); ++i) {
            r2.push_back(prob.grid[i]);
            o2.push_back(prob.wall_offset[i]);
            r2.push_back(0.5 * (prob.grid[i] + prob.grid[i + 1]));
            o2.push_back(0.5 * (prob.wall_offset[i] + prob.wall_offset[i + 1]));
        }
        r2.push_back(prob.grid.back());
        o2.push_back(prob.wall_offset.back());
        prob.grid = std::move(r2);
        prob.wall_offset = std::move(o2);
    }
    return prob;
}

/// Minimize the radial quotient by the same descent scheme as the 2-D
/// solver (preconditioned projected descent, best-of-backtracking line
/// search), implemented self-contained on the tridiagonal structure.
inline RadialResult radial_constant(const RadialProblem& prob) {
    prob.validate();
    const std::size_t nn = prob.grid.size();
    const std::size_t ns = nn - 1;
    const double L = prob.outer - prob.inner;
    const double p = prob.p, a = prob.a;
    const int n = prob.ambient_dim;

    // node distances to the nearer wall and segment lengths, exact in the
    // graded layers when wall offsets are available
    std::vector<double> dist(nn), seg(ns);
    std::size_t mid = 0;
    if (!prob.wall_offset.empty()) {
        for (std::size_t i = 0; i < nn; ++i) dist[i] = prob.wall_offset[i];
        for (std::size_t i = 0; i + 1 < nn; ++i)
            if (prob.wall_offset[i + 1] >= prob.wall_offset[i]) mid = i + 1;
        for (std::size_t s = 0; s < ns; ++s)
            seg[s] = s < mid ? prob.wall_offset[s + 1] - prob.wall_offset[s]
                             : prob.wall_offset[s] - prob.wall_offset[s + 1];
    } else {
        for (std::size_t i = 0; i < nn; ++i)
            dist[i] = std::min(prob.grid[i] - prob.inner, prob.outer - prob.grid[i]);
        for (std::size_t s = 0; s < ns; ++s) seg[s] = prob.grid[s + 1] - prob.grid[s];
    }
    for (const double h : seg)
        if (!(h > 0.0)) throw InvalidConfig("radial grid contains a degenerate cell");

    // two-point Gauss data per segment: radial weight r^{n-1} and the
    // interpolation fractions
    static constexpr double gq[2] = {0.2113248654051871, 0.7886751345948129};
    std::vector<double> rw(2 * ns);
    for (std::size_t s = 0; s < ns; ++s)
        for (int q = 0; q < 2; ++q) {
            const double r = prob.grid[s] + gq[q] * (prob.grid[s + 1] - prob.grid[s]);
            rw[2 * s + q] = n == 1 ? 1.0 : std::pow(r, n - 1);
        }

    auto numerator = [&](const std::vector<double>& u) {
        oracle_detail::Accum acc;
        for (std::size_t s = 0; s < ns; ++s) {
            const double du = (u[s + 1] - u[s]) / seg[s];
            acc.add(std::pow(std::abs(du), p) * 0.5 * seg[s] * (rw[2 * s] + rw[2 * s + 1]));
        }
        return acc.sum;
    };
    auto denominator = [&](const std::vector<double>& u) {
        oracle_detail::Accum acc;
        for (std::size_t s = 0; s < ns; ++s)
            for (int q = 0; q < 2; ++q) {
                const double t = gq[q];
                const double uv = (1.0 - t) * u[s] + t * u[s + 1];
                const double dv = (1.0 - t) * dist[s] + t * dist[s + 1];
                acc.add(std::pow(std::abs(uv), p) * std::pow(dv, -a * p) * 0.5 * seg[s] *
                        rw[2 * s + q]);
            }
        return acc.sum;
    };
    auto gradient = [&](const std::vector<double>& u, double N, double D,
                        std::vector<double>& g) {
        std::fill(g.begin(), g.end(), 0.0);
        const double Q = N / D;
        for (std::size_t s = 0; s < ns; ++s) {
            const double du = (u[s + 1] - u[s]) / seg[s];
            const double wN = p * std::pow(std::abs(du), p - 1.0) * (du >= 0 ? 1.0 : -1.0) *
                              0.5 * (rw[2 * s] + rw[2 * s + 1]);
            g[s] -= wN;
            g[s + 1] += wN;
            for (int q = 0; q < 2; ++q) {
                const double t = gq[q];
                const double uv = (1.0 - t) * u[s] + t * u[s + 1];
                const double dv = (1.0 - t) * dist[s] + t * dist[s + 1];
                const double wD = Q * p * std::pow(std::abs(uv), p - 1.0) *
                                  (uv >= 0 ? 1.0 : -1.0) * std::pow(dv, -a * p) * 0.5 *
                                  seg[s] * rw[2 * s + q];
                g[s] -= (1.0 - t) * wD;
                g[s + 1] -= t * wD;
            }
        }
        for (double& x : g) x /= D;
        g.front() = g.back() = 0.0;
    };
    // tridiagonal |u'|^{p-2}-weighted stiffness, solved by the Thomas
    // algorithm on interior nodes
    std::vector<double> diag(nn), off(ns), cp(nn), dpv(nn);
    auto precondition = [&](const std::vector<double>& u, const std::vector<double>& g,
                            std::vector<double>& dir) {
        double gmax = 0.0;
        for (std::size_t s = 0; s < ns; ++s)
            gmax = std::max(gmax, std::abs((u[s + 1] - u[s]) / seg[s]));
        const double floor_w = 1e-10 * gmax;
        for (std::size_t s = 0; s < ns; ++s) {
            const double du = std::max(std::abs((u[s + 1] - u[s]) / seg[s]), floor_w);
            const double w = std::pow(du, p - 2.0) / seg[s] * 0.5 * (rw[2 * s] + rw[2 * s + 1]);
            off[s] = -w;
        }
        for (std::size_t i = 0; i < nn; ++i)
            diag[i] = (i > 0 ? -off[i - 1] : 0.0) + (i < ns ? -off[i] : 0.0);
        // Dirichlet rows
        cp[1] = off[1] / diag[1];
        dpv[1] = g[1] / diag[1];
        for (std::size_t i = 2; i + 1 < nn; ++i) {
            const double m = diag[i] - off[i - 1] * cp[i - 1];
            cp[i] = off[i] / m;
            dpv[i] = (g[i] - off[i - 1] * dpv[i - 1]) / m;
        }
        dir.assign(nn, 0.0);
        dir[nn - 2] = dpv[nn - 2];
        for (std::size_t i = nn - 2; i-- > 1;) dir[i] = dpv[i] - cp[i] * dir[i + 1];
    };

    // initial profile: log-oscillating near-minimizer for the Hardy weight,
    // smooth bump otherwise
    std::vector<double> u(nn, 0.0);
    const double alpha = (p - 1.0) / p;
    double dmin = 0.5 * L;
    for (std::size_t i = 1; i + 1 < nn; ++i) dmin = std::min(dmin, dist[i]);
    const double span = std::log(0.5 * L / dmin);
    for (std::size_t i = 1; i + 1 < nn; ++i) {
        if (a == 1.0 && span > 2.0)
            u[i] = std::pow(dist[i], alpha) * std::sin(M_PI / span * std::log(dist[i] / dmin));
        else
            u[i] = dist[i];
    }
    double D = denominator(u);
    if (!(D > 0.0)) throw DegenerateField("radial initial profile is degenerate");
    {
        const double sc = std::pow(D, -1.0 / p);
        for (double& x : u) x *= sc;
        D = 1.0;
    }
    double N = numerator(u);
    double Q = N / D;

    std::vector<double> g(nn), dir, g_prev, pg_prev, dir_prev, cand(nn), best(nn);
    int stalled = 0;
    const long max_it = 20000;
    for (long it = 1; it <= max_it; ++it) {
        gradient(u, N, D, g);
        precondition(u, g, dir);
        if (!dir_prev.empty()) { // Polak-Ribiere momentum on the smoothed gradient
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                num += g[i] * (dir[i] - pg_prev[i]);
                den += g_prev[i] * pg_prev[i];
            }
            const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            pg_prev = dir;
            double desc = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                dir[i] += beta * dir_prev[i];
                desc += g[i] * dir[i];
            }
            if (desc <= 0.0) dir = pg_prev;
        } else {
            pg_prev = dir;
        }
        g_prev = g;
        double dmax = 0.0, umax = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            dmax = std::max(dmax, std::abs(dir[i]));
            umax = std::max(umax, std::abs(u[i]));
        }
        if (dmax > 0.0)
            for (double& x : dir) x *= umax / dmax;
        dir_prev = dir;

        double t = 1.0, bq = Q, bN = N, bD = D;
        bool improved = false;
        for (int evals = 0; evals < 60 && t > 1e-18; ++evals, t *= 0.5) {
            for (std::size_t i = 0; i < nn; ++i) cand[i] = std::abs(u[i] - t * dir[i]);
            cand.front() = cand.back() = 0.0;
            const double cd = denominator(cand);
            if (!(cd > 0.0) || !std::isfinite(cd)) continue;
            const double sc = std::pow(cd, -1.0 / p);
            for (double& x : cand) x *= sc;
            const double cn = numerator(cand);
            if (cn < bq) {
                bq = cn;
                bN = cn;
                bD = 1.0;
                best = cand;
                improved = true;
            } else if (improved) {
                break;
            }
        }
        if (!improved) break;
        const double rel = (Q - bq) / std::max(bq, 1e-300);
        u = best;
        N = bN;
        D = bD;
        Q = bq;
        stalled = rel <= 1e-9 ? stalled + 1 : 0;
        if (stalled >= 20) break;
        if (it == max_it) throw NonConvergence("radial oracle reached max iterations", it, rel);
    }

    RadialResult out;
    out.value = Q;
    out.profile = std::move(u);
    return out;
}

struct IntervalShape {
    double length = 1.0;
};
struct DiskShape {
    double radius = 1.0;
};

namespace oracle_detail {

/// Order-zero Bessel function by its entire power series; adequate on [0,4].
inline double bessel_j0(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

/// First positive root of J0 by bisection on [2, 3] (J0(2) > 0 > J0(3)).
inline double bessel_j0_first_root() {
    double lo = 2.0, hi = 3.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double midp = 0.5 * (lo + hi);
        if (bessel_j0(midp) > 0.0) lo = midp;
        else hi = midp;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle_detail

/// Classical first Dirichlet eigenvalue of -Laplace (the p = 2 case):
/// interval pi^2 / L^2 by separation of variables, disk (j_{0,1} / R)^2 with
/// the Bessel root computed internally.
inline double classical_eigen_reference(const std::variant<IntervalShape, DiskShape>& shape) {
    if (const auto* iv = std::get_if<IntervalShape>(&shape)) {
        if (!(iv->length > 0.0)) throw InvalidConfig("interval length must be positive");
        return M_PI * M_PI / (iv->length * iv->length);
    }
    const auto& dk = std::get<DiskShape>(shape);
    if (!(dk.radius > 0.0)) throw InvalidConfig("disk radius must be positive");
    const double j01 = oracle_detail::bessel_j0_first_root();
    return j01 * j01 / (dk.radius * dk.radius);
}

} // namespace hardy
