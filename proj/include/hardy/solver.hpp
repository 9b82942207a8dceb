#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hardy/alpha.hpp"
#include "hardy/errors.hpp"
#include "hardy/fem.hpp"
#include "hardy/mesh.hpp"
#include "hardy/transfer.hpp"

namespace hardy {

struct InitComparison {};
struct InitWarmStart {
    ScalarField field;
};
struct InitRandom {
    unsigned seed = 0;
};

struct SolveConfig {
    double tol_gradient = 1e-8;
    double tol_value = 1e-8;
    long max_iterations = 20000;
    // converged when the relative value decrease stays below tol_value for
    // this many consecutive iterations (the quotient's spectrum clusters at
    // the bottom, so the gradient norm alone is a poor stopping gauge)
    int stall_window = 20;
    // stall counting is suspended while the value still exceeds this floor;
    // ladder runs set it to the previous level's value so a warm-started
    // level cannot stall before recovering the transfer error
    double stall_floor = std::numeric_limits<double>::infinity();
    std::variant<InitComparison, InitWarmStart, InitRandom> init = InitComparison{};

    void validate() const {
        if (!(tol_gradient > 0.0) || !(tol_value > 0.0))
            throw InvalidConfig("solver tolerances must be positive");
        if (max_iterations < 1) throw InvalidConfig("max_iterations must be >= 1");
        if (stall_window < 1) throw InvalidConfig("stall_window must be >= 1");
    }
};

struct IterationRecord {
    long iteration;
    double value;
    double residual;
    double step_size;
};

struct HardyResult {
    double p = 2.0;
    double a = 1.0;
    double value = 0.0;
    std::optional<double> alpha; // only for a = 1
    ScalarField field;           // normalized, nonnegative
    long iterations = 0;
    double residual = 0.0;
    double h = 0.0;
    double grading_factor = 1.0;
    bool domain_convex = false;
    bool infimum_attained_expected = false;
    std::vector<IterationRecord> log;
    std::vector<double> ladder_values; // per-level values for ladder runs
    // when set, owns the mesh that `field.mesh` points to (ladder runs build
    // their meshes internally and must keep the finest one alive)
    std::shared_ptr<const Mesh> mesh_storage;
};

namespace detail {

/// Reduced |grad u|^{p-2}-weighted P1 stiffness on interior vertices,
/// refactorized every few iterations. Applying its inverse to the quotient
/// gradient gives a mesh-size-independent descent direction (a Sobolev
/// gradient in the metric of the p-energy Hessian's principal part); for
/// p = 2 it reduces to the plain stiffness preconditioner. The weight is
/// floored at a small fraction of its maximum to keep the matrix definite
/// where the iterate is locally flat.
class WeightedStiffnessPreconditioner {
public:
    explicit WeightedStiffnessPreconditioner(const QuadContext& ctx) : ctx_(&ctx) {
        const Mesh& m = ctx.mesh();
        const std::size_t nv = m.n_vertices();
        interior_.assign(nv, -1);
        int ni = 0;
        for (std::size_t i = 0; i < nv; ++i)
            if (!m.boundary[i]) interior_[i] = ni++;
        ni_ = ni;
    }

    void rebuild(const ScalarField& u, double p) {
        const QuadContext& ctx = *ctx_;
        double gmax = 0.0;
        for (std::size_t e = 0; e < ctx.n_elements(); ++e)
            for (std::size_t q = 0; q < ctx.n_qpoints(); ++q)
                gmax = std::max(gmax, norm(ctx.field_grad(u, e, q)));
        const double weight_floor = 1e-10 * gmax;
        std::vector<Eigen::Triplet<double>> trips;
        const int ns = ctx.n_shape();
        for (std::size_t e = 0; e < ctx.n_elements(); ++e) {
            const auto& ids = ctx.element(e);
            for (std::size_t q = 0; q < ctx.n_qpoints(); ++q) {
                const double gn = std::max(norm(ctx.field_grad(u, e, q)), weight_floor);
                const double cw = ctx.qweight(e, q) * std::pow(gn, p - 2.0);
                if (!std::isfinite(cw)) continue;
                for (int i = 0; i < ns; ++i) {
                    const int gi = interior_[ids[i]];
                    if (gi < 0) continue;
                    for (int j = 0; j < ns; ++j) {
                        const int gj = interior_[ids[j]];
                        if (gj < 0) continue;
                        trips.emplace_back(gi, gj,
                                           cw * dot(ctx.shape_grad(e, q, i), ctx.shape_grad(e, q, j)));
                    }
                }
            }
        }
        Eigen::SparseMatrix<double> K(ni_, ni_);
        K.setFromTriplets(trips.begin(), trips.end());
        solver_.compute(K);
        ok_ = solver_.info() == Eigen::Success;
    }

    bool ok() const { return ok_; }

    /// dir = A(u)^{-1} g restricted to interior vertices; boundary entries 0.
    std::vector<double> apply(const std::vector<double>& g) const {
        Eigen::VectorXd rhs(ni_);
        for (std::size_t i = 0; i < interior_.size(); ++i)
            if (interior_[i] >= 0) rhs[interior_[i]] = g[i];
        const Eigen::VectorXd x = solver_.solve(rhs);
        std::vector<double> out(interior_.size(), 0.0);
        for (std::size_t i = 0; i < interior_.size(); ++i)
            if (interior_[i] >= 0) out[i] = x[interior_[i]];
        return out;
    }

private:
    const QuadContext* ctx_;
    std::vector<int> interior_;
    int ni_ = 0;
    bool ok_ = false;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Comparison-function initializer. For the Hardy weight (a = 1) on a domain
/// whose boundary is locally flat or convex everywhere (convex polygons, and
/// the annulus, whose circles look flat from inside a thin layer) the
/// infimum concentrates at the boundary and near-minimizers oscillate in
/// ln d down to the resolved depth; the truncated profile
/// d^alpha sin(eps ln(d / d_min)) with alpha = (p-1)/p and a quarter-to-half
/// period across the resolved layer starts within O(eps^2) of the discrete
/// minimum. Elsewhere (attained infima, or a = 0) the smooth bump
/// d^alpha (1 - d/diam) is used.
inline ScalarField comparison_init(const Mesh& m, double p, double a) {
    const double alpha = (p - 1.0) / p;
    const double diam = m.domain->diameter();
    if (a == 1.0 && (m.domain->is_convex() || m.domain->is_annulus())) {
        double dmin = diam;
        for (std::size_t i = 0; i < m.n_vertices(); ++i)
            if (m.distance[i] > 0.0) dmin = std::min(dmin, m.distance[i]);
        const double span = std::log(0.5 * diam / dmin);
        if (span > 2.0) {
            const double eps = M_PI / span;
            return interpolate(m, [=](Point2, double d) {
                const double dd = std::max(d, dmin);
                return std::pow(dd, alpha) * std::sin(eps * std::log(dd / dmin));
            });
        }
    }
    return interpolate(m, [alpha, diam](Point2, double d) {
        return std::pow(d, alpha) * (1.0 - d / diam);
    });
}

} // namespace detail

/// Minimize the Rayleigh quotient over the discrete zero-trace P1 space by
/// projected preconditioned descent with a backtracking (best-of-geometric)
/// line search, per-step renormalization and nonnegativity projection. A
/// Polak-Ribiere momentum term on the preconditioned gradient accelerates
/// the log-clustered tail modes; the direction is rescaled so that unit step
/// size corresponds to an O(1) relative update of the iterate.
inline HardyResult minimize_quotient(const QuadContext& ctx, double p, double a,
                                     const SolveConfig& config = {}) {
    config.validate();
    if (!(p > 1.0)) throw InvalidConfig("minimize_quotient requires p > 1");
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidConfig("weight exponent a must lie in [0,1]");
    const Mesh& m = ctx.mesh();

    ScalarField u(m);
    if (std::holds_alternative<InitComparison>(config.init)) {
        u = detail::comparison_init(m, p, a);
    } else if (auto* ws = std::get_if<InitWarmStart>(&config.init)) {
        u = (ws->field.mesh == &m) ? ws->field : transfer_field(ws->field, m);
        for (double& c : u.coeffs) c = std::abs(c);
        u.zero_boundary();
    } else {
        const auto& ir = std::get<InitRandom>(config.init);
        std::mt19937 rng(ir.seed);
        std::uniform_real_distribution<double> U(0.1, 1.0);
        u = interpolate(m, [&](Point2, double d) { return U(rng) * d; });
    }
    if (u.is_zero()) throw DegenerateField("initial iterate is identically zero");
    normalize_denominator(ctx, u, p, a);

    detail::WeightedStiffnessPreconditioner precond(ctx);
    constexpr int precond_refresh = 8; // iterations between weight refactorizations

    HardyResult res;
    res.p = p;
    res.a = a;
    res.h = m.h_target;
    res.grading_factor = m.grading_factor;
    res.domain_convex = m.domain->is_convex();
    res.infimum_attained_expected = !res.domain_convex;

    QuotientValue qv = evaluate_quotient(ctx, u, p, a);
    std::vector<double> grad = quotient_gradient(ctx, u, p, a, &qv);
    double residual = detail::max_abs(grad);
    res.log.push_back({0, qv.value, residual, 0.0});

    std::vector<double> grad_prev, pgrad_prev, dir_prev;
    int stalled = 0;
    int since_rebuild = precond_refresh;
    for (long it = 1;; ++it) {
        if (since_rebuild >= precond_refresh) {
            precond.rebuild(u, p);
            since_rebuild = 0;
        }
        ++since_rebuild;
        const std::vector<double> pgrad = precond.ok() ? precond.apply(grad) : grad;
        std::vector<double> dir = pgrad;
        if (!dir_prev.empty()) {
            double num = 0.0;
            for (std::size_t i = 0; i < grad.size(); ++i)
                num += grad[i] * (pgrad[i] - pgrad_prev[i]);
            const double den = detail::dot_vec(grad_prev, pgrad_prev);
            const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            for (std::size_t i = 0; i < dir.size(); ++i)
                dir[i] = pgrad[i] + beta * dir_prev[i];
            if (detail::dot_vec(grad, dir) <= 0.0) dir = pgrad; // restart: keep descent
        }
        grad_prev = grad;
        pgrad_prev = pgrad;
        double dir_max = 0.0, u_max = 0.0;
        for (std::size_t i = 0; i < dir.size(); ++i) {
            dir_max = std::max(dir_max, std::abs(dir[i]));
            u_max = std::max(u_max, std::abs(u.coeffs[i]));
        }
        if (dir_max > 0.0) {
            const double scale = u_max / dir_max;
            for (double& d : dir) d *= scale;
        }
        dir_prev = dir;

        // geometric backtracking keeping the best candidate; stops once a
        // trial past the first improvement stops improving further
        ScalarField cand(m), best(m);
        QuotientValue best_qv = qv;
        double t = 1.0, best_t = 0.0;
        bool improved = false;
        for (int evals = 0; evals < 60 && t > 1e-18; ++evals, t *= 0.5) {
            for (std::size_t i = 0; i < u.coeffs.size(); ++i)
                cand.coeffs[i] = std::abs(u.coeffs[i] - t * dir[i]);
            cand.zero_boundary();
            try {
                normalize_denominator(ctx, cand, p, a);
                const QuotientValue cand_qv = evaluate_quotient(ctx, cand, p, a);
                if (cand_qv.value < best_qv.value) {
                    best_qv = cand_qv;
                    best = cand;
                    best_t = t;
                    improved = true;
                } else if (improved) {
                    break;
                }
            } catch (const DegenerateField&) {
            } catch (const QuadratureOverflow&) {
            }
        }
        if (!improved) break; // discrete stationarity: no descent along dir
        const double prev_value = qv.value;
        u = best;
        qv = best_qv;
        grad = quotient_gradient(ctx, u, p, a, &qv);
        residual = detail::max_abs(grad);
        res.log.push_back({it, qv.value, residual, best_t});
        res.iterations = it;
        const double rel_change = (prev_value - qv.value) / std::max(qv.value, 1e-300);
        stalled = (rel_change <= config.tol_value && qv.value <= config.stall_floor)
                      ? stalled + 1
                      : 0;
        if (residual <= config.tol_gradient || stalled >= config.stall_window) break;
        if (it >= config.max_iterations)
            throw NonConvergence("maximum iterations reached", it, residual);
    }

    res.field = u;
    res.value = qv.value;
    res.residual = residual;
    return res;
}

inline HardyResult minimize_quotient(const Mesh& m, double p, double a,
                                     const SolveConfig& config = {}) {
    return minimize_quotient(QuadContext(m), p, a, config);
}

struct LadderLevel {
    double h;
    double grading;
    double depth_rel = -1.0; // forwarded to triangulate
    double growth = 1.6;     // boundary-layer cell growth ratio
};

/// Solve on a refinement ladder with warm starts; returns the finest-level
/// result annotated with the per-level value sequence. Values must be
/// non-increasing within a 1e-3 relative slack: successive meshes are not
/// nested and each level is solved iteratively to a value stall, so small
/// upward wiggles are solver noise, while a genuine increase under
/// refinement indicates a broken hierarchy.
inline HardyResult compute_constant(const Domain& domain, double p, double a,
                                    const std::vector<LadderLevel>& ladder,
                                    SolveConfig config = {}) {
    if (ladder.empty()) throw InvalidConfig("ladder must be nonempty");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i].h < ladder[i - 1].h))
            throw InvalidConfig("ladder h values must be strictly decreasing");

    std::vector<double> values;
    std::vector<std::shared_ptr<Mesh>> meshes; // fields reference their mesh
    HardyResult res;
    for (std::size_t lvl = 0; lvl < ladder.size(); ++lvl) {
        meshes.push_back(std::make_shared<Mesh>(
            triangulate(domain, ladder[lvl].h, ladder[lvl].grading, ladder[lvl].depth_rel,
                        ladder[lvl].growth)));
        const QuadContext ctx(*meshes.back());
        if (lvl > 0) {
            // start from the better of the transferred previous minimizer and
            // a fresh comparison profile: transfer wins between meshes of
            // equal boundary depth, while a ladder that deepens the resolved
            // depth gains new octaves the transferred field knows nothing
            // about, where the fresh profile is far closer to the minimum
            ScalarField warm = transfer_field(res.field, *meshes.back());
            for (double& c : warm.coeffs) c = std::abs(c);
            warm.zero_boundary();
            ScalarField fresh = detail::comparison_init(*meshes.back(), p, a);
            auto init_value = [&](const ScalarField& f) {
                try {
                    ScalarField t = f;
                    normalize_denominator(ctx, t, p, a);
                    return evaluate_quotient(ctx, t, p, a).value;
                } catch (const Error&) {
                    return std::numeric_limits<double>::infinity();
                }
            };
            config.init =
                InitWarmStart{init_value(warm) <= init_value(fresh) ? warm : fresh};
            config.stall_floor = values[lvl - 1];
        }
        res = minimize_quotient(ctx, p, a, config);
        values.push_back(res.value);
        if (lvl > 0 && values[lvl] > values[lvl - 1] * (1.0 + 1e-3))
            throw LadderNotMonotone("value increased under refinement: " +
                                    std::to_string(values[lvl - 1]) + " -> " +
                                    std::to_string(values[lvl]));
    }
    res.ladder_values = values;
    if (a == 1.0) {
        // on convex domains the discrete value sits slightly above the exact
        // maximum of the alpha equation; clamp before root solving
        res.alpha = solve_alpha(std::min(res.value, convex_value(p)), p);
    }
    res.mesh_storage = meshes.back();
    return res;
}

/// Iteration log export: CSV (iteration, value, residual, step_size).
inline void write_iteration_log(const HardyResult& res, std::ostream& os) {
    os.precision(12);
    os << "iteration,value,residual,step_size\n";
    for (const auto& r : res.log)
        os << r.iteration << "," << r.value << "," << r.residual << "," << r.step_size << "\n";
}

} // namespace hardy
