#pragma once

// Theorem-level diagnostics on computed minimizers: the derivative formula,
// boundary decay-exponent fitting, the corollary inequality, and p-sweeps
// collecting continuity / monotonicity / derivative-consistency columns.

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hardy/alpha.hpp"
#include "hardy/errors.hpp"
#include "hardy/fem.hpp"
#include "hardy/solver.hpp"

namespace hardy {

/// Derivative of p -> H_p evaluated on a (not necessarily normalized)
/// minimizer u. By the envelope theorem applied to the quotient
/// Q_p(u) = N_p(u)/D_p(u) at its minimizer,
///   H' = dQ_p/dp |_u = [ ∫|∇u|^p ln|∇u| − H ∫ (|u|^p/d^{ap}) ln(|u|/d^a) ]
///                      / ∫ |u|^p/d^{ap}.
/// The logarithm pairs |u| with d^a (the weight actually present in the
/// quotient); dividing by the denominator integral makes the expression
/// invariant under u -> c u. This form is validated against the central
/// finite difference of the computed p -> H_p curve.
inline double hardy_derivative(const QuadContext& ctx, const ScalarField& u, double p, double a,
                               double H) {
    if (u.is_zero()) throw DegenerateField("hardy_derivative requires a nonzero field");
    const double num_log = integrate_weighted(ctx, u, p, a, IntegralMode::GradientPowerLog);
    const double den_log = integrate_weighted(ctx, u, p, a, IntegralMode::WeightedPowerLog);
    const double den = integrate_weighted(ctx, u, p, a, IntegralMode::WeightedPower);
    return (num_log - H * den_log) / den;
}

inline double hardy_derivative(const Mesh& m, const ScalarField& u, double p, double a,
                               double H) {
    return hardy_derivative(QuadContext(m), u, p, a, H);
}

struct DecayFit {
    double alpha_fit = 0.0;
    double c_fit = 1.0;
    double r_squared = 0.0;
    std::size_t n_vertices = 0;
};

/// Least-squares fit of ln u against ln d over interior vertices in the band
/// d ∈ [d_lo, d_hi] (defaults: [h, diameter/10]); vertices whose nearest
/// boundary feature is a reentrant corner are excluded (the decay estimate
/// concerns regular boundary points). Returns the slope (decay exponent),
/// the prefactor of u ≈ c d^alpha, and the coefficient of determination.
///
/// For boundary-concentrated minimizers (non-attained infima) the power law
/// is modulated by a slow oscillation in ln d; fitting a band centred on the
/// oscillation antinode — where the field peaks — recovers the exponent, so
/// callers pass a band around argmax |u| there.
inline DecayFit fit_decay_exponent(const Mesh& m, const ScalarField& u, double d_lo = -1.0,
                                   double d_hi = -1.0) {
    if (u.mesh != &m) throw InvalidConfig("field does not live on the given mesh");
    const double diam = m.domain->diameter();
    const double lo = d_lo > 0.0 ? d_lo : m.h_target;
    const double hi = d_hi > 0.0 ? d_hi : diam / 10.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < m.n_vertices(); ++i) {
        const double d = m.distance[i];
        if (m.boundary[i] || d < lo || d > hi) continue;
        if (!(u.coeffs[i] > 0.0)) continue;
        if (m.domain->is_polygon()) {
            NearestFeature f;
            m.domain->distance_to_boundary(m.vertices[i], f);
            if (f == NearestFeature::ReentrantCorner) continue;
        }
        xs.push_back(std::log(d));
        ys.push_back(std::log(u.coeffs[i]));
    }
    if (xs.size() < 20)
        throw BandTooThin("decay-fit band holds fewer than 20 vertices");
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw BandTooThin("decay-fit band has no spread in ln d");
    DecayFit fit;
    fit.alpha_fit = sxy / sxx;
    fit.c_fit = std::exp(my - fit.alpha_fit * mx);
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.n_vertices = n;
    return fit;
}

struct CorollaryCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// The corollary inequality at a computed a = 1 minimizer:
///   H ∫ (|u|^p/d^p) ln(|u|/d)  ≤  ((H + H^{(p-1)/p})/p) ∫ |u|^p/d^p
///                                  + ∫ |∇u|^p ln|∇u|  + tol.
inline CorollaryCheck check_corollary_inequality(const QuadContext& ctx, const ScalarField& u,
                                                 double p, double H, double a = 1.0,
                                                 double tol_rel = 1e-6) {
    if (a != 1.0)
        throw WrongWeight("the corollary inequality is stated for the Hardy weight a = 1");
    if (u.is_zero()) throw DegenerateField("corollary check requires a nonzero field");
    CorollaryCheck out;
    const double den = integrate_weighted(ctx, u, p, 1.0, IntegralMode::WeightedPower);
    const double den_log = integrate_weighted(ctx, u, p, 1.0, IntegralMode::WeightedPowerLog);
    const double num_log = integrate_weighted(ctx, u, p, 1.0, IntegralMode::GradientPowerLog);
    out.lhs = H * den_log;
    out.rhs = (H + std::pow(H, (p - 1.0) / p)) / p * den + num_log;
    out.holds = out.lhs <= out.rhs + tol_rel * std::abs(out.rhs);
    return out;
}

inline CorollaryCheck check_corollary_inequality(const Mesh& m, const ScalarField& u, double p,
                                                 double H, double a = 1.0,
                                                 double tol_rel = 1e-6) {
    return check_corollary_inequality(QuadContext(m), u, p, H, a, tol_rel);
}

struct SweepRow {
    double p = 0.0;
    double H = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double transform = std::numeric_limits<double>::quiet_NaN();
    double dH_formula = std::numeric_limits<double>::quiet_NaN();
    double dH_fd = std::numeric_limits<double>::quiet_NaN();
    bool in_A = false;
    double continuity_delta = std::numeric_limits<double>::quiet_NaN();
    double field_distance = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<std::string> failures; // one message per non-converged p
    double h = 0.0;
    double grading = 1.0;
    double depth_rel = -1.0;
    double dp_fd = 0.05;
    bool transform_monotone = false; // within tol_mono relative slack
    double tol_mono = 1e-3;
    // populated when SweepConfig::keep_fields is set: the sweep mesh and the
    // normalized minimizer per converged row (empty field otherwise)
    std::shared_ptr<const Mesh> mesh_storage;
    std::vector<ScalarField> fields;
};

struct SweepConfig {
    double h = 0.1;
    double grading = 2.0;
    double depth_rel = -1.0; // triangulate default when negative
    double growth = 1.6;
    double dp_fd = 0.05;     // central finite-difference step for dH_fd
    double tol_mono = 1e-3;  // relative slack for the transform monotonicity flag
    double tol_inA = 1e-3;   // slack below the convex value for membership
    bool derivative_fd = true;
    bool keep_fields = false; // retain minimizers (and the mesh) in the report
    SolveConfig solve;
};

/// Sweep p over a strictly increasing grid on one fixed mesh of the domain,
/// warm-starting each solve (and the two finite-difference companion solves)
/// from the previous minimizer. Solver failures at individual p leave a
/// non-converged row and are listed in `failures`.
inline SweepReport run_sweep(const Domain& domain, const std::vector<double>& p_grid, double a,
                             const SweepConfig& config = {}) {
    if (p_grid.empty()) throw InvalidConfig("sweep grid must be nonempty");
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (!(p_grid[i] > 1.0)) throw InvalidConfig("sweep grid requires p > 1");
        if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
            throw InvalidConfig("sweep grid must be strictly increasing");
        if (config.derivative_fd && !(p_grid[i] - config.dp_fd > 1.0))
            throw InvalidConfig("finite-difference stencil leaves p > 1");
    }
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (config.derivative_fd && config.dp_fd > p_grid[i] - p_grid[i - 1] + 1e-12)
            throw InvalidConfig("dp_fd must not exceed the grid spacing");

    const auto mesh_ptr = std::make_shared<const Mesh>(
        triangulate(domain, config.h, config.grading, config.depth_rel, config.growth));
    const Mesh& mesh = *mesh_ptr;
    const QuadContext ctx(mesh);

    SweepReport rep;
    rep.h = config.h;
    rep.grading = config.grading;
    rep.depth_rel = config.depth_rel;
    rep.dp_fd = config.dp_fd;
    rep.tol_mono = config.tol_mono;

    ScalarField prev_field;
    double prev_H = std::numeric_limits<double>::quiet_NaN();
    double prev_p = 0.0;
    bool have_prev = false;
    for (const double p : p_grid) {
        SweepRow row;
        row.p = p;
        SolveConfig sc = config.solve;
        if (have_prev) sc.init = InitWarmStart{prev_field};
        try {
            const HardyResult r = minimize_quotient(ctx, p, a, sc);
            row.H = r.value;
            row.converged = true;
            if (a == 1.0) {
                row.alpha = solve_alpha(std::min(r.value, convex_value(p)), p);
                row.in_A = membership_in_A(r.value, p, config.tol_inA);
            }
            row.transform = monotone_transform(p, r.value);
            row.dH_formula = hardy_derivative(ctx, r.field, p, a, r.value);
            if (config.derivative_fd) {
                SolveConfig fd = config.solve;
                fd.init = InitWarmStart{r.field};
                const double hp = minimize_quotient(ctx, p + config.dp_fd, a, fd).value;
                const double hm = minimize_quotient(ctx, p - config.dp_fd, a, fd).value;
                row.dH_fd = (hp - hm) / (2.0 * config.dp_fd);
            }
            if (have_prev) {
                row.continuity_delta = std::abs(r.value - prev_H);
                row.field_distance =
                    sobolev_distance(ctx, r.field, prev_field, std::max(p, prev_p));
            }
            prev_field = r.field;
            prev_H = r.value;
            prev_p = p;
            have_prev = true;
        } catch (const Error& e) {
            rep.failures.push_back("p = " + std::to_string(p) + ": " + e.what());
        }
        rep.rows.push_back(row);
        if (config.keep_fields)
            rep.fields.push_back(row.converged ? prev_field : ScalarField{});
    }
    if (config.keep_fields) rep.mesh_storage = mesh_ptr;

    rep.transform_monotone = true;
    const SweepRow* last = nullptr;
    for (const SweepRow& row : rep.rows) {
        if (!row.converged) continue;
        if (last && row.transform < last->transform * (1.0 - config.tol_mono))
            rep.transform_monotone = false;
        last = &row;
    }
    return rep;
}

/// CSV export with the fixed column order
/// (p, H, alpha, transform, dH_formula, dH_fd, in_A, continuity_delta,
///  field_distance, converged).
inline void write_sweep_csv(const SweepReport& rep, std::ostream& os) {
    os.precision(12);
    os << "p,H,alpha,transform,dH_formula,dH_fd,in_A,continuity_delta,field_distance,converged\n";
    for (const SweepRow& r : rep.rows)
        os << r.p << ',' << r.H << ',' << r.alpha << ',' << r.transform << ',' << r.dH_formula
           << ',' << r.dH_fd << ',' << (r.in_A ? 1 : 0) << ',' << r.continuity_delta << ','
           << r.field_distance << ',' << (r.converged ? 1 : 0) << '\n';
}

/// Human-readable sweep summary.
inline void write_sweep_summary(const SweepReport& rep, std::ostream& os) {
    os.precision(8);
    os << "sweep: " << rep.rows.size() << " grid points, h = " << rep.h
       << ", grading = " << rep.grading << ", dp_fd = " << rep.dp_fd << '\n';
    os << "transform non-decreasing (tol " << rep.tol_mono
       << " rel): " << (rep.transform_monotone ? "yes" : "NO") << '\n';
    if (!rep.failures.empty()) {
        os << "failures:\n";
        for (const std::string& f : rep.failures) os << "  " << f << '\n';
    }
}

} // namespace hardy
