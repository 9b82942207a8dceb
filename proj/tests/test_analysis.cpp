#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "hardy/analysis.hpp"

using namespace hardy;

TEST_CASE("solve_alpha examples") {
    CHECK(solve_alpha(3.0 / 16.0, 2.0) == Catch::Approx(0.75).epsilon(1e-10));
    CHECK(solve_alpha(8.0 / 27.0, 3.0) == Catch::Approx(2.0 / 3.0).epsilon(1e-10));
    const double a3 = solve_alpha(0.2, 3.0);
    CHECK(2.0 * a3 * a3 * (1.0 - a3) == Catch::Approx(0.2).epsilon(1e-10));
    CHECK(a3 == Catch::Approx(0.8672).epsilon(1e-3));
    CHECK_THROWS_AS(solve_alpha(0.3, 2.0), NoRoot);
}

TEST_CASE("solve_alpha round-trips 100 random roots to 1e-10") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> Up(1.1, 4.0), U01(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double p = Up(rng);
        const double lo = (p - 1.0) / p;
        const double alpha = lo + (1.0 - lo) * (0.02 + 0.96 * U01(rng));
        const double H = (p - 1.0) * std::pow(alpha, p - 1.0) * (1.0 - alpha);
        INFO("p = " << p << " alpha = " << alpha);
        CHECK(std::abs(solve_alpha(H, p) - alpha) < 1e-10);
    }
}

TEST_CASE("membership and transform examples") {
    CHECK(membership_in_A(0.2, 2.0, 1e-3));
    CHECK_FALSE(membership_in_A(0.25, 2.0, 1e-3));
    CHECK_FALSE(membership_in_A(convex_value(1.5), 1.5, 1e-6));
    CHECK(monotone_transform(2.0, 0.25) == Catch::Approx(3.0).epsilon(1e-14));
    CHECK(monotone_transform(3.0, 8.0 / 27.0) == Catch::Approx(5.0).epsilon(1e-14));
    CHECK(monotone_transform(2.0, 0.0) == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hardy derivative vanishes on the linear profile and is scale-free") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.01, 1.0);
    const QuadContext ctx(m);
    ScalarField u = interpolate(m, [](Point2, double d) { return d; });
    for (const double p : {1.5, 2.0, 3.0})
        CHECK(std::abs(hardy_derivative(ctx, u, p, 1.0, 1.0)) < 1e-10);

    // scale invariance on a nonlinear field
    ScalarField v = interpolate(m, [](Point2, double d) { return std::sqrt(d) * (1.0 - d); });
    const double H = evaluate_quotient(ctx, v, 2.0, 1.0).value;
    const double d1 = hardy_derivative(ctx, v, 2.0, 1.0, H);
    ScalarField v7 = v;
    for (double& c : v7.coeffs) c *= 7.0;
    const double d7 = hardy_derivative(ctx, v7, 2.0, 1.0, H);
    CHECK(d7 == Catch::Approx(d1).epsilon(1e-10));
}

TEST_CASE("decay exponent fit recovers synthetic power laws") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.002, 1.5);
    const ScalarField u75 = interpolate(m, [](Point2, double d) { return std::pow(d, 0.75); });
    const DecayFit f75 = fit_decay_exponent(m, u75);
    CHECK(f75.alpha_fit == Catch::Approx(0.75).margin(0.01));
    CHECK(f75.r_squared > 0.999);
    CHECK(f75.c_fit == Catch::Approx(1.0).epsilon(0.05));

    const ScalarField ud = interpolate(m, [](Point2, double d) { return d; });
    const DecayFit fd = fit_decay_exponent(m, ud);
    CHECK(fd.alpha_fit == Catch::Approx(1.0).margin(0.01));

    const Mesh tiny = triangulate(iv, 0.25, 1.0);
    const ScalarField ut = interpolate(tiny, [](Point2, double d) { return d; });
    CHECK_THROWS_AS(fit_decay_exponent(tiny, ut), BandTooThin);
}

TEST_CASE("corollary inequality on the linear profile and weight guard") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.01, 1.0);
    const QuadContext ctx(m);
    const ScalarField u = interpolate(m, [](Point2, double d) { return d; });
    const CorollaryCheck c = check_corollary_inequality(ctx, u, 2.0, 1.0);
    CHECK(std::abs(c.lhs) < 1e-12);
    CHECK(c.rhs == Catch::Approx(1.0).epsilon(1e-6));
    CHECK(c.holds);
    CHECK_THROWS_AS(check_corollary_inequality(ctx, u, 2.0, 1.0, 0.0), WrongWeight);
}

TEST_CASE("single-point a = 0 sweep matches the classical eigenvalue") {
    const Domain iv(IntervalSpec{1.0});
    SweepConfig cfg;
    cfg.h = 0.01;
    cfg.grading = 1.0;
    const SweepReport rep = run_sweep(iv, {2.0}, 0.0, cfg);
    REQUIRE(rep.rows.size() == 1);
    REQUIRE(rep.rows[0].converged);
    CHECK(rep.rows[0].H == Catch::Approx(M_PI * M_PI).epsilon(0.01));
    CHECK(rep.failures.empty());
    CHECK(std::isnan(rep.rows[0].alpha)); // no alpha column content for a = 0
}

TEST_CASE("interval a = 1 sweep: convex values, monotone transform, derivative") {
    const Domain iv(IntervalSpec{1.0});
    SweepConfig cfg;
    cfg.h = 1.0 / 32.0;
    cfg.depth_rel = 1e-40;
    cfg.growth = 1.8;
    const std::vector<double> grid{1.8, 2.0, 2.2, 2.4};
    const SweepReport rep = run_sweep(iv, grid, 1.0, cfg);
    REQUIRE(rep.rows.size() == grid.size());
    CHECK(rep.failures.empty());
    CHECK(rep.transform_monotone);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const SweepRow& r = rep.rows[i];
        REQUIRE(r.converged);
        const double exact = convex_value(r.p);
        CHECK(r.H >= exact - 1e-9);
        CHECK(r.H <= exact * 1.03);
        CHECK(r.alpha == Catch::Approx((r.p - 1.0) / r.p).margin(0.02));
        // analytic derivative of the convex value
        const double dexact =
            exact * (std::log((r.p - 1.0) / r.p) + 1.0 / (r.p - 1.0));
        CHECK(r.dH_formula == Catch::Approx(dexact).epsilon(0.15));
        CHECK(r.dH_fd == Catch::Approx(dexact).epsilon(0.15));
        if (i > 0) {
            CHECK(r.continuity_delta >= 0.0);
            CHECK(r.field_distance >= 0.0);
            CHECK(std::isfinite(r.field_distance));
        }
    }
}

TEST_CASE("sweep grid validation") {
    const Domain iv(IntervalSpec{1.0});
    CHECK_THROWS_AS(run_sweep(iv, {}, 1.0), InvalidConfig);
    CHECK_THROWS_AS(run_sweep(iv, {2.0, 1.5}, 1.0), InvalidConfig);
    CHECK_THROWS_AS(run_sweep(iv, {0.9, 2.0}, 1.0), InvalidConfig);
    SweepConfig wide;
    wide.dp_fd = 0.5;
    CHECK_THROWS_AS(run_sweep(iv, {2.0, 2.1}, 1.0, wide), InvalidConfig);
}

TEST_CASE("sweep CSV export has the fixed column order") {
    const Domain iv(IntervalSpec{1.0});
    SweepConfig cfg;
    cfg.h = 0.02;
    cfg.grading = 1.0;
    const SweepReport rep = run_sweep(iv, {2.0}, 0.0, cfg);
    std::ostringstream os;
    write_sweep_csv(rep, os);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "p,H,alpha,transform,dH_formula,dH_fd,in_A,continuity_delta,field_distance,converged");
    std::string row;
    std::getline(in, row);
    CHECK(row.substr(0, 2) == "2,");
    std::ostringstream sum;
    write_sweep_summary(rep, sum);
    CHECK(sum.str().find("1 grid points") != std::string::npos);
}
