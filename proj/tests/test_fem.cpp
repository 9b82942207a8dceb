#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hardy/fem.hpp"

using namespace hardy;

namespace {

ScalarField random_field(const Mesh& m, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(0.1, 1.0);
    ScalarField u(m);
    for (std::size_t i = 0; i < m.n_vertices(); ++i)
        u.coeffs[i] = m.boundary[i] ? 0.0 : U(rng) * m.distance[i];
    return u;
}

} // namespace

TEST_CASE("weighted integrals of u = d on the interval") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.25, 1.0);
    const ScalarField u = interpolate(m, [](Point2, double d) { return d; });
    const QuadContext ctx(m);
    CHECK(integrate_weighted(ctx, u, 2.0, 1.0, IntegralMode::GradientPower) ==
          Catch::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_weighted(ctx, u, 2.0, 1.0, IntegralMode::WeightedPower) ==
          Catch::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_weighted(ctx, u, 2.0, 1.0, IntegralMode::GradientPowerLog) ==
          Catch::Approx(0.0).margin(1e-14));
    CHECK(integrate_weighted(ctx, u, 2.0, 1.0, IntegralMode::WeightedPowerLog) ==
          Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("quotient of u = d equals 1 for any p at a = 1") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.125, 1.0);
    const ScalarField u = interpolate(m, [](Point2, double d) { return d; });
    for (const double p : {1.5, 2.0, 3.0}) {
        const QuotientValue qv = evaluate_quotient(m, u, p, 1.0);
        CHECK(qv.value == Catch::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("quotient of interpolated sin(pi x) approximates pi^2 at a = 0") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.01, 1.0);
    const ScalarField u = interpolate(m, [](Point2 x, double) { return std::sin(M_PI * x.x); });
    const QuotientValue qv = evaluate_quotient(m, u, 2.0, 0.0);
    CHECK(qv.value == Catch::Approx(M_PI * M_PI).epsilon(0.01));
    // conforming subspace cannot undershoot the continuum eigenvalue
    CHECK(qv.value >= M_PI * M_PI - 1e-9);
}

TEST_CASE("homogeneity of the quotient") {
    const Domain an(AnnulusSpec{1.0, 2.0});
    const Mesh m = triangulate(an, 0.3, 2.0);
    const ScalarField u = random_field(m, 3);
    for (const double p : {1.5, 2.0, 3.0}) {
        const double base = evaluate_quotient(m, u, p, 1.0).value;
        for (const double k : {-2.0, 0.5, 10.0}) {
            ScalarField v = u;
            for (double& c : v.coeffs) c *= k;
            CHECK(evaluate_quotient(m, v, p, 1.0).value ==
                  Catch::Approx(base).epsilon(1e-10));
        }
    }
}

TEST_CASE("degenerate and invalid quotient arguments") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.25, 1.0);
    ScalarField z(m);
    CHECK_THROWS_AS(evaluate_quotient(m, z, 2.0, 1.0), DegenerateField);
    ScalarField bad(m);
    bad.coeffs[0] = 1.0; // boundary vertex
    CHECK_THROWS_AS(evaluate_quotient(m, bad, 2.0, 1.0), InvalidConfig);
}

TEST_CASE("quotient gradient matches central finite differences") {
    const Domain an(AnnulusSpec{1.0, 2.0});
    const Mesh m = triangulate(an, 0.35, 2.0);
    const QuadContext ctx(m);
    for (const double p : {1.6, 2.0, 3.0}) {
        const ScalarField u = random_field(m, 17);
        const auto grad = quotient_gradient(ctx, u, p, 1.0);
        double cnorm = 0.0;
        for (const double c : u.coeffs) cnorm += c * c;
        cnorm = std::sqrt(cnorm);
        const double step = 1e-6 * cnorm;
        std::mt19937 rng(5);
        std::uniform_int_distribution<std::size_t> pick(0, m.n_vertices() - 1);
        int checked = 0;
        while (checked < 5) {
            const std::size_t i = pick(rng);
            if (m.boundary[i]) continue;
            ScalarField up = u, um = u;
            up.coeffs[i] += step;
            um.coeffs[i] -= step;
            const double fd = (evaluate_quotient(ctx, up, p, 1.0).value -
                               evaluate_quotient(ctx, um, p, 1.0).value) /
                              (2.0 * step);
            CHECK(grad[i] == Catch::Approx(fd).epsilon(1e-5).margin(1e-12));
            ++checked;
        }
    }
}

TEST_CASE("gradient scaling under field scaling") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.05, 2.0);
    const QuadContext ctx(m);
    const ScalarField u = random_field(m, 23);
    ScalarField v = u;
    for (double& c : v.coeffs) c *= 2.0;
    const auto gu = quotient_gradient(ctx, u, 2.5, 1.0);
    const auto gv = quotient_gradient(ctx, v, 2.5, 1.0);
    for (std::size_t i = 0; i < gu.size(); ++i) {
        if (m.boundary[i]) continue;
        CHECK(2.0 * gv[i] == Catch::Approx(gu[i]).epsilon(1e-10).margin(1e-13));
    }
}

TEST_CASE("quadrature consistency under order doubling") {
    const Domain an(AnnulusSpec{1.0, 2.0});
    const Mesh m = triangulate(an, 0.15, 2.0);
    const ScalarField u = interpolate(m, [](Point2, double d) { return d; });
    const QuadContext lo(m, false), hi(m, true);
    for (const double p : {1.5, 2.0, 3.0}) {
        const double vlo = evaluate_quotient(lo, u, p, 1.0).value;
        const double vhi = evaluate_quotient(hi, u, p, 1.0).value;
        CHECK(vlo == Catch::Approx(vhi).epsilon(1e-6));
    }
}

TEST_CASE("log-mode degenerate limit contributes zero") {
    // field with |grad u| in {0, 1} elementwise: hat that plateaus
    const Domain iv(IntervalSpec{5.0});
    const Mesh m = triangulate(iv, 1.0, 1.0); // integer vertices 0..5 plus midpoint
    ScalarField u(m);
    for (std::size_t i = 0; i < m.n_vertices(); ++i) {
        const double x = m.vertices[i].x;
        u.coeffs[i] = std::min({x, 5.0 - x, 1.0});
    }
    u.zero_boundary();
    for (std::size_t e = 0; e < m.n_elements(); ++e) {
        const auto& s = m.segments[e];
        const double slope = (u.coeffs[s[1]] - u.coeffs[s[0]]) /
                             (m.vertices[s[1]].x - m.vertices[s[0]].x);
        REQUIRE((slope == 0.0 || std::abs(slope) == 1.0));
    }
    CHECK(integrate_weighted(m, u, 2.0, 1.0, IntegralMode::GradientPowerLog) == 0.0);
}

TEST_CASE("normalization sets the denominator to one") {
    const Domain an(AnnulusSpec{1.0, 2.0});
    const Mesh m = triangulate(an, 0.3, 2.0);
    const QuadContext ctx(m);
    ScalarField u = random_field(m, 31);
    normalize_denominator(ctx, u, 2.5, 1.0);
    CHECK(integrate_weighted(ctx, u, 2.5, 1.0, IntegralMode::WeightedPower) ==
          Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sobolev distance is a metric-like gauge") {
    const Domain iv(IntervalSpec{1.0});
    const Mesh m = triangulate(iv, 0.1, 1.0);
    const QuadContext ctx(m);
    const ScalarField u = random_field(m, 41);
    CHECK(sobolev_distance(ctx, u, u, 2.0) == 0.0);
    ScalarField v = u;
    v.coeffs[m.n_vertices() / 2] += 0.5;
    CHECK(sobolev_distance(ctx, u, v, 2.0) > 0.0);
}
