#include <cmath>

#include "doctest.h"
#include "landau/field_io.hpp"
#include "landau/grid.hpp"
#include "oracles.hpp"

using namespace landau;

TEST_CASE("build_grid validates and lays out cell-centered nodes") {
    const VelocityGrid g = build_grid(8.0, 32);
    CHECK(g.dv() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.dv() * g.n == doctest::Approx(2.0 * g.extent).epsilon(1e-15));

    CHECK_THROWS_WITH_AS(build_grid(8.0, 7), "N must be even", std::invalid_argument);
    CHECK_THROWS_AS(build_grid(8.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-1.0, 16), std::invalid_argument);

    // node set symmetric under v -> -v, and v = 0 is never a node
    const VelocityGrid s = build_grid(4.0, 16);
    for (int i = 0; i < s.n; ++i) {
        CHECK(s.node(i) == doctest::Approx(-s.node(s.n - 1 - i)).epsilon(1e-15));
        CHECK(s.node(i) != 0.0);
    }
}

TEST_CASE("sample_maxwellian matches the closed form and quadrature") {
    const VelocityGrid g = build_grid(8.0, 32);
    const Field mu = sample_mu(g);

    CHECK(maxwellian_value({0, 0, 0}, 1.0, {}, 1.0) ==
          doctest::Approx(oracle::kMuAtZero).epsilon(1e-14));

    // symmetry under v -> -v at u = 0
    CHECK(mu.at(3, 5, 7) == doctest::Approx(mu.at(g.n - 4, g.n - 6, g.n - 8)).epsilon(1e-15));

    // discrete mass: Gaussian truncation/aliasing far below 1e-12 here
    CHECK(std::abs(weighted_integral(mu, 0.0) - 1.0) < 1e-12);

    CHECK_THROWS_AS(sample_maxwellian(g, 1.0, {}, -1.0), std::domain_error);
    CHECK_THROWS_AS(sample_maxwellian(g, -0.5, {}, 1.0), std::domain_error);
}

TEST_CASE("moments recover Maxwellian parameters") {
    const VelocityGrid g = build_grid(8.0, 32);
    const FluidMoments m = moments(sample_mu(g));
    CHECK(std::abs(m.rho - 1.0) < 1e-10);
    CHECK(m.u.norm() < 1e-10);
    CHECK(std::abs(m.temperature - 1.0) < 1e-10);

    // linearity of the mass
    CHECK(moments(scaled(2.0, sample_mu(g))).rho == doctest::Approx(2.0).epsilon(1e-12));

    // tight recovery while the truncated tails are negligible (|u0| <= 1)
    for (const Vec3 u0 : {Vec3{0.5, 0, 0}, Vec3{-0.5, 0.5, 0.25}, Vec3{1.0, 0, 0}}) {
        const FluidMoments ms = moments(sample_maxwellian(g, 1.0, u0, 1.0));
        CHECK(std::abs(ms.u.x - u0.x) < 1e-10);
        CHECK(std::abs(ms.u.y - u0.y) < 1e-10);
        CHECK(std::abs(ms.u.z - u0.z) < 1e-10);
    }

    // identity on (rho, u, T) within 1e-8 over |u| <= L/4, T in [1/2, 2];
    // the widest bump at the largest shift needs the tail room of L = 12
    const VelocityGrid g12 = build_grid(12.0, 48);
    for (double T : {0.5, 1.0, 2.0})
        for (const Vec3 u0 : {Vec3{3.0, 0, 0}, Vec3{-1.0, 1.5, 0.25}}) {
            const FluidMoments mr = moments(sample_maxwellian(g12, 1.0, u0, T));
            CHECK(std::abs(mr.rho - 1.0) < 1e-8);
            CHECK(std::abs(mr.u.x - u0.x) < 1e-8);
            CHECK(std::abs(mr.temperature - T) < 1e-8);
        }

    const FluidMoments zero = moments(Field(g));
    CHECK(!zero.temperature_defined);
}

TEST_CASE("weighted_integral basics") {
    const VelocityGrid g = build_grid(8.0, 32);
    const Field mu = sample_mu(g);
    CHECK(std::abs(weighted_integral(mu, 0.0) - 1.0) < 1e-12);
    // ∫ μ (1+|v|²) = 1 + 3
    CHECK(std::abs(weighted_integral(mu, 2.0) - 4.0) < 1e-10);
    CHECK(weighted_integral(Field(g), 3.5) == 0.0);

    // linearity to roundoff
    const Field f = sample_maxwellian(g, 1.0, {0.5, 0, 0}, 0.8);
    const double lhs = weighted_integral(axpy(2.0, mu, f), 2.0);
    CHECK(lhs == doctest::Approx(2.0 * weighted_integral(mu, 2.0) + weighted_integral(f, 2.0))
                     .epsilon(1e-13));
}

TEST_CASE("gradient: exact on cubics, 4th order on the Maxwellian") {
    // constants are annihilated exactly
    const VelocityGrid g0 = build_grid(4.0, 16);
    Field c(g0, 3.25);
    for (const auto& d : gradient(c))
        CHECK(max_abs(d) == 0.0);

    // cubic polynomial: interior and one-sided stencils are exact
    Field cubic(g0);
    std::size_t idx = 0;
    for (int iz = 0; iz < g0.n; ++iz)
        for (int iy = 0; iy < g0.n; ++iy)
            for (int ix = 0; ix < g0.n; ++ix, ++idx) {
                const Vec3 v = g0.node3(ix, iy, iz);
                cubic.values[idx] = 1.0 + v.x - 2.0 * v.y * v.y + 0.5 * v.z * v.z * v.z +
                                    v.x * v.y * v.z;
            }
    const auto dc = gradient(cubic);
    idx = 0;
    double worst = 0;
    for (int iz = 0; iz < g0.n; ++iz)
        for (int iy = 0; iy < g0.n; ++iy)
            for (int ix = 0; ix < g0.n; ++ix, ++idx) {
                const Vec3 v = g0.node3(ix, iy, iz);
                worst = std::max(worst, std::abs(dc[0].values[idx] - (1.0 + v.y * v.z)));
                worst = std::max(worst, std::abs(dc[1].values[idx] - (-4.0 * v.y + v.x * v.z)));
                worst = std::max(worst,
                                 std::abs(dc[2].values[idx] - (1.5 * v.z * v.z + v.x * v.y)));
            }
    CHECK(worst < 1e-11);

    // measured convergence order against the analytic -v μ
    double errs[3];
    int ns[3] = {16, 32, 64};
    for (int i = 0; i < 3; ++i) {
        const VelocityGrid g = build_grid(8.0, ns[i]);
        const Field mu = sample_mu(g);
        const auto dm = gradient(mu);
        double e = 0;
        std::size_t k = 0;
        for (int iz = 0; iz < g.n; ++iz)
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix, ++k) {
                    const Vec3 v = g.node3(ix, iy, iz);
                    e = std::max(e, std::abs(dm[0].values[k] + v.x * mu.values[k]));
                }
        errs[i] = e;
    }
    CHECK(errs[1] < errs[0]);
    // asymptotic pair carries the order estimate
    CHECK(oracle::order_estimate(errs[1], errs[2]) >= 3.5);
}

TEST_CASE("hessian symmetry is exact and values are 4th order") {
    const VelocityGrid g = build_grid(6.0, 24);
    const Field mu = sample_mu(g);
    const auto h = hessian(mu);
    CHECK(hessian_index(0, 1) == hessian_index(1, 0));
    CHECK(hessian_index(2, 1) == hessian_index(1, 2));

    // ∂_xx μ = (v_x² - 1) μ
    double worst = 0;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                worst = std::max(
                    worst, std::abs(h[0].values[idx] - (v.x * v.x - 1.0) * mu.values[idx]));
                worst = std::max(
                    worst, std::abs(h[1].values[idx] - v.x * v.y * mu.values[idx]));
            }
    CHECK(worst < 1e-3);
}

TEST_CASE("snapshot round trip preserves bytes and metadata") {
    const VelocityGrid g = build_grid(4.0, 16);
    Field f = sample_maxwellian(g, 1.3, {0.2, -0.1, 0}, 0.9);
    f.values[7] = 1.125e-17;
    const std::string path = "roundtrip.lclf";
    write_snapshot(path, f, 2.5);
    const Snapshot snap = read_snapshot(path);
    CHECK(snap.timestamp == 2.5);
    CHECK(snap.field.grid == g);
    REQUIRE(snap.field.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(snap.field.values[i] == f.values[i]);

    CHECK_THROWS_AS(read_snapshot("does_not_exist.lclf"), std::runtime_error);
}
