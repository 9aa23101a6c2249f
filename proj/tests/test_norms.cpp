#include <cmath>
#include <random>

#include "doctest.h"
#include "landau/norms.hpp"
#include "oracles.hpp"

using namespace landau;

namespace {

Field ball_indicator(const VelocityGrid& g, double radius) {
    Field f(g);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx)
                f.values[idx] = g.node3(ix, iy, iz).norm2() <= radius * radius ? 1.0 : 0.0;
    f.nonnegative = true;
    return f;
}

Field random_field(const VelocityGrid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx)
                f.values[idx] = u(rng) * std::exp(-0.25 * g.node3(ix, iy, iz).norm2());
    return f;
}

}  // namespace

TEST_CASE("lp_norm: normalization, homogeneity, ball value") {
    const VelocityGrid g = build_grid(8.0, 32);
    const Field mu = sample_mu(g);
    CHECK(std::abs(lp_norm(mu, 1.0, 0.0) - 1.0) < 1e-12);
    CHECK(lp_norm(scaled(-2.5, mu), 3.0, 1.0) ==
          doctest::Approx(2.5 * lp_norm(mu, 3.0, 1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(lp_norm(mu, 0.5, 0.0), std::domain_error);

    // staircase resolution picked so the volume error sits below 1%
    const VelocityGrid gb = build_grid(1.5, 96);
    const Field ball = ball_indicator(gb, 1.0);
    const double expect = std::sqrt(4.0 * M_PI / 3.0);
    CHECK(lp_norm(ball, 2.0, 0.0) == doctest::Approx(expect).epsilon(0.01));
    // and the discrete value is exactly sqrt of the occupied measure
    const double v_disc = weighted_integral(ball, 0.0);
    CHECK(lp_norm(ball, 2.0, 0.0) == doctest::Approx(std::sqrt(v_disc)).epsilon(1e-13));

    // p = inf
    CHECK(lp_norm(ball, kInf, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("llogl: zero, closed form on a plateau, monotone") {
    const VelocityGrid g = build_grid(2.0, 16);
    CHECK(llogl(Field(g)) == 0.0);

    Field plateau(g);
    for (std::size_t i = 0; i < 64; ++i) plateau.values[i] = 2.0;
    const double measure = 64.0 * g.cell_volume();
    CHECK(llogl(plateau) == doctest::Approx(2.0 * std::log(3.0) * measure).epsilon(1e-13));

    std::mt19937_64 rng(7);
    const Field f = random_field(g, rng);
    Field bigger = f;
    for (auto& v : bigger.values) v *= 2.0;
    CHECK(llogl(f) <= llogl(bigger));
}

TEST_CASE("rearrange produces the decreasing profile with exact Lp transfer") {
    const VelocityGrid g = build_grid(1.5, 48);
    const Field ball = ball_indicator(g, 1.0);
    const StepProfile prof = rearrange(ball, 0.0);
    REQUIRE(prof.levels.size() == 1);
    CHECK(prof.levels[0] == 1.0);
    CHECK(prof.measures[0] == doctest::Approx(weighted_integral(ball, 0.0)).epsilon(1e-13));

    // two-level field
    Field two(g);
    for (std::size_t i = 0; i < 10; ++i) two.values[i] = 2.0;
    for (std::size_t i = 10; i < 40; ++i) two.values[i] = 1.0;
    const StepProfile p2 = rearrange(two, 0.0);
    REQUIRE(p2.levels.size() == 2);
    CHECK(p2.levels[0] == 2.0);
    CHECK(p2.measures[0] == doctest::Approx(10.0 * g.cell_volume()));
    CHECK(p2.levels[1] == 1.0);
    CHECK(p2.measures[1] == doctest::Approx(30.0 * g.cell_volume()));

    // equimeasurability: profile Lp equals grid Lp
    std::mt19937_64 rng(11);
    const Field f = random_field(g, rng);
    for (double p : {1.0, 2.0, 3.0}) {
        const double grid_lp = lp_norm(f, p, 0.0);
        const double prof_lp = std::pow(rearrange(f, 0.0).lp(p), 1.0 / p);
        CHECK(prof_lp == doctest::Approx(grid_lp).epsilon(1e-12));
    }
}

TEST_CASE("Lorentz norms: identities, ball values, comparison inequality") {
    const VelocityGrid g = build_grid(2.0, 24);
    std::mt19937_64 rng(3);

    for (int trial = 0; trial < 5; ++trial) {
        const Field f = random_field(g, rng);
        // L^{1,∞} maximal equals L¹
        CHECK(lorentz_norm(f, 1.0, kInf, 0.0, LorentzFlavor::maximal) ==
              doctest::Approx(lp_norm(f, 1.0, 0.0)).epsilon(1e-12));
        // starred with q = p recovers Lp
        for (double p : {2.0, 3.0})
            CHECK(lorentz_norm(f, p, p, 0.0, LorentzFlavor::starred) ==
                  doctest::Approx(lp_norm(f, p, 0.0)).epsilon(1e-10));
        // L^{∞,∞} equals the max
        CHECK(lorentz_norm(f, kInf, kInf, 0.0, LorentzFlavor::maximal) ==
              doctest::Approx(lp_norm(f, kInf, 0.0)).epsilon(1e-12));
    }

    // ball indicator, p=3, q=1: starred 3V^{1/3}, maximal 4.5V^{1/3}
    const Field ball = ball_indicator(g, 1.0);
    const double v = weighted_integral(ball, 0.0);
    const double starred = lorentz_norm(ball, 3.0, 1.0, 0.0, LorentzFlavor::starred);
    const double maximal = lorentz_norm(ball, 3.0, 1.0, 0.0, LorentzFlavor::maximal);
    CHECK(starred == doctest::Approx(3.0 * std::cbrt(v)).epsilon(1e-12));
    CHECK(maximal == doctest::Approx(4.5 * std::cbrt(v)).epsilon(1e-12));
    CHECK(maximal / starred == doctest::Approx(1.5).epsilon(1e-12));

    // comparison: starred <= maximal <= p/(p-1) starred
    for (int trial = 0; trial < 8; ++trial) {
        const Field f = random_field(g, rng);
        for (double p : {1.5, 2.0, 3.0, 4.0})
            for (double q : {1.0, 2.0, p, kInf}) {
                const double st = lorentz_norm(f, p, q, 0.0, LorentzFlavor::starred);
                const double mx = lorentz_norm(f, p, q, 0.0, LorentzFlavor::maximal);
                CHECK(st <= mx * (1 + 1e-12));
                CHECK(mx <= p / (p - 1.0) * st * (1 + 1e-12));
            }
    }

    // homogeneity and rearrangement monotonicity
    const Field f = random_field(g, rng);
    CHECK(lorentz_norm(scaled(3.0, f), 3.0, 1.0, 0.0, LorentzFlavor::maximal) ==
          doctest::Approx(3.0 * lorentz_norm(f, 3.0, 1.0, 0.0, LorentzFlavor::maximal))
              .epsilon(1e-12));
    Field dominating = f;
    for (auto& x : dominating.values) x = std::abs(x) * 1.5;
    CHECK(lorentz_norm(f, 2.0, 1.0, 0.0, LorentzFlavor::maximal) <=
          lorentz_norm(dominating, 2.0, 1.0, 0.0, LorentzFlavor::maximal) * (1 + 1e-12));

    CHECK_THROWS_AS(lorentz_norm(f, 1.0, 2.0, 0.0, LorentzFlavor::maximal), std::domain_error);
    CHECK(lorentz_norm(Field(g), 3.0, 1.0, 0.0, LorentzFlavor::maximal) == 0.0);
}

TEST_CASE("Sobolev norms: Parseval, Gaussian fixture, inclusion, refinement") {
    const VelocityGrid g = build_grid(8.0, 32);
    const Field mu = sample_mu(g);

    CHECK(sobolev_norm(mu, 0.0, 0.0, SobolevFlavor::homogeneous) ==
          doctest::Approx(lp_norm(mu, 2.0, 0.0)).epsilon(1e-10));

    const double h1 = sobolev_norm(mu, 1.0, 0.0, SobolevFlavor::homogeneous);
    CHECK(h1 * h1 == doctest::Approx(oracle::kMuH1Sq).epsilon(3e-4));
    CHECK(std::abs(h1 * h1 - oracle::kMuH1Sq) < 1e-5);

    CHECK(sobolev_norm(mu, 0.5, 0.0, SobolevFlavor::homogeneous) ==
          doctest::Approx(oracle::kMuHhalf).epsilon(1e-3));

    // weighted H¹₀ dominates the homogeneous seminorm
    CHECK(sobolev_norm(mu, 1.0, 0.0, SobolevFlavor::weighted) >= h1);

    CHECK_THROWS_AS(sobolev_norm(mu, 1.5, 0.0, SobolevFlavor::weighted), std::domain_error);

    // value converges under refinement, order >= 2
    double errs[2];
    int i = 0;
    for (int n : {16, 32}) {
        const VelocityGrid gr = build_grid(8.0, n);
        const double v = sobolev_norm(sample_mu(gr), 1.0, 0.0, SobolevFlavor::homogeneous);
        errs[i++] = std::abs(v * v - oracle::kMuH1Sq);
    }
    CHECK(oracle::order_estimate(errs[0], errs[1]) >= 2.0);

    CHECK(sobolev_norm(Field(g), 1.0, 0.0, SobolevFlavor::homogeneous) == 0.0);
    CHECK(sobolev_norm(Field(g), 2.0, 1.0, SobolevFlavor::weighted) == 0.0);
}

TEST_CASE("dyadic partition of unity and block orthogonality") {
    // residual at scattered sample points
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-14.0, 14.0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x{u(rng), u(rng), u(rng)};
        const double r = x.norm();
        double sum = DyadicPartition::psi(r);
        for (int j = 0; j <= 12; ++j) sum += DyadicPartition::phi(std::pow(2.0, -j) * r);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }

    // P_j P_k = 0 for separated blocks
    const VelocityGrid g = build_grid(8.0, 24);
    Field ones(g, 1.0);
    for (int j = -1; j <= 3; ++j)
        for (int k = -1; k <= 3; ++k) {
            if (std::abs(j - k) <= 2) continue;
            const Field pj = dyadic_block(ones, j);
            const Field pjk = dyadic_block(pj, k);
            CHECK(max_abs(pjk) == 0.0);
        }
}

TEST_CASE("dyadic norm is equivalent to the weighted Sobolev norm") {
    const VelocityGrid g = build_grid(8.0, 24);
    std::mt19937_64 rng(17);
    // fit the equivalence constant on half the corpus, verify on the rest
    std::vector<double> ratios_fit, ratios_check;
    for (int trial = 0; trial < 50; ++trial) {
        const Field f = random_field(g, rng);
        for (int s : {0, 1})
            for (double l : {0.0, 2.0}) {
                const double dn = dyadic_norm(f, s, l);
                const double wn = sobolev_norm(f, double(s), l, SobolevFlavor::weighted);
                if (wn == 0.0) continue;
                (trial < 25 ? ratios_fit : ratios_check).push_back(dn / wn);
            }
    }
    double c = 1.0;
    for (double r : ratios_fit) c = std::max({c, r, 1.0 / r});
    for (double r : ratios_check) {
        CHECK(r <= 1.1 * c);
        CHECK(r >= 1.0 / (1.1 * c));
    }
}
