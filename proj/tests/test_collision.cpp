#include <cmath>
#include <random>

#include "doctest.h"
#include "landau/collision.hpp"
#include "landau/norms.hpp"
#include "oracles.hpp"

using namespace landau;

namespace {

Field random_smooth(const VelocityGrid& g, std::mt19937_64& rng, bool nonneg) {
    std::uniform_real_distribution<double> u(nonneg ? 0.1 : -1.0, 1.0);
    Field f(g);
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx)
                f.values[idx] = u(rng) * std::exp(-0.3 * g.node3(ix, iy, iz).norm2());
    f.nonnegative = nonneg;
    return f;
}

double rel_l2_diff(const Field& a, const Field& b) {
    return lp_norm(subtract(a, b), 2.0, 0.0) / std::max(lp_norm(b, 2.0, 0.0), 1e-300);
}

}  // namespace

TEST_CASE("kernel identities: projection, oddness, divergence relation") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (const double eps : {0.0, 0.3}) {
        const KernelSpec spec{eps, -3.0};
        for (int trial = 0; trial < 100; ++trial) {
            const Vec3 z{n01(rng), n01(rng), n01(rng)};
            if (z.norm() < 1e-6) continue;
            const Vec3 az = kernel_a(z, spec).apply(z);
            CHECK(az.norm() <= 1e-14 * std::max(1.0, kernel_a(z, spec).xx));
            const Vec3 bp = kernel_b(z, spec);
            const Vec3 bm = kernel_b({-z.x, -z.y, -z.z}, spec);
            CHECK(bp.x == -bm.x);
            CHECK(bp.y == -bm.y);
            CHECK(bp.z == -bm.z);
        }
    }
    CHECK_THROWS_AS(kernel_a({0, 0, 0}, KernelSpec{0.0, -3.0}), std::domain_error);
    CHECK_THROWS_AS(kernel_c({1, 0, 0}, KernelSpec{0.0, -3.0}), std::domain_error);

    // b equals the finite-difference divergence of the rows of a
    const KernelSpec spec{0.5, -3.0};
    const Vec3 z0{0.6, -0.5, std::sqrt(1.0 - 0.61)};  // |z| = 1
    const double h = 0.01;
    for (int i = 0; i < 3; ++i) {
        double fd = 0;
        for (int j = 0; j < 3; ++j) {
            auto component = [&](double t) {
                Vec3 z = z0;
                (j == 0 ? z.x : j == 1 ? z.y : z.z) += t;
                const Mat3 a = kernel_a(z, spec);
                const double rows[3][3] = {{a.xx, a.xy, a.xz},
                                           {a.xy, a.yy, a.yz},
                                           {a.xz, a.yz, a.zz}};
                return rows[i][j];
            };
            fd += (component(-2 * h) - 8 * component(-h) + 8 * component(h) -
                   component(2 * h)) /
                  (12 * h);
        }
        const Vec3 b = kernel_b(z0, spec);
        const double bi = (i == 0) ? b.x : (i == 1) ? b.y : b.z;
        CHECK(std::abs(fd - bi) <= 1e-6 * std::abs(bi));
    }

    // c agrees with -div b by finite differences (eps > 0)
    {
        double fd = 0;
        for (int j = 0; j < 3; ++j) {
            auto component = [&](double t) {
                Vec3 z = z0;
                (j == 0 ? z.x : j == 1 ? z.y : z.z) += t;
                const Vec3 b = kernel_b(z, spec);
                return (j == 0) ? b.x : (j == 1) ? b.y : b.z;
            };
            fd += (component(-2 * h) - 8 * component(-h) + 8 * component(h) -
                   component(2 * h)) /
                  (12 * h);
        }
        CHECK(std::abs(-fd - kernel_c(z0, spec)) <= 1e-6 * kernel_c(z0, spec));
    }

    CHECK_THROWS_AS((KernelSpec{0.2, -2.5}.validate()), std::invalid_argument);
    CHECK_NOTHROW((KernelSpec{0.0, -2.5}.validate()));
}

TEST_CASE("kernel domination: |a^eps| <= |a| and |b^eps| <= |b| pointwise") {
    const VelocityGrid g = build_grid(4.0, 12);
    const KernelSpec bare{0.0, -3.0};
    const KernelSpec reg{0.7, -3.0};
    const double dv = g.dv();
    for (int iz = -5; iz <= 5; ++iz)
        for (int iy = -5; iy <= 5; ++iy)
            for (int ix = -5; ix <= 5; ++ix) {
                if (ix == 0 && iy == 0 && iz == 0) continue;
                const Vec3 z{ix * dv, iy * dv, iz * dv};
                const Mat3 ab = kernel_a(z, bare), ar = kernel_a(z, reg);
                CHECK(std::abs(ar.xx) <= std::abs(ab.xx) + 1e-15);
                CHECK(std::abs(ar.xy) <= std::abs(ab.xy) + 1e-15);
                CHECK(std::abs(ar.zz) <= std::abs(ab.zz) + 1e-15);
                const Vec3 bb = kernel_b(z, bare), br = kernel_b(z, reg);
                CHECK(std::abs(br.x) <= std::abs(bb.x) + 1e-15);
                CHECK(std::abs(br.y) <= std::abs(bb.y) + 1e-15);
                CHECK(std::abs(br.z) <= std::abs(bb.z) + 1e-15);
            }
}

TEST_CASE("convolution: linearity, impulse response, brute-force agreement") {
    const VelocityGrid g = build_grid(2.0, 8);
    const KernelSpec spec{0.4, -3.0};
    const ConvolutionPlan plan(g, spec);
    std::mt19937_64 rng(1);

    const Field f = random_smooth(g, rng, false);
    const Field h = random_smooth(g, rng, false);

    // linearity to roundoff
    const Field sum = axpy(2.0, f, h);
    const Field cs = plan.convolve(sum, ConvolutionPlan::A01);
    const Field cf = plan.convolve(f, ConvolutionPlan::A01);
    const Field ch = plan.convolve(h, ConvolutionPlan::A01);
    const Field recon = axpy(2.0, cf, ch);
    CHECK(rel_l2_diff(cs, recon) < 1e-12);

    // unit-mass impulse reproduces kernel samples at displacements
    Field impulse(g);
    const int c = g.n / 2;
    impulse.at(c, c, c) = 1.0 / g.cell_volume();
    const Field resp = plan.convolve(impulse, ConvolutionPlan::B0);
    double worst = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const Vec3 z{(ix - c) * g.dv(), (iy - c) * g.dv(), (iz - c) * g.dv()};
                worst = std::max(
                    worst,
                    std::abs(resp.at(ix, iy, iz) - kernel_b_cell_sample(z, spec, g.dv()).x));
            }
    CHECK(worst < 1e-12);

    // agreement with direct O(N^6) summation
    for (int comp : {int(ConvolutionPlan::A00), int(ConvolutionPlan::A12),
                     int(ConvolutionPlan::B1), int(ConvolutionPlan::C)}) {
        const Field fast = plan.convolve(f, ConvolutionPlan::Component(comp));
        const Field slow = oracle::convolve_direct(f, spec, comp);
        CHECK(rel_l2_diff(fast, slow) < 1e-10);
    }

    // grid mismatch is rejected
    const VelocityGrid g2 = build_grid(2.0, 10);
    CHECK_THROWS_AS(plan.convolve(Field(g2), ConvolutionPlan::A00), std::invalid_argument);
}

TEST_CASE("Q(mu,mu) residual is small and shrinks under refinement") {
    double rel[2];
    int i = 0;
    for (int n : {32, 64}) {
        const VelocityGrid g = build_grid(8.0, n);
        const KernelSpec spec{2.0 * g.dv(), -3.0};
        const ConvolutionPlan plan(g, spec);
        const Field mu = sample_mu(g);
        const Field q = landau_Q(mu, mu, plan, QForm::divergence);
        rel[i++] = lp_norm(q, 2.0, 0.0) / lp_norm(mu, 2.0, 0.0);
    }
    CHECK(rel[0] <= 5e-3);
    CHECK(oracle::order_estimate(rel[0], rel[1]) >= 1.5);
}

TEST_CASE("divergence and nondivergence forms agree on smooth data") {
    const VelocityGrid g = build_grid(8.0, 32);
    const KernelSpec spec{2.0 * g.dv(), -3.0};
    const ConvolutionPlan plan(g, spec);
    const Field f = sample_bimodal(g, 1.0);
    const Field qd = landau_Q(f, f, plan, QForm::divergence);
    const Field qn = landau_Q(f, f, plan, QForm::nondivergence);
    CHECK(rel_l2_diff(qd, qn) <= 1e-2);

    // converging under refinement
    const VelocityGrid g2 = build_grid(8.0, 48);
    const KernelSpec spec2{2.0 * g2.dv(), -3.0};
    const ConvolutionPlan plan2(g2, spec2);
    const Field f2 = sample_bimodal(g2, 1.0);
    const Field qd2 = landau_Q(f2, f2, plan2, QForm::divergence);
    const Field qn2 = landau_Q(f2, f2, plan2, QForm::nondivergence);
    CHECK(rel_l2_diff(qd2, qn2) < rel_l2_diff(qd, qn));

    // unsupported combination
    const KernelSpec soft{0.0, -2.0};
    const ConvolutionPlan plan_soft(g, soft);
    CHECK_THROWS_AS(landau_Q(f, f, plan_soft, QForm::nondivergence), std::invalid_argument);
}

TEST_CASE("weak-form conservation of the divergence form") {
    const VelocityGrid g = build_grid(8.0, 32);
    const KernelSpec spec{2.0 * g.dv(), -3.0};
    const ConvolutionPlan plan(g, spec);
    const Field f = sample_bimodal(g, 1.0);
    const Field q = landau_Q(f, f, plan, QForm::divergence);

    // mass: exact telescoping
    CHECK(std::abs(weighted_integral(q, 0.0)) <= 1e-12 * max_abs(q));

    // momentum and energy: discretization-level
    const double scale = lp_norm(f, 2.0, 0.0);
    CompensatedSum px, en;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                px.add(q.values[idx] * v.x);
                en.add(q.values[idx] * 0.5 * v.norm2());
            }
    CHECK(std::abs(px.value() * g.cell_volume()) <= 1e-3 * scale);
    CHECK(std::abs(en.value() * g.cell_volume()) <= 1e-3 * scale);
}

TEST_CASE("bilinearity of landau_Q in each slot") {
    const VelocityGrid g = build_grid(4.0, 16);
    const KernelSpec spec{2.0 * g.dv(), -3.0};
    const ConvolutionPlan plan(g, spec);
    std::mt19937_64 rng(9);
    const Field a = random_smooth(g, rng, false);
    const Field b = random_smooth(g, rng, false);
    const Field c = random_smooth(g, rng, false);

    const Field lhs1 = landau_Q(axpy(2.0, a, b), c, plan, QForm::divergence);
    const Field rhs1 = axpy(2.0, landau_Q(a, c, plan, QForm::divergence),
                            landau_Q(b, c, plan, QForm::divergence));
    CHECK(rel_l2_diff(lhs1, rhs1) < 1e-12);

    const Field lhs2 = landau_Q(c, axpy(-0.5, a, b), plan, QForm::divergence);
    const Field rhs2 = axpy(-0.5, landau_Q(c, a, plan, QForm::divergence),
                            landau_Q(c, b, plan, QForm::divergence));
    CHECK(rel_l2_diff(lhs2, rhs2) < 1e-12);
}

TEST_CASE("epsilon consistency: Q changes by O(eps)") {
    const VelocityGrid g = build_grid(8.0, 32);
    const Field f = sample_bimodal(g, 1.0);
    const double dv = g.dv();
    Field q[3];
    int i = 0;
    for (double eps : {4.0 * dv, 2.0 * dv, 1.0 * dv}) {
        const ConvolutionPlan plan(g, KernelSpec{eps, -3.0});
        q[i++] = landau_Q(f, f, plan, QForm::divergence);
    }
    const double d1 = lp_norm(subtract(q[0], q[1]), 2.0, 0.0);
    const double d2 = lp_norm(subtract(q[1], q[2]), 2.0, 0.0);
    CHECK(oracle::order_estimate(d1, d2) >= 0.8);
}

TEST_CASE("entropy dissipation: equilibrium, positivity, cross-method") {
    // equilibrium residual
    {
        const VelocityGrid g = build_grid(8.0, 32);
        const ConvolutionPlan plan(g, KernelSpec{2.0 * g.dv(), -3.0});
        const double d = entropy_dissipation(sample_mu(g), plan, DissipationMethod::single);
        CHECK(std::abs(d) <= 5e-3);
    }

    // double form is nonnegative up to roundoff for random nonnegative fields
    {
        const VelocityGrid g = build_grid(3.0, 8);
        const ConvolutionPlan plan(g, KernelSpec{0.3, -3.0});
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 10; ++trial) {
            const Field f = random_smooth(g, rng, true);
            CHECK(entropy_dissipation(f, plan, DissipationMethod::double_form) >= -1e-12);
        }
    }

    // single vs double on a bimodal datum at N = 12
    {
        const VelocityGrid g = build_grid(6.0, 12);
        const ConvolutionPlan plan(g, KernelSpec{2.0 * g.dv(), -3.0});
        const Field f = sample_bimodal(g, 1.2);
        const double ds = entropy_dissipation(f, plan, DissipationMethod::single);
        const double dd = entropy_dissipation(f, plan, DissipationMethod::double_form);
        CHECK(std::abs(ds - dd) <= 0.05 * std::max(dd, 1e-12));
    }

    // negative values are rejected without the clamping policy
    {
        const VelocityGrid g = build_grid(3.0, 8);
        const ConvolutionPlan plan(g, KernelSpec{0.3, -3.0});
        Field f = sample_mu(g);
        f.values[0] = -1e-3;
        CHECK_THROWS_AS(entropy_dissipation(f, plan, DissipationMethod::single),
                        std::domain_error);
        CHECK_NOTHROW(entropy_dissipation(f, plan, DissipationMethod::single, true));
    }
}

TEST_CASE("coercivity: A_j fixture, inequality direction, route agreement") {
    const VelocityGrid g = build_grid(5.0, 10);
    const Field mu = sample_mu(g);

    // A_j(mu) = 1, evaluated where truncation and aliasing are negligible
    const VelocityGrid g_fine = build_grid(8.0, 32);
    const Field mu_fine = sample_mu(g_fine);
    for (int j = 0; j < 3; ++j) {
        const auto res = coercivity_pair(mu_fine, mu_fine, 0.0, j, CoercivityRoute::convolution);
        CHECK(std::abs(res.a_j - 1.0) < 1e-10);
    }

    // mu: convolution route equals the direct 6-D summation
    for (double m : {0.0, 3.0}) {
        const auto direct = coercivity_pair(mu, mu, m, 0, CoercivityRoute::direct);
        const auto conv = coercivity_pair(mu, mu, m, 0, CoercivityRoute::convolution);
        CHECK(std::abs(direct.rhs - conv.rhs) <= 1e-6 * std::abs(direct.rhs));
    }

    // lhs <= rhs on random pairs
    std::mt19937_64 rng(31);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Field f = random_smooth(g, rng, true);
        const Field p = random_smooth(g, rng, false);
        const double m = (trial % 2 == 0) ? 0.0 : 3.0;
        const auto res = coercivity_pair(f, p, m, trial % 3, CoercivityRoute::convolution);
        CHECK(res.lhs <= res.rhs * (1 + 1e-12));
        ++checked;
    }
    CHECK(checked == 20);

    CHECK_THROWS_AS(coercivity_pair(Field(g), mu, 0.0, 0, CoercivityRoute::convolution),
                    std::domain_error);
}
