#include "landau/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "landau/norms.hpp"

namespace landau {

LandauSystem::LandauSystem(const VelocityGrid& grid, const KernelSpec& spec)
    : grid_(grid), spec_(spec), plan_(grid, spec), mu_(sample_mu(grid)) {
    q_mu_mu_ = landau_Q(mu_, mu_, plan_, QForm::divergence);
}

Field LandauSystem::rhs(const Field& f, bool well_balanced) const {
    Field q = landau_Q(f, f, plan_, QForm::divergence);
    if (well_balanced)
        for (std::size_t i = 0; i < q.size(); ++i) q.values[i] -= q_mu_mu_.values[i];
    return q;
}

double LandauSystem::max_diffusivity(const Field& f) const {
    const auto spec = plan_.forward(f);
    double lam = 0;
    for (int d : {ConvolutionPlan::A00, ConvolutionPlan::A11, ConvolutionPlan::A22}) {
        const Field conv = plan_.convolve(spec, ConvolutionPlan::Component(d));
        for (double v : conv.values) lam = std::max(lam, std::abs(v));
    }
    return lam;
}

double auto_dt(const Field& f, const LandauSystem& sys, double cfl) {
    const double lam = sys.max_diffusivity(f);
    if (!(lam > 0)) throw std::runtime_error("auto_dt: vanishing diffusivity");
    const double dv = f.grid.dv();
    return cfl * dv * dv / lam;
}

namespace {

void solve5(double a[5][5], double b[5], double x[5]) {
    int piv[5] = {0, 1, 2, 3, 4};
    for (int c = 0; c < 5; ++c) {
        int best = c;
        for (int r = c + 1; r < 5; ++r)
            if (std::abs(a[piv[r]][c]) > std::abs(a[piv[best]][c])) best = r;
        std::swap(piv[c], piv[best]);
        const double d = a[piv[c]][c];
        if (d == 0.0) throw std::runtime_error("moment projection: singular Gram matrix");
        for (int r = c + 1; r < 5; ++r) {
            const double m = a[piv[r]][c] / d;
            for (int k = c; k < 5; ++k) a[piv[r]][k] -= m * a[piv[c]][k];
            b[piv[r]] -= m * b[piv[c]];
        }
    }
    for (int c = 4; c >= 0; --c) {
        double s = b[piv[c]];
        for (int k = c + 1; k < 5; ++k) s -= a[piv[c]][k] * x[k];
        x[c] = s / a[piv[c]][c];
    }
}

// exact multiplicative quadratic correction f ← f (a + b·v + c|v|²)
Field quadratic_moment_fix(const Field& f, const FluidMoments& tg) {
    const auto& g = f.grid;
    // basis 1, vx, vy, vz, |v|²; moments of products against f
    double gram[5][5] = {};
    double rhs[5] = {tg.rho, tg.rho * tg.u.x, tg.rho * tg.u.y, tg.rho * tg.u.z,
                     3.0 * tg.rho * tg.temperature + tg.rho * tg.u.norm2()};
    CompensatedSum acc[5][5];
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                const double w = f.values[idx];
                const double phi[5] = {1.0, v.x, v.y, v.z, v.norm2()};
                for (int p = 0; p < 5; ++p)
                    for (int q = p; q < 5; ++q) acc[p][q].add(w * phi[p] * phi[q]);
            }
    const double vol = g.cell_volume();
    for (int p = 0; p < 5; ++p)
        for (int q = p; q < 5; ++q) gram[p][q] = gram[q][p] = acc[p][q].value() * vol;
    double coef[5];
    solve5(gram, rhs, coef);
    Field out(g);
    idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                const double chi =
                    coef[0] + coef[1] * v.x + coef[2] * v.y + coef[3] * v.z + coef[4] * v.norm2();
                out.values[idx] = f.values[idx] * chi;
            }
    out.nonnegative = f.nonnegative;
    return out;
}

}  // namespace

Field project_moments(const Field& f, const FluidMoments& targets) {
    const FluidMoments cur = moments(f);
    if (!(cur.rho > 0) || !cur.temperature_defined || !(cur.temperature > 0))
        throw std::runtime_error("moment projection: degenerate current moments");
    // dilation/shift parameters; for per-step corrections these are O(dt)·small
    const double beta = std::sqrt(cur.temperature / targets.temperature);
    const Vec3 delta = cur.u - (1.0 / beta) * targets.u;
    Field out = f;
    if (std::abs(beta - 1.0) > 1e-14 || delta.norm() > 1e-14) {
        const auto grad = gradient(f);
        const auto& g = f.grid;
        std::size_t idx = 0;
        for (int iz = 0; iz < g.n; ++iz)
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix, ++idx) {
                    const Vec3 v = g.node3(ix, iy, iz);
                    const Vec3 shift{(beta - 1.0) * v.x - delta.x, (beta - 1.0) * v.y - delta.y,
                                     (beta - 1.0) * v.z - delta.z};
                    out.values[idx] += shift.x * grad[0].values[idx] +
                                       shift.y * grad[1].values[idx] +
                                       shift.z * grad[2].values[idx];
                }
    }
    return quadratic_moment_fix(out, targets);
}

Field step(const Field& f, double dt, const LandauSystem& sys, const SolverConfig& config,
           const std::optional<FluidMoments>& targets) {
    if (!(dt > 0)) throw std::invalid_argument("step requires dt > 0");
    const bool wb = config.well_balanced;
    Field next(f.grid);
    if (config.scheme == Scheme::rk2) {
        const Field k1 = sys.rhs(f, wb);
        const Field mid = axpy(0.5 * dt, k1, f);
        const Field k2 = sys.rhs(mid, wb);
        next = axpy(dt, k2, f);
    } else {
        const Field k1 = sys.rhs(f, wb);
        const Field k2 = sys.rhs(axpy(0.5 * dt, k1, f), wb);
        const Field k3 = sys.rhs(axpy(0.5 * dt, k2, f), wb);
        const Field k4 = sys.rhs(axpy(dt, k3, f), wb);
        next = f;
        for (std::size_t i = 0; i < next.size(); ++i)
            next.values[i] += dt / 6.0 *
                              (k1.values[i] + 2 * k2.values[i] + 2 * k3.values[i] + k4.values[i]);
    }
    if (!all_finite(next)) {
        std::ostringstream msg;
        msg << "instability: nonfinite values after step (dt=" << dt
            << ", max|f|=" << max_abs(f) << ")";
        throw std::runtime_error(msg.str());
    }
    if (config.positivity == PositivityPolicy::clip) {
        const double mass_before = moments(next).rho;
        for (double& v : next.values) v = std::max(v, 0.0);
        const double mass_after = moments(next).rho;
        if (mass_after > 0)
            for (double& v : next.values) v *= mass_before / mass_after;
        next.nonnegative = true;
    }
    if (config.project_moments) {
        const FluidMoments tg = targets ? *targets : moments(f);
        next = project_moments(next, tg);
    }
    return next;
}

// ---------------------------------------------------------------------------
// balance terms

namespace {

double pair_weighted(const Field& a, const Field& b, double m) { return weighted_inner(a, b, m); }

}  // namespace

BalanceTerms balance_terms(const Field& f, const LandauSystem& sys, double m) {
    const auto& plan = sys.plan();
    const Field h = subtract(f, sys.mu());
    const auto grad_h = gradient(h);
    const auto grad_f = gradient(f);
    const auto grad_mu = gradient(sys.mu());

    const auto conv_f = convolve_all(plan, f, false);
    const auto conv_h = convolve_all(plan, h, false);

    BalanceTerms out;
    for (int k = 0; k < 3; ++k) {
        const Field q1 = landau_Q_from(conv_f, f, grad_h[k], plan, QForm::divergence);
        out.w1 += pair_weighted(q1, grad_h[k], m);

        const auto conv_dfk = convolve_all(plan, grad_f[k], false);
        const Field q2 = landau_Q_from(conv_dfk, grad_f[k], h, plan, QForm::divergence);
        out.w2 += pair_weighted(q2, grad_h[k], m);

        const auto conv_dhk = convolve_all(plan, grad_h[k], false);
        const Field q3 = landau_Q_from(conv_dhk, grad_h[k], sys.mu(), plan, QForm::divergence);
        out.w3 += pair_weighted(q3, grad_h[k], m);

        const Field q4 = landau_Q_from(conv_h, h, grad_mu[k], plan, QForm::divergence);
        out.w4 += pair_weighted(q4, grad_h[k], m);
    }

    // coercive part of W₁: Σ_k ∫ (a*f) : ∇∂_k h ⊗ ∇∂_k h ⟨v⟩^m dv
    const auto hess = hessian(h);
    const auto& g = f.grid;
    CompensatedSum acc;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Mat3 af{conv_f.a[0].values[idx], conv_f.a[1].values[idx],
                              conv_f.a[2].values[idx], conv_f.a[3].values[idx],
                              conv_f.a[4].values[idx], conv_f.a[5].values[idx]};
                double s = 0;
                for (int k = 0; k < 3; ++k) {
                    const Vec3 gk{hess[hessian_index(0, k)].values[idx],
                                  hess[hessian_index(1, k)].values[idx],
                                  hess[hessian_index(2, k)].values[idx]};
                    s += af.quad(gk);
                }
                const double w = (m == 0.0)
                                     ? 1.0
                                     : std::pow(1.0 + g.node3(ix, iy, iz).norm2(), 0.5 * m);
                acc.add(s * w);
            }
    out.coercive = acc.value() * g.cell_volume();
    out.remainder = out.w1 + out.coercive;
    return out;
}

L2Balance l2_balance(const Field& f, const LandauSystem& sys, double m) {
    const auto& plan = sys.plan();
    const Field h = subtract(f, sys.mu());
    const auto conv_f = convolve_all(plan, f, false);
    const auto conv_h = convolve_all(plan, h, false);

    L2Balance out;
    const Field qfh = landau_Q_from(conv_f, f, h, plan, QForm::divergence);
    out.qf_h = pair_weighted(qfh, h, m);
    const Field qhmu = landau_Q_from(conv_h, h, sys.mu(), plan, QForm::divergence);
    out.qh_mu = pair_weighted(qhmu, h, m);

    // E-decomposition of ⟨Q(f,h), ⟨v⟩^m h⟩
    const auto grad_h = gradient(h);
    const auto& g = f.grid;
    CompensatedSum e1, e2, e3;
    std::size_t idx = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix, ++idx) {
                const Vec3 v = g.node3(ix, iy, iz);
                const double w2 = 1.0 + v.norm2();
                const double wm = std::pow(w2, 0.5 * m);
                const Mat3 af{conv_f.a[0].values[idx], conv_f.a[1].values[idx],
                              conv_f.a[2].values[idx], conv_f.a[3].values[idx],
                              conv_f.a[4].values[idx], conv_f.a[5].values[idx]};
                const Vec3 gh{grad_h[0].values[idx], grad_h[1].values[idx],
                              grad_h[2].values[idx]};
                e1.add(af.quad(gh) * wm);
                // ∂_i ⟨v⟩^m = m ⟨v⟩^{m-2} v_i
                const double wm2 = m * std::pow(w2, 0.5 * m - 1.0);
                const Vec3 grad_w{wm2 * v.x, wm2 * v.y, wm2 * v.z};
                e2.add(dot(af.apply(gh), grad_w) * h.values[idx]);
                const Vec3 bf{conv_f.b[0].values[idx], conv_f.b[1].values[idx],
                              conv_f.b[2].values[idx]};
                const Vec3 grad_wh{grad_w.x * h.values[idx] + wm * gh.x,
                                   grad_w.y * h.values[idx] + wm * gh.y,
                                   grad_w.z * h.values[idx] + wm * gh.z};
                e3.add(dot(bf, grad_wh) * h.values[idx]);
            }
    const double vol = g.cell_volume();
    out.e1 = e1.value() * vol;
    out.e2 = e2.value() * vol;
    out.e3 = e3.value() * vol;
    return out;
}

// ---------------------------------------------------------------------------
// trajectory

DiagnosticsRecord diagnose(const Field& f, double t, const LandauSystem& sys,
                           const SolverConfig& config, const ConstantsRegistry& reg,
                           Regime regime, double t_star) {
    DiagnosticsRecord rec;
    rec.t = t;
    const FluidMoments m = moments(f);
    rec.mass = m.rho;
    rec.ux = m.u.x;
    rec.uy = m.u.y;
    rec.uz = m.u.z;
    rec.temperature = m.temperature;
    rec.entropy = relative_entropy(f, sys.mu());
    rec.dissipation = entropy_dissipation(f, sys.plan(), DissipationMethod::single, true);

    const Field h = subtract(f, sys.mu());
    const auto grad_h = gradient(h);
    double h1sq = 0;
    for (const auto& gh : grad_h) {
        const double n = lp_norm(gh, 2.0, 0.0);
        h1sq += n * n;
    }
    rec.h1_h = std::sqrt(h1sq);
    rec.l2_h = lp_norm(h, 2.0, 0.0);
    rec.balance = balance_terms(f, sys, 0.0);
    for (double mw : config.weighted_balance_orders) {
        WeightedBalanceSample s;
        s.m = mw;
        double sem = 0;
        for (const auto& gh : grad_h) {
            const double n = lp_norm(gh, 2.0, mw / 2.0);
            sem += n * n;
        }
        s.seminorm2 = sem;
        const double l2w = lp_norm(h, 2.0, mw / 2.0);
        s.l2norm2 = l2w * l2w;
        s.terms = balance_terms(f, sys, mw);
        s.l2 = l2_balance(f, sys, mw);
        rec.weighted.push_back(s);
    }
    rec.monotone = monotone_functional(rec.entropy, h1sq, t, reg);
    rec.env_upper = (regime == Regime::stable)
                        ? envelope_bound(t, rec.entropy, reg, EnvelopeVariant::stable)
                        : envelope_bound(t, rec.entropy, reg, EnvelopeVariant::post_tstar, t_star);
    rec.lorentz31_m3 = lorentz_norm(f, 3.0, 1.0, -3.0, LorentzFlavor::maximal);
    rec.min_f = min_value(f);
    rec.max_abs_q = max_abs(sys.rhs(f, config.well_balanced));
    return rec;
}

Trajectory run(const Field& f0, const LandauSystem& sys, const SolverConfig& config,
               const ConstantsRegistry& reg) {
    if (min_value(f0) < 0)
        throw std::invalid_argument("run: initial datum must be nonnegative");
    const FluidMoments m0 = moments(f0);
    if (!config.allow_unnormalized) {
        const bool normalized = std::abs(m0.rho - 1.0) < 1e-3 && m0.u.norm() < 1e-3 &&
                                std::abs(m0.temperature - 1.0) < 1e-3;
        if (!normalized)
            throw std::invalid_argument(
                "run: initial datum is not normalized to (1, 0, 1); set allow_unnormalized");
    }

    Trajectory traj;
    double dt = config.dt > 0 ? config.dt : auto_dt(f0, sys, config.cfl);
    const long n_steps = std::max<long>(1, std::lround(std::ceil(config.t_end / dt - 1e-12)));
    dt = config.t_end / double(n_steps);
    traj.dt_used = dt;
    const long stride = std::max<long>(1, std::lround(config.sample_interval / dt));

    Field h0 = subtract(f0, sys.mu());
    double h1sq0 = 0;
    for (const auto& gh : gradient(h0)) {
        const double n = lp_norm(gh, 2.0, 0.0);
        h1sq0 += n * n;
    }
    const RegimeReport regime = classify_regime(relative_entropy(f0, sys.mu()), h1sq0, reg);
    traj.initial_regime = regime.classification;
    traj.t_star = regime.t_star.value_or(0.0);

    Field f = f0;
    traj.samples.push_back(
        diagnose(f, 0.0, sys, config, reg, traj.initial_regime, traj.t_star));
    for (long s = 1; s <= n_steps; ++s) {
        try {
            f = step(f, dt, sys, config, m0);
        } catch (const std::runtime_error& e) {
            traj.aborted = true;
            traj.abort_reason = e.what();
            break;
        }
        if (s % stride == 0 || s == n_steps)
            traj.samples.push_back(
                diagnose(f, dt * double(s), sys, config, reg, traj.initial_regime, traj.t_star));
    }
    return traj;
}

namespace {
void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}
}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,mass,ux,uy,uz,T,H,D,h1_h,l2_h,I1,I2,I3,I4,M,env_upper,lorentz31_m3\n";
    for (const auto& r : traj.samples) {
        const double cols[] = {r.t,  r.mass,       r.ux,         r.uy,         r.uz,
                               r.temperature, r.entropy, r.dissipation, r.h1_h, r.l2_h,
                               r.balance.w1, r.balance.w2, r.balance.w3, r.balance.w4,
                               r.monotone, r.env_upper, r.lorentz31_m3};
        bool first = true;
        for (double c : cols) {
            if (!first) out += ',';
            append_num(out, c);
            first = false;
        }
        out += '\n';
    }
    return out;
}

std::string weighted_balance_csv(const Trajectory& traj) {
    std::string out = "t,m,seminorm2,l2norm2,W1,W2,W3,W4,sumW,l2_pair_sum\n";
    for (const auto& r : traj.samples)
        for (const auto& s : r.weighted) {
            const double cols[] = {r.t,        s.m,          s.seminorm2, s.l2norm2,
                                   s.terms.w1, s.terms.w2,   s.terms.w3,  s.terms.w4,
                                   s.terms.sum(), s.l2.pair_sum()};
            bool first = true;
            for (double c : cols) {
                if (!first) out += ',';
                append_num(out, c);
                first = false;
            }
            out += '\n';
        }
    return out;
}

}  // namespace landau
