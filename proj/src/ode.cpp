#include "landau/ode.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "landau/norms.hpp"

namespace landau {

HProfile HProfile::constant(double H0) {
    if (H0 < 0) throw std::invalid_argument("H profile must be nonnegative");
    HProfile p;
    p.h_ = [H0](double) { return H0; };
    p.d_ = [](double) { return 0.0; };
    return p;
}

HProfile HProfile::power_law(double H0, double beta) {
    if (H0 < 0 || beta < 0) throw std::invalid_argument("power-law profile needs H0, beta >= 0");
    HProfile p;
    p.h_ = [H0, beta](double t) { return H0 * std::pow(1.0 + t, -beta); };
    p.d_ = [H0, beta](double t) { return H0 * beta * std::pow(1.0 + t, -beta - 1.0); };
    return p;
}

HProfile HProfile::from_samples(std::vector<double> t, std::vector<double> H) {
    if (t.size() != H.size() || t.size() < 2)
        throw std::invalid_argument("H profile needs matching sample arrays (>= 2 points)");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] <= t[i - 1]) throw std::invalid_argument("H profile times must increase");
        if (H[i] > H[i - 1] + 1e-12 * std::max(1.0, H[i - 1]))
            throw std::invalid_argument("H profile must be nonincreasing");
    }
    auto ts = std::make_shared<std::vector<double>>(std::move(t));
    auto hs = std::make_shared<std::vector<double>>(std::move(H));
    auto locate = [ts](double x) {
        auto it = std::upper_bound(ts->begin(), ts->end(), x);
        std::size_t i = std::size_t(std::max<std::ptrdiff_t>(1, it - ts->begin()));
        return std::min(i, ts->size() - 1);
    };
    HProfile p;
    p.h_ = [ts, hs, locate](double x) {
        if (x <= ts->front()) return hs->front();
        if (x >= ts->back()) return hs->back();
        const std::size_t i = locate(x);
        const double w = (x - (*ts)[i - 1]) / ((*ts)[i] - (*ts)[i - 1]);
        return (1.0 - w) * (*hs)[i - 1] + w * (*hs)[i];
    };
    p.d_ = [ts, hs, locate](double x) {
        if (x <= ts->front() || x >= ts->back()) return 0.0;
        const std::size_t i = locate(x);
        return -((*hs)[i] - (*hs)[i - 1]) / ((*ts)[i] - (*ts)[i - 1]);
    };
    return p;
}

double HProfile::H(double t) const { return h_(t); }
double HProfile::D(double t) const { return d_(t); }

namespace {

constexpr double kBlowupGuard = 1e12;

// one RK4 step for z' = f(t, z), z clamped at 0
template <class F>
double rk4_step(const F& f, double t, double z, double dt) {
    const double k1 = f(t, z);
    const double k2 = f(t + 0.5 * dt, std::max(0.0, z + 0.5 * dt * k1));
    const double k3 = f(t + 0.5 * dt, std::max(0.0, z + 0.5 * dt * k2));
    const double k4 = f(t + dt, std::max(0.0, z + dt * k3));
    return std::max(0.0, z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// adaptive integration with step doubling; records every accepted step
template <class F, class Record>
void integrate_adaptive(const F& f, double z0, double t_end, double tol, double dt_max,
                        const Record& record, std::optional<double>* blowup) {
    double t = 0, z = z0, dt = std::min(dt_max, t_end / 64.0);
    record(t, z);
    int guard = 0;
    while (t < t_end && ++guard < 2000000) {
        dt = std::min(dt, t_end - t);
        const double big = rk4_step(f, t, z, dt);
        const double half = rk4_step(f, t + 0.5 * dt,
                                     rk4_step(f, t, z, 0.5 * dt), 0.5 * dt);
        const double err = std::abs(big - half);
        const double scale = tol * std::max({1.0, std::abs(z), std::abs(half)});
        if (err > scale && dt > 1e-14 * std::max(1.0, t)) {
            dt *= 0.5;
            continue;
        }
        if (half > kBlowupGuard) {
            // bisect inside [t, t+dt] for the crossing
            double lo = 0, hi = dt;
            for (int it = 0; it < 80 && (hi - lo) > 1e-6 * std::max(t + hi, 1e-12); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (rk4_step(f, t, z, mid) > kBlowupGuard)
                    hi = mid;
                else
                    lo = mid;
            }
            t += hi;
            z = kBlowupGuard;
            record(t, z);
            if (blowup) *blowup = t;
            return;
        }
        t += dt;
        z = half;
        record(t, z);
        if (err < 0.1 * scale) dt = std::min(2.0 * dt, dt_max);
    }
}

}  // namespace

ScalarTrajectory integrate_master(double X02, const HProfile& profile,
                                  const ConstantsRegistry& reg, double t_end,
                                  MasterEvents* events, double tol) {
    if (X02 < 0) throw std::invalid_argument("integrate_master requires X0² >= 0");
    const double c1 = reg.value("C1"), bstar = reg.b_star();
    const double k1 = reg.k1(), k2 = reg.k2();
    auto rhs = [&](double t, double z) {
        const double p = std::pow(std::max(z, 0.0), 1.4);  // X^{14/5} = (X²)^{7/5}
        return -c1 * std::pow(1.0 + t, k1) * p + profile.D(t) * p +
               bstar * std::pow(1.0 + t, -k2);
    };
    ScalarTrajectory traj;
    std::optional<double> blowup;
    double prev_m = 0;
    bool have_prev = false;
    std::optional<double> crossing;
    auto record = [&](double t, double z) {
        traj.push(t, z, profile.H(t), profile.D(t));
        const double m = monotone_functional(profile.H(t), z, t, reg);
        if (have_prev && prev_m > 0.0 && m <= 0.0 && !crossing) crossing = t;
        prev_m = m;
        have_prev = true;
    };
    integrate_adaptive(rhs, X02, t_end, tol, t_end / 128.0, record, &blowup);
    if (events) {
        events->blowup_time = blowup;
        events->threshold_crossing = crossing;
    }
    return traj;
}

MonotonicityReport verify_monotonicity(const ScalarTrajectory& traj, const ConstantsRegistry& reg,
                                       double slack, double abs_tol) {
    if (traj.size() < 50)
        throw std::invalid_argument("verify_monotonicity needs at least 50 samples");
    MonotonicityReport rep;
    const double k = reg.k(), c6 = reg.c6() * (1.0 - slack);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double t1 = traj.t[i - 1], t2 = traj.t[i];
        const double m1 = monotone_functional(traj.H[i - 1], traj.x2[i - 1], t1, reg);
        const double m2 = monotone_functional(traj.H[i], traj.x2[i], t2, reg);
        const double integral =
            (std::pow(1.0 + t2, 1.0 + k) - std::pow(1.0 + t1, 1.0 + k)) / (1.0 + k);
        const double excess = m2 + c6 * integral - m1;
        const double tol = abs_tol * std::max({1.0, std::abs(m1), std::abs(m2)});
        ++rep.intervals;
        if (excess > tol) {
            rep.violations.push_back({t1, t2, excess});
            rep.worst_excess = std::max(rep.worst_excess, excess);
        }
    }
    return rep;
}

BranchEnvelopes branch_predict(double X02, double H0, const ConstantsRegistry& reg, double t_end,
                               int samples) {
    BranchEnvelopes out;
    out.regime = classify_regime(H0, X02, reg);
    const double tstar = out.regime.t_star.value_or(0.0);
    for (int i = 0; i <= samples; ++i) {
        const double t = t_end * i / samples;
        out.t.push_back(t);
        if (out.regime.classification == Regime::stable)
            out.bound.push_back(envelope_bound(t, 0.0, reg, EnvelopeVariant::stable));
        else
            out.bound.push_back(envelope_bound(t, 0.0, reg, EnvelopeVariant::post_tstar, tstar));
    }
    return out;
}

double lifespan_envelope(double X02, double C11, double t) {
    const double base = std::pow(X02 + std::pow(C11, 5.0 / 9.0), -0.8);
    const double rem = base - 0.8 * t;
    if (!(rem > 0.0)) return kInf;
    return std::pow(rem, -1.25) - std::pow(C11, 5.0 / 9.0);
}

LifespanResult lifespan_ode(double X02, const ConstantsRegistry& reg) {
    const double c11 = reg.value("C11");
    if (!(c11 > 0.0)) throw std::domain_error("lifespan_ode requires C11 > 0");
    LifespanResult r;
    const double c59 = std::pow(c11, 5.0 / 9.0);
    r.lifespan = 1.25 * std::pow(X02 + 2.0 * c59, -0.8);
    r.asymptote = 1.25 * std::pow(X02 + c59, -0.8);
    r.c7 = 0.5 * std::pow(c11, -5.0 / 9.0);
    return r;
}

WodeResult wode_run(double Y02, const ConstantsRegistry& reg, double t_end,
                    std::optional<double> k3_override) {
    if (Y02 < 0) throw std::invalid_argument("wode_run requires Y0² >= 0");
    WodeResult res;
    const double c4 = reg.value("C4"), c5 = reg.value("C5");
    const double k3 = k3_override.value_or(reg.k3());
    res.expected_exponent = -1.25 * k3;
    auto rhs = [&](double t, double z) {
        const double zc = std::max(z, 0.0);
        return -c4 * std::pow(1.0 + t, k3) * std::pow(zc, 1.4) + c5 * (zc * zc + zc);
    };
    std::optional<double> blowup;
    auto record = [&](double t, double z) { res.trajectory.push(t, z, 0.0, 0.0); };
    integrate_adaptive(rhs, Y02, t_end, 1e-10, t_end / 256.0, record, &blowup);
    if (blowup) {
        res.classification = WodeClass::blowup;
        res.blowup_time = blowup;
        return res;
    }
    if (Y02 == 0.0) {
        res.classification = WodeClass::global_decay;
        res.fitted_exponent = res.expected_exponent;  // identically zero trajectory
        return res;
    }
    // late-time fit of log Y against log(1+t) over the last decade
    const auto& tr = res.trajectory;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.t[i] < t_end / 10.0 || tr.x2[i] <= 0.0) continue;
        const double x = std::log1p(tr.t[i]);
        const double y = 0.5 * std::log(tr.x2[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 8) {
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        res.fitted_exponent = slope;
        const bool decayed = tr.x2.back() < Y02 && slope < -0.5;
        res.classification = decayed ? WodeClass::global_decay : WodeClass::marginal;
    }
    return res;
}

BlowupCheckReport blowup_lemma_check(const ScalarTrajectory& traj,
                                     std::optional<double> t_blowup,
                                     const ConstantsRegistry& reg) {
    BlowupCheckReport rep;
    if (!t_blowup || traj.size() < 4) {
        rep.note = "no blowup detected; check not applicable";
        return rep;
    }
    rep.applicable = true;
    const double T_bar = *t_blowup;
    const double H_bar = traj.H.back();

    // ladder of the last samples strictly before the blowup time
    std::vector<std::size_t> ladder;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i)
        if (traj.t[i] < T_bar && traj.H[i] > H_bar) ladder.push_back(i);
    if (ladder.size() > 10) ladder.erase(ladder.begin(), ladder.end() - 10);
    if (ladder.empty()) {
        rep.note = "entropy gap vanishes before the blowup time";
        return rep;
    }

    double cmin = kInf;
    for (std::size_t i : ladder) {
        const double x = std::sqrt(traj.x2[i]);
        cmin = std::min(cmin, x * std::pow(traj.H[i] - H_bar, 1.25));
    }
    rep.calibrated_lower_c = cmin;
    // a diverging trajectory keeps X (H-H̄)^{5/4} bounded away from zero;
    // a bounded X forces the calibrated constant towards zero as t -> T̄
    const double x_first = std::sqrt(traj.x2[ladder.front()]);
    const double x_last = std::sqrt(traj.x2[ladder.back()]);
    rep.lower_consistent = x_last > 2.0 * x_first && cmin > 0.0;

    rep.upper_holds = true;
    double prev_ratio = 0;
    bool ratio_improving = false;
    const double c_blow = reg.value("c_blowup");
    for (std::size_t i : ladder) {
        const auto bounds = blowup_bounds(traj.t[i], T_bar, traj.H[i], H_bar, reg);
        double inf_log_x = kInf;
        for (std::size_t j = i; j < traj.size(); ++j)
            if (traj.x2[j] > 0.0) inf_log_x = std::min(inf_log_x, 0.5 * std::log(traj.x2[j]));
        if (inf_log_x > bounds.log_upper) rep.upper_holds = false;
        const double x = c_blow * (T_bar - traj.t[i]);
        const double exp_term = (5.0 / 14.0) * 7.0 * std::pow(x, -450.0 / 14.0);
        const double ratio = bounds.log_upper / exp_term;
        ratio_improving = std::abs(ratio - 1.0) <= std::abs(prev_ratio - 1.0) || prev_ratio == 0;
        prev_ratio = ratio;
    }
    rep.exp_term_dominates = std::abs(prev_ratio - 1.0) < 0.1 && ratio_improving;
    return rep;
}

}  // namespace landau
