#include "landau/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "landau/collision.hpp"
#include "landau/fft.hpp"
#include "landau/norms.hpp"

namespace landau {

std::string IneqReport::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["trials"] = trials;
    j["violations"] = violations;
    j["worst_slack"] = worst_slack;
    if (fitted_constant) j["fitted_constant"] = *fitted_constant;
    j["train_size"] = train_size;
    j["test_size"] = test_size;
    j["seed"] = seed;
    return j.dump();
}

std::string reports_to_json(const std::vector<IneqReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(nlohmann::json::parse(r.to_json()));
    return arr.dump(2);
}

// ---------------------------------------------------------------------------
// log inequality

namespace {
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}  // namespace

bool log_inequality_holds(double a, double b, double p, double* slack_out) {
    if (a < 0 || b < 0) throw std::domain_error("log inequality needs a, b >= 0");
    if (!(p > 1.0)) throw std::domain_error("log inequality needs p > 1");
    const double lhs = std::abs(xlogx(a) - xlogx(b));
    const double d = std::abs(a - b);
    const double cp = p / (std::exp(1.0) * (p - 1.0));
    const double rhs = cp * std::pow(d, 1.0 / p) + (d >= 1.0 ? d * std::log(d) : 0.0) +
                       2.0 * std::sqrt(std::min(a, b)) * std::sqrt(d);
    if (slack_out) *slack_out = rhs > 0 ? lhs / rhs : (lhs > 0 ? kInf : 0.0);
    return lhs <= rhs + 1e-12 * std::max(1.0, lhs);
}

IneqReport check_log_inequality(long trials, std::uint64_t seed) {
    IneqReport rep;
    rep.id = "log_inequality";
    rep.trials = trials;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uab(0.0, 1e6), up(1.0 + 1e-9, 5.0),
        u01(0.0, 1.0);
    for (long i = 0; i < trials; ++i) {
        double a = uab(rng), b = uab(rng);
        const double shape = u01(rng);
        if (shape < 0.25) a = u01(rng);  // mix in small values near the kink
        if (shape > 0.75) b = u01(rng) * 1e-3;
        double slack = 0;
        if (!log_inequality_holds(a, b, up(rng), &slack)) ++rep.violations;
        rep.worst_slack = std::max(rep.worst_slack, slack);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// corpora

namespace {

Field band_limited_noise(const VelocityGrid& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), kmag(0.3, 2.5),
        phase(0.0, 2.0 * M_PI);
    std::normal_distribution<double> dir(0.0, 1.0);
    struct Mode {
        Vec3 k;
        double a, phi;
    };
    std::vector<Mode> modes(12);
    for (auto& m : modes) {
        Vec3 d{dir(rng), dir(rng), dir(rng)};
        const double n = d.norm() > 0 ? d.norm() : 1.0;
        m.k = (kmag(rng) / n) * d;
        m.a = amp(rng);
        m.phi = phase(rng);
    }
    Field f(grid);
    std::size_t idx = 0;
    for (int iz = 0; iz < grid.n; ++iz)
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix, ++idx) {
                const Vec3 v = grid.node3(ix, iy, iz);
                double s = 0;
                for (const auto& m : modes) s += m.a * std::cos(dot(m.k, v) + m.phi);
                f.values[idx] = s * std::exp(-v.norm2() / 8.0);
            }
    return f;
}

std::vector<MaxwellianComponent> random_mixture_parts(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nparts(1, 3);
    std::uniform_real_distribution<double> uw(0.2, 1.0), ut(0.25, 2.0), uc(0.2, 1.6);
    std::normal_distribution<double> dir(0.0, 1.0);
    const int k = nparts(rng);
    std::vector<MaxwellianComponent> parts;
    double wsum = 0;
    for (int i = 0; i < k; ++i) {
        MaxwellianComponent a, b;
        a.weight = b.weight = 0.5 * uw(rng);
        a.temperature = b.temperature = ut(rng);
        Vec3 d{dir(rng), dir(rng), dir(rng)};
        const double n = d.norm() > 0 ? d.norm() : 1.0;
        a.u = (uc(rng) / n) * d;
        b.u = -1.0 * a.u;  // symmetric pair: mean is exactly zero
        parts.push_back(a);
        parts.push_back(b);
        wsum += a.weight + b.weight;
    }
    double energy = 0;
    for (auto& p : parts) {
        p.weight /= wsum;
        energy += p.weight * (3.0 * p.temperature + p.u.norm2());
    }
    // rescale velocities so the energy is exactly 3
    const double s2 = energy / 3.0;
    for (auto& p : parts) {
        p.temperature /= s2;
        p.u = (1.0 / std::sqrt(s2)) * p.u;
    }
    return parts;
}

}  // namespace

Field random_normalized_mixture(const VelocityGrid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_maxwellian_mixture(grid, random_mixture_parts(rng));
}

FieldCorpus build_inequality_corpus(const VelocityGrid& grid, std::uint64_t seed, int per_class) {
    FieldCorpus corpus;
    corpus.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<Field> all;
    std::uniform_real_distribution<double> ut(0.25, 4.0), urho(0.5, 2.0), uc(0.0, 1.5);
    std::normal_distribution<double> dir(0.0, 1.0);
    for (int i = 0; i < per_class; ++i) {
        Vec3 d{dir(rng), dir(rng), dir(rng)};
        const double n = d.norm() > 0 ? d.norm() : 1.0;
        all.push_back(sample_maxwellian(grid, urho(rng), (uc(rng) / n) * d, ut(rng)));
    }
    for (int i = 0; i < per_class; ++i)
        all.push_back(sample_maxwellian_mixture(grid, random_mixture_parts(rng)));
    for (int i = 0; i < per_class; ++i) all.push_back(band_limited_noise(grid, rng));
    // dilation family f_λ(v) = λ³ g(λv) over a fixed mixture
    const auto base = random_mixture_parts(rng);
    for (int i = 0; i < per_class; ++i) {
        const double lam = 0.5 * std::pow(8.0, double(i) / std::max(1, per_class - 1));
        auto parts = base;
        for (auto& p : parts) {
            p.temperature /= lam * lam;
            p.u = (1.0 / lam) * p.u;
        }
        all.push_back(sample_maxwellian_mixture(grid, parts));
    }
    for (std::size_t i = 0; i < all.size(); ++i)
        (i % 2 == 0 ? corpus.train : corpus.test).push_back(std::move(all[i]));
    return corpus;
}

FieldCorpus build_mixture_corpus(const VelocityGrid& grid, std::uint64_t seed, int count) {
    FieldCorpus corpus;
    corpus.seed = seed;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
        Field f = sample_maxwellian_mixture(grid, random_mixture_parts(rng));
        (i % 2 == 0 ? corpus.train : corpus.test).push_back(std::move(f));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// fitted-constant machinery

FitCheck fit_and_verify(const std::vector<std::pair<double, double>>& train,
                        const std::vector<std::pair<double, double>>& test, double inflation) {
    FitCheck fc;
    for (const auto& [lhs, rhs] : train)
        if (rhs > 0) fc.fitted = std::max(fc.fitted, lhs / rhs);
    for (const auto& [lhs, rhs] : test) {
        const double bound = inflation * fc.fitted * rhs;
        const double slack = bound > 0 ? lhs / bound : (lhs > 0 ? kInf : 0.0);
        fc.worst_slack = std::max(fc.worst_slack, slack);
        if (lhs > bound) ++fc.violations;
    }
    return fc;
}

// ---------------------------------------------------------------------------
// O'Neil

double convolution_max(const Field& f, const Field& g) {
    require_same_grid(f, g, "convolution_max");
    const int n = f.grid.n, pad = 2 * n;
    RealFft3 fft(pad);
    auto load = [&](const Field& h) {
        double* in = fft.real_buffer();
        std::fill(in, in + fft.real_size(), 0.0);
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                std::copy(h.values.data() + h.grid.index(0, iy, iz),
                          h.values.data() + h.grid.index(0, iy, iz) + n,
                          in + (std::size_t(iz) * pad + iy) * pad);
    };
    load(f);
    fft.run_forward();
    std::vector<std::complex<double>> sf(fft.complex_size());
    std::copy_n(fft.complex_buffer(), fft.complex_size(), sf.data());
    load(g);
    fft.run_forward();
    std::complex<double>* buf = fft.complex_buffer();
    for (std::size_t i = 0; i < sf.size(); ++i) buf[i] *= sf[i];
    const double* out = fft.run_inverse();
    double m = 0;
    const double scale = f.grid.cell_volume() / (double(pad) * pad * pad);
    for (std::size_t i = 0; i < fft.real_size(); ++i) m = std::max(m, std::abs(out[i] * scale));
    return m;
}

std::vector<IneqReport> check_oneil(const FieldCorpus& corpus) {
    std::vector<IneqReport> out;

    {  // (i) ‖f‖_{L^{6,2}} ≤ C ‖f‖_{H¹}
        std::vector<std::pair<double, double>> train, test;
        for (const auto& f : corpus.train)
            train.push_back({lorentz_norm(f, 6.0, 2.0, 0.0, LorentzFlavor::maximal),
                             sobolev_norm(f, 1.0, 0.0, SobolevFlavor::weighted)});
        for (const auto& f : corpus.test)
            test.push_back({lorentz_norm(f, 6.0, 2.0, 0.0, LorentzFlavor::maximal),
                            sobolev_norm(f, 1.0, 0.0, SobolevFlavor::weighted)});
        const FitCheck fc = fit_and_verify(train, test);
        IneqReport rep;
        rep.id = "oneil_sobolev_L62";
        rep.trials = long(train.size() + test.size());
        rep.violations = fc.violations;
        rep.worst_slack = fc.worst_slack;
        rep.fitted_constant = fc.fitted;
        rep.train_size = long(train.size());
        rep.test_size = long(test.size());
        rep.seed = corpus.seed;
        out.push_back(rep);
    }

    {  // (ii) ‖fg‖_{L^{3/2,1}} ≤ C ‖f‖_{L^{6,2}} ‖g‖_{L^{2,2}}
        auto product_rows = [&](const std::vector<Field>& fields) {
            std::vector<std::pair<double, double>> rows;
            for (std::size_t i = 0; i + 1 < fields.size(); i += 2) {
                const Field& f = fields[i];
                const Field& g = fields[i + 1];
                Field fg(f.grid);
                for (std::size_t k = 0; k < fg.size(); ++k)
                    fg.values[k] = f.values[k] * g.values[k];
                rows.push_back({lorentz_norm(fg, 1.5, 1.0, 0.0, LorentzFlavor::maximal),
                                lorentz_norm(f, 6.0, 2.0, 0.0, LorentzFlavor::maximal) *
                                    lorentz_norm(g, 2.0, 2.0, 0.0, LorentzFlavor::maximal)});
            }
            return rows;
        };
        const FitCheck fc = fit_and_verify(product_rows(corpus.train), product_rows(corpus.test));
        IneqReport rep;
        rep.id = "oneil_product";
        rep.violations = fc.violations;
        rep.worst_slack = fc.worst_slack;
        rep.fitted_constant = fc.fitted;
        rep.train_size = long(corpus.train.size() / 2);
        rep.test_size = long(corpus.test.size() / 2);
        rep.trials = rep.train_size + rep.test_size;
        rep.seed = corpus.seed;
        out.push_back(rep);
    }

    {  // (iii) ‖f*g‖_∞ ≤ ‖f‖_{L^{p,q₁}} ‖g‖_{L^{p',q₂}}, constant-free
        IneqReport rep;
        rep.id = "oneil_convolution";
        rep.seed = corpus.seed;
        auto sweep = [&](const std::vector<Field>& fields) {
            for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
                const Field& f = fields[i];
                const Field& g = fields[i + 1];
                const double conv = convolution_max(f, g);
                const double pairs[2] = {
                    lorentz_norm(f, 2.0, 2.0, 0.0, LorentzFlavor::maximal) *
                        lorentz_norm(g, 2.0, 2.0, 0.0, LorentzFlavor::maximal),
                    lorentz_norm(f, 3.0, 1.0, 0.0, LorentzFlavor::maximal) *
                        lorentz_norm(g, 1.5, 1.0, 0.0, LorentzFlavor::maximal)};
                for (double rhs : pairs) {
                    ++rep.trials;
                    const double slack = rhs > 0 ? conv / rhs : (conv > 0 ? kInf : 0.0);
                    rep.worst_slack = std::max(rep.worst_slack, slack);
                    if (conv > rhs * (1.0 + 1e-9)) ++rep.violations;
                }
            }
        };
        sweep(corpus.train);
        sweep(corpus.test);
        out.push_back(rep);
    }
    return out;
}

// ---------------------------------------------------------------------------
// interpolation inequalities

namespace {

double hessian_l2(const Field& f, double l) {
    const auto h = hessian(f);
    double total = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double n = lp_norm(h[hessian_index(i, j)], 2.0, l);
            total += n * n;
        }
    return std::sqrt(total);
}

}  // namespace

std::vector<IneqReport> check_interpolations(const FieldCorpus& corpus) {
    const double ms[3] = {0.0, 2.0, 6.0};
    std::vector<std::pair<double, double>> rows[3][2];  // [ineq][train/test]
    for (int split = 0; split < 2; ++split) {
        const auto& fields = split == 0 ? corpus.train : corpus.test;
        for (const auto& f : fields) {
            const double h1 = sobolev_norm(f, 1.0, 0.0, SobolevFlavor::weighted);
            const double hess_m32 = hessian_l2(f, -1.5);
            const double hess_m12 = hessian_l2(f, -0.5);
            for (double m : ms) {
                rows[0][split].push_back(
                    {lorentz_norm(f, 3.0, 1.0, m, LorentzFlavor::maximal),
                     std::pow(lp_norm(f, 1.0, 5.0 * m + 1.0), 0.2) * std::pow(h1, 0.8)});
                rows[1][split].push_back(
                    {sobolev_norm(f, 1.0, m, SobolevFlavor::weighted),
                     std::pow(lp_norm(f, 1.0, 15.0 / 4.0 + 3.5 * m), 2.0 / 7.0) *
                         std::pow(lp_norm(f, 1.0, -1.5) + hess_m32, 5.0 / 7.0)});
                rows[2][split].push_back(
                    {sobolev_norm(f, 1.0, m, SobolevFlavor::weighted),
                     std::pow(lp_norm(f, 1.0, 5.0 / 4.0 + 3.5 * m), 2.0 / 7.0) *
                         std::pow(lp_norm(f, 1.0, -0.5) + hess_m12, 5.0 / 7.0)});
            }
        }
    }
    const char* ids[3] = {"interp_L31", "interp_H1_heavy", "interp_H1_light"};
    std::vector<IneqReport> out;
    for (int i = 0; i < 3; ++i) {
        const FitCheck fc = fit_and_verify(rows[i][0], rows[i][1]);
        IneqReport rep;
        rep.id = ids[i];
        rep.trials = long(rows[i][0].size() + rows[i][1].size());
        rep.violations = fc.violations;
        rep.worst_slack = fc.worst_slack;
        rep.fitted_constant = fc.fitted;
        rep.train_size = long(rows[i][0].size());
        rep.test_size = long(rows[i][1].size());
        rep.seed = corpus.seed;
        out.push_back(rep);
    }
    return out;
}

IneqReport check_entropy_continuity(const std::vector<std::pair<Field, Field>>& pairs,
                                    std::uint64_t seed) {
    if (pairs.empty()) throw std::invalid_argument("entropy continuity needs field pairs");
    const Field mu = sample_mu(pairs.front().first.grid);
    std::vector<std::pair<double, double>> train, test;
    std::size_t i = 0;
    for (const auto& [f1, f2] : pairs) {
        const double lhs = std::abs(relative_entropy(f1, mu) - relative_entropy(f2, mu));
        const double d = sobolev_norm(subtract(f1, f2), 1.0, 0.0, SobolevFlavor::homogeneous);
        const double rhs = std::pow(d, 0.3) + std::pow(d, 1.2) + std::pow(d, 0.2);
        ((i++ % 2 == 0) ? train : test).push_back({lhs, rhs});
    }
    const FitCheck fc = fit_and_verify(train, test);
    IneqReport rep;
    rep.id = "entropy_continuity";
    rep.trials = long(pairs.size());
    rep.violations = fc.violations;
    rep.worst_slack = fc.worst_slack;
    rep.fitted_constant = fc.fitted;
    rep.train_size = long(train.size());
    rep.test_size = long(test.size());
    rep.seed = seed;
    return rep;
}

// ---------------------------------------------------------------------------
// oscillatory two-scale datum

double oscillatory_datum_value(Vec3 v, double osc_scale) {
    const double eps = osc_scale;
    const double eta = std::pow(eps, 11.0 / 9.0);
    const double s = 1.0 - eta + eta * eps * eps;
    const double norm = std::pow(2.0 * M_PI, -1.5);
    const double r2 = s * v.norm2();
    const double coarse = (1.0 - eta) * norm * std::exp(-0.5 * r2);
    const double fine =
        eta * std::pow(eps, -3.0) * norm * std::exp(-0.5 * r2 / (eps * eps));
    return std::pow(s, 1.5) * (coarse + fine);
}

Field make_oscillatory_data(double osc_scale, const VelocityGrid& grid) {
    if (!(osc_scale > 0.0 && osc_scale <= 0.25))
        throw std::domain_error("oscillation scale must lie in (0, 1/4]");
    if (grid.dv() > osc_scale / 4.0 + 1e-15)
        throw std::invalid_argument(
            "grid does not resolve the fine scale (need dv <= scale/4)");
    Field f(grid);
    std::size_t idx = 0;
    for (int iz = 0; iz < grid.n; ++iz)
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix, ++idx)
                f.values[idx] = oscillatory_datum_value(grid.node3(ix, iy, iz), osc_scale);
    f.nonnegative = true;
    return f;
}

}  // namespace landau
