#include "landau/analytics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "landau/norms.hpp"

namespace landau {

double decay_exponent(double ell, double theta) {
    if (!(ell > 31.0))
        throw std::domain_error("decay_exponent requires ell > 31");
    if (!(theta >= 0.0 && theta <= ell))
        throw std::domain_error("decay_exponent requires theta in [0, ell]");
    const double slope = (2.0 * ell * ell - 25.0 * ell + 57.0) / (18.0 * (ell - 2.0));
    return -slope * (1.0 - theta / ell) + theta / ell;
}

RateConstants rate_constants(double ell, double theta_k1) {
    RateConstants rc;
    rc.k2 = 2.0 * (-decay_exponent(ell, 99.0 / 4.0));
    rc.k1 = 0.8 * (-decay_exponent(ell, theta_k1));
    rc.k = std::min((2.0 * rc.k2 - 7.0) / 5.0, rc.k1);
    rc.k2_hypothesis_ok = rc.k2 > 3.5;
    return rc;
}

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::formula: return "formula";
        case Provenance::calibrated: return "calibrated";
        case Provenance::user: return "user";
    }
    return "user";
}

Provenance provenance_from_name(const std::string& s) {
    if (s == "formula") return Provenance::formula;
    if (s == "calibrated") return Provenance::calibrated;
    if (s == "user") return Provenance::user;
    throw std::invalid_argument("unknown provenance tag: " + s);
}

namespace {
const char* kCalibratable[] = {"C0",  "C_D1", "C_D2", "C1", "C2", "C3", "C4",
                               "C5",  "C7",   "C11",  "C_coercivity",
                               "C_interp_L31", "C_interp_H1a", "C_interp_H1b",
                               "C_dyadic", "C_entropy_cont", "C_oneil_i", "C_oneil_ii",
                               "C_blowup_lower", "c_blowup"};
}

ConstantsRegistry::ConstantsRegistry() {
    for (const char* name : kCalibratable) constants_[name] = TaggedConstant{1.0, Provenance::user};
    constants_["Bstar"] = TaggedConstant{0.0, Provenance::formula};
    constants_["C6"] = TaggedConstant{0.0, Provenance::formula};
}

const TaggedConstant& ConstantsRegistry::constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end())
        throw std::invalid_argument("unknown registry constant: " + name);
    return it->second;
}

void ConstantsRegistry::set(const std::string& name, double v, Provenance p) {
    auto it = constants_.find(name);
    if (it == constants_.end())
        throw std::invalid_argument("unknown registry constant: " + name);
    it->second = TaggedConstant{v, p};
}

double ConstantsRegistry::b_star() const {
    const auto& c = constant("Bstar");
    if (c.provenance == Provenance::formula)
        return blowup_envelope(1.0 / value("C3"), *this);
    return c.value;
}

double ConstantsRegistry::c6() const {
    const auto& c = constant("C6");
    if (c.provenance != Provenance::formula) return c.value;
    const double c1 = std::pow(b_star(), -0.4) * (k2() - 2.0);
    return std::pow(2.0, -0.4) * std::min(value("C1"), c1);
}

std::string ConstantsRegistry::to_json() const {
    nlohmann::json j;
    j["ell"] = ell;
    j["tau"] = tau;
    j["K"] = K;
    j["theta_k1"] = theta_k1;
    j["delta_rate"] = delta_rate;
    nlohmann::json jc;
    for (const auto& [name, c] : constants_) {
        jc[name] = {{"value", c.value}, {"provenance", provenance_name(c.provenance)}};
    }
    j["constants"] = jc;
    nlohmann::json jd;  // derived values, informational
    jd["k1"] = k1();
    jd["k2"] = k2();
    jd["k"] = k();
    jd["k3"] = k3();
    jd["r1"] = r1();
    jd["r2"] = r2();
    jd["Bstar_effective"] = b_star();
    jd["C6_effective"] = c6();
    j["derived"] = jd;
    return j.dump(2);
}

ConstantsRegistry ConstantsRegistry::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ConstantsRegistry reg;
    reg.ell = j.value("ell", reg.ell);
    reg.tau = j.value("tau", reg.tau);
    reg.K = j.value("K", reg.K);
    reg.theta_k1 = j.value("theta_k1", reg.theta_k1);
    reg.delta_rate = j.value("delta_rate", reg.delta_rate);
    if (j.contains("constants"))
        for (const auto& [name, jc] : j.at("constants").items())
            reg.set(name, jc.at("value").get<double>(),
                    provenance_from_name(jc.at("provenance").get<std::string>()));
    return reg;
}

ConstantsRegistry ConstantsRegistry::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open registry file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void ConstantsRegistry::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open registry file for writing: " + path);
    out << to_json() << "\n";
}

double log_blowup_envelope(double x, const ConstantsRegistry& reg) {
    if (!(x > 0.0)) throw std::domain_error("blowup envelope requires x > 0");
    return std::log(reg.value("C2")) - 13.0 * std::log(x) +
           7.0 * std::pow(x, -450.0 / 14.0);
}

double blowup_envelope(double x, const ConstantsRegistry& reg) {
    const double lg = log_blowup_envelope(x, reg);
    if (lg > 700.0) return kInf;
    return std::exp(lg);
}

double monotone_functional(double H, double X2, double t, const ConstantsRegistry& reg) {
    const double bracket = X2 + reg.b_star() * std::pow(1.0 + t, 1.0 - reg.k2());
    return H - 2.5 * std::pow(bracket, -0.4);
}

RegimeReport classify_regime(double H0, double X02, const ConstantsRegistry& reg) {
    RegimeReport rep;
    const double bstar = reg.b_star();
    rep.threshold_value = H0 * std::pow(X02 + bstar, 0.4);
    const double k = reg.k(), c6 = reg.c6();
    if (rep.threshold_value <= 2.5) {
        rep.classification = Regime::stable;
    } else {
        rep.classification = Regime::above_threshold;
        const double gap = H0 - 2.5 * std::pow(X02 + bstar, -0.4);
        rep.t_star = std::pow((1.0 + k) / c6 * gap + 1.0, 1.0 / (k + 1.0)) - 1.0;
    }
    // relaxed entry criterion via the local lifespan
    const double T = local_lifespan(X02, reg);
    rep.relaxed_rhs = c6 / (k + 1.0) * (std::pow(1.0 + T, k + 1.0) - 1.0);
    const double M0 = monotone_functional(H0, X02, 0.0, reg);
    rep.relaxed_criterion_ok = M0 <= rep.relaxed_rhs;
    return rep;
}

std::string RegimeReport::to_json() const {
    nlohmann::json j;
    j["classification"] = classification == Regime::stable ? "Stable" : "AboveThreshold";
    j["threshold_value"] = threshold_value;
    if (t_star) j["T_star"] = *t_star;
    j["relaxed_rhs"] = relaxed_rhs;
    j["relaxed_criterion_ok"] = relaxed_criterion_ok;
    return j.dump(2);
}

double envelope_bound(double t, double H_t, const ConstantsRegistry& reg, EnvelopeVariant variant,
                      double t_star) {
    const double k = reg.k(), c6 = reg.c6();
    const double coef = std::pow(0.4, -1.25);
    double bracket;
    if (variant == EnvelopeVariant::stable) {
        bracket = H_t + c6 / (k + 1.0) * (std::pow(1.0 + t, 1.0 + k) - 1.0);
    } else {
        if (t <= t_star) return kInf;
        bracket = c6 / (k + 1.0) *
                  (std::pow(1.0 + t, 1.0 + k) - std::pow(1.0 + t_star, 1.0 + k));
    }
    if (!(bracket > 0.0)) return kInf;
    return coef * std::pow(bracket, -1.25);
}

double entropy_ceiling_value(double t, double H_t, double X2, const ConstantsRegistry& reg) {
    const double bracket = X2 + reg.b_star() * std::pow(1.0 + t, 1.0 - reg.k2());
    return H_t * std::pow(bracket, -0.4);
}

double local_lifespan(double X02, const ConstantsRegistry& reg) {
    const double c7 = reg.value("C7");
    if (!(c7 > 0.0)) throw std::domain_error("local_lifespan requires C7 > 0");
    return 1.25 * std::pow(X02 + 1.0 / c7, -0.8);
}

BlowupBounds blowup_bounds(double t, double T_bar, double H_t, double H_bar,
                           const ConstantsRegistry& reg) {
    BlowupBounds out;
    const double gap = H_t - H_bar;
    if (gap > 0.0) {
        out.lower = reg.value("C_blowup_lower") * std::pow(gap, -1.25);
        out.lower_defined = true;
    } else {
        out.lower = kInf;
        out.lower_defined = false;
    }
    const double x = reg.value("c_blowup") * (T_bar - t);
    if (!(x > 0.0)) throw std::domain_error("blowup_bounds requires t < T_bar");
    const double log_b = log_blowup_envelope(x, reg);
    out.log_upper = (5.0 / 14.0) * (log_b + std::log(2.0 / reg.value("C1")) -
                                    (reg.k1() + reg.k2()) * std::log1p(T_bar));
    out.upper = out.log_upper > 700.0 ? kInf : std::exp(out.log_upper);
    return out;
}

double ckp_bound(double H) {
    if (H < 0.0) throw std::domain_error("ckp_bound requires H >= 0");
    return std::sqrt(2.0 * H);
}

CkpCheck ckp_check(const Field& f, const Field& mu) {
    CkpCheck c;
    c.l1_distance = lp_norm(subtract(f, mu), 1.0, 0.0);
    c.ceiling = ckp_bound(relative_entropy(f, mu));
    c.holds = c.l1_distance <= c.ceiling + 1e-12;
    return c;
}

DissipationBoundReport dissipation_bound_check(const Field& f, const ConvolutionPlan& plan,
                                               const ConstantsRegistry& reg) {
    DissipationBoundReport rep;
    rep.dissipation = entropy_dissipation(f, plan, DissipationMethod::single);
    const double one_plus_d = 1.0 + rep.dissipation;

    rep.l3_bound.lhs = lp_norm(f, 3.0, -3.0);
    rep.l3_bound.rhs = reg.value("C0") * one_plus_d;
    rep.l3_bound.holds = rep.l3_bound.lhs <= rep.l3_bound.rhs;

    Field root(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i)
        root.values[i] = std::sqrt(std::max(f.values[i], 0.0));
    const double h1 = sobolev_norm(root, 1.0, -1.5, SobolevFlavor::weighted);
    rep.sqrt_h1.lhs = reg.value("C_D1") * h1 * h1;
    rep.sqrt_h1.rhs = one_plus_d;
    rep.sqrt_h1.holds = rep.sqrt_h1.lhs <= rep.sqrt_h1.rhs;

    rep.lorentz31.lhs =
        reg.value("C_D2") * lorentz_norm(f, 3.0, 1.0, -3.0, LorentzFlavor::maximal);
    rep.lorentz31.rhs = one_plus_d;
    rep.lorentz31.holds = rep.lorentz31.lhs <= rep.lorentz31.rhs;
    return rep;
}

std::string DissipationBoundReport::to_json() const {
    nlohmann::json j;
    j["dissipation"] = dissipation;
    auto side = [](const DissipationBoundSide& s) {
        return nlohmann::json{{"lhs", s.lhs}, {"rhs", s.rhs}, {"holds", s.holds}};
    };
    j["l3_bound"] = side(l3_bound);
    j["sqrt_h1"] = side(sqrt_h1);
    j["lorentz31"] = side(lorentz31);
    return j.dump(2);
}

}  // namespace landau
