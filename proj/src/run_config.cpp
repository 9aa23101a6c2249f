#include "landau/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "landau/field_io.hpp"
#include "landau/inequalities.hpp"

namespace landau {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& pointer,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(pointer, "expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ConfigError(pointer + "/" + key, "unknown key");
}

double number_at(const json& j, const std::string& pointer, const std::string& key,
                 double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(pointer + "/" + key, "expected a number");
    return j.at(key).get<double>();
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    require_keys(j, "",
                 {"grid", "kernel", "init", "time", "solver", "diagnostics", "registry",
                  "output"});
    RunConfig cfg;

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        require_keys(g, "/grid", {"L", "N"});
        const double L = number_at(g, "/grid", "L", 8.0);
        const double N = number_at(g, "/grid", "N", 32.0);
        if (N != std::floor(N)) throw ConfigError("/grid/N", "expected an integer");
        try {
            cfg.grid = build_grid(L, int(N));
        } catch (const std::exception& e) {
            throw ConfigError("/grid", e.what());
        }
    }

    if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        require_keys(k, "/kernel", {"epsilon", "gamma"});
        if (k.contains("epsilon")) {
            if (k.at("epsilon").is_string()) {
                if (k.at("epsilon").get<std::string>() != "2dx")
                    throw ConfigError("/kernel/epsilon", "expected a number or \"2dx\"");
                cfg.epsilon = -1.0;
            } else if (k.at("epsilon").is_number()) {
                cfg.epsilon = k.at("epsilon").get<double>();
            } else {
                throw ConfigError("/kernel/epsilon", "expected a number or \"2dx\"");
            }
        }
        cfg.gamma = number_at(k, "/kernel", "gamma", -3.0);
    }

    if (j.contains("init")) {
        const auto& in = j.at("init");
        require_keys(in, "/init", {"type", "separation", "weights", "eps", "path"});
        const std::string type = in.value("type", "maxwellian");
        if (type == "maxwellian") {
            cfg.init.kind = InitSpec::Kind::maxwellian;
        } else if (type == "bimodal") {
            cfg.init.kind = InitSpec::Kind::bimodal;
            cfg.init.separation = number_at(in, "/init", "separation", 1.0);
            if (in.contains("weights")) {
                const auto& w = in.at("weights");
                if (!w.is_array() || w.size() != 2)
                    throw ConfigError("/init/weights", "expected [w1, w2]");
                cfg.init.weight_first = w[0].get<double>();
                const double sum = w[0].get<double>() + w[1].get<double>();
                if (std::abs(sum - 1.0) > 1e-12)
                    throw ConfigError("/init/weights", "weights must sum to 1");
            }
        } else if (type == "oscillatory") {
            cfg.init.kind = InitSpec::Kind::oscillatory;
            cfg.init.osc_scale = number_at(in, "/init", "eps", 0.25);
        } else if (type == "file") {
            cfg.init.kind = InitSpec::Kind::file;
            if (!in.contains("path")) throw ConfigError("/init/path", "required for type=file");
            cfg.init.path = in.at("path").get<std::string>();
        } else {
            throw ConfigError("/init/type", "unknown initial datum type: " + type);
        }
    }

    if (j.contains("time")) {
        const auto& t = j.at("time");
        require_keys(t, "/time", {"t_end", "dt", "sample_interval"});
        cfg.solver.t_end = number_at(t, "/time", "t_end", 1.0);
        if (!(cfg.solver.t_end > 0)) throw ConfigError("/time/t_end", "must be positive");
        if (t.contains("dt")) {
            if (t.at("dt").is_string()) {
                if (t.at("dt").get<std::string>() != "auto")
                    throw ConfigError("/time/dt", "expected a number or \"auto\"");
                cfg.solver.dt = 0.0;
            } else {
                cfg.solver.dt = t.at("dt").get<double>();
            }
        }
        cfg.solver.sample_interval = number_at(t, "/time", "sample_interval", 0.1);
    }

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        require_keys(s, "/solver",
                     {"scheme", "projection", "positivity", "cfl", "well_balanced",
                      "allow_unnormalized"});
        const std::string scheme = s.value("scheme", "rk2");
        if (scheme == "rk2")
            cfg.solver.scheme = Scheme::rk2;
        else if (scheme == "rk4")
            cfg.solver.scheme = Scheme::rk4;
        else
            throw ConfigError("/solver/scheme", "expected rk2 or rk4");
        cfg.solver.project_moments = s.value("projection", true);
        const std::string pos = s.value("positivity", "none");
        if (pos == "none")
            cfg.solver.positivity = PositivityPolicy::none;
        else if (pos == "clip")
            cfg.solver.positivity = PositivityPolicy::clip;
        else
            throw ConfigError("/solver/positivity", "expected none or clip");
        cfg.solver.cfl = number_at(s, "/solver", "cfl", 0.5);
        cfg.solver.well_balanced = s.value("well_balanced", false);
        cfg.solver.allow_unnormalized = s.value("allow_unnormalized", false);
    }

    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        require_keys(d, "/diagnostics", {"norms", "balance_m", "snapshots"});
        if (d.contains("norms"))
            for (const auto& n : d.at("norms")) cfg.norm_specs.push_back(n.get<std::string>());
        if (d.contains("balance_m"))
            for (const auto& m : d.at("balance_m")) {
                const double mv = m.get<double>();
                if (mv != 0.0) cfg.solver.weighted_balance_orders.push_back(mv);
            }
        cfg.write_snapshots = d.value("snapshots", false);
    }

    if (j.contains("registry")) cfg.registry_path = j.at("registry").get<std::string>();
    if (j.contains("output")) cfg.output_dir = j.at("output").get<std::string>();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

Field build_initial_field(const InitSpec& init, const VelocityGrid& grid) {
    switch (init.kind) {
        case InitSpec::Kind::maxwellian: return sample_mu(grid);
        case InitSpec::Kind::bimodal:
            return sample_bimodal(grid, init.separation, init.weight_first);
        case InitSpec::Kind::oscillatory: return make_oscillatory_data(init.osc_scale, grid);
        case InitSpec::Kind::file: {
            Snapshot snap = read_snapshot(init.path);
            if (snap.field.grid != grid)
                throw std::invalid_argument("snapshot grid does not match configured grid");
            return std::move(snap.field);
        }
    }
    throw std::logic_error("unreachable init kind");
}

// ---------------------------------------------------------------------------
// norm specs

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text, const std::string& what) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(what + ": expected key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double parse_number(const std::string& s) {
    if (s == "inf") return kInf;
    return std::stod(s);
}

}  // namespace

NormSpec parse_norm_spec(const std::string& text, const std::string& flavor) {
    NormSpec spec;
    spec.flavor = flavor;
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) kv = parse_kv(text.substr(colon + 1), name);
    auto take = [&](const char* key, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const double v = parse_number(it->second);
        kv.erase(it);
        return v;
    };
    if (name == "lp") {
        spec.kind = NormSpec::Kind::lp;
        spec.p = take("p", 2);
        spec.l = take("l", 0);
    } else if (name == "llogl") {
        spec.kind = NormSpec::Kind::llogl;
    } else if (name == "lorentz") {
        spec.kind = NormSpec::Kind::lorentz;
        spec.p = take("p", 3);
        spec.q = take("q", 1);
        spec.l = take("l", 0);
    } else if (name == "sobolev") {
        spec.kind = NormSpec::Kind::sobolev;
        spec.m = take("m", 1);
        spec.l = take("l", 0);
    } else if (name == "dyadic") {
        spec.kind = NormSpec::Kind::dyadic;
        spec.s = int(take("s", 1));
        spec.l = take("l", 0);
    } else {
        throw std::invalid_argument("unknown norm kind: " + name);
    }
    if (auto it = kv.find("flavor"); it != kv.end()) {
        spec.flavor = it->second;
        kv.erase(it);
    }
    if (!kv.empty())
        throw std::invalid_argument("unknown parameter '" + kv.begin()->first + "' for norm " +
                                    name);
    return spec;
}

double evaluate_norm(const Field& f, const NormSpec& spec) {
    switch (spec.kind) {
        case NormSpec::Kind::lp: return lp_norm(f, spec.p, spec.l);
        case NormSpec::Kind::llogl: return llogl(f);
        case NormSpec::Kind::lorentz: {
            const LorentzFlavor fl = (spec.flavor == "starred") ? LorentzFlavor::starred
                                                                : LorentzFlavor::maximal;
            if (!spec.flavor.empty() && spec.flavor != "starred" && spec.flavor != "maximal")
                throw std::invalid_argument("lorentz flavor must be starred or maximal");
            return lorentz_norm(f, spec.p, spec.q, spec.l, fl);
        }
        case NormSpec::Kind::sobolev: {
            const SobolevFlavor fl = (spec.flavor == "weighted") ? SobolevFlavor::weighted
                                                                 : SobolevFlavor::homogeneous;
            if (!spec.flavor.empty() && spec.flavor != "weighted" &&
                spec.flavor != "homogeneous")
                throw std::invalid_argument("sobolev flavor must be homogeneous or weighted");
            return sobolev_norm(f, spec.m, spec.l, fl);
        }
        case NormSpec::Kind::dyadic: return dyadic_norm(f, spec.s, spec.l);
    }
    throw std::logic_error("unreachable norm kind");
}

}  // namespace landau
