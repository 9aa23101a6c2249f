// Command-line front end: run, calibrate, regime, ode, norms, check, plotdata.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "landau/analytics.hpp"
#include "landau/field_io.hpp"
#include "landau/inequalities.hpp"
#include "landau/ode.hpp"
#include "landau/run_config.hpp"
#include "landau/solver.hpp"

namespace fs = std::filesystem;
using namespace landau;

namespace {

ConstantsRegistry load_registry_or_default(const std::string& path) {
    if (path.empty()) return ConstantsRegistry{};
    return ConstantsRegistry::load(path);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& registry_override) {
    RunConfig cfg = load_run_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (!registry_override.empty()) cfg.registry_path = registry_override;
    const ConstantsRegistry reg = load_registry_or_default(cfg.registry_path);

    const auto t0 = std::chrono::steady_clock::now();
    LandauSystem sys(cfg.grid, cfg.kernel_spec());
    const Field f0 = build_initial_field(cfg.init, cfg.grid);
    const Trajectory traj = run(f0, sys, cfg.solver, reg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    write_text(out_dir / "trajectory.csv", trajectory_csv(traj));
    if (!cfg.solver.weighted_balance_orders.empty())
        write_text(out_dir / "balance.csv", weighted_balance_csv(traj));
    if (!cfg.norm_specs.empty()) {
        // configured norms are evaluated on the initial datum; per-sample
        // histories come from snapshots + the norms subcommand
        std::string csv = "spec,value\n";
        for (const auto& spec : cfg.norm_specs) {
            std::ostringstream row;
            row.precision(17);
            row << spec << "," << evaluate_norm(f0, parse_norm_spec(spec)) << "\n";
            csv += row.str();
        }
        write_text(out_dir / "norms_initial.csv", csv);
    }
    if (cfg.write_snapshots)
        write_snapshot((out_dir / "field_initial.lclf").string(), f0, 0.0);

    nlohmann::json summary;
    {
        std::ifstream in(config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        summary["config"] = nlohmann::json::parse(ss.str());
    }
    summary["wall_time_seconds"] = wall;
    summary["aborted"] = traj.aborted;
    if (traj.aborted) summary["abort_reason"] = traj.abort_reason;
    summary["regime"] =
        traj.initial_regime == Regime::stable ? "Stable" : "AboveThreshold";
    if (traj.initial_regime == Regime::above_threshold) summary["T_star"] = traj.t_star;
    summary["dt_used"] = traj.dt_used;
    if (!traj.samples.empty()) {
        summary["min_f"] = traj.samples.back().min_f;
        summary["max_abs_Q"] = traj.samples.back().max_abs_q;
        summary["final_entropy"] = traj.samples.back().entropy;
    }
    write_text(out_dir / "summary.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (out_dir / "trajectory.csv").string() << "\n";
    return traj.aborted ? 1 : 0;
}

int cmd_regime(double H0, double X0sq, const std::string& registry_path) {
    const ConstantsRegistry reg = load_registry_or_default(registry_path);
    std::cout << classify_regime(H0, X0sq, reg).to_json() << "\n";
    return 0;
}

int cmd_ode(const std::string& kind, const std::string& params_path,
            const std::string& out_path, const std::string& registry_path) {
    const ConstantsRegistry reg = load_registry_or_default(registry_path);
    const nlohmann::json params = read_json_file(params_path);
    std::string csv = "t,X2,H,D,M,lhs,rhs\n";
    auto append = [&](double t, double x2, double h, double d, double m, double lhs,
                      double rhs) {
        std::ostringstream row;
        row.precision(17);
        row << t << ',' << x2 << ',' << h << ',' << d << ',' << m << ',' << lhs << ','
            << rhs << '\n';
        csv += row.str();
    };
    if (kind == "master") {
        const double X0sq = params.value("X0sq", 0.0);
        const double H0 = params.value("H0", 1.0);
        const double beta = params.value("H_beta", 1.0);
        const double t_end = params.value("t_end", 10.0);
        const HProfile prof = beta > 0 ? HProfile::power_law(H0, beta) : HProfile::constant(H0);
        MasterEvents ev;
        const ScalarTrajectory traj = integrate_master(X0sq, prof, reg, t_end, &ev);
        const double k = reg.k(), c6 = reg.c6();
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double m = monotone_functional(traj.H[i], traj.x2[i], traj.t[i], reg);
            double lhs = m, rhs = m;
            if (i > 0) {
                const double integral = (std::pow(1.0 + traj.t[i], 1.0 + k) -
                                         std::pow(1.0 + traj.t[i - 1], 1.0 + k)) /
                                        (1.0 + k);
                lhs = m + c6 * integral;
                rhs = monotone_functional(traj.H[i - 1], traj.x2[i - 1], traj.t[i - 1], reg);
            }
            append(traj.t[i], traj.x2[i], traj.H[i], traj.D[i], m, lhs, rhs);
        }
    } else if (kind == "wode") {
        const double Y0sq = params.value("Y0sq", 1e-3);
        const double t_end = params.value("t_end", 100.0);
        std::optional<double> k3;
        if (params.contains("k3")) k3 = params.at("k3").get<double>();
        const WodeResult res = wode_run(Y0sq, reg, t_end, k3);
        for (std::size_t i = 0; i < res.trajectory.size(); ++i)
            append(res.trajectory.t[i], res.trajectory.x2[i], 0, 0, 0, 0, 0);
        std::cout << "classification: "
                  << (res.classification == WodeClass::global_decay ? "global_decay"
                      : res.classification == WodeClass::blowup     ? "blowup"
                                                                    : "marginal");
        if (res.blowup_time) std::cout << " t_b=" << *res.blowup_time;
        if (res.fitted_exponent)
            std::cout << " fitted_exponent=" << *res.fitted_exponent
                      << " expected=" << res.expected_exponent;
        std::cout << "\n";
    } else if (kind == "lifespan") {
        const double X0sq = params.value("X0sq", 1.0);
        const double t_end = params.value("t_end", 0.0);
        const LifespanResult ls = lifespan_ode(X0sq, reg);
        const double c11 = reg.value("C11");
        const double horizon = t_end > 0 ? t_end : ls.asymptote;
        for (int i = 0; i <= 200; ++i) {
            const double t = horizon * i / 201.0;
            append(t, lifespan_envelope(X0sq, c11, t), 0, 0, 0, ls.lifespan, ls.asymptote);
        }
        std::cout << "lifespan=" << ls.lifespan << " asymptote=" << ls.asymptote
                  << " C7=" << ls.c7 << "\n";
    } else {
        std::cerr << "unknown ode kind: " << kind << " (expected master|wode|lifespan)\n";
        return 2;
    }
    write_text(out_path, csv);
    return 0;
}

int cmd_norms(const std::string& input, const std::vector<std::string>& norm_args,
              const std::string& flavor, const std::string& manifest) {
    if (!manifest.empty()) {
        std::ifstream in(manifest);
        if (!in) throw std::runtime_error("cannot open manifest: " + manifest);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            std::string path, spec, fl;
            row >> path >> spec >> fl;
            const Field f = read_snapshot(path).field;
            std::cout.precision(17);
            std::cout << evaluate_norm(f, parse_norm_spec(spec, fl)) << "\n";
        }
        return 0;
    }
    const Field f = read_snapshot(input).field;
    std::cout.precision(17);
    for (const auto& spec : norm_args)
        std::cout << evaluate_norm(f, parse_norm_spec(spec, flavor)) << "\n";
    return 0;
}

int cmd_check(const std::string& suite, double trials, const std::string& out_path,
              std::uint64_t seed, int grid_n) {
    if (suite != "appendix") {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
    }
    std::vector<IneqReport> reports;
    reports.push_back(check_log_inequality(long(trials), seed));
    const VelocityGrid grid = build_grid(8.0, grid_n);
    const FieldCorpus corpus = build_inequality_corpus(grid, seed + 1);
    for (auto& r : check_oneil(corpus)) reports.push_back(std::move(r));
    for (auto& r : check_interpolations(corpus)) reports.push_back(std::move(r));
    // entropy continuity over Maxwellian pairs of nearby temperatures
    std::vector<std::pair<Field, Field>> pairs;
    for (int i = 0; i < 8; ++i) {
        const double T1 = 0.8 + 0.05 * i;
        pairs.push_back({sample_maxwellian(grid, 1.0, {}, T1),
                         sample_maxwellian(grid, 1.0, {}, T1 * 1.1)});
    }
    reports.push_back(check_entropy_continuity(pairs, seed + 2));

    const std::string json = reports_to_json(reports);
    if (!out_path.empty())
        write_text(out_path, json + "\n");
    else
        std::cout << json << "\n";
    long violations = 0;
    for (const auto& r : reports) violations += r.violations;
    if (violations > 0) std::cerr << "hard-assertion violations: " << violations << "\n";
    return violations > 0 ? 1 : 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_path) {
    nlohmann::json cfg = nlohmann::json::object();
    if (!config_path.empty()) cfg = read_json_file(config_path);
    const double L = cfg.value("L", 8.0);
    const int N = cfg.value("N", 32);
    const std::uint64_t seed = cfg.value("seed", 12345);
    const int count = cfg.value("count", 16);

    const VelocityGrid grid = build_grid(L, N);
    const KernelSpec spec{2.0 * grid.dv(), -3.0};
    const ConvolutionPlan plan(grid, spec);
    ConstantsRegistry reg;

    const FieldCorpus mixtures = build_mixture_corpus(grid, seed, count);
    // dissipation bounds: C = sup lhs/rhs over train, then 10% headroom
    double c0 = 0, cd1 = kInf, cd2 = kInf, c_coer = kInf;
    LandauSystem sys(grid, spec);
    for (const auto& f : mixtures.train) {
        const double d = entropy_dissipation(f, plan, DissipationMethod::single, true);
        const double one_plus = 1.0 + std::max(d, 0.0);
        c0 = std::max(c0, lp_norm(f, 3.0, -3.0) / one_plus);
        Field root(f.grid);
        for (std::size_t i = 0; i < f.size(); ++i)
            root.values[i] = std::sqrt(std::max(f.values[i], 0.0));
        const double h1 = sobolev_norm(root, 1.0, -1.5, SobolevFlavor::weighted);
        cd1 = std::min(cd1, one_plus / (h1 * h1));
        cd2 = std::min(cd2,
                       one_plus / lorentz_norm(f, 3.0, 1.0, -3.0, LorentzFlavor::maximal));
        const BalanceTerms bt = balance_terms(f, sys, 0.0);
        const Field h = subtract(f, sys.mu());
        const auto hh = hessian(h);
        double hess2 = 0;
        for (int i = 0; i < 3; ++i)
            for (int jj = 0; jj < 3; ++jj) {  // mixed entries count twice in |∇²h|²
                const double n = lp_norm(hh[hessian_index(i, jj)], 2.0, -1.5);
                hess2 += n * n;
            }
        if (hess2 > 0) c_coer = std::min(c_coer, bt.coercive / hess2);
    }
    reg.set("C0", 1.1 * c0, Provenance::calibrated);
    reg.set("C_D1", 0.9 * cd1, Provenance::calibrated);
    reg.set("C_D2", 0.9 * cd2, Provenance::calibrated);
    reg.set("C_coercivity", 0.9 * c_coer, Provenance::calibrated);

    const FieldCorpus corpus = build_inequality_corpus(grid, seed + 1);
    for (const auto& rep : check_interpolations(corpus)) {
        if (rep.id == "interp_L31") reg.set("C_interp_L31", *rep.fitted_constant,
                                            Provenance::calibrated);
        if (rep.id == "interp_H1_heavy")
            reg.set("C_interp_H1a", *rep.fitted_constant, Provenance::calibrated);
        if (rep.id == "interp_H1_light")
            reg.set("C_interp_H1b", *rep.fitted_constant, Provenance::calibrated);
    }
    for (const auto& rep : check_oneil(corpus)) {
        if (rep.id == "oneil_sobolev_L62")
            reg.set("C_oneil_i", *rep.fitted_constant, Provenance::calibrated);
        if (rep.id == "oneil_product" && rep.fitted_constant)
            reg.set("C_oneil_ii", *rep.fitted_constant, Provenance::calibrated);
    }

    write_text(out_path, reg.to_json() + "\n");
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_plotdata(const std::string& input, const std::string& curves_arg,
                 const std::string& out_path) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open trajectory: " + input);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    const std::map<std::string, std::string> curve_col = {
        {"M", "M"}, {"H", "H"}, {"h1", "h1_h"}, {"envelope", "env_upper"}};
    std::vector<std::pair<std::string, std::size_t>> wanted;
    std::stringstream cs(curves_arg);
    std::string curve;
    while (std::getline(cs, curve, ',')) {
        auto it = curve_col.find(curve);
        if (it == curve_col.end())
            throw std::runtime_error("unknown curve: " + curve +
                                     " (expected M,H,h1,envelope)");
        const auto col = std::find(cols.begin(), cols.end(), it->second);
        if (col == cols.end()) throw std::runtime_error("column missing: " + it->second);
        wanted.push_back({curve, std::size_t(col - cols.begin())});
    }
    std::string out = "curve,t,value\n";
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) fields.push_back(c);
        rows.push_back(std::move(fields));
    }
    for (const auto& [name, col] : wanted)
        for (const auto& row : rows) out += name + "," + row[0] + "," + row[col] + "\n";
    write_text(out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"velocity-space Landau relaxation toolkit"};
    app.require_subcommand(1);

    std::string registry_path;
    std::uint64_t seed = 0;
    int threads = 1;
    app.add_option("--registry", registry_path, "constants registry JSON");
    app.add_option("--seed", seed, "random seed for corpora and sweeps");
    app.add_option("--threads", threads,
                   "max internal parallelism (current build runs serially)");

    auto* c_run = app.add_subcommand("run", "integrate a relaxation trajectory");
    std::string run_config, run_out;
    c_run->add_option("--config", run_config, "run configuration JSON")->required();
    c_run->add_option("--out", run_out, "output directory (overrides config)");

    auto* c_regime = app.add_subcommand("regime", "classify (H0, X0²) against the threshold");
    double H0 = 0, X0sq = 0;
    c_regime->add_option("--H0", H0, "initial relative entropy")->required();
    c_regime->add_option("--X0sq", X0sq, "initial squared H¹ seminorm")->required();

    auto* c_ode = app.add_subcommand("ode", "scalar differential-inequality lab");
    std::string ode_kind, ode_params, ode_out = "traj.csv";
    c_ode->add_option("kind", ode_kind, "master|wode|lifespan")->required();
    c_ode->add_option("--params", ode_params, "parameter JSON")->required();
    c_ode->add_option("--out", ode_out, "trajectory CSV path");

    auto* c_norms = app.add_subcommand("norms", "evaluate norms of a field snapshot");
    std::string norms_input, norms_flavor, norms_manifest;
    std::vector<std::string> norm_args;
    c_norms->add_option("--input", norms_input, "field snapshot (.lclf)");
    c_norms->add_option("--norm", norm_args, "norm spec, e.g. lorentz:p=3,q=1,l=-3");
    c_norms->add_option("--flavor", norms_flavor, "starred|maximal or homogeneous|weighted");
    c_norms->add_option("--manifest", norms_manifest,
                        "batch file: one '<path> <spec> [flavor]' per line");

    auto* c_check = app.add_subcommand("check", "property-test the appendix inequalities");
    std::string check_suite = "appendix", check_out;
    double check_trials = 1e6;
    int check_n = 24;
    c_check->add_option("--suite", check_suite, "suite name (appendix)");
    c_check->add_option("--trials", check_trials, "scalar-inequality trial count");
    c_check->add_option("--out", check_out, "report JSON path");
    c_check->add_option("--grid-N", check_n, "corpus grid resolution");

    auto* c_cal = app.add_subcommand("calibrate", "fit registry constants on a corpus");
    std::string cal_config, cal_out = "registry.json";
    c_cal->add_option("--config", cal_config, "corpus configuration JSON");
    c_cal->add_option("--out", cal_out, "registry JSON path");

    auto* c_plot = app.add_subcommand("plotdata", "long-format curves from a trajectory CSV");
    std::string plot_in, plot_curves = "M,H,h1,envelope", plot_out = "plot.csv";
    c_plot->add_option("--input", plot_in, "trajectory CSV")->required();
    c_plot->add_option("--curves", plot_curves, "comma list: M,H,h1,envelope");
    c_plot->add_option("--out", plot_out, "output CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_run)) return cmd_run(run_config, run_out, registry_path);
        if (app.got_subcommand(c_regime)) return cmd_regime(H0, X0sq, registry_path);
        if (app.got_subcommand(c_ode))
            return cmd_ode(ode_kind, ode_params, ode_out, registry_path);
        if (app.got_subcommand(c_norms))
            return cmd_norms(norms_input, norm_args, norms_flavor, norms_manifest);
        if (app.got_subcommand(c_check))
            return cmd_check(check_suite, check_trials, check_out, seed, check_n);
        if (app.got_subcommand(c_cal)) return cmd_calibrate(cal_config, cal_out);
        if (app.got_subcommand(c_plot)) return cmd_plotdata(plot_in, plot_curves, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
