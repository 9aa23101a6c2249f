#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/grid.hpp"
#include "landau/norms.hpp"
#include "landau/solver.hpp"

namespace landau {

/// Configuration error carrying a JSON-pointer path to the offending node.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& pointer, const std::string& message)
        : std::runtime_error(pointer + ": " + message) {}
};

struct InitSpec {
    enum class Kind { maxwellian, bimodal, oscillatory, file } kind = Kind::maxwellian;
    double separation = 1.0;     // bimodal
    double weight_first = 0.5;   // bimodal
    double osc_scale = 0.25;     // oscillatory
    std::string path;            // file
};

struct RunConfig {
    VelocityGrid grid{8.0, 32};
    double epsilon = -1.0;  // < 0 means "2dx"
    double gamma = -3.0;
    InitSpec init;
    SolverConfig solver;
    std::vector<std::string> norm_specs;  // extra per-sample norms
    std::string registry_path;
    std::string output_dir = ".";
    bool write_snapshots = false;

    KernelSpec kernel_spec() const {
        KernelSpec ks{epsilon < 0 ? 2.0 * grid.dv() : epsilon, gamma};
        ks.validate();
        return ks;
    }
};

/// Strict parse: unknown keys are rejected with their JSON-pointer path.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

Field build_initial_field(const InitSpec& init, const VelocityGrid& grid);

/// Norm specification strings: "lp:p=2,l=0", "llogl",
/// "lorentz:p=3,q=1,l=-3" (flavor starred|maximal), "sobolev:m=1,l=0"
/// (flavor homogeneous|weighted), "dyadic:s=1,l=2".
struct NormSpec {
    enum class Kind { lp, llogl, lorentz, sobolev, dyadic } kind = Kind::lp;
    double p = 2, q = 2, l = 0, m = 0;
    int s = 0;
    std::string flavor;  // empty selects the default per kind
};

NormSpec parse_norm_spec(const std::string& text, const std::string& flavor = "");
double evaluate_norm(const Field& f, const NormSpec& spec);

}  // namespace landau
