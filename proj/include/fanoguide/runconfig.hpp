#pragma once

// JSON run configurations, structured outputs, and frozen experiment presets.
// Outputs are deterministic: identical config and build produce bit-identical
// files; every file carries a metadata header with the config hash and mesh
// statistics instead of timestamps.

#include "fanoguide/geometry.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fanoguide::cli {

struct RunConfig {
    std::string task; ///< graph1d-sweep | mesh-gen | scatter | trapped |
                      ///< fano-predict | sweep | find-zero

    // geometry family
    std::string variant;             ///< straight | lshape | disk
    geo::AbcKind abc = geo::AbcKind::neumann;
    double k0 = 0.0;                 ///< lshape: branch width pi/k0; also the
                                     ///< anchor wavenumber for families
    double L = 0.0;                  ///< lshape branch height
    double r_trunc = 0.0;            ///< 0 = auto
    geo::ProfileH profile;           ///< perturbation profile

    std::vector<double> epsilons;    ///< perturbation amplitudes
    double k_lo = 0.0, k_hi = 0.0;   ///< sweep window
    int n = 41;                      ///< samples per sweep
    double param_lo = 0.0, param_hi = 0.0; ///< trapped-search window
    std::string trapped_param;       ///< "L" or "k"

    double h = 0.025;
    int n_terms = 20;
    std::string target = "R";        ///< find-zero target: R | T
    bool full_cross_check = false;   ///< scatter: also solve the mirrored guide

    std::string output_dir = ".";
    unsigned long seed = 1;

    std::string raw_json;            ///< canonical serialized form (for hashing)
};

/// Parse and validate; error messages name the offending field path.
RunConfig parse_config_text(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

/// FNV-1a hash of the canonical serialized config.
std::string config_hash(const RunConfig& cfg);

/// Execute the configured task, writing artifacts under cfg.output_dir.
/// Progress notes go to `log`.  Throws ConfigError / MeshError / SolverError /
/// NotFoundError; callers map those to process exit codes.
void run(const RunConfig& cfg, std::ostream& log);

/// Frozen configs reproducing the workbench experiments, keyed by figure id
/// (fig2, fig3, fig6, fig8, fig9, fig10, fig11, fig12).
const std::map<std::string, std::string>& reproduce_presets();

} // namespace fanoguide::cli
