#pragma once

// Frequency sweeps of the half-guide reflection phases, resonance-window
// detection, width/center scaling, and root-finding for non-reflection
// (R = 0) and perfect reflection (T = 0) of the symmetric full guide.

#include "fanoguide/scattering.hpp"

#include <optional>

namespace fanoguide::sweep {

using cd = std::complex<double>;

/// Perturbation family eps -> geometry, anchored at a trapped-mode point.
struct PerturbationFamily {
    geo::WaveguideGeometry base; ///< unperturbed geometry (trapped parameter)
    geo::ProfileH profile;
    double k0 = 0.0; ///< unperturbed trapped wavenumber

    geo::WaveguideGeometry at(double eps) const {
        return geo::displace_boundary(base, profile, eps);
    }
};

struct SweepOptions {
    double h = 0.025;
    int n_terms = 20;
    bool with_dirichlet = true; ///< also solve the Dirichlet half problem
};

struct SweepRow {
    double epsilon = 0.0;
    double k = 0.0;
    double lambda = 0.0;
    double theta_n = 0.0; ///< unwrapped phase of R^N
    double theta_d = 0.0; ///< unwrapped phase of R^D
    cd RN, RD, R, T;
    double energy_defect = 0.0;
    bool ok = false;
    bool flagged = false; ///< inside the detected resonance window
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::optional<std::pair<double, double>> flagged_window; ///< k-interval
};

/// Half-guide solver context reused across a sweep: one mesh per geometry,
/// Neumann and Dirichlet operators on it.
class HalfGuideSolver {
public:
    HalfGuideSolver(const geo::WaveguideGeometry& g, double h, int n_terms);
    cd reflection(double lambda, geo::AbcKind abc) const;
    const geo::Mesh& mesh() const { return *mesh_; }

private:
    std::shared_ptr<geo::Mesh> mesh_;
    std::unique_ptr<fem::HelmholtzOperator> op_n_, op_d_;
    int n_terms_;
};

/// Sweep k over [k_lo, k_hi] (monomode) with n samples; phases unwrapped by
/// nearest-branch continuation, resonance window flagged where |dtheta_n/dk|
/// exceeds 10x its median.
SweepTable frequency_sweep(const PerturbationFamily& family, double eps, double k_lo,
                           double k_hi, int n, const SweepOptions& opts = {});

/// Net winding number of R^N across the table's flagged window (in turns).
double window_winding(const SweepTable& table);

struct RootResult {
    double k_star = 0.0;
    double residual = 0.0; ///< |R| or |T| at the root
    int evaluations = 0;
};

/// Find R(eps, k*^2) = 0 by Brent iteration on the phase mismatch
/// theta_n - theta_d - pi.  Requires R^N != -R^D at the unperturbed point.
RootResult find_nonreflection(const PerturbationFamily& family, double eps, double k_lo,
                              double k_hi, const SweepOptions& opts = {});

/// Find T(eps, k*^2) = 0 via the mismatch theta_n - theta_d.
/// Requires R^N != R^D at the unperturbed point.
RootResult find_perfect_reflection(const PerturbationFamily& family, double eps,
                                   double k_lo, double k_hi,
                                   const SweepOptions& opts = {});

struct WidthRow {
    double epsilon = 0.0;
    double center_lambda = 0.0; ///< 50% winding-accumulation point
    double width_lambda = 0.0;  ///< central 50% winding interval
};

/// Track the resonance window of R^N for each eps: sweep, refine three
/// rounds inside the flagged window, and report winding-quantile center
/// and width.
std::vector<WidthRow> width_scaling(const PerturbationFamily& family,
                                    const std::vector<double>& eps_list, double k_lo,
                                    double k_hi, const SweepOptions& opts = {});

} // namespace fanoguide::sweep
