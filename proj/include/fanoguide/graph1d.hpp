#pragma once

// Exact solver for scattering on a three-edge 1D junction graph:
// a half-line lead joined at the origin to two finite edges of lengths 1
// and 1+eps, with Neumann ends and Kirchhoff matching at the junction.
// Everything is closed-form, which makes this module the reference model
// for the resonance phenomenology explored by the 2D solvers.

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace fanoguide::graph1d {

using cd = std::complex<double>;

struct Junction1DConfig {
    double epsilon = 0.0; ///< length perturbation of the third edge (length 1+epsilon)
    double k = 1.0;       ///< wavenumber, > 0
};

struct Junction1DSolution {
    cd R;              ///< reflection coefficient on the lead
    cd A;              ///< amplitude on the unit edge
    cd B;              ///< amplitude on the perturbed edge
    bool is_resonant;  ///< junction matrix was singular (trapped-mode wavenumber)
};

/// Solve the 3x3 junction system for the incident wave e^{ikx}.
/// At a resonant wavenumber the system is singular but R stays uniquely
/// defined; the closed form is used and is_resonant is set.
Junction1DSolution solve_junction(const Junction1DConfig& cfg);

/// Closed-form reflection coefficient R(eps, k).
/// |R| = 1 for every admissible (eps, k).
cd reflection_closed_form(double epsilon, double k);

/// Moebius limit g(mu) of R along the critical parabola through (0, pi/2):
/// g(mu) = (pi^2 + i(32 mu - 4 pi)) / (pi^2 - i(32 mu - 4 pi)), |g| = 1.
cd mobius_limit(double mu);

struct PathPoint {
    double epsilon;
    cd R;
};

/// Evaluate R along the parabolic path k(eps) = pi/2 + eps*lambda_lin + eps^2*mu
/// for each epsilon in eps_sequence (strictly decreasing to 0).
std::vector<PathPoint> path_limit_experiment(double lambda_lin, double mu,
                                             std::span<const double> eps_sequence);

/// Trapped mode of the unperturbed junction, present iff k is an odd
/// multiple of pi/2: zero on the lead, sin(ky) and -sin(kx) on the edges.
struct TrappedMode1D {
    double k;
    double eval_lead(double /*x*/) const { return 0.0; }
    double eval_edge2(double y) const;
    double eval_edge3(double x) const;
};

std::optional<TrappedMode1D> trapped_mode_1d(double k);

} // namespace fanoguide::graph1d
