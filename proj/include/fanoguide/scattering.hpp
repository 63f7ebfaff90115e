#pragma once

// Monomode reflection/transmission of the symmetric full guide, computed from
// the two half-guide problems (Neumann and Dirichlet on Upsilon) and composed
// as R = (R_N + R_D)/2, T = (R_N - R_D)/2, with an optional direct full-domain
// cross-check on the mirrored mesh.

#include "fanoguide/fem.hpp"

namespace fanoguide::scattering {

using cd = std::complex<double>;
using fem::HelmholtzOperator;
using fem::RadiationCondition;
using geo::Mesh;

struct RTPair {
    cd R, T;
    double lambda = 0.0;
    double epsilon = 0.0;
    enum class Source { composed, direct } source = Source::composed;

    double energy_defect() const { return std::abs(std::norm(R) + std::norm(T) - 1.0); }
};

/// Reflection coefficient of the half guide with the given condition on
/// Upsilon; monomode only. |R| = 1 up to discretization.
cd half_guide_reflection(const HelmholtzOperator& op, double lambda,
                         int n_terms = 20);

/// Compose half-guide reflections into the full-guide pair.
/// Requires |RN| and |RD| within 1e-2 of 1.
RTPair compose_full(cd RN, cd RD, double lambda, double epsilon);

/// Direct full-domain solve on a mirrored mesh (abc = none, two truncation
/// faces); monomode incident piston wave from +infinity.
RTPair full_guide_solve(const HelmholtzOperator& full_op, double lambda,
                        double epsilon, int n_terms = 20);

/// Wrap a phase into [-pi, pi).
double principal_phase(double theta);

} // namespace fanoguide::scattering
