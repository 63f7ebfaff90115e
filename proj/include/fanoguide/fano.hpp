#pragma once

// First-order resonance coefficients extracted from the trapped mode and the
// scattering solutions at the trapped frequency.  They determine how the
// augmented matrix moves off S_mm = -1 under a joint (geometry, frequency)
// perturbation and, through the reduction formula, the limiting unit-circle
// excursion of the usual scattering matrix across the resonance window.

#include "fanoguide/fem.hpp"
#include "fanoguide/trapped.hpp"

namespace fanoguide::fano {

using cd = std::complex<double>;

/// Boundary arc carrying the perturbation profile, with the scalar parameter
/// map used to evaluate H on it.
struct ProfileArc {
    geo::BoundaryArc arc;
    std::function<double(const Eigen::Vector2d&)> param;
};

/// Resolve the arc of the record's mesh addressed by the profile.
ProfileArc make_profile_arc(const geo::Mesh& mesh, const geo::WaveguideGeometry& g,
                            const geo::ProfileH& profile);

/// Scattering solutions at the trapped frequency, orthogonalized against the
/// trapped mode, together with the usual scattering matrix there.
struct ZetaBasis {
    std::vector<fem::DiscreteField> zeta; ///< corrected solutions, j = 0..m-1
    modal::ScatteringMatrix s0;           ///< usual matrix at lambda0
    Eigen::VectorXcd removed;             ///< subtracted trapped-mode multiples
};

/// Solve for the zeta basis on the record's mesh.  The solver is expected to
/// be nearly singular at lambda0; the arbitrary trapped-mode content of each
/// solution is measured on an interior segment and subtracted.
ZetaBasis compute_zeta_basis(const fem::HelmholtzOperator& op,
                             const trapped::TrappedModeRecord& rec, int n_terms = 20);

/// Remove the measured v_m^- content of each field (in place) by subtracting
/// the matching multiple of the trapped mode.  Throws when K ~ 0.
void orthogonalize_zeta(std::vector<fem::DiscreteField>& zetas,
                        const trapped::TrappedModeRecord& rec,
                        const geo::PointLocator& loc, double x_e, int n_terms,
                        Eigen::VectorXcd* removed = nullptr);

/// ell_m(H) = int H (|du_tr/ds|^2 - lambda0 |u_tr|^2) ds on the profile arc.
double compute_ell_m(const trapped::TrappedModeRecord& rec, const ProfileArc& arc,
                     const geo::ProfileH& H);

/// t_j = int u_tr conj(zeta_j) over the half guide (meshed part plus analytic
/// evanescent tail), and ell_row_j = int H (du_tr/ds conj(dzeta_j/ds)
/// - lambda0 u_tr conj(zeta_j)) ds.
struct VolumeRowPair {
    Eigen::RowVectorXcd t;
    Eigen::RowVectorXcd ell_row;
};
VolumeRowPair compute_t_and_ell_row(const fem::HelmholtzOperator& op,
                                    const trapped::TrappedModeRecord& rec,
                                    const ZetaBasis& basis, const ProfileArc& arc,
                                    const geo::ProfileH& H, int n_terms = 20);

struct FanoCoefficients {
    double lambda0 = 0.0;
    double alpha_m = 0.0;
    double K = 0.0;
    double ell_m = 0.0;
    Eigen::RowVectorXcd t;
    Eigen::RowVectorXcd ell_row;
    Eigen::MatrixXcd s0;
    double re_spp_mm = 0.0;        ///< Re S''_mm, nonnegative
    bool assumption_ok = true;     ///< ell_row != ell_m * t (slow-window condition)
    double assumption_margin = 0.0;///< ||ell_row - ell_m t||

    /// S'_mm as a function of the frequency-rate parameter; purely imaginary.
    cd sprime_mm(double lambda_prime) const;
    /// S'_m-row as a function of the frequency-rate parameter.
    Eigen::RowVectorXcd sprime_mrow(double lambda_prime) const;
};

/// Gather the coefficient set; warns (assumption_ok = false) when the profile
/// drives a fast resonance instead of the generic O(eps) window.
FanoCoefficients assemble_coefficients(const trapped::TrappedModeRecord& rec, double ell_m,
                                       const VolumeRowPair& vr,
                                       const modal::ScatteringMatrix& s0);

/// Limit of the usual scattering matrix along lambda = lambda0 + eps ell_m
/// + eps^2 mu as eps -> 0.  Im S''_mm has no closed form here and enters as
/// an external parameter.
Eigen::MatrixXcd fano_limit_matrix(const FanoCoefficients& c, double mu,
                                   double im_spp_mm);

/// Monomode limit on the unit circle as a function of
/// mu_tilde = 2 mu / (alpha_m K^2) - Im S''_mm.
cd monomode_circle(const FanoCoefficients& c, double mu_tilde);

/// Estimate Im S''_mm by matching one finite-eps sample of S^eps_mm taken at
/// lambda = lambda0 + eps*lambda_prime.
double fit_im_spp_mm(const FanoCoefficients& c, cd s_eps_mm, double eps,
                     double lambda_prime);

} // namespace fanoguide::fano
